"""Catalog of the 54 two-dimensional regression target functions.

Each catalog entry is a classic continuous benchmark function on its
conventional rectangular domain. The set spans unimodal bowls, rugged
multimodal surfaces, non-differentiable ridges and needle-in-haystack
shapes. Four slots are fixed by convention and must not move:

    id 20  Easom          (easiest regression target)
    id 26  Himmelblau
    id 34  Periodic       (hardest regression target)
    id 43  Schwefel 2.22

Everything is evaluated in native domain units; normalization is the
dataset module's job.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

Interval = tuple[float, float]
Domain = tuple[Interval, Interval]

PI = math.pi


class DomainViolationError(ValueError):
    """Input point lies outside a function's rectangular domain."""


@dataclass(frozen=True)
class FunctionSpec:
    """A 2-D real-valued regression target with its closed domain."""

    id: int
    name: str
    domain: Domain
    evaluator: Callable[[float, float], float]

    def __post_init__(self):
        for d, (lo, hi) in enumerate(self.domain):
            if not (lo < hi):
                raise ValueError(
                    f"inverted interval for x{d + 1}: [{lo}, {hi}]"
                )


def evaluate(spec: FunctionSpec, x: Sequence[float]) -> float:
    """Evaluate ``spec`` at a 2-vector given in native domain units."""
    x1, x2 = float(x[0]), float(x[1])
    for d, value in enumerate((x1, x2)):
        lo, hi = spec.domain[d]
        if not (lo <= value <= hi):
            raise DomainViolationError(
                f"{spec.name}: coordinate x{d + 1}={value} outside [{lo}, {hi}]"
            )
    return float(spec.evaluator(x1, x2))


# --- catalog evaluators (native units, scalar math) ---

def _ackley(x, y):
    return (
        -20.0 * math.exp(-0.2 * math.sqrt(0.5 * (x * x + y * y)))
        - math.exp(0.5 * (math.cos(2 * PI * x) + math.cos(2 * PI * y)))
        + math.e + 20.0
    )


def _adjiman(x, y):
    return math.cos(x) * math.sin(y) - x / (y * y + 1.0)


def _alpine1(x, y):
    return abs(x * math.sin(x) + 0.1 * x) + abs(y * math.sin(y) + 0.1 * y)


def _alpine2(x, y):
    return -(math.sqrt(x) * math.sin(x)) * (math.sqrt(y) * math.sin(y))


def _bartels_conn(x, y):
    return abs(x * x + y * y + x * y) + abs(math.sin(x)) + abs(math.cos(y))


def _beale(x, y):
    return (
        (1.5 - x + x * y) ** 2
        + (2.25 - x + x * y * y) ** 2
        + (2.625 - x + x * y ** 3) ** 2
    )


def _bird(x, y):
    return (
        math.sin(x) * math.exp((1.0 - math.cos(y)) ** 2)
        + math.cos(y) * math.exp((1.0 - math.sin(x)) ** 2)
        + (x - y) ** 2
    )


def _bohachevsky1(x, y):
    return (
        x * x + 2.0 * y * y
        - 0.3 * math.cos(3 * PI * x) - 0.4 * math.cos(4 * PI * y) + 0.7
    )


def _bohachevsky2(x, y):
    return (
        x * x + 2.0 * y * y
        - 0.3 * math.cos(3 * PI * x) * math.cos(4 * PI * y) + 0.3
    )


def _booth(x, y):
    return (x + 2.0 * y - 7.0) ** 2 + (2.0 * x + y - 5.0) ** 2


def _branin(x, y):
    b = 5.1 / (4.0 * PI * PI)
    c = 5.0 / PI
    return (
        (y - b * x * x + c * x - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * math.cos(x) + 10.0
    )


def _brent(x, y):
    return (x + 10.0) ** 2 + (y + 10.0) ** 2 + math.exp(-x * x - y * y)


def _bukin6(x, y):
    return 100.0 * math.sqrt(abs(y - 0.01 * x * x)) + 0.01 * abs(x + 10.0)


def _cosine_mixture(x, y):
    return -0.1 * (math.cos(5 * PI * x) + math.cos(5 * PI * y)) + x * x + y * y


def _cross_in_tray(x, y):
    inner = abs(
        math.sin(x) * math.sin(y)
        * math.exp(abs(100.0 - math.hypot(x, y) / PI))
    )
    return -0.0001 * (inner + 1.0) ** 0.1


def _cube(x, y):
    return 100.0 * (y - x ** 3) ** 2 + (1.0 - x) ** 2


def _dixon_price(x, y):
    return (x - 1.0) ** 2 + 2.0 * (2.0 * y * y - x) ** 2


def _drop_wave(x, y):
    r2 = x * x + y * y
    return -(1.0 + math.cos(12.0 * math.sqrt(r2))) / (0.5 * r2 + 2.0)


def _eggholder(x, y):
    return (
        -(y + 47.0) * math.sin(math.sqrt(abs(y + x / 2.0 + 47.0)))
        - x * math.sin(math.sqrt(abs(x - (y + 47.0))))
    )


def _easom(x, y):
    return (
        -math.cos(x) * math.cos(y)
        * math.exp(-((x - PI) ** 2 + (y - PI) ** 2))
    )


def _egg_crate(x, y):
    return x * x + y * y + 25.0 * (math.sin(x) ** 2 + math.sin(y) ** 2)


def _exponential(x, y):
    return -math.exp(-0.5 * (x * x + y * y))


def _franke(x, y):
    return (
        0.75 * math.exp(-((9 * x - 2) ** 2) / 4.0 - ((9 * y - 2) ** 2) / 4.0)
        + 0.75 * math.exp(-((9 * x + 1) ** 2) / 49.0 - (9 * y + 1) / 10.0)
        + 0.5 * math.exp(-((9 * x - 7) ** 2) / 4.0 - ((9 * y - 3) ** 2) / 4.0)
        - 0.2 * math.exp(-((9 * x - 4) ** 2) - ((9 * y - 7) ** 2))
    )


def _giunta(x, y):
    total = 0.6
    for v in (x, y):
        u = 16.0 * v / 15.0 - 1.0
        total += math.sin(u) + math.sin(u) ** 2 + math.sin(4.0 * u) / 50.0
    return total


def _goldstein_price(x, y):
    a = 1.0 + (x + y + 1.0) ** 2 * (
        19.0 - 14.0 * x + 3.0 * x * x - 14.0 * y + 6.0 * x * y + 3.0 * y * y
    )
    b = 30.0 + (2.0 * x - 3.0 * y) ** 2 * (
        18.0 - 32.0 * x + 12.0 * x * x + 48.0 * y - 36.0 * x * y + 27.0 * y * y
    )
    return a * b


def _himmelblau(x, y):
    return (x * x + y - 11.0) ** 2 + (x + y * y - 7.0) ** 2


def _griewank(x, y):
    return (
        (x * x + y * y) / 4000.0
        - math.cos(x) * math.cos(y / math.sqrt(2.0)) + 1.0
    )


def _holder_table(x, y):
    return -abs(
        math.sin(x) * math.cos(y)
        * math.exp(abs(1.0 - math.hypot(x, y) / PI))
    )


def _hosaki(x, y):
    poly = 1.0 - 8.0 * x + 7.0 * x * x - 7.0 * x ** 3 / 3.0 + x ** 4 / 4.0
    return poly * y * y * math.exp(-y)


_LANGERMANN_C = (1.0, 2.0, 5.0, 2.0, 3.0)
_LANGERMANN_A = ((3.0, 5.0), (5.0, 2.0), (2.0, 1.0), (1.0, 4.0), (7.0, 9.0))


def _langermann(x, y):
    total = 0.0
    for c, (a1, a2) in zip(_LANGERMANN_C, _LANGERMANN_A):
        r = (x - a1) ** 2 + (y - a2) ** 2
        total += c * math.exp(-r / PI) * math.cos(PI * r)
    return total


def _levy(x, y):
    w1 = 1.0 + (x - 1.0) / 4.0
    w2 = 1.0 + (y - 1.0) / 4.0
    return (
        math.sin(PI * w1) ** 2
        + (w1 - 1.0) ** 2 * (1.0 + 10.0 * math.sin(PI * w1 + 1.0) ** 2)
        + (w2 - 1.0) ** 2 * (1.0 + math.sin(2 * PI * w2) ** 2)
    )


def _levy13(x, y):
    return (
        math.sin(3 * PI * x) ** 2
        + (x - 1.0) ** 2 * (1.0 + math.sin(3 * PI * y) ** 2)
        + (y - 1.0) ** 2 * (1.0 + math.sin(2 * PI * y) ** 2)
    )


def _matyas(x, y):
    return 0.26 * (x * x + y * y) - 0.48 * x * y


def _periodic(x, y):
    return (
        1.0 + math.sin(x) ** 2 + math.sin(y) ** 2
        - 0.1 * math.exp(-x * x - y * y)
    )


def _mccormick(x, y):
    return math.sin(x + y) + (x - y) ** 2 - 1.5 * x + 2.5 * y + 1.0


def _michalewicz(x, y):
    return (
        -math.sin(x) * math.sin(x * x / PI) ** 20
        - math.sin(y) * math.sin(2.0 * y * y / PI) ** 20
    )


def _parsopoulos(x, y):
    return math.cos(x) ** 2 + math.sin(y) ** 2


def _price4(x, y):
    return (2.0 * x ** 3 * y - y ** 3) ** 2 + (6.0 * x - y * y + y) ** 2


def _quadratic(x, y):
    return (
        -3803.84 - 138.08 * x - 232.92 * y
        + 128.08 * x * x + 203.64 * y * y + 182.25 * x * y
    )


def _rastrigin(x, y):
    return (
        20.0 + x * x - 10.0 * math.cos(2 * PI * x)
        + y * y - 10.0 * math.cos(2 * PI * y)
    )


def _rosenbrock(x, y):
    return 100.0 * (y - x * x) ** 2 + (1.0 - x) ** 2


def _rotated_ellipsoid(x, y):
    return 2.0 * x * x + y * y


def _schwefel222(x, y):
    return abs(x) + abs(y) + abs(x) * abs(y)


def _salomon(x, y):
    r = math.hypot(x, y)
    return 1.0 - math.cos(2 * PI * r) + 0.1 * r


def _schaffer2(x, y):
    r2 = x * x + y * y
    return 0.5 + (math.sin(x * x - y * y) ** 2 - 0.5) / (1.0 + 0.001 * r2) ** 2


def _schaffer4(x, y):
    r2 = x * x + y * y
    num = math.cos(math.sin(abs(x * x - y * y))) ** 2 - 0.5
    return 0.5 + num / (1.0 + 0.001 * r2) ** 2


def _schwefel(x, y):
    return (
        418.9829 * 2.0
        - x * math.sin(math.sqrt(abs(x)))
        - y * math.sin(math.sqrt(abs(y)))
    )


_FOXHOLE_STEPS = (-32.0, -16.0, 0.0, 16.0, 32.0)


def _shekel_foxholes(x, y):
    total = 0.002
    j = 1
    for a2 in _FOXHOLE_STEPS:
        for a1 in _FOXHOLE_STEPS:
            total += 1.0 / (j + (x - a1) ** 6 + (y - a2) ** 6)
            j += 1
    return 1.0 / total


def _shubert(x, y):
    sx = sum(j * math.cos((j + 1) * x + j) for j in range(1, 6))
    sy = sum(j * math.cos((j + 1) * y + j) for j in range(1, 6))
    return sx * sy


def _six_hump_camel(x, y):
    return (
        (4.0 - 2.1 * x * x + x ** 4 / 3.0) * x * x
        + x * y + (-4.0 + 4.0 * y * y) * y * y
    )


def _sphere(x, y):
    return x * x + y * y


def _styblinski_tang(x, y):
    return 0.5 * (
        x ** 4 - 16.0 * x * x + 5.0 * x + y ** 4 - 16.0 * y * y + 5.0 * y
    )


def _sum_squares(x, y):
    return x * x + 2.0 * y * y


def _three_hump_camel(x, y):
    return 2.0 * x * x - 1.05 * x ** 4 + x ** 6 / 6.0 + x * y + y * y


def _sym(lo: float, hi: float | None = None) -> Domain:
    if hi is None:
        lo, hi = -lo, lo
    return ((lo, hi), (lo, hi))


_CATALOG_TABLE: list[tuple[str, Domain, Callable[[float, float], float]]] = [
    ("Ackley", _sym(32.768), _ackley),                              # 1
    ("Adjiman", ((-1.0, 2.0), (-1.0, 1.0)), _adjiman),              # 2
    ("Alpine N.1", _sym(10.0), _alpine1),                           # 3
    ("Alpine N.2", ((0.0, 10.0), (0.0, 10.0)), _alpine2),           # 4
    ("Bartels Conn", _sym(500.0), _bartels_conn),                   # 5
    ("Beale", _sym(4.5), _beale),                                   # 6
    ("Bird", _sym(2.0 * PI), _bird),                                # 7
    ("Bohachevsky N.1", _sym(100.0), _bohachevsky1),                # 8
    ("Bohachevsky N.2", _sym(100.0), _bohachevsky2),                # 9
    ("Booth", _sym(10.0), _booth),                                  # 10
    ("Branin", ((-5.0, 10.0), (0.0, 15.0)), _branin),               # 11
    ("Brent", _sym(10.0), _brent),                                  # 12
    ("Bukin N.6", ((-15.0, -5.0), (-3.0, 3.0)), _bukin6),           # 13
    ("Cosine Mixture", _sym(1.0), _cosine_mixture),                 # 14
    ("Cross-in-Tray", _sym(10.0), _cross_in_tray),                  # 15
    ("Cube", _sym(10.0), _cube),                                    # 16
    ("Dixon-Price", _sym(10.0), _dixon_price),                      # 17
    ("Drop-Wave", _sym(5.12), _drop_wave),                          # 18
    ("Eggholder", _sym(512.0), _eggholder),                         # 19
    ("Easom", _sym(10.0), _easom),                                  # 20 (fixed)
    ("Egg Crate", _sym(5.0), _egg_crate),                           # 21
    ("Exponential", _sym(1.0), _exponential),                       # 22
    ("Franke", ((0.0, 1.0), (0.0, 1.0)), _franke),                  # 23
    ("Giunta", _sym(1.0), _giunta),                                 # 24
    ("Goldstein-Price", _sym(2.0), _goldstein_price),               # 25
    ("Himmelblau", _sym(5.0), _himmelblau),                         # 26 (fixed)
    ("Griewank", _sym(600.0), _griewank),                           # 27
    ("Holder Table", _sym(10.0), _holder_table),                    # 28
    ("Hosaki", ((0.0, 5.0), (0.0, 6.0)), _hosaki),                  # 29
    ("Langermann", ((0.0, 10.0), (0.0, 10.0)), _langermann),        # 30
    ("Levy", _sym(10.0), _levy),                                    # 31
    ("Levy N.13", _sym(10.0), _levy13),                             # 32
    ("Matyas", _sym(10.0), _matyas),                                # 33
    ("Periodic", _sym(10.0), _periodic),                            # 34 (fixed)
    ("McCormick", ((-1.5, 4.0), (-3.0, 4.0)), _mccormick),          # 35
    ("Michalewicz", ((0.0, PI), (0.0, PI)), _michalewicz),          # 36
    ("Parsopoulos", _sym(5.0), _parsopoulos),                       # 37
    ("Price N.4", _sym(500.0), _price4),                            # 38
    ("Quadratic", _sym(10.0), _quadratic),                          # 39
    ("Rastrigin", _sym(5.12), _rastrigin),                          # 40
    ("Rosenbrock", _sym(2.048), _rosenbrock),                       # 41
    ("Rotated Hyper-Ellipsoid", _sym(65.536), _rotated_ellipsoid),  # 42
    ("Schwefel 2.22", _sym(10.0), _schwefel222),                    # 43 (fixed)
    ("Salomon", _sym(100.0), _salomon),                             # 44
    ("Schaffer N.2", _sym(100.0), _schaffer2),                      # 45
    ("Schaffer N.4", _sym(100.0), _schaffer4),                      # 46
    ("Schwefel", _sym(500.0), _schwefel),                           # 47
    ("Shekel Foxholes", _sym(65.536), _shekel_foxholes),            # 48
    ("Shubert", _sym(10.0), _shubert),                              # 49
    ("Six-Hump Camel", ((-3.0, 3.0), (-2.0, 2.0)), _six_hump_camel),# 50
    ("Sphere", _sym(5.12), _sphere),                                # 51
    ("Styblinski-Tang", _sym(5.0), _styblinski_tang),               # 52
    ("Sum Squares", _sym(10.0), _sum_squares),                      # 53
    ("Three-Hump Camel", _sym(5.0), _three_hump_camel),             # 54
]

_CATALOG: list[FunctionSpec] = [
    FunctionSpec(id=i + 1, name=name, domain=dom, evaluator=fn)
    for i, (name, dom, fn) in enumerate(_CATALOG_TABLE)
]

CATALOG_SIZE = len(_CATALOG)

_FIXED_SLOTS = {20: "Easom", 26: "Himmelblau", 34: "Periodic", 43: "Schwefel 2.22"}
for _fid, _fname in _FIXED_SLOTS.items():
    assert _CATALOG[_fid - 1].name == _fname, (_fid, _CATALOG[_fid - 1].name)

CUSTOM_ID_BASE = 1000

_registry_lock = threading.Lock()
_custom_registry: dict[int, FunctionSpec] = {}


def catalog() -> list[FunctionSpec]:
    """The 54 catalog functions, ordered by id (1..54)."""
    return list(_CATALOG)


def get_function(function_id: int) -> FunctionSpec:
    """Look up a spec by id, searching the catalog then custom registry."""
    if 1 <= function_id <= CATALOG_SIZE:
        return _CATALOG[function_id - 1]
    with _registry_lock:
        spec = _custom_registry.get(function_id)
    if spec is None:
        raise KeyError(f"unknown function id {function_id}")
    return spec


def register_custom(
    name: str,
    domain: Domain,
    evaluator: Callable[[float, float], float],
) -> FunctionSpec:
    """Register a user-supplied target; returns a spec with id >= 1000.

    Registration must happen before parallel use; the registry is not
    guarded against concurrent mutation during reads from worker threads.
    """
    with _registry_lock:
        taken = {s.name for s in _CATALOG}
        taken.update(s.name for s in _custom_registry.values())
        if name in taken:
            raise ValueError(f"function name already registered: {name!r}")
        fid = CUSTOM_ID_BASE + len(_custom_registry)
        spec = FunctionSpec(
            id=fid,
            name=name,
            domain=(tuple(map(float, domain[0])), tuple(map(float, domain[1]))),
            evaluator=evaluator,
        )
        _custom_registry[fid] = spec
    return spec


def clear_custom_registry() -> None:
    """Drop all custom registrations (test isolation helper)."""
    with _registry_lock:
        _custom_registry.clear()


MANIFEST_HEADER = "id,name,x1_lo,x1_hi,x2_lo,x2_hi"


def manifest_csv() -> str:
    """Human-readable catalog manifest, one row per function."""
    lines = [MANIFEST_HEADER]
    for spec in _CATALOG:
        (lo1, hi1), (lo2, hi2) = spec.domain
        name = f'"{spec.name}"' if "," in spec.name else spec.name
        lines.append(f"{spec.id},{name},{lo1!r},{hi1!r},{lo2!r},{hi2!r}")
    return "\n".join(lines) + "\n"
