import math

import numpy as np
import pytest

from mlpbench import functions
from mlpbench.functions import (
    DomainViolationError,
    catalog,
    evaluate,
    get_function,
    manifest_csv,
    register_custom,
)


@pytest.fixture(autouse=True)
def _clean_registry():
    yield
    functions.clear_custom_registry()


def test_catalog_size_and_ids():
    specs = catalog()
    assert len(specs) == 54
    assert [s.id for s in specs] == list(range(1, 55))
    assert len({s.name for s in specs}) == 54


def test_fixed_slots():
    assert get_function(20).name == "Easom"
    assert get_function(26).name == "Himmelblau"
    assert get_function(34).name == "Periodic"
    assert get_function(43).name == "Schwefel 2.22"
    # ids are 1-based, so the fixed names sit at list position id - 1
    specs = catalog()
    assert specs[19].name == "Easom"
    assert specs[33].name == "Periodic"


def test_catalog_stability():
    a, b = catalog(), catalog()
    assert [(s.id, s.name, s.domain) for s in a] == [(s.id, s.name, s.domain) for s in b]


def test_named_anchor_values():
    assert evaluate(get_function(20), (math.pi, math.pi)) == pytest.approx(-1.0, abs=1e-12)
    assert evaluate(get_function(26), (3.0, 2.0)) == pytest.approx(0.0, abs=1e-12)
    assert evaluate(get_function(43), (0.0, 0.0)) == pytest.approx(0.0, abs=1e-12)


def test_periodic_form():
    spec = get_function(34)
    assert spec.domain == ((-10.0, 10.0), (-10.0, 10.0))
    # global structure: 0.9 at the origin, ripples elsewhere
    assert evaluate(spec, (0.0, 0.0)) == pytest.approx(0.9, abs=1e-12)
    assert evaluate(spec, (math.pi / 2, 0.0)) > 1.9


def test_easom_domain_narrowed():
    assert get_function(20).domain == ((-10.0, 10.0), (-10.0, 10.0))


def test_determinism_on_random_points():
    rng = np.random.default_rng(7)
    for spec in catalog():
        (lo1, hi1), (lo2, hi2) = spec.domain
        pts = rng.uniform([lo1, lo2], [hi1, hi2], size=(1000, 2))
        first = [evaluate(spec, p) for p in pts]
        second = [evaluate(spec, p) for p in pts]
        assert first == second, spec.name


def test_totality_on_grid():
    for spec in catalog():
        (lo1, hi1), (lo2, hi2) = spec.domain
        xs = np.linspace(lo1, hi1, 100)
        ys = np.linspace(lo2, hi2, 100)
        values = np.array([[spec.evaluator(float(x), float(y)) for y in ys] for x in xs])
        assert np.all(np.isfinite(values)), spec.name


def test_out_of_domain_names_coordinate():
    spec = get_function(26)  # Himmelblau on [-5, 5]^2
    with pytest.raises(DomainViolationError, match="x2"):
        evaluate(spec, (0.0, 7.0))
    with pytest.raises(DomainViolationError, match="x1"):
        evaluate(spec, (-5.1, 0.0))
    # boundary points are inside the closed domain
    assert math.isfinite(evaluate(spec, (5.0, -5.0)))


def test_register_custom_constant_zero():
    spec = register_custom("constant-zero", ((-1, 1), (-1, 1)), lambda x, y: 0.0)
    assert spec.id >= 1000
    assert evaluate(spec, (0.5, -0.5)) == 0.0
    assert get_function(spec.id) is spec


def test_register_custom_sum():
    spec = register_custom("sum", ((0, 1), (0, 1)), lambda x, y: x + y)
    assert evaluate(spec, (0.25, 0.5)) == 0.75


def test_register_custom_rejects_duplicates_and_bad_domain():
    register_custom("dup", ((-1, 1), (-1, 1)), lambda x, y: 0.0)
    with pytest.raises(ValueError, match="already registered"):
        register_custom("dup", ((-1, 1), (-1, 1)), lambda x, y: 1.0)
    with pytest.raises(ValueError, match="already registered"):
        register_custom("Easom", ((-1, 1), (-1, 1)), lambda x, y: 1.0)
    with pytest.raises(ValueError, match="inverted"):
        register_custom("bad", ((1, 0), (-1, 1)), lambda x, y: 0.0)


def test_unknown_id():
    with pytest.raises(KeyError):
        get_function(999)


def test_manifest_csv():
    text = manifest_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "id,name,x1_lo,x1_hi,x2_lo,x2_hi"
    assert len(lines) == 55
    assert lines[20].startswith("20,Easom,")
    # domains round-trip through repr
    row = lines[1].split(",")
    assert float(row[2]) == catalog()[0].domain[0][0]
