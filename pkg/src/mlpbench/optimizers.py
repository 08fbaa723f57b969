"""The five baseline optimizers and their trajectory bookkeeping.

Every run owns a fresh budget meter and consumes it exactly: candidates
are evaluated in a fixed index order and a generation is cut short the
moment the meter runs out, so all algorithms see identical budgets. The
search space is unbounded — nothing here clips or projects parameters.

Checkpoints are taken at the first evaluation, at every stride multiple
and at the final evaluation; each records the best-so-far training MSE
and the test MSE of the parameters that achieved it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict

import numpy as np

from . import network
from .instance import BudgetMeter
from .seeds import STREAM_SEARCH, make_rng

DEFAULT_CHECKPOINT_STRIDE = 10


class ConfigError(ValueError):
    """Optimizer hyperparameters fail validation."""


@dataclass
class RunRecord:
    label: str
    algorithm: str
    seed: int
    checkpoints: np.ndarray      # (k, 3): fe, best_train_mse, test_mse_of_best
    final_params: np.ndarray     # parameters of the best evaluated candidate
    fe_consumed: int
    hyperparameters: dict
    events: list[str] = field(default_factory=list)
    failed: bool = False

    def checkpoint_fes(self) -> np.ndarray:
        return self.checkpoints[:, 0].astype(int)

    def best_train_trajectory(self) -> np.ndarray:
        return self.checkpoints[:, 1]

    def test_trajectory(self) -> np.ndarray:
        return self.checkpoints[:, 2]

    def final_test_mse(self) -> float:
        return float(self.checkpoints[-1, 2])


def _sanitize(value: float) -> float:
    return math.inf if math.isnan(value) else value


class _Runtime:
    """Budget-aware evaluation wrapper shared by all runners."""

    def __init__(self, objective, meter: BudgetMeter, stride: int):
        if stride < 1:
            raise ConfigError(f"checkpoint stride must be >= 1, got {stride}")
        self.objective = objective
        self.meter = meter
        self.stride = stride
        self.best_value = math.inf
        self.best_params: np.ndarray | None = None
        self.checkpoints: list[tuple[int, float, float]] = []

    @property
    def remaining(self) -> int:
        return self.meter.remaining

    def evaluate(self, params) -> float:
        value = self.objective.eval_train(self.meter, params)
        return self._observe(value, params)

    def evaluate_with_grad(self, params):
        value, grad = self.objective.eval_train_with_grad(self.meter, params)
        return self._observe(value, params), grad

    def _observe(self, value: float, params) -> float:
        value = _sanitize(value)
        if self.best_params is None or value < self.best_value:
            self.best_value = value
            self.best_params = np.array(params, dtype=float, copy=True)
        fe = self.meter.used
        if fe == 1 or fe % self.stride == 0 or fe == self.meter.limit:
            if self.objective.has_test:
                test = self.objective.eval_test(self.best_params)
            else:
                test = math.nan
            self.checkpoints.append((fe, self.best_value, test))
        return value

    def record(self, label, algorithm, seed, hyperparameters, events=None, failed=False):
        return RunRecord(
            label=label,
            algorithm=algorithm,
            seed=seed,
            checkpoints=np.array(self.checkpoints, dtype=float),
            final_params=(
                self.best_params if self.best_params is not None else np.empty(0)
            ),
            fe_consumed=self.meter.used,
            hyperparameters=dict(hyperparameters),
            events=list(events or []),
            failed=failed,
        )


# --- configs ---

@dataclass(frozen=True)
class RandomSearchConfig:
    def validate(self, dimension: int) -> None:
        pass


@dataclass(frozen=True)
class PSOConfig:
    swarm_size: int = 40
    inertia: float = 0.7213
    cognitive: float = 1.1931
    social: float = 1.1931

    def validate(self, dimension: int) -> None:
        if self.swarm_size < 2:
            raise ConfigError(f"swarm_size must be >= 2, got {self.swarm_size}")
        if not (0.0 <= self.inertia < 1.0):
            raise ConfigError(f"inertia must be in [0, 1), got {self.inertia}")
        if self.cognitive < 0 or self.social < 0:
            raise ConfigError("acceleration coefficients must be non-negative")


@dataclass(frozen=True)
class DEConfig:
    population: int = 30
    weight: float = 0.8   # differential weight F, applied to both mutation terms

    def validate(self, dimension: int) -> None:
        if self.population < 4:
            raise ConfigError(
                f"population must be >= 4 for current-to-best/1 mutation, "
                f"got {self.population}"
            )
        if not (0.0 < self.weight <= 2.0):
            raise ConfigError(f"weight must be in (0, 2], got {self.weight}")


@dataclass(frozen=True)
class CMAESConfig:
    sigma0: float = 1.0
    population: int | None = None   # default 4 + floor(3 ln D)
    elitist: bool = True            # reinject the best-so-far each generation

    def validate(self, dimension: int) -> None:
        if self.sigma0 <= 0:
            raise ConfigError(f"sigma0 must be positive, got {self.sigma0}")
        if self.population is not None and self.population < 2:
            raise ConfigError(f"population must be >= 2, got {self.population}")


@dataclass(frozen=True)
class AdamConfig:
    step_size: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    init_scheme: str = "fan_in_uniform"

    def validate(self, dimension: int) -> None:
        if self.step_size <= 0:
            raise ConfigError(f"step_size must be positive, got {self.step_size}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigError("betas must be in [0, 1)")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")


# --- runners ---

def run_random_search(objective, meter, config: RandomSearchConfig, seed: int,
                      stride: int = DEFAULT_CHECKPOINT_STRIDE) -> RunRecord:
    """Candidates drawn i.i.d. from the standard normal init distribution."""
    config.validate(objective.dimension)
    rng = make_rng(seed, STREAM_SEARCH)
    rt = _Runtime(objective, meter, stride)
    d = objective.dimension
    while rt.remaining > 0:
        rt.evaluate(rng.standard_normal(d))
    return rt.record(objective.label, "random_search", seed, asdict(config))


def run_pso(objective, meter, config: PSOConfig, seed: int,
            stride: int = DEFAULT_CHECKPOINT_STRIDE) -> RunRecord:
    """Global-best PSO, no velocity or position clamping.

    Personal/global bests update as soon as each particle is evaluated;
    evaluation order is particle index, so partial final iterations are
    well defined.
    """
    config.validate(objective.dimension)
    rng = make_rng(seed, STREAM_SEARCH)
    rt = _Runtime(objective, meter, stride)
    d = objective.dimension
    s = config.swarm_size

    x = rng.standard_normal((s, d))
    v = np.zeros((s, d))
    pbest_x = x.copy()
    pbest_f = np.full(s, math.inf)
    gbest_x = None
    gbest_f = math.inf

    for i in range(s):
        if rt.remaining == 0:
            break
        f = rt.evaluate(x[i])
        pbest_f[i] = f
        if f < gbest_f:
            gbest_f = f
            gbest_x = x[i].copy()

    while rt.remaining > 0:
        for i in range(s):
            if rt.remaining == 0:
                break
            r1 = rng.random(d)
            r2 = rng.random(d)
            v[i] = (
                config.inertia * v[i]
                + config.cognitive * r1 * (pbest_x[i] - x[i])
                + config.social * r2 * (gbest_x - x[i])
            )
            x[i] = x[i] + v[i]
            f = rt.evaluate(x[i])
            if f < pbest_f[i]:
                pbest_f[i] = f
                pbest_x[i] = x[i].copy()
            if f < gbest_f:
                gbest_f = f
                gbest_x = x[i].copy()
    return rt.record(objective.label, "pso", seed, asdict(config))


def run_de(objective, meter, config: DEConfig, seed: int,
           stride: int = DEFAULT_CHECKPOINT_STRIDE) -> RunRecord:
    """Differential evolution, current-to-best/1 with two-point crossover.

    Mutant: x_i + F (a - b) + F (best - x_i) over distinct members a, b.
    The trial inherits the mutant segment between two distinct cut points
    and the parent elsewhere; replacement is immediate (steady state) and
    keeps the trial on ties.
    """
    config.validate(objective.dimension)
    rng = make_rng(seed, STREAM_SEARCH)
    rt = _Runtime(objective, meter, stride)
    d = objective.dimension
    p = config.population
    fw = config.weight

    x = rng.standard_normal((p, d))
    f = np.full(p, math.inf)
    best_i = 0
    for i in range(p):
        if rt.remaining == 0:
            break
        f[i] = rt.evaluate(x[i])
        if f[i] < f[best_i]:
            best_i = i

    while rt.remaining > 0:
        for i in range(p):
            if rt.remaining == 0:
                break
            others = np.concatenate([np.arange(i), np.arange(i + 1, p)])
            a, b = others[rng.choice(p - 1, size=2, replace=False)]
            mutant = x[i] + fw * (x[a] - x[b]) + fw * (x[best_i] - x[i])
            lo, hi = np.sort(rng.choice(d + 1, size=2, replace=False))
            trial = x[i].copy()
            trial[lo:hi] = mutant[lo:hi]
            ft = rt.evaluate(trial)
            if ft <= f[i]:
                f[i] = ft
                x[i] = trial
                if ft < f[best_i]:
                    best_i = i
    return rt.record(objective.label, "de", seed, asdict(config))


def _default_cmaes_popsize(dimension: int) -> int:
    return 4 + int(3 * math.log(dimension))


class _CmaState:
    """Strategy state for (mu/mu_w, lambda)-CMA-ES with positive weights."""

    def __init__(self, dimension: int, sigma0: float, lam: int):
        n = self.n = dimension
        self.lam = lam
        self.mu = lam // 2
        w = np.log(lam / 2 + 0.5) - np.log(np.arange(1, self.mu + 1))
        self.weights = w / w.sum()
        self.mueff = 1.0 / float((self.weights**2).sum())

        self.cc = (4 + self.mueff / n) / (n + 4 + 2 * self.mueff / n)
        self.cs = (self.mueff + 2) / (n + self.mueff + 5)
        self.c1 = 2 / ((n + 1.3) ** 2 + self.mueff)
        self.cmu = min(
            1 - self.c1,
            2 * (self.mueff - 2 + 1 / self.mueff) / ((n + 2) ** 2 + self.mueff),
        )
        self.damps = 2 * self.mueff / lam + 0.3 + self.cs
        # Eigendecomposition refresh interval, in evaluations.
        self.lazy_gap = 0.5 * lam / ((self.c1 + self.cmu) * n)

        self.mean = np.zeros(n)
        self.sigma = sigma0
        self.pc = np.zeros(n)
        self.ps = np.zeros(n)
        self.cov = np.eye(n)
        self.eig_basis = np.eye(n)
        self.eig_scale = np.ones(n)        # sqrt of eigenvalues
        self.inv_sqrt = np.eye(n)
        self.evals_at_eig = 0
        self.counteval = 0
        self.resets = 0

    def refresh_eigensystem(self, force: bool = False) -> bool:
        """Recompute the eigen basis; returns True if a reset fired."""
        if not force and self.counteval - self.evals_at_eig < self.lazy_gap:
            return False
        self.evals_at_eig = self.counteval
        self.cov = (self.cov + self.cov.T) / 2.0
        vals, basis = np.linalg.eigh(self.cov)
        bad = (
            not np.all(np.isfinite(vals))
            or not np.all(np.isfinite(basis))
            or vals[0] <= 0.0
            or vals[-1] / vals[0] > 1e14
        )
        if bad:
            self.cov = np.eye(self.n)
            self.pc = np.zeros(self.n)
            self.ps = np.zeros(self.n)
            self.eig_basis = np.eye(self.n)
            self.eig_scale = np.ones(self.n)
            self.inv_sqrt = np.eye(self.n)
            self.resets += 1
            return True
        self.eig_basis = basis
        self.eig_scale = np.sqrt(vals)
        self.inv_sqrt = basis @ np.diag(1.0 / self.eig_scale) @ basis.T
        return False

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((self.lam, self.n))
        return self.mean + self.sigma * (z * self.eig_scale) @ self.eig_basis.T

    def update(self, candidates: np.ndarray, fitness: np.ndarray) -> None:
        self.counteval += len(fitness)
        order = np.argsort(fitness, kind="stable")
        elite = candidates[order[: self.mu]]
        old_mean = self.mean
        self.mean = self.weights @ elite

        y = self.mean - old_mean
        z = self.inv_sqrt @ y
        csn = math.sqrt(self.cs * (2 - self.cs) * self.mueff) / self.sigma
        self.ps = (1 - self.cs) * self.ps + csn * z
        ps_norm2 = float(self.ps @ self.ps)
        hsig = (
            ps_norm2 / self.n
            / (1 - (1 - self.cs) ** (2 * self.counteval / self.lam))
            < 2 + 4.0 / (self.n + 1)
        )
        ccn = math.sqrt(self.cc * (2 - self.cc) * self.mueff) / self.sigma
        self.pc = (1 - self.cc) * self.pc + ccn * hsig * y

        c1a = self.c1 * (1 - (1 - hsig**2) * self.cc * (2 - self.cc))
        self.cov *= 1 - c1a - self.cmu
        self.cov += self.c1 * np.outer(self.pc, self.pc)
        steps = (elite - old_mean) / self.sigma
        self.cov += self.cmu * (steps.T * self.weights) @ steps

        self.sigma *= math.exp(
            min(1.0, (self.cs / self.damps) * (ps_norm2 / self.n - 1) / 2)
        )
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            self.sigma = 1.0
            self.resets += 1


def run_cmaes(objective, meter, config: CMAESConfig, seed: int,
              stride: int = DEFAULT_CHECKPOINT_STRIDE) -> RunRecord:
    """Covariance matrix adaptation ES started at the origin.

    With ``elitist`` (the default) the best-so-far candidate replaces the
    first sample of each later generation with its known fitness, so a
    generation costs lambda - 1 fresh evaluations and the distribution
    update can always recombine toward the incumbent.

    A degenerate covariance (non-positive or ill-conditioned
    eigenvalues) is replaced by the identity and the run continues; each
    such reset is noted in the run record's events.
    """
    config.validate(objective.dimension)
    rng = make_rng(seed, STREAM_SEARCH)
    rt = _Runtime(objective, meter, stride)
    d = objective.dimension
    lam = config.population or _default_cmaes_popsize(d)
    state = _CmaState(d, config.sigma0, lam)
    events: list[str] = []

    while rt.remaining > 0:
        if state.refresh_eigensystem():
            events.append(f"covariance_reset@fe{meter.used}")
        candidates = state.sample(rng)
        fitness = np.full(lam, math.inf)
        inject = config.elitist and rt.best_params is not None
        if inject:
            candidates[0] = rt.best_params
            fitness[0] = rt.best_value
        complete = True
        for i in range(1 if inject else 0, lam):
            if rt.remaining == 0:
                complete = False
                break
            fitness[i] = rt.evaluate(candidates[i])
        if complete:
            state.update(candidates, fitness)
    hyper = asdict(config) | {"population_effective": lam}
    return rt.record(objective.label, "cmaes", seed, hyper, events=events)


def adam_step(theta, grad, m, v, t, config: AdamConfig):
    """One bias-corrected Adam update; returns (theta, m, v)."""
    m = config.beta1 * m + (1 - config.beta1) * grad
    v = config.beta2 * v + (1 - config.beta2) * grad * grad
    m_hat = m / (1 - config.beta1**t)
    v_hat = v / (1 - config.beta2**t)
    theta = theta - config.step_size * m_hat / (np.sqrt(v_hat) + config.epsilon)
    return theta, m, v


def run_adam(objective, meter, config: AdamConfig, seed: int,
             stride: int = DEFAULT_CHECKPOINT_STRIDE) -> RunRecord:
    """Full-batch Adam; one step (forward + backward pass) costs one FE.

    A non-finite gradient aborts the run; the abort is recorded so the
    harness can exclude the cell with a warning instead of scoring it.
    """
    config.validate(objective.dimension)
    arch = getattr(objective, "architecture", None)
    if arch is None:
        raise ConfigError("adam requires a network-backed objective")
    rt = _Runtime(objective, meter, stride)
    theta = network.init_weights(arch, seed, config.init_scheme)
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    t = 0
    events: list[str] = []
    failed = False
    while rt.remaining > 0:
        _, grad = rt.evaluate_with_grad(theta)
        if not np.all(np.isfinite(grad)):
            events.append(f"aborted_nonfinite_gradient@fe{meter.used}")
            failed = True
            break
        t += 1
        theta, m, v = adam_step(theta, grad, m, v, t, config)
    return rt.record(objective.label, "adam", seed, asdict(config), events=events,
                     failed=failed)


# --- dispatch ---

ALGORITHMS = {
    "random_search": (RandomSearchConfig, run_random_search),
    "pso": (PSOConfig, run_pso),
    "de": (DEConfig, run_de),
    "cmaes": (CMAESConfig, run_cmaes),
    "adam": (AdamConfig, run_adam),
}

POPULATION_ALGORITHMS = ("pso", "de", "cmaes")


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm {self.algorithm!r}; expected one of {list(ALGORITHMS)}"
            )
        cls, _ = ALGORITHMS[self.algorithm]
        try:
            object.__setattr__(self, "_hyper", cls(**self.params))
        except TypeError as e:
            raise ConfigError(f"bad parameters for {self.algorithm}: {e}") from None

    def hyper(self):
        return self._hyper


def run_optimizer(objective, meter, config: OptimizerConfig,
                  stride: int = DEFAULT_CHECKPOINT_STRIDE) -> RunRecord:
    _, runner = ALGORITHMS[config.algorithm]
    return runner(objective, meter, config.hyper(), config.seed, stride=stride)
