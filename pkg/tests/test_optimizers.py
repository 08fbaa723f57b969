import math

import numpy as np
import pytest

from mlpbench.instance import BudgetMeter, DirectObjective, build_instance
from mlpbench.optimizers import (
    ALGORITHMS,
    AdamConfig,
    CMAESConfig,
    ConfigError,
    DEConfig,
    OptimizerConfig,
    PSOConfig,
    RandomSearchConfig,
    _CmaState,
    adam_step,
    run_adam,
    run_cmaes,
    run_de,
    run_optimizer,
    run_pso,
    run_random_search,
)


def sphere(dim=2):
    return DirectObjective(dim, lambda p: float(p @ p), "custom/sphere")


@pytest.fixture(scope="module")
def inst20():
    return build_instance(20, "Tanh1")


@pytest.mark.parametrize("name", list(ALGORITHMS))
def test_exact_budget_consumption(name, inst20):
    budget = 137
    meter = BudgetMeter(limit=budget)
    rec = run_optimizer(inst20, meter, OptimizerConfig(algorithm=name, seed=5), stride=10)
    assert meter.used == budget
    assert rec.fe_consumed == budget
    assert rec.checkpoints[-1, 0] == budget


@pytest.mark.parametrize("name", list(ALGORITHMS))
def test_trajectory_monotone_and_checkpoint_grid(name, inst20):
    meter = BudgetMeter(limit=95)
    rec = run_optimizer(inst20, meter, OptimizerConfig(algorithm=name, seed=2), stride=10)
    fes = rec.checkpoint_fes()
    assert fes[0] == 1
    assert list(fes[1:]) == [10, 20, 30, 40, 50, 60, 70, 80, 90, 95]
    best = rec.best_train_trajectory()
    assert np.all(np.diff(best) <= 0)


@pytest.mark.parametrize("name", list(ALGORITHMS))
def test_bit_reproducibility(name, inst20):
    def once():
        meter = BudgetMeter(limit=80)
        return run_optimizer(inst20, meter, OptimizerConfig(algorithm=name, seed=11), stride=10)

    a, b = once(), once()
    assert np.array_equal(a.checkpoints, b.checkpoints)
    assert np.array_equal(a.final_params, b.final_params)
    assert a.events == b.events


def test_random_search_budget_one():
    obj = sphere()
    meter = BudgetMeter(limit=1)
    rec = run_random_search(obj, meter, RandomSearchConfig(), seed=0, stride=10)
    assert rec.fe_consumed == 1
    assert len(rec.checkpoints) == 1
    # the single candidate is the best
    assert rec.checkpoints[0, 1] == float(rec.final_params @ rec.final_params)


def test_random_search_beats_zero_vector_on_instances(inst20):
    # with 500 draws the best should comfortably improve on the zero net
    zero_value = inst20.eval_test(np.zeros(41))
    wins = 0
    for s in range(10):
        meter = BudgetMeter(limit=500)
        rec = run_random_search(inst20, meter, RandomSearchConfig(), seed=s, stride=500)
        wins += rec.checkpoints[-1, 1] < zero_value
    assert wins == 10


def test_pso_reaches_sphere_target():
    hits = 0
    for s in range(30):
        obj = sphere()
        rec = run_pso(obj, obj.new_meter(2000), PSOConfig(), seed=s, stride=2000)
        hits += rec.checkpoints[-1, 1] < 1e-3
    assert hits >= 28


def test_de_reaches_sphere_target():
    hits = 0
    for s in range(30):
        obj = sphere()
        rec = run_de(obj, obj.new_meter(2000), DEConfig(), seed=s, stride=2000)
        hits += rec.checkpoints[-1, 1] < 1e-3
    assert hits >= 28


def test_cmaes_reaches_sphere_target():
    hits = 0
    for s in range(30):
        obj = sphere()
        rec = run_cmaes(obj, obj.new_meter(1500), CMAESConfig(), seed=s, stride=1500)
        hits += rec.checkpoints[-1, 1] < 1e-6
    assert hits >= 28


def test_optimizers_roam_outside_unit_box():
    # optimum far from the origin: reaching it proves nothing clips positions
    for runner, config in (
        (run_pso, PSOConfig()),
        (run_de, DEConfig()),
        (run_cmaes, CMAESConfig()),
    ):
        obj = DirectObjective(2, lambda p: float((p[0] - 50) ** 2 + (p[1] + 30) ** 2), "custom/shifted")
        rec = runner(obj, obj.new_meter(3000), config, seed=3, stride=3000)
        assert np.linalg.norm(rec.final_params) > 10


def test_de_replay_oracle():
    """Re-derive DE's population bookkeeping from the evaluation log.

    Every post-init evaluation must equal its slot's current parent
    outside one contiguous segment, and greedy selection decides whether
    it becomes the new parent.
    """
    log = []
    base = sphere(dim=6)

    class Spy:
        dimension = base.dimension
        label = base.label
        has_test = False

        def eval_train(self, meter, params):
            v = base.eval_train(meter, params)
            log.append((np.array(params, copy=True), v))
            return v

    pop = 5
    obj = Spy()
    run_de(obj, BudgetMeter(limit=60), DEConfig(population=pop), seed=9, stride=60)

    x = [log[i][0] for i in range(pop)]
    f = [log[i][1] for i in range(pop)]
    for k, (trial, ft) in enumerate(log[pop:]):
        i = k % pop
        diff = np.flatnonzero(trial != x[i])
        if diff.size:
            lo, hi = diff.min(), diff.max()
            assert np.array_equal(np.arange(lo, hi + 1), diff) or diff.size == hi - lo + 1
        if ft <= f[i]:
            x[i] = trial
            f[i] = ft


def test_de_population_validation():
    with pytest.raises(ConfigError):
        DEConfig(population=3).validate(5)
    with pytest.raises(ConfigError):
        DEConfig(weight=0.0).validate(5)


def test_pso_config_validation():
    with pytest.raises(ConfigError):
        PSOConfig(swarm_size=1).validate(5)
    with pytest.raises(ConfigError):
        PSOConfig(inertia=1.5).validate(5)


def test_cma_mean_stays_in_convex_hull_on_flat_fitness():
    state = _CmaState(dimension=4, sigma0=1.0, lam=8)
    rng = np.random.default_rng(12)
    for _ in range(5):
        state.refresh_eigensystem()
        candidates = state.sample(rng)
        state.update(candidates, np.zeros(len(candidates)))
        assert np.all(state.mean >= candidates.min(axis=0) - 1e-12)
        assert np.all(state.mean <= candidates.max(axis=0) + 1e-12)


def test_cma_covariance_stays_spd(inst20):
    state = _CmaState(dimension=41, sigma0=1.0, lam=15)
    rng = np.random.default_rng(3)
    meter = BudgetMeter(limit=500)
    while meter.remaining > 0:
        state.refresh_eigensystem(force=True)
        vals = state.eig_scale**2
        assert vals.min() > 0
        candidates = state.sample(rng)
        k = min(len(candidates), meter.remaining)
        fitness = np.array([inst20.eval_train(meter, c) for c in candidates[:k]])
        if k == len(candidates):
            state.update(candidates[:k], fitness)


def test_cma_degenerate_covariance_resets():
    state = _CmaState(dimension=3, sigma0=1.0, lam=6)
    state.cov = np.diag([1.0, 1e-30, 1e30])
    assert state.refresh_eigensystem(force=True)
    assert np.array_equal(state.cov, np.eye(3))
    assert state.resets == 1


def test_adam_requires_network_objective():
    with pytest.raises(ConfigError):
        run_adam(sphere(), BudgetMeter(limit=5), AdamConfig(), seed=0)


def test_adam_determinism(inst20):
    a = run_adam(inst20, BudgetMeter(limit=60), AdamConfig(), seed=4, stride=10)
    b = run_adam(inst20, BudgetMeter(limit=60), AdamConfig(), seed=4, stride=10)
    assert np.array_equal(a.checkpoints, b.checkpoints)
    assert np.array_equal(a.final_params, b.final_params)


def test_adam_first_step_bounded_by_step_size():
    rng = np.random.default_rng(8)
    cfg = AdamConfig()
    for scale in (1e-8, 1.0, 1e6):
        grad = rng.normal(size=50) * scale
        theta, m, v = adam_step(np.zeros(50), grad, np.zeros(50), np.zeros(50), 1, cfg)
        assert np.all(np.abs(theta) <= cfg.step_size + 1e-15)


def test_adam_scalar_quadratic_oracle():
    # independent scalar reference of the same update rule
    cfg = AdamConfig()
    theta_ref = 0.0
    m_ref = v_ref = 0.0
    for t in range(1, 5001):
        g = 2.0 * (theta_ref - 3.0)
        m_ref = cfg.beta1 * m_ref + (1 - cfg.beta1) * g
        v_ref = cfg.beta2 * v_ref + (1 - cfg.beta2) * g * g
        m_hat = m_ref / (1 - cfg.beta1**t)
        v_hat = v_ref / (1 - cfg.beta2**t)
        theta_ref -= cfg.step_size * m_hat / (math.sqrt(v_hat) + cfg.epsilon)

    theta = np.zeros(1)
    m = np.zeros(1)
    v = np.zeros(1)
    for t in range(1, 5001):
        grad = 2.0 * (theta - 3.0)
        theta, m, v = adam_step(theta, grad, m, v, t, cfg)
    assert theta[0] == pytest.approx(theta_ref, rel=1e-12)
    assert abs(theta[0] - 3.0) < 0.1


def test_adam_aborts_on_nonfinite_gradient():
    class Broken:
        dimension = 41
        label = "f0/Tanh1"
        has_test = False
        architecture = build_instance(20, "Tanh1").architecture

        def eval_train_with_grad(self, meter, params):
            meter.consume()
            return 1.0, np.full(41, np.nan)

    rec = run_adam(Broken(), BudgetMeter(limit=10), AdamConfig(), seed=0, stride=10)
    assert rec.failed
    assert any("nonfinite_gradient" in e for e in rec.events)
    assert rec.fe_consumed == 1


def test_nan_train_values_never_become_best(inst20):
    calls = {"n": 0}

    class Flaky:
        dimension = 2
        label = "custom/flaky"
        has_test = False

        def eval_train(self, meter, params):
            meter.consume()
            calls["n"] += 1
            return math.nan if calls["n"] % 2 else float(params @ params)

    rec = run_random_search(Flaky(), BudgetMeter(limit=20), RandomSearchConfig(), seed=1, stride=20)
    assert math.isfinite(rec.checkpoints[-1, 1])


def test_unknown_algorithm_rejected():
    with pytest.raises(ConfigError):
        OptimizerConfig(algorithm="annealing", seed=0)
    with pytest.raises(ConfigError):
        OptimizerConfig(algorithm="pso", seed=0, params={"swarm": 10})
