"""Budgeted problem instances: one dataset paired with one topology.

Training-set evaluation is the billable operation — every call burns one
unit of the function-evaluation budget and the meter refuses to go past
its limit. Test-set evaluation is free and side-effect free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import network
from .dataset import (
    DEFAULT_SAMPLE_COUNT,
    DEFAULT_TRAIN_FRACTION,
    RegressionDataset,
    generate,
    split_and_normalize,
)
from .functions import get_function
from .network import Architecture
from .seeds import canonical_sample_seed, canonical_split_seed

DEFAULT_BUDGET = 5000

# Topology name -> (activation, hidden layer count); canonical order.
TOPOLOGIES: dict[str, tuple[str, int]] = {
    "Tanh1": ("tanh", 1),
    "Tanh3": ("tanh", 3),
    "Tanh5": ("tanh", 5),
    "ReLU1": ("relu", 1),
    "ReLU3": ("relu", 3),
    "ReLU5": ("relu", 5),
}


class BudgetExhaustedError(RuntimeError):
    """The run tried to evaluate past its function-evaluation budget."""


@dataclass
class BudgetMeter:
    limit: int = DEFAULT_BUDGET
    used: int = 0

    def consume(self) -> int:
        if self.used >= self.limit:
            raise BudgetExhaustedError(
                f"budget of {self.limit} train evaluations exhausted"
            )
        self.used += 1
        return self.used

    @property
    def remaining(self) -> int:
        return self.limit - self.used


def architecture_for(topology: str) -> Architecture:
    try:
        activation, depth = TOPOLOGIES[topology]
    except KeyError:
        raise KeyError(
            f"unknown topology {topology!r}; expected one of {list(TOPOLOGIES)}"
        ) from None
    return Architecture(hidden_layers=depth, activation=activation)


@dataclass(frozen=True)
class ProblemInstance:
    function_id: int
    topology: str
    architecture: Architecture
    dataset: RegressionDataset
    label: str = field(init=False)
    dimension: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "label", f"f{self.function_id}/{self.topology}")
        object.__setattr__(self, "dimension", network.param_count(self.architecture))

    has_test = True

    def new_meter(self, budget: int = DEFAULT_BUDGET) -> BudgetMeter:
        return BudgetMeter(limit=budget)

    def eval_train(self, meter: BudgetMeter, params) -> float:
        """Full-pass training MSE; consumes exactly one budget unit."""
        params = network._check_params(self.architecture, params)
        meter.consume()
        return network.batch_mse(
            self.architecture, params, self.dataset.train_inputs, self.dataset.train_targets
        )

    def eval_train_with_grad(self, meter: BudgetMeter, params):
        """Training MSE plus gradient; the combined pass costs one unit."""
        params = network._check_params(self.architecture, params)
        meter.consume()
        return network.mse_with_gradient(
            self.architecture, params, self.dataset.train_inputs, self.dataset.train_targets
        )

    def eval_test(self, params) -> float:
        """Test MSE; free and without side effects."""
        return network.batch_mse(
            self.architecture, params, self.dataset.test_inputs, self.dataset.test_targets
        )


def build_instance(
    function_id: int,
    topology: str,
    dataset_seed: int | None = None,
    split_seed: int | None = None,
    n: int = DEFAULT_SAMPLE_COUNT,
    dataset: RegressionDataset | None = None,
) -> ProblemInstance:
    """Assemble the budgeted objective for (function, topology).

    With no explicit seeds the canonical per-function dataset is used, so
    every run of a given instance label sees identical data.
    """
    arch = architecture_for(topology)
    if dataset is None:
        spec = get_function(function_id)
        if dataset_seed is None:
            dataset_seed = canonical_sample_seed(function_id)
        if split_seed is None:
            split_seed = canonical_split_seed(function_id)
        raw = generate(spec, n=n, seed=dataset_seed)
        dataset = split_and_normalize(
            raw, DEFAULT_TRAIN_FRACTION, split_seed=split_seed, domain=spec.domain
        )
    return ProblemInstance(
        function_id=function_id, topology=topology, architecture=arch, dataset=dataset
    )


def parse_label(label: str) -> tuple[int, str]:
    """Split an ``f<ID>/<Topology>`` label into its parts."""
    try:
        fid_part, topology = label.split("/", 1)
        if not fid_part.startswith("f"):
            raise ValueError
        fid = int(fid_part[1:])
    except ValueError:
        raise ValueError(f"bad instance label {label!r}; expected f<ID>/<Topology>") from None
    if topology not in TOPOLOGIES:
        raise ValueError(f"bad instance label {label!r}: unknown topology {topology!r}")
    return fid, topology


def suite_labels() -> list[str]:
    """All 324 canonical instance labels, function-major order."""
    from .functions import catalog

    return [f"f{spec.id}/{topo}" for spec in catalog() for topo in TOPOLOGIES]


def enumerate_suite(seed_policy=None) -> list[ProblemInstance]:
    """Build the full 54 x 6 instance grid.

    ``seed_policy`` maps a function id to a dataset sample seed; the
    default is the canonical seed table. Each function's dataset is
    built once and shared across its six topologies.
    """
    from .functions import catalog

    instances = []
    for spec in catalog():
        sample_seed = (
            canonical_sample_seed(spec.id) if seed_policy is None else seed_policy(spec.id)
        )
        raw = generate(spec, n=DEFAULT_SAMPLE_COUNT, seed=sample_seed)
        ds = split_and_normalize(
            raw,
            DEFAULT_TRAIN_FRACTION,
            split_seed=canonical_split_seed(spec.id),
            domain=spec.domain,
        )
        for topo in TOPOLOGIES:
            instances.append(build_instance(spec.id, topo, dataset=ds))
    return instances


class DirectObjective:
    """Raw vector objective with instance-compatible budget accounting.

    Lets the optimizers run on plain analytic functions (no dataset, no
    test split); used for reference runs and sanity fixtures.
    """

    has_test = False

    def __init__(self, dimension: int, fn, label: str = "direct"):
        self.dimension = dimension
        self.fn = fn
        self.label = label

    def new_meter(self, budget: int = DEFAULT_BUDGET) -> BudgetMeter:
        return BudgetMeter(limit=budget)

    def eval_train(self, meter: BudgetMeter, params) -> float:
        params = np.asarray(params, dtype=float)
        if params.shape != (self.dimension,):
            raise network.DimensionError(
                f"expected vector of length {self.dimension}, got {params.shape}"
            )
        meter.consume()
        return float(self.fn(params))

    def eval_test(self, params) -> float:
        raise NotImplementedError("direct objectives have no test set")
