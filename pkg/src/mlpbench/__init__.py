"""mlpbench: budgeted black-box objectives from neural-net regression.

324 canonical problem instances (54 two-dimensional regression targets
x 6 MLP topologies), five baseline optimizers, a Mann-Whitney scoring
harness and a CLI. Start with :func:`build_instance` for a single
objective or :class:`ExperimentPlan` for a full comparison.
"""

from .__about__ import __version__
from .functions import (
    DomainViolationError,
    FunctionSpec,
    catalog,
    evaluate,
    get_function,
    register_custom,
)
from .dataset import (
    RawDataset,
    RegressionDataset,
    ScalingParams,
    export_csv,
    generate,
    import_csv,
    split_and_normalize,
)
from .network import Architecture, batch_mse, forward, init_weights, mse_gradient, param_count
from .instance import (
    TOPOLOGIES,
    BudgetExhaustedError,
    BudgetMeter,
    DirectObjective,
    ProblemInstance,
    build_instance,
    enumerate_suite,
    parse_label,
    suite_labels,
)
from .optimizers import (
    AdamConfig,
    CMAESConfig,
    DEConfig,
    OptimizerConfig,
    PSOConfig,
    RandomSearchConfig,
    RunRecord,
    run_adam,
    run_cmaes,
    run_de,
    run_optimizer,
    run_pso,
    run_random_search,
)
from .stats import Outcome, UTestResult, compare, mann_whitney
from .harness import (
    AlgorithmSpec,
    ExperimentPlan,
    ResultStore,
    aggregate_mean_scores,
    baseline_comparison,
    per_instance_summary,
    run_experiment,
    score_all,
    score_checkpoint,
)

__all__ = [
    "__version__",
    "DomainViolationError",
    "FunctionSpec",
    "catalog",
    "evaluate",
    "get_function",
    "register_custom",
    "RawDataset",
    "RegressionDataset",
    "ScalingParams",
    "export_csv",
    "generate",
    "import_csv",
    "split_and_normalize",
    "Architecture",
    "batch_mse",
    "forward",
    "init_weights",
    "mse_gradient",
    "param_count",
    "TOPOLOGIES",
    "BudgetExhaustedError",
    "BudgetMeter",
    "DirectObjective",
    "ProblemInstance",
    "build_instance",
    "enumerate_suite",
    "parse_label",
    "suite_labels",
    "AdamConfig",
    "CMAESConfig",
    "DEConfig",
    "OptimizerConfig",
    "PSOConfig",
    "RandomSearchConfig",
    "RunRecord",
    "run_adam",
    "run_cmaes",
    "run_de",
    "run_optimizer",
    "run_pso",
    "run_random_search",
    "Outcome",
    "UTestResult",
    "compare",
    "mann_whitney",
    "AlgorithmSpec",
    "ExperimentPlan",
    "ResultStore",
    "aggregate_mean_scores",
    "baseline_comparison",
    "per_instance_summary",
    "run_experiment",
    "score_all",
    "score_checkpoint",
]
