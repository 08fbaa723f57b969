"""Experiment orchestration and the pairwise scoring pipeline.

A plan is a grid of (instance, algorithm, repetition) cells. Every cell
gets a seed derived deterministically from the master seed and its grid
coordinates, so the assembled result store is identical no matter how
many workers executed it. Scoring compares the per-repetition test-MSE
distributions of each algorithm pair at a checkpoint with a Mann-Whitney
U test and awards 3/1/0 points for win/draw/loss, normalized by the
maximum 3(n-1).
"""

from __future__ import annotations

import json
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from . import __about__
from .instance import TOPOLOGIES, BudgetMeter, build_instance, parse_label
from .functions import get_function
from .optimizers import (
    ALGORITHMS,
    DEFAULT_CHECKPOINT_STRIDE,
    POPULATION_ALGORITHMS,
    OptimizerConfig,
    RunRecord,
    run_optimizer,
)
from .seeds import derive_seed
from .stats import Outcome, compare

WIN_POINTS = 3
DRAW_POINTS = 1


class PlanError(ValueError):
    """An experiment plan fails validation."""


class IncompleteStoreError(RuntimeError):
    """Scoring was asked to run over a store with missing or failed cells."""


class CheckpointMissingError(ValueError):
    """Scoring was asked for an evaluation index that was never recorded."""


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ExperimentPlan:
    instances: tuple[str, ...]
    algorithms: tuple[AlgorithmSpec, ...]
    repetitions: int = 30
    budget: int = 5000
    stride: int = DEFAULT_CHECKPOINT_STRIDE
    master_seed: int = 1

    def validate(self) -> None:
        if not self.instances:
            raise PlanError("plan lists no instances")
        if len(set(self.instances)) != len(self.instances):
            raise PlanError("duplicate instance labels in plan")
        for label in self.instances:
            fid, _ = parse_label(label)
            try:
                get_function(fid)
            except KeyError as e:
                raise PlanError(str(e)) from None
        if not self.algorithms:
            raise PlanError("plan lists no algorithms")
        names = [a.name for a in self.algorithms]
        if len(set(names)) != len(names):
            raise PlanError("duplicate algorithm names in plan")
        for spec in self.algorithms:
            if spec.name not in ALGORITHMS:
                raise PlanError(
                    f"unknown algorithm {spec.name!r}; expected one of {list(ALGORITHMS)}"
                )
            try:
                config = OptimizerConfig(algorithm=spec.name, seed=0, params=spec.params)
                config.hyper().validate(dimension=41)
            except ValueError as e:
                raise PlanError(str(e)) from None
        if self.repetitions < 2:
            raise PlanError(f"repetitions must be >= 2, got {self.repetitions}")
        if self.budget < 1:
            raise PlanError(f"budget must be >= 1, got {self.budget}")
        if self.stride < 1:
            raise PlanError(f"stride must be >= 1, got {self.stride}")

    def algorithm_names(self) -> list[str]:
        return [a.name for a in self.algorithms]

    def cells(self):
        for label in self.instances:
            for spec in self.algorithms:
                for rep in range(self.repetitions):
                    yield label, spec, rep

    def cell_seed(self, label: str, algorithm: str, rep: int) -> int:
        fid, topology = parse_label(label)
        topo_idx = list(TOPOLOGIES).index(topology)
        alg_idx = self.algorithm_names().index(algorithm)
        return derive_seed(self.master_seed, fid, topo_idx, alg_idx, rep)

    def to_dict(self) -> dict:
        return {
            "instances": list(self.instances),
            "algorithms": [
                a.name if not a.params else {"name": a.name, **a.params}
                for a in self.algorithms
            ],
            "repetitions": self.repetitions,
            "budget": self.budget,
            "stride": self.stride,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentPlan":
        if not isinstance(data, dict):
            raise PlanError("plan must be a mapping")
        known = {"instances", "algorithms", "repetitions", "budget", "stride", "master_seed"}
        unknown = set(data) - known
        if unknown:
            raise PlanError(f"unknown plan keys: {sorted(unknown)}")
        algorithms = []
        for entry in data.get("algorithms", []):
            if isinstance(entry, str):
                algorithms.append(AlgorithmSpec(name=entry))
            elif isinstance(entry, dict) and "name" in entry:
                params = {k: v for k, v in entry.items() if k != "name"}
                algorithms.append(AlgorithmSpec(name=entry["name"], params=params))
            else:
                raise PlanError(f"bad algorithm entry {entry!r}")
        plan = cls(
            instances=tuple(data.get("instances", [])),
            algorithms=tuple(algorithms),
            repetitions=int(data.get("repetitions", 30)),
            budget=int(data.get("budget", 5000)),
            stride=int(data.get("stride", DEFAULT_CHECKPOINT_STRIDE)),
            master_seed=int(data.get("master_seed", 1)),
        )
        plan.validate()
        return plan

    @classmethod
    def from_yaml(cls, path: str | Path) -> "ExperimentPlan":
        try:
            data = yaml.safe_load(Path(path).read_text())
        except yaml.YAMLError as e:
            raise PlanError(f"cannot parse plan file: {e}") from None
        return cls.from_dict(data)


CellKey = tuple[str, str, int]   # (instance label, algorithm name, repetition)


def _cell_key_str(key: CellKey) -> str:
    label, alg, rep = key
    return f"{label}|{alg}|{rep}"


def _execute_cell(args) -> tuple[CellKey, RunRecord | None, str | None]:
    label, alg_name, params, rep, seed, budget, stride = args
    key = (label, alg_name, rep)
    try:
        fid, topology = parse_label(label)
        inst = build_instance(fid, topology)
        meter = BudgetMeter(limit=budget)
        config = OptimizerConfig(algorithm=alg_name, seed=seed, params=params)
        record = run_optimizer(inst, meter, config, stride=stride)
        return key, record, None
    except Exception:
        return key, None, traceback.format_exc()


@dataclass
class ResultStore:
    plan: ExperimentPlan
    records: dict[CellKey, RunRecord] = field(default_factory=dict)
    failures: dict[CellKey, str] = field(default_factory=dict)
    version: str = __about__.__version__

    @property
    def complete(self) -> bool:
        for label, spec, rep in self.plan.cells():
            rec = self.records.get((label, spec.name, rep))
            if rec is None or rec.failed:
                return False
        return not self.failures

    def require_complete(self, force: bool = False) -> None:
        if self.complete or force:
            return
        missing = [
            _cell_key_str((label, spec.name, rep))
            for label, spec, rep in self.plan.cells()
            if (label, spec.name, rep) not in self.records
            or self.records[(label, spec.name, rep)].failed
        ]
        raise IncompleteStoreError(
            f"store is incomplete ({len(missing)} bad cells; first: {missing[:3]}); "
            "pass force=True to score anyway"
        )

    def checkpoint_grid(self) -> np.ndarray:
        first = next(iter(self.records.values()))
        grid = first.checkpoint_fes()
        for rec in self.records.values():
            if not np.array_equal(rec.checkpoint_fes(), grid):
                raise CheckpointMissingError(
                    f"checkpoint grids differ between runs (cell {rec.label}/{rec.algorithm})"
                )
        return grid

    def _grid_index(self) -> dict[int, int]:
        # grids are uniform across records (checkpoint_grid validates)
        cached = getattr(self, "_fe_rows", None)
        if cached is None:
            cached = {int(fe): row for row, fe in enumerate(self.checkpoint_grid())}
            self._fe_rows = cached
        return cached

    def test_values(self, label: str, algorithm: str, fe: int) -> np.ndarray:
        row = self._grid_index().get(int(fe))
        if row is None:
            grid = self.checkpoint_grid()
            raise CheckpointMissingError(
                f"no checkpoint at fe={fe} for {label}/{algorithm} "
                f"(grid starts {grid[:3]}, stride-aligned indices only)"
            )
        return np.array(
            [
                self.records[(label, algorithm, rep)].checkpoints[row, 2]
                for rep in range(self.plan.repetitions)
            ]
        )

    def final_test_values(self, label: str, algorithm: str) -> np.ndarray:
        return np.array(
            [
                self.records[(label, algorithm, rep)].final_test_mse()
                for rep in range(self.plan.repetitions)
            ]
        )

    # --- persistence ---

    def save(self, out_dir: str | Path) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "plan.yaml").write_text(
            yaml.safe_dump(self.plan.to_dict(), sort_keys=True)
        )
        meta = {
            "version": self.version,
            "complete": self.complete,
            "failures": {_cell_key_str(k): v for k, v in sorted(self.failures.items())},
        }
        (out / "store.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
        for key in sorted(self.records):
            label, alg, rep = key
            rec = self.records[key]
            cell_dir = out / "cells" / label.replace("/", "_") / alg
            cell_dir.mkdir(parents=True, exist_ok=True)
            lines = ["fe,best_train_mse,test_mse"]
            for fe, train, test in rec.checkpoints:
                lines.append(f"{int(fe)},{train:.17g},{test:.17g}")
            (cell_dir / f"rep{rep:03d}.csv").write_text("\n".join(lines) + "\n")
            sidecar = {
                "label": rec.label,
                "algorithm": rec.algorithm,
                "seed": rec.seed,
                "fe_consumed": rec.fe_consumed,
                "hyperparameters": rec.hyperparameters,
                "events": rec.events,
                "failed": rec.failed,
                "final_params": [float(v) for v in rec.final_params],
            }
            (cell_dir / f"rep{rep:03d}.json").write_text(
                json.dumps(sidecar, sort_keys=True)
            )
        return out

    @classmethod
    def load(cls, store_dir: str | Path) -> "ResultStore":
        store_dir = Path(store_dir)
        plan = ExperimentPlan.from_yaml(store_dir / "plan.yaml")
        meta = json.loads((store_dir / "store.json").read_text())
        store = cls(plan=plan, version=meta.get("version", "unknown"))
        for key_str, msg in meta.get("failures", {}).items():
            label, alg, rep = key_str.split("|")
            store.failures[(label, alg, int(rep))] = msg
        for label, spec, rep in plan.cells():
            cell_dir = store_dir / "cells" / label.replace("/", "_") / spec.name
            csv_path = cell_dir / f"rep{rep:03d}.csv"
            json_path = cell_dir / f"rep{rep:03d}.json"
            if not csv_path.exists() or not json_path.exists():
                continue
            rows = csv_path.read_text().splitlines()[1:]
            checkpoints = np.array(
                [[float(c) for c in row.split(",")] for row in rows]
            )
            sidecar = json.loads(json_path.read_text())
            store.records[(label, spec.name, rep)] = RunRecord(
                label=sidecar["label"],
                algorithm=sidecar["algorithm"],
                seed=sidecar["seed"],
                checkpoints=checkpoints,
                final_params=np.array(sidecar["final_params"]),
                fe_consumed=sidecar["fe_consumed"],
                hyperparameters=sidecar["hyperparameters"],
                events=sidecar["events"],
                failed=sidecar["failed"],
            )
        return store


def run_experiment(plan: ExperimentPlan, parallel: int = 1) -> ResultStore:
    """Execute every cell of the plan; the result does not depend on
    execution order or worker count."""
    plan.validate()
    jobs = [
        (
            label,
            spec.name,
            spec.params,
            rep,
            plan.cell_seed(label, spec.name, rep),
            plan.budget,
            plan.stride,
        )
        for label, spec, rep in plan.cells()
    ]
    store = ResultStore(plan=plan)
    if parallel <= 1:
        results = map(_execute_cell, jobs)
    else:
        pool = ProcessPoolExecutor(max_workers=parallel)
        results = pool.map(_execute_cell, jobs)
    for key, record, error in results:
        if record is not None:
            store.records[key] = record
            if record.failed:
                store.failures[key] = "; ".join(record.events) or "run marked failed"
        else:
            store.failures[key] = error
    if parallel > 1:
        pool.shutdown()
    return store


# --- scoring ---

def score_checkpoint(
    store: ResultStore, label: str, fe: int, alpha: float = 0.05, force: bool = False
) -> dict[str, tuple[int, float]]:
    """Points and normalized score per algorithm at one evaluation index."""
    store.require_complete(force)
    algs = store.plan.algorithm_names()
    if len(algs) < 2:
        raise PlanError("scoring needs at least two algorithms")
    samples = {alg: store.test_values(label, alg, fe) for alg in algs}
    points = {alg: 0 for alg in algs}
    for i, alg_a in enumerate(algs):
        for alg_b in algs[i + 1 :]:
            outcome = compare(samples[alg_a], samples[alg_b], alpha=alpha)
            if outcome is Outcome.A_WINS:
                points[alg_a] += WIN_POINTS
            elif outcome is Outcome.B_WINS:
                points[alg_b] += WIN_POINTS
            else:
                points[alg_a] += DRAW_POINTS
                points[alg_b] += DRAW_POINTS
    ceiling = WIN_POINTS * (len(algs) - 1)
    return {alg: (points[alg], points[alg] / ceiling) for alg in algs}


def score_all(
    store: ResultStore, alpha: float = 0.05, force: bool = False
) -> list[dict]:
    """Score every (instance, checkpoint); rows for ``scores.csv``."""
    store.require_complete(force)
    grid = store.checkpoint_grid()
    rows = []
    for label in store.plan.instances:
        _, topology = parse_label(label)
        for fe in grid:
            # completeness was checked once above
            scored = score_checkpoint(store, label, int(fe), alpha=alpha, force=True)
            for alg, (points, normalized) in scored.items():
                rows.append(
                    {
                        "instance": label,
                        "topology": topology,
                        "fe": int(fe),
                        "algorithm": alg,
                        "points": points,
                        "normalized": normalized,
                    }
                )
    return rows


def aggregate_mean_scores(
    store: ResultStore,
    topology: str,
    alpha: float = 0.05,
    force: bool = False,
    score_rows: list[dict] | None = None,
) -> list[dict]:
    """Mean +- stddev of normalized score over a topology's instances.

    One row per (checkpoint, algorithm); the trajectory behind the
    summary figure.
    """
    if score_rows is None:
        score_rows = score_all(store, alpha=alpha, force=force)
    labels = [l for l in store.plan.instances if parse_label(l)[1] == topology]
    if not labels:
        raise PlanError(f"no instances with topology {topology!r} in plan")
    grouped: dict[tuple[int, str], list[float]] = {}
    for r in score_rows:
        if r["topology"] == topology:
            grouped.setdefault((r["fe"], r["algorithm"]), []).append(r["normalized"])
    rows = []
    for fe in store.checkpoint_grid():
        for alg in store.plan.algorithm_names():
            values = grouped[(int(fe), alg)]
            rows.append(
                {
                    "topology": topology,
                    "fe": int(fe),
                    "algorithm": alg,
                    "mean_normalized": float(np.mean(values)),
                    "std_normalized": float(np.std(values)),
                }
            )
    return rows


def per_instance_summary(
    store: ResultStore, topology: str | None = None, force: bool = False
) -> list[dict]:
    """Mean final test MSE per (instance, algorithm) plus the per-instance
    best algorithm (ties break toward earlier plan order)."""
    store.require_complete(force)
    rows = []
    for label in store.plan.instances:
        _, topo = parse_label(label)
        if topology is not None and topo != topology:
            continue
        means = {}
        for alg in store.plan.algorithm_names():
            means[alg] = float(np.mean(store.final_test_values(label, alg)))
        best = min(means, key=lambda a: (means[a], store.plan.algorithm_names().index(a)))
        for alg in store.plan.algorithm_names():
            rows.append(
                {
                    "instance": label,
                    "topology": topo,
                    "algorithm": alg,
                    "mean_final_test_mse": means[alg],
                    "best": alg == best,
                }
            )
    return rows


def baseline_comparison(
    store: ResultStore, topology: str | None = None, force: bool = False
) -> list[dict]:
    """Best population-based algorithm vs the gradient baseline.

    Per instance: pick the population algorithm with the lowest median
    final test MSE, pair its 30-sample distribution with the gradient
    baseline's, and sort instances ascending by the median difference
    (negative = population side ahead).
    """
    store.require_complete(force)
    algs = store.plan.algorithm_names()
    if "adam" not in algs:
        raise PlanError("baseline comparison requires adam runs in the store")
    pop_algs = [a for a in algs if a in POPULATION_ALGORITHMS]
    if not pop_algs:
        raise PlanError("baseline comparison requires at least one population algorithm")
    entries = []
    for label in store.plan.instances:
        _, topo = parse_label(label)
        if topology is not None and topo != topology:
            continue
        medians = {a: float(np.median(store.final_test_values(label, a))) for a in pop_algs}
        best_pop = min(medians, key=lambda a: (medians[a], algs.index(a)))
        adam_values = store.final_test_values(label, "adam")
        median_adam = float(np.median(adam_values))
        entries.append(
            {
                "instance": label,
                "topology": topo,
                "best_pop_algorithm": best_pop,
                "median_best_pop": medians[best_pop],
                "median_adam": median_adam,
                "median_diff": medians[best_pop] - median_adam,
                "best_pop_values": store.final_test_values(label, best_pop),
                "adam_values": adam_values,
            }
        )
    entries.sort(key=lambda e: e["median_diff"])
    return entries


# --- CSV writers ---

def _write_csv(path: str | Path, header: list[str], rows: list[list]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        cells = [f"{c:.17g}" if isinstance(c, float) else str(c) for c in row]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_scores_csv(rows: list[dict], path: str | Path) -> Path:
    return _write_csv(
        path,
        ["instance", "topology", "fe", "algorithm", "points", "normalized"],
        [
            [r["instance"], r["topology"], r["fe"], r["algorithm"], r["points"], r["normalized"]]
            for r in rows
        ],
    )


def write_mean_scores_csv(rows: list[dict], path: str | Path) -> Path:
    return _write_csv(
        path,
        ["topology", "fe", "algorithm", "mean_normalized", "std_normalized"],
        [
            [r["topology"], r["fe"], r["algorithm"], r["mean_normalized"], r["std_normalized"]]
            for r in rows
        ],
    )


def write_summary_csv(rows: list[dict], path: str | Path) -> Path:
    return _write_csv(
        path,
        ["instance", "topology", "algorithm", "mean_final_test_mse", "best"],
        [
            [
                r["instance"],
                r["topology"],
                r["algorithm"],
                r["mean_final_test_mse"],
                str(r["best"]).lower(),
            ]
            for r in rows
        ],
    )


def write_baseline_csv(entries: list[dict], path: str | Path) -> Path:
    rows = []
    for rank, e in enumerate(entries):
        for side, alg, values in (
            ("best_pop", e["best_pop_algorithm"], e["best_pop_values"]),
            ("adam", "adam", e["adam_values"]),
        ):
            for rep, value in enumerate(values):
                rows.append(
                    [
                        rank,
                        e["instance"],
                        e["topology"],
                        e["best_pop_algorithm"],
                        e["median_best_pop"],
                        e["median_adam"],
                        e["median_diff"],
                        side,
                        alg,
                        rep,
                        float(value),
                    ]
                )
    return _write_csv(
        path,
        [
            "rank",
            "instance",
            "topology",
            "best_pop_algorithm",
            "median_best_pop",
            "median_adam",
            "median_diff",
            "side",
            "algorithm",
            "repetition",
            "final_test_mse",
        ],
        rows,
    )
