"""Command-line front end.

Commands: list, gen-data, run, score, summarize, baseline. Exit codes:
0 success, 1 usage/validation error, 2 runtime failure. Machine-readable
output goes only to paths named by flags; stdout carries a one-line
status plus, for ``list``, the requested table. The MLPBENCH_OUT
environment variable overrides the default output directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .__about__ import __version__
from .dataset import dataset_filename, export_csv, generate, split_and_normalize
from .functions import get_function, manifest_csv
from .harness import (
    ExperimentPlan,
    IncompleteStoreError,
    PlanError,
    ResultStore,
    aggregate_mean_scores,
    baseline_comparison,
    per_instance_summary,
    run_experiment,
    score_all,
    write_baseline_csv,
    write_mean_scores_csv,
    write_scores_csv,
    write_summary_csv,
)
from .instance import TOPOLOGIES, suite_labels
from .seeds import canonical_sample_seed, canonical_split_seed

USAGE_EXIT = 1
RUNTIME_EXIT = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the contract here is 1 for usage errors.
    def error(self, message):
        raise _UsageError(message)


def _default_out_dir() -> Path:
    return Path(os.environ.get("MLPBENCH_OUT", "mlpbench_out"))


def _build_parser() -> _Parser:
    parser = _Parser(prog="mlpbench", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="print catalog/topology/instance tables")
    group = p_list.add_mutually_exclusive_group(required=True)
    group.add_argument("--functions", action="store_true")
    group.add_argument("--topologies", action="store_true")
    group.add_argument("--instances", action="store_true")
    p_list.add_argument("--out", type=Path, help="also write the table as CSV")

    p_gen = sub.add_parser("gen-data", help="generate one canonical dataset CSV")
    p_gen.add_argument("--function", type=int, required=True, metavar="ID")
    p_gen.add_argument("--seed", type=int, default=None,
                       help="sample seed (default: canonical per-function seed)")
    p_gen.add_argument("--out", type=Path, default=None, metavar="DIR")

    p_run = sub.add_parser("run", help="execute an experiment plan")
    p_run.add_argument("--plan", type=Path, required=True, metavar="FILE")
    p_run.add_argument("--out", type=Path, default=None, metavar="DIR")
    p_run.add_argument("--parallel", type=int, default=1, metavar="N")

    for name, help_text in (
        ("score", "win/draw/loss points per instance and checkpoint"),
        ("summarize", "mean final test MSE per instance and algorithm"),
        ("baseline", "best population algorithm vs the gradient baseline"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--store", type=Path, required=True, metavar="DIR")
        p.add_argument("--out", type=Path, required=True, metavar="FILE")
        if name == "score":
            p.add_argument("--mean-out", type=Path, default=None, metavar="FILE",
                           help="also write per-topology mean score trajectories")
        else:
            p.add_argument("--topology", default=None, choices=list(TOPOLOGIES))
    return parser


def _cmd_list(args) -> int:
    if args.functions:
        table = manifest_csv()
    elif args.topologies:
        lines = ["topology,activation,hidden_layers,hidden_width,parameters"]
        from .instance import architecture_for
        from .network import param_count

        for name in TOPOLOGIES:
            arch = architecture_for(name)
            lines.append(
                f"{name},{arch.activation},{arch.hidden_layers},"
                f"{arch.hidden_width},{param_count(arch)}"
            )
        table = "\n".join(lines) + "\n"
    else:
        lines = ["instance,function_id,function,topology,dimension"]
        from .instance import architecture_for
        from .network import param_count

        for label in suite_labels():
            fid = int(label.split("/")[0][1:])
            topo = label.split("/")[1]
            lines.append(
                f"{label},{fid},{get_function(fid).name},{topo},"
                f"{param_count(architecture_for(topo))}"
            )
        table = "\n".join(lines) + "\n"

    n_rows = table.count("\n") - 1
    print(f"ok: {n_rows} rows")
    sys.stdout.write(table)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(table)
    return 0


def _cmd_gen_data(args) -> int:
    try:
        spec = get_function(args.function)
    except KeyError as e:
        raise _UsageError(str(e)) from None
    sample_seed = args.seed if args.seed is not None else canonical_sample_seed(spec.id)
    raw = generate(spec, seed=sample_seed)
    ds = split_and_normalize(
        raw, split_seed=canonical_split_seed(spec.id), domain=spec.domain
    )
    out_dir = args.out if args.out is not None else _default_out_dir() / "datasets"
    out_dir.mkdir(parents=True, exist_ok=True)
    path = export_csv(ds, out_dir / dataset_filename(spec))
    print(f"ok: wrote {path} ({ds.n_train} train / {ds.n_test} test rows)")
    return 0


def _cmd_run(args) -> int:
    if not args.plan.exists():
        raise _UsageError(f"plan file not found: {args.plan}")
    plan = ExperimentPlan.from_yaml(args.plan)
    if args.parallel < 1:
        raise _UsageError("--parallel must be >= 1")
    store = run_experiment(plan, parallel=args.parallel)
    out_dir = args.out if args.out is not None else _default_out_dir() / "store"
    store.save(out_dir)
    if not store.complete:
        for key, msg in store.failures.items():
            print(f"cell failed: {key}: {msg.splitlines()[-1]}", file=sys.stderr)
        print(f"error: store incomplete ({len(store.failures)} failed cells)")
        return RUNTIME_EXIT
    print(f"ok: {len(store.records)} runs -> {out_dir}")
    return 0


def _load_store(args) -> ResultStore:
    if not args.store.exists():
        raise _UsageError(f"store directory not found: {args.store}")
    return ResultStore.load(args.store)


def _cmd_score(args) -> int:
    store = _load_store(args)
    rows = score_all(store)
    write_scores_csv(rows, args.out)
    note = ""
    if args.mean_out:
        mean_rows = []
        for topology in dict.fromkeys(
            label.split("/")[1] for label in store.plan.instances
        ):
            mean_rows.extend(
                aggregate_mean_scores(store, topology, score_rows=rows)
            )
        write_mean_scores_csv(mean_rows, args.mean_out)
        note = f", mean trajectories -> {args.mean_out}"
    print(f"ok: {len(rows)} score rows -> {args.out}{note}")
    return 0


def _cmd_summarize(args) -> int:
    store = _load_store(args)
    rows = per_instance_summary(store, topology=args.topology)
    write_summary_csv(rows, args.out)
    print(f"ok: {len(rows)} summary rows -> {args.out}")
    return 0


def _cmd_baseline(args) -> int:
    store = _load_store(args)
    entries = baseline_comparison(store, topology=args.topology)
    write_baseline_csv(entries, args.out)
    print(f"ok: {len(entries)} instances -> {args.out}")
    return 0


_COMMANDS = {
    "list": _cmd_list,
    "gen-data": _cmd_gen_data,
    "run": _cmd_run,
    "score": _cmd_score,
    "summarize": _cmd_summarize,
    "baseline": _cmd_baseline,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return USAGE_EXIT
    except PlanError as e:
        print(f"plan error: {e}", file=sys.stderr)
        return USAGE_EXIT
    except IncompleteStoreError as e:
        print(f"error: {e}", file=sys.stderr)
        return RUNTIME_EXIT
    except (OSError, ValueError, RuntimeError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())
