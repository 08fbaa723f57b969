#!/usr/bin/env python3
"""Desk-scale version of the summary-score comparison.

Runs random search, PSO, DE and CMA-ES on five Tanh1 instances with a
500-evaluation budget and 10 repetitions, then writes the per-instance
scores and the mean score trajectories (the plot-ready data behind the
full-scale mean-performance figure).
"""

import argparse
import time
from pathlib import Path

from mlpbench.harness import (
    AlgorithmSpec,
    ExperimentPlan,
    aggregate_mean_scores,
    run_experiment,
    score_all,
    write_mean_scores_csv,
    write_scores_csv,
)

INSTANCES = ("f20/Tanh1", "f26/Tanh1", "f34/Tanh1", "f43/Tanh1", "f51/Tanh1")
ALGORITHMS = ("random_search", "pso", "de", "cmaes")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("desk_scale_out"))
    ap.add_argument("--budget", type=int, default=500)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--parallel", type=int, default=4)
    args = ap.parse_args()

    plan = ExperimentPlan(
        instances=INSTANCES,
        algorithms=tuple(AlgorithmSpec(a) for a in ALGORITHMS),
        repetitions=args.reps,
        budget=args.budget,
        stride=10,
        master_seed=args.seed,
    )
    t0 = time.time()
    store = run_experiment(plan, parallel=args.parallel)
    print(f"{len(store.records)} runs in {time.time() - t0:.0f}s")
    store.save(args.out / "store")

    rows = score_all(store)
    write_scores_csv(rows, args.out / "scores.csv")
    mean_rows = aggregate_mean_scores(store, "Tanh1", score_rows=rows)
    write_mean_scores_csv(mean_rows, args.out / "mean_scores.csv")

    finals = {r["algorithm"]: r["mean_normalized"] for r in mean_rows if r["fe"] == args.budget}
    print("final mean normalized scores:")
    for alg in ALGORITHMS:
        print(f"  {alg:14s} {finals[alg]:.3f}")


if __name__ == "__main__":
    main()
