#!/usr/bin/env python3
"""Gradient-baseline difficulty probe: easiest vs hardest regression target.

Runs the Adam baseline on the 5-layer tanh model for the Easom (f20) and
Periodic (f34) targets and prints the median final test MSE of each; the
Periodic task should be markedly harder.
"""

import argparse

import numpy as np

from mlpbench.instance import BudgetMeter, build_instance
from mlpbench.optimizers import AdamConfig, run_adam


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=1000)
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--topology", default="Tanh5")
    args = ap.parse_args()

    for fid in (20, 34):
        inst = build_instance(fid, args.topology)
        finals = []
        for s in range(args.reps):
            meter = BudgetMeter(limit=args.budget)
            rec = run_adam(inst, meter, AdamConfig(), seed=1000 + s, stride=100)
            finals.append(rec.final_test_mse())
        print(
            f"{inst.label}: median final test MSE {np.median(finals):.4f} "
            f"(min {min(finals):.4f}, max {max(finals):.4f})"
        )


if __name__ == "__main__":
    main()
