"""Mann-Whitney U tests and the pairwise win/draw/loss decision rule.

U is computed by rank summation with midranks for ties. The normal
approximation applies the tie-corrected variance and a 0.5 continuity
correction; exact mode enumerates every assignment of pooled values to
the two groups and is capped at a combined size of 20. A comparison is
a draw when the two-tailed p is >= alpha (boundary counts as a draw),
otherwise the one-tailed tests decide the direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

EXACT_SIZE_CAP = 20


class Outcome(Enum):
    A_WINS = "a_wins"
    DRAW = "draw"
    B_WINS = "b_wins"

    def flipped(self) -> "Outcome":
        if self is Outcome.A_WINS:
            return Outcome.B_WINS
        if self is Outcome.B_WINS:
            return Outcome.A_WINS
        return Outcome.DRAW


@dataclass(frozen=True)
class UTestResult:
    u_statistic: float            # U for sample a
    p_two_tailed: float
    p_one_tailed_a_less: float    # alternative: a stochastically smaller
    p_one_tailed_a_greater: float
    method: str                   # "exact" | "normal_approx_tie_corrected"


def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(len(pooled))
    sorted_vals = pooled[order]
    i = 0
    while i < len(pooled):
        j = i
        while j + 1 < len(pooled) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _phi(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def mann_whitney(a, b, mode: str = "normal") -> UTestResult:
    """Two-sample Mann-Whitney U test.

    ``mode="normal"`` uses the tie-corrected normal approximation with
    continuity correction; ``mode="exact"`` enumerates all
    C(|a|+|b|, |a|) group assignments of the pooled values (midranks
    handle ties) and requires |a|+|b| <= 20.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n1, n2 = len(a), len(b)
    if n1 < 1 or n2 < 1:
        raise ValueError("both samples must be non-empty")

    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    u_a = float(ranks[:n1].sum()) - n1 * (n1 + 1) / 2.0

    if mode == "exact":
        n = n1 + n2
        if n > EXACT_SIZE_CAP:
            raise ValueError(
                f"exact mode capped at combined size {EXACT_SIZE_CAP}, got {n}"
            )
        offset = n1 * (n1 + 1) / 2.0
        eps = 1e-9
        count_le = count_ge = total = 0
        for subset in combinations(range(n), n1):
            u = sum(ranks[i] for i in subset) - offset
            total += 1
            if u <= u_a + eps:
                count_le += 1
            if u >= u_a - eps:
                count_ge += 1
        p_less = count_le / total
        p_greater = count_ge / total
        p_two = min(1.0, 2.0 * min(p_less, p_greater))
        return UTestResult(u_a, p_two, p_less, p_greater, "exact")

    if mode != "normal":
        raise ValueError(f"mode must be 'normal' or 'exact', got {mode!r}")

    n = n1 + n2
    mean_u = n1 * n2 / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float((counts.astype(float) ** 3 - counts).sum())
    var_u = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var_u <= 0.0:
        # Every pooled value identical: the test carries no evidence.
        return UTestResult(u_a, 1.0, 1.0, 1.0, "normal_approx_tie_corrected")
    sd = math.sqrt(var_u)
    p_less = _phi((u_a - mean_u + 0.5) / sd)
    p_greater = 1.0 - _phi((u_a - mean_u - 0.5) / sd)
    p_two = min(1.0, 2.0 * min(p_less, p_greater))
    return UTestResult(u_a, p_two, p_less, p_greater, "normal_approx_tie_corrected")


def compare(a, b, alpha: float = 0.05, mode: str = "normal") -> Outcome:
    """Win/draw/loss between two samples where lower values are better.

    Draw unless the two-tailed test rejects at ``alpha``; then the
    one-tailed tests decide which side is stochastically smaller. A p
    exactly equal to ``alpha`` is not significant.
    """
    r = mann_whitney(a, b, mode=mode)
    if r.p_two_tailed >= alpha:
        return Outcome.DRAW
    if r.p_one_tailed_a_less < alpha:
        return Outcome.A_WINS
    if r.p_one_tailed_a_greater < alpha:
        return Outcome.B_WINS
    return Outcome.DRAW
