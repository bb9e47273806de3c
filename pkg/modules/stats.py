#!/usr/bin/env python3

"""
Descriptive statistics over campaign runs and the Wilcoxon signed-rank
test used to compare two algorithms on paired per-run results.

Exact p-values come from the null distribution of W+ over all 2^n sign
assignments. That distribution is built by counting subset sums of the
doubled ranks, which keeps average (half-integer) ranks exact.
"""


import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np
from scipy.stats import norm, rankdata

from constants import Constants
from modules.errors import InvalidArgumentError

__version__ = "0.3.0-devel"


@dataclass(eq=False)
class RunSample:
    algorithm_id: str
    problem_id: str
    final_bests: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        self.final_bests = np.asarray(self.final_bests, dtype=float).ravel()
        if self.final_bests.size < 1:
            raise InvalidArgumentError(
                f"{self.algorithm_id}/{self.problem_id}: a run sample needs at least one run"
            )

    def __len__(self) -> int:
        return int(self.final_bests.size)


class Summary(NamedTuple):
    mean: float
    std: float


class WilcoxonMethod(Enum):
    EXACT = "ExactEnumeration"
    NORMAL = "NormalApproximation"


@dataclass(frozen=True)
class WilcoxonResult:
    statistic_W: float
    p_value: float
    n_effective: int
    method: WilcoxonMethod
    w_plus: float = 0.0
    w_minus: float = 0.0


def summarize(sample: RunSample) -> Summary:
    """
    @type sample: RunSample
    @param sample: final bests of R runs
    @rtype: Summary
    @return: arithmetic mean and sample standard deviation (R - 1 denominator)
    """
    values = sample.final_bests
    if values.size < 2:
        raise InvalidArgumentError(
            f"{sample.algorithm_id}/{sample.problem_id}: standard deviation needs at least two runs, got {values.size}"
        )
    return Summary(mean=float(np.mean(values)), std=float(np.std(values, ddof=1)))


def signed_rank_counts(doubled_ranks) -> np.ndarray:
    """
    Number of sign assignments giving each doubled W+ value.

    counts[s] is how many of the 2^n subsets of ranks sum to s / 2.
    Python integers are used so n up to the exact limit never overflows.
    """
    doubled_ranks = [int(r) for r in doubled_ranks]
    counts = [0] * (sum(doubled_ranks) + 1)
    counts[0] = 1
    top = 0
    for r in doubled_ranks:
        for s in range(top, -1, -1):
            if counts[s]:
                counts[s + r] += counts[s]
        top += r
    return np.array(counts, dtype=object)


def _exact_p(doubled_ranks: np.ndarray, w: float) -> float:
    counts = signed_rank_counts(doubled_ranks)
    limit = int(round(2 * w))
    tail = sum(counts[: limit + 1])
    return min(1.0, 2.0 * tail / 2 ** len(doubled_ranks))


def _normal_p(abs_diff: np.ndarray, w: float) -> float:
    n = abs_diff.size
    mean = n * (n + 1) / 4.0
    _, ties = np.unique(abs_diff, return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24.0 - float(np.sum(ties**3 - ties)) / 48.0
    if var <= 0.0:
        return 1.0
    z = (w - mean + 0.5) / math.sqrt(var)
    return float(min(1.0, 2.0 * norm.cdf(z)))


def wilcoxon_signed_rank(
    a,
    b,
    alternative: str = "two-sided",
    method: Optional[WilcoxonMethod] = None,
) -> WilcoxonResult:
    """
    Paired two-sided Wilcoxon signed-rank test on d = a - b.

    Zero differences are dropped and tied |d| get average ranks. The
    p-value is exact when at most EXACT_WILCOXON_MAX_N pairs remain,
    otherwise it uses the tie-corrected normal approximation with
    continuity correction; `method` forces either one.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise InvalidArgumentError(f"paired samples must have equal lengths, got {a.size} and {b.size}")
    if alternative != "two-sided":
        raise InvalidArgumentError(f"only the two-sided alternative is available, got {alternative!r}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidArgumentError("paired samples must be finite")

    d = a - b
    d = d[d != 0.0]
    n = int(d.size)
    if method is None:
        method = WilcoxonMethod.EXACT if n <= Constants.EXACT_WILCOXON_MAX_N else WilcoxonMethod.NORMAL

    if n == 0:
        return WilcoxonResult(statistic_W=0.0, p_value=1.0, n_effective=0, method=method)

    abs_diff = np.abs(d)
    ranks = rankdata(abs_diff)
    w_plus = float(np.sum(ranks[d > 0]))
    w_minus = float(np.sum(ranks[d < 0]))
    w = min(w_plus, w_minus)

    if method is WilcoxonMethod.EXACT:
        p = _exact_p(np.rint(2 * ranks).astype(int), w)
    else:
        p = _normal_p(abs_diff, w)

    return WilcoxonResult(
        statistic_W=w,
        p_value=float(p),
        n_effective=n,
        method=method,
        w_plus=w_plus,
        w_minus=w_minus,
    )
