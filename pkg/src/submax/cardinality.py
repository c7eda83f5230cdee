"""Algorithms for maximization under a cardinality constraint.

All of them speak to a counted ValueOracle; query totals follow the
package-wide convention (see oracles module docstring).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .oracles import ValueOracle
from .report import ThresholdTrace


@dataclass
class AlgResult:
    selected: tuple
    value: float


@dataclass
class AdtResult:
    selected: tuple
    value: float
    lo: float
    hi: float
    trace: ThresholdTrace = field(default_factory=ThresholdTrace)


def greedy(oracle: ValueOracle, k: int) -> AlgResult:
    """Plain greedy: k rounds, each scoring every remaining element."""
    n = oracle.n
    cur = oracle.cursor()
    remaining = list(range(n))
    for _ in range(min(k, n)):
        gains = cur.gains(remaining)
        best = int(np.argmax(gains))
        if gains[best] <= 0.0:
            break
        cur.add(remaining.pop(best))
    return AlgResult(tuple(sorted(cur.members)), cur.value)


def lazy_greedy(oracle: ValueOracle, k: int) -> AlgResult:
    """Greedy with stale-gain reuse: identical output, far fewer queries.

    Submodularity makes cached gains upper bounds, so an entry that is
    freshest at the top of the heap is the true argmax. Ties break toward
    the smaller element index, matching greedy.
    """
    n = oracle.n
    cur = oracle.cursor()
    gains = cur.gains(np.arange(n))
    heap = [(-float(g), e, 0) for e, g in enumerate(gains)]
    heapq.heapify(heap)
    for rnd in range(min(k, n)):
        while heap:
            neg_g, e, rc = heapq.heappop(heap)
            if rc == rnd:
                break
            heapq.heappush(heap, (-cur.gain(e), e, rnd))
        else:
            break
        if -neg_g <= 0.0:
            break
        cur.add(e)
    return AlgResult(tuple(sorted(cur.members)), cur.value)


def threshold_greedy_bv(oracle: ValueOracle, k: int, eps: float) -> AlgResult:
    """Decreasing-threshold greedy sweeping from the top singleton value
    down to an (eps/n) fraction of it, shrinking by (1-eps) per pass."""
    n = oracle.n
    cur = oracle.cursor()
    d = float(np.max(cur.gains(np.arange(n)))) if n else 0.0
    if d <= 0.0 or k <= 0:
        return AlgResult((), 0.0)
    in_set = np.zeros(n, dtype=bool)
    theta = d
    floor = (eps / n) * d
    while theta >= floor and len(cur) < k:
        for e in range(n):
            if in_set[e]:
                continue
            if cur.gain(e) >= theta:
                cur.add(e)
                in_set[e] = True
                if len(cur) == k:
                    break
        theta *= 1.0 - eps
    return AlgResult(tuple(sorted(cur.members)), cur.value)


def _threshold_rounds(k: int, c: float) -> int:
    return math.ceil(math.log(math.log(k) / math.log(1.0 + c)))


def adt_estimate_opt(oracle: ValueOracle, k: int, c: float = 1.0,
                     trace: Optional[ThresholdTrace] = None):
    """Adaptive decreasing-threshold estimation of the optimum.

    Returns (lo, hi, witness) with lo <= OPT <= hi and hi == (1 + c) * lo
    on exit; witness is the best set seen while estimating (size <= k).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if c <= 0.0:
        raise ValueError("c must be positive")
    n = oracle.n
    first = oracle.cursor().gains(np.arange(n))
    top = int(np.argmax(first))
    lo = float(first[top])
    if lo <= 0.0:
        return 0.0, 0.0, ()
    witness = (top,)
    if k == 1:
        return lo, (1.0 + c) * lo, witness
    rounds = _threshold_rounds(k, c)
    if rounds <= 0:
        # k <= 1 + c already pins OPT inside [lo, (1 + c) lo].
        return lo, (1.0 + c) * lo, witness

    hi = k * lo
    for i in range(1, rounds + 1):
        alpha = c if i == rounds else math.exp(math.log(k) * math.exp(-i)) - 1.0
        best_val, best_set = lo, witness
        theta = lo
        while theta <= hi * (1.0 + 1e-12):
            cur = oracle.cursor()
            bar = theta / (2.0 * k)
            for e in range(n):
                if len(cur) == k:
                    break
                if cur.gain(e) >= bar:
                    cur.add(e)
            if cur.value > best_val:
                best_val, best_set = cur.value, tuple(sorted(cur.members))
            theta *= 1.0 + alpha
        lo, witness = best_val, best_set
        hi = (1.0 + alpha) * lo
        if trace is not None:
            trace.record(i, alpha, lo, hi)
    return lo, hi, witness


def adt(oracle: ValueOracle, k: int, eps: float = 0.2, c: float = 1.0) -> AdtResult:
    """Two-phase adaptive decreasing-threshold maximization.

    Phase one narrows OPT to a (1 + c) interval; phase two runs a single
    decreasing-threshold greedy whose grid spans only that interval.
    """
    trace = ThresholdTrace()
    lo, hi, witness = adt_estimate_opt(oracle, k, c, trace)
    if lo <= 0.0:
        return AdtResult((), 0.0, 0.0, 0.0, trace)

    n = oracle.n
    cur = oracle.cursor()
    in_set = np.zeros(n, dtype=bool)
    theta = hi / k
    floor = lo / (math.e * k)
    while theta >= floor and len(cur) < k:
        for e in range(n):
            if in_set[e]:
                continue
            if cur.gain(e) >= theta:
                cur.add(e)
                in_set[e] = True
                if len(cur) == k:
                    break
        theta *= 1.0 - eps
    # lo is f(witness) by construction, so this comparison is query-free.
    if witness and lo > cur.value:
        return AdtResult(tuple(witness), lo, lo, hi, trace)
    return AdtResult(tuple(sorted(cur.members)), cur.value, lo, hi, trace)
