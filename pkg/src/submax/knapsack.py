"""Single-pass decreasing-threshold algorithm for d knapsack constraints.

A cheap bootstrap pins the optimum within a factor 2(1 + d), which lets the
threshold grid start low enough to need only O(log(d/eps)/eps) levels while
keeping one persistent solution set across all of them. The first budget
violation already certifies enough value to stop immediately.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .backtracking import backtrack_rebuild, classify_big_small
from .constraints import KnapsackSystem
from .oracles import ValueOracle


@dataclass
class KnapResult:
    selected: tuple
    value: float
    bootstrap: float
    stopped_early: bool


def bootstrap_lambda(oracle: ValueOracle, knapsack: KnapsackSystem):
    """Lower bound for OPT: best feasible singleton vs. density greedy.

    The density greedy adds elements by marginal value per unit of total
    cost and stops the moment its argmax does not fit. Stale heap entries
    are safe upper bounds because marginals only shrink while costs stay
    fixed, so a fresh top of the heap is the true argmax.

    Returns (lam, best_singleton, singleton_value).
    """
    feasible = [e for e in range(knapsack.n) if knapsack.feasible_singleton(e)]
    if not feasible:
        return 0.0, (), 0.0

    cur = oracle.cursor()
    gains = cur.gains(feasible)
    top = int(np.argmax(gains))
    estar, estar_val = (feasible[top],), float(gains[top])
    if estar_val <= 0.0:
        return 0.0, (), 0.0

    def density(e, g):
        c = knapsack.cost_sum(e)
        if c > 0.0:
            return g / c
        return np.inf if g > 0.0 else 0.0

    heap = [(-density(e, float(g)), e, 0) for e, g in zip(feasible, gains)]
    heapq.heapify(heap)
    totals = np.zeros(knapsack.d)
    rnd = 0
    while heap:
        neg_d, e, rc = heapq.heappop(heap)
        if rc < rnd:
            heapq.heappush(heap, (-density(e, cur.gain(e)), e, rnd))
            continue
        if -neg_d <= 0.0:
            break
        if not knapsack.can_add(totals, e):
            break
        cur.add(e)
        knapsack.add(totals, e)
        rnd += 1
    lam = max(cur.value, estar_val)
    return lam, estar, estar_val


def knapsack_run(oracle: ValueOracle, knapsack: KnapsackSystem, eps: float) -> KnapResult:
    """Decreasing-threshold pass with a persistent set and early stopping."""
    if eps <= 0.0 or eps >= 1.0:
        raise ValueError("eps must lie in (0, 1)")
    _, small, _ = classify_big_small(knapsack)
    lam, estar, estar_val = bootstrap_lambda(oracle, knapsack)
    if lam <= 0.0:
        return KnapResult((), 0.0, 0.0, False)

    d = knapsack.d
    cur = oracle.cursor()
    totals = np.zeros(d)
    in_set = np.zeros(oracle.n, dtype=bool)
    tau = 2.0 * (1.0 + d) * lam / d
    floor = eps * lam / d
    while tau >= floor * (1.0 - 1e-12):
        for e in small:
            if in_set[e]:
                continue
            g = cur.gain(e)
            if g < tau * knapsack.cost_sum(e):
                continue
            if knapsack.can_add(totals, e):
                cur.add(e)
                knapsack.add(totals, e)
                in_set[e] = True
            else:
                # First violation: the chosen set plus the backtracked set
                # together already certify the guarantee.
                best_sel, best_val = tuple(sorted(cur.members)), cur.value
                rebuilt = backtrack_rebuild(None, knapsack, cur.members, e)
                r_val = oracle.evaluate(rebuilt)
                if r_val > best_val:
                    best_sel, best_val = tuple(sorted(rebuilt)), r_val
                if estar_val > best_val:
                    best_sel, best_val = estar, estar_val
                return KnapResult(best_sel, best_val, lam, True)
        tau *= 1.0 - eps
    if estar_val > cur.value:
        return KnapResult(estar, estar_val, lam, False)
    return KnapResult(tuple(sorted(cur.members)), cur.value, lam, False)
