"""Backtracking threshold algorithm for a p-system intersected with d
knapsacks.

Elements are split by cost: an element is big if it exceeds half the budget
in any dimension, small otherwise. Threshold sweeps only ever add small
elements; big ones compete through the best-singleton candidate. When a
small element passes the value and independence gates but overflows a
budget, the sweep stops and a backtracked alternative is built from the
violator plus the heaviest chosen element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constraints import IndependenceOracle, KnapsackSystem
from .oracles import ValueOracle


@dataclass
class BtResult:
    selected: tuple
    value: float
    best_singleton: tuple
    best_singleton_value: float


def classify_big_small(knapsack: KnapsackSystem):
    """Partition elements into big / small / infeasible-alone, ascending."""
    big, small, infeasible = [], [], []
    for e in range(knapsack.n):
        if not knapsack.feasible_singleton(e):
            infeasible.append(e)
        elif knapsack.is_big(e):
            big.append(e)
        else:
            small.append(e)
    return big, small, infeasible


def backtrack_rebuild(indep: Optional[IndependenceOracle], knapsack: KnapsackSystem,
                      order: list, e_viol: int) -> list:
    """Alternative set built after a budget violation.

    Start from the violator plus the heaviest already-chosen element (total
    cost across dimensions, ties to the smaller index) -- both are small, so
    the pair fits, and both sat inside an independent set, so the pair is
    independent. Then re-add the remaining chosen elements in their original
    insertion order whenever feasibility allows.
    """
    heaviest = max(order, key=lambda e: (knapsack.cost_sum(e), -e))
    rebuilt = [e_viol, heaviest]
    totals = knapsack.totals(rebuilt)
    for e in order:
        if e == heaviest:
            continue
        if not knapsack.can_add(totals, e):
            continue
        if indep is not None and not indep.is_independent(rebuilt + [e]):
            continue
        rebuilt.append(e)
        knapsack.add(totals, e)
    return rebuilt


def bt_run(oracle: ValueOracle, indep: Optional[IndependenceOracle],
           knapsack: KnapsackSystem, eps: float) -> BtResult:
    """Threshold grid over density; per threshold one sweep with backtracking.

    Output is the best of every sweep's chosen set, every backtracked set,
    and the best feasible singleton.
    """
    if eps <= 0.0 or eps >= 1.0:
        raise ValueError("eps must lie in (0, 1)")
    n = oracle.n
    big, small, _ = classify_big_small(knapsack)
    feasible = sorted(big + small)
    if not feasible:
        return BtResult((), 0.0, (), 0.0)

    vals = oracle.cursor().gains(feasible)
    top = int(np.argmax(vals))
    lam = float(vals[top])
    if lam <= 0.0:
        return BtResult((), 0.0, (), 0.0)
    estar, estar_val = (feasible[top],), lam

    if indep is None:
        p = 0
    else:
        p = getattr(indep.system, "p", 1)
    d = knapsack.d
    best_sel, best_val = estar, estar_val

    theta = eps * lam / (d + p + 1)
    theta_top = n * lam
    while theta <= theta_top * (1.0 + 1e-12):
        cur = oracle.cursor()
        totals = np.zeros(d)
        violated = False
        for e in small:
            g = cur.gain(e)
            if g < theta * knapsack.cost_sum(e):
                continue
            if indep is not None and not indep.is_independent(cur.members + [e]):
                continue
            if knapsack.can_add(totals, e):
                cur.add(e)
                knapsack.add(totals, e)
            else:
                if cur.value > best_val:
                    best_sel, best_val = tuple(sorted(cur.members)), cur.value
                rebuilt = backtrack_rebuild(indep, knapsack, cur.members, e)
                r_val = oracle.evaluate(rebuilt)
                if r_val > best_val:
                    best_sel, best_val = tuple(sorted(rebuilt)), r_val
                violated = True
                break
        if not violated and cur.value > best_val:
            best_sel, best_val = tuple(sorted(cur.members)), cur.value
        theta *= 1.0 + eps
    return BtResult(best_sel, best_val, estar, estar_val)
