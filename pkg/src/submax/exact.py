"""Exhaustive optimum for small instances, used to certify ratios in tests
and benchmarks. Evaluations here bypass query counting by design."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

from .constraints import ConstraintSystem
from .oracles import SetFunction

MAX_EXACT_N = 24


@dataclass
class ExactReport:
    opt: float
    opt_set: tuple
    checked: int


def _mask_of(S) -> int:
    m = 0
    for e in S:
        m |= 1 << e
    return m


def brute_force_opt(fn: SetFunction, constraint: ConstraintSystem) -> ExactReport:
    """Exact optimum by enumeration; ties go to the lexicographically least
    bitmask so the certified set is unique and stable."""
    n = fn.n
    if n > MAX_EXACT_N:
        raise ValueError(f"exact enumeration is capped at n={MAX_EXACT_N}")

    knap = constraint.knapsack
    matroids = constraint.matroids

    def feasible(S: tuple) -> bool:
        if constraint.kind == "cardinality":
            return len(S) <= constraint.k
        if knap is not None and not knap.fits(S):
            return False
        return all(m.is_independent(S) for m in matroids)

    if constraint.kind == "cardinality":
        subsets = (S for size in range(min(constraint.k, n) + 1)
                   for S in combinations(range(n), size))
    else:
        subsets = (tuple(e for e in range(n) if mask >> e & 1)
                   for mask in range(1 << n))

    best_val, best_mask, best_set = 0.0, 0, ()
    checked = 0
    for S in subsets:
        if not feasible(S):
            continue
        checked += 1
        v = fn.value(S)
        m = _mask_of(S)
        if v > best_val or (v == best_val and m < best_mask):
            best_val, best_mask, best_set = v, m, S
    return ExactReport(best_val, best_set, checked)


def ratio(value: float, opt: float, tol: float = 1e-9) -> float:
    """value / opt with the degenerate zero optimum pinned to 1.0."""
    if value > opt + tol:
        raise ValueError(f"value {value} exceeds certified optimum {opt}")
    if opt <= tol:
        return 1.0
    return value / opt
