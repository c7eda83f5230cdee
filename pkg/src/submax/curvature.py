"""Total curvature, curvature-restricted variants, and the modular split.

Curvature measures how far a function is from modular: 0 means marginals
never shrink (modular), 1 means some element can lose all of its value.
Low curvature is exploitable: peel off a modular part h and maximize the
submodular remainder g = f - h through a correlation-robust pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .oracles import ModularShiftedOracle, ValueOracle, canon


@dataclass
class DecomposeResult:
    g: ModularShiftedOracle
    offsets: np.ndarray
    kappa: float
    kappa_g_bound: float
    eps: float


def _curvature_and_singletons(oracle: ValueOracle):
    """Shared 2n+1-query pass: singleton values, then every leave-one-out."""
    n = oracle.n
    singles = oracle.cursor().gains(np.arange(n))
    full = list(range(n))
    f_full = oracle.evaluate(full)
    best = math.inf
    for e in range(n):
        drop = oracle.evaluate(full[:e] + full[e + 1:])
        if singles[e] > 0.0:
            best = min(best, (f_full - drop) / float(singles[e]))
    if not math.isfinite(best):
        return 0.0, singles
    return min(1.0, max(0.0, 1.0 - best)), singles


def total_curvature(oracle: ValueOracle) -> float:
    """kappa(f) over the whole ground set; costs exactly 2n + 1 queries."""
    kappa, _ = _curvature_and_singletons(oracle)
    return kappa


def restricted_curvature(oracle: ValueOracle, T) -> float:
    """Curvature measured only on the elements of T."""
    T = canon(T, oracle.n)
    if not T:
        raise ValueError("restricted curvature needs a nonempty set")
    singles = oracle.cursor().gains(np.array(T, dtype=np.intp))
    f_T = oracle.evaluate(T)
    best = math.inf
    for i, e in enumerate(T):
        drop = oracle.evaluate(T[:i] + T[i + 1:])
        if singles[i] > 0.0:
            best = min(best, (f_T - drop) / float(singles[i]))
    if not math.isfinite(best):
        return 0.0
    return min(1.0, max(0.0, 1.0 - best))


def improved_ratio_certificate(kappa: float) -> float:
    """Greedy's curvature-dependent factor (1 - e^-kappa) / kappa; 1 at 0."""
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("kappa must lie in [0, 1]")
    if kappa == 0.0:
        return 1.0
    return (1.0 - math.exp(-kappa)) / kappa


def decompose_g_h(oracle: ValueOracle, eps: float) -> Optional[DecomposeResult]:
    """Split f into h + g with h modular and g monotone submodular.

    h keeps a (1 - kappa - eps) share of every singleton, which every later
    marginal of f still covers, so g = f - h stays monotone. The remainder's
    curvature is at most kappa / (kappa + eps). Returns None when kappa
    exceeds 1 - eps and the split would be vacuous.
    """
    if eps <= 0.0 or eps >= 1.0:
        raise ValueError("eps must lie in (0, 1)")
    kappa, singles = _curvature_and_singletons(oracle)
    if kappa > 1.0 - eps:
        return None
    offsets = (1.0 - kappa - eps) * np.asarray(singles, dtype=np.float64)
    g = ModularShiftedOracle(oracle, offsets)
    bound = kappa / (kappa + eps) if kappa + eps > 0.0 else 0.0
    return DecomposeResult(g, offsets, kappa, bound, eps)
