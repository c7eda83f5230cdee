"""Exact linear optimization over a matroid base polytope with one linear
coverage constraint, plus lossless randomized rounding.

The LP is  max p.x  s.t.  w.x >= theta,  x in the base polytope. Its dual
over the single multiplier lam reduces to parametric matroid greedy on the
combined weight p + lam w, so the whole thing runs on exact rationals: find
the smallest lam whose greedy base covers theta, then walk between the
min-coverage and max-coverage optimal bases by single exchanges until one
step straddles theta, and mix that one pair. The result has at most two
fractional coordinates and is optimal by complementary slackness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

IndepFn = Callable[[list], bool]


@dataclass
class FractionalSolution:
    """Convex combination of at most two bases, exact coefficients."""

    bases: List[Tuple[tuple, Fraction]]
    objective: Fraction
    coverage: Fraction
    lam: Fraction
    n: int

    def x(self) -> np.ndarray:
        out = np.zeros(self.n)
        for base, coeff in self.bases:
            c = float(coeff)
            for e in base:
                out[e] += c
        return out

    def fractional_support(self) -> list:
        mass = {}
        for base, coeff in self.bases:
            for e in base:
                mass[e] = mass.get(e, Fraction(0)) + coeff
        return sorted(e for e, c in mass.items() if 0 < c < 1)


def _greedy_base(n: int, indep: IndepFn, sort_key) -> list:
    base = []
    for e in sorted(range(n), key=sort_key):
        if indep(base + [e]):
            base.append(e)
    return base


def lp_solve(p: Sequence[float], w: Sequence[float], theta: float, n: int,
             indep: IndepFn) -> Optional[FractionalSolution]:
    """Solve max p.x, w.x >= theta over the base polytope; None if infeasible.

    p and w must be nonnegative. All comparisons are exact (Fractions built
    from the binary float inputs), so ties resolve deterministically.
    """
    P = [Fraction(float(v)) for v in p]
    W = [Fraction(float(v)) for v in w]
    TH = Fraction(float(theta))

    def wsum(base):
        return sum((W[e] for e in base), Fraction(0))

    def psum(base):
        return sum((P[e] for e in base), Fraction(0))

    def integral(base, lam):
        base = tuple(sorted(base))
        return FractionalSolution([(base, Fraction(1))], psum(base), wsum(base), lam, n)

    max_w_base = _greedy_base(n, indep, lambda e: (-W[e], -P[e], e))
    if wsum(max_w_base) < TH:
        return None

    b_minus = _greedy_base(n, indep, lambda e: (-P[e], W[e], e))
    if wsum(b_minus) >= TH:
        # The coverage constraint is slack at the unconstrained optimum.
        return integral(b_minus, Fraction(0))

    def plus_base(lam):
        return _greedy_base(n, indep, lambda e: (-(P[e] + lam * W[e]), -W[e], e))

    def minus_base(lam):
        return _greedy_base(n, indep, lambda e: (-(P[e] + lam * W[e]), W[e], e))

    lam_star = Fraction(0)
    if wsum(plus_base(lam_star)) < TH:
        # Parametric search over the lams where the greedy order changes.
        crossings = set()
        for i in range(n):
            for j in range(n):
                if W[j] > W[i] and P[i] > P[j]:
                    crossings.add((P[i] - P[j]) / (W[j] - W[i]))
        grid = sorted(crossings)
        lo, hi = 0, len(grid) - 1
        if not grid or wsum(plus_base(grid[hi])) < TH:
            raise AssertionError("coverage-feasible lam must exist on the grid")
        while lo < hi:
            mid = (lo + hi) // 2
            if wsum(plus_base(grid[mid])) >= TH:
                hi = mid
            else:
                lo = mid + 1
        lam_star = grid[lo]

    b_plus = plus_base(lam_star)
    b_minus = minus_base(lam_star)

    def combined(e):
        return P[e] + lam_star * W[e]

    # Exchange walk between two optimal bases; every intermediate set is an
    # optimal base because each swap trades equal combined weight.
    seq = [sorted(b_minus)]
    cur = set(b_minus)
    target = set(b_plus)
    while cur != target:
        a = min(cur - target)
        rest = sorted(cur - {a})
        for b in sorted(target - cur):
            if combined(b) == combined(a) and indep(rest + [b]):
                cur = set(rest) | {b}
                seq.append(sorted(cur))
                break
        else:
            raise AssertionError("equal-weight exchange must exist between optimal bases")

    coverages = [wsum(b) for b in seq]
    if coverages[0] >= TH:
        if coverages[0] > TH:
            raise AssertionError("minus base cannot overshoot a binding constraint")
        return integral(seq[0], lam_star)
    step = next(i for i in range(1, len(seq)) if coverages[i] >= TH)
    lo_cov, hi_cov = coverages[step - 1], coverages[step]
    t = (TH - lo_cov) / (hi_cov - lo_cov)
    if t == 1:
        return integral(seq[step], lam_star)
    lo_base, hi_base = tuple(seq[step - 1]), tuple(seq[step])
    objective = (1 - t) * psum(lo_base) + t * psum(hi_base)
    return FractionalSolution(
        [(lo_base, 1 - t), (hi_base, t)], objective, TH, lam_star, n)


def swap_rounding(bases: Iterable[Tuple[Iterable[int], Fraction]], indep: IndepFn,
                  rng) -> list:
    """Round a convex combination of bases to one base, marginals preserved.

    Pairs of summands are merged by symmetric exchanges: while the two bases
    differ, swap one differing element toward one side with probability
    proportional to that side's weight. Each coordinate's expected value
    never moves, and the merged set is a base throughout.
    """
    items = [(set(b), Fraction(c)) for b, c in bases if c > 0]
    if not items:
        return []
    sizes = {len(b) for b, _ in items}
    if len(sizes) != 1:
        raise ValueError("swap rounding needs bases of equal size")

    b1, c1 = items[0]
    for b2, c2 in items[1:]:
        while b1 != b2:
            e1 = min(b1 - b2)
            rest1 = sorted(b1 - {e1})
            for e2 in sorted(b2 - b1):
                if indep(rest1 + [e2]) and indep(sorted(b2 - {e2}) + [e1]):
                    break
            else:
                raise AssertionError("symmetric exchange must exist between bases")
            if rng.random() < float(c1 / (c1 + c2)):
                b2 = (b2 - {e2}) | {e1}
            else:
                b1 = (b1 - {e1}) | {e2}
        c1 = c1 + c2
    return sorted(b1)
