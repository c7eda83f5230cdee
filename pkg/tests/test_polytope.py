"""Exact base-polytope LP and lossless swap rounding.

The reference optimizer enumerates every base and every single-exchange
adjacent pair, which is exactly the vertex/edge set the LP optimum can land
on, so agreement here is a full correctness check on small ground sets.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from submax import (PartitionMatroid, UniformMatroid, lp_solve,
                    swap_rounding)
from submax.generators import random_matroid


def all_bases(n, indep):
    rank = 0
    for size in range(n, -1, -1):
        if any(indep(list(c)) for c in combinations(range(n), size)):
            rank = size
            break
    return [c for c in combinations(range(n), rank) if indep(list(c))]


def enumerate_opt(p, w, theta, n, indep):
    """LP optimum via bases (vertices) and adjacent-pair mixes (edges)."""
    P = [Fraction(float(v)) for v in p]
    W = [Fraction(float(v)) for v in w]
    TH = Fraction(float(theta))
    bases = all_bases(n, indep)
    best = None
    for b in bases:
        if sum(W[e] for e in b) >= TH:
            val = sum(P[e] for e in b)
            best = val if best is None else max(best, val)
    for b1, b2 in combinations(bases, 2):
        if len(set(b1) - set(b2)) != 1:
            continue
        w1, w2 = sum(W[e] for e in b1), sum(W[e] for e in b2)
        if w1 > w2:
            b1, b2, w1, w2 = b2, b1, w2, w1
        if not (w1 < TH <= w2):
            continue
        t = (TH - w1) / (w2 - w1)
        val = (1 - t) * sum(P[e] for e in b1) + t * sum(P[e] for e in b2)
        best = val if best is None else max(best, val)
    return best


def dyadic(rng, size, denom=16, high=32):
    return (rng.integers(0, high + 1, size=size) / denom).tolist()


class TestLpSolve:
    def test_slack_constraint_is_integral(self):
        sol = lp_solve([3.0, 2.0, 1.0], [1.0, 1.0, 1.0], 1.0, 3,
                       UniformMatroid(3, 2).is_independent)
        assert sol.bases == [((0, 1), Fraction(1))]
        assert sol.objective == 5 and sol.lam == 0

    def test_binding_constraint_mixes_one_adjacent_pair(self):
        # Hand-checked: the optimum mixes {0, 1} and {1, 2} equally, giving
        # x = (1/2, 1, 1/2) with coverage exactly 4.5 and objective 4.5.
        sol = lp_solve([4.0, 2.0, 1.0], [1.0, 3.0, 2.0], 4.5, 3,
                       UniformMatroid(3, 2).is_independent)
        assert sol.objective == Fraction(9, 2)
        assert sol.coverage == Fraction(9, 2)
        assert sol.lam == 3
        assert sol.fractional_support() == [0, 2]
        assert np.allclose(sol.x(), [0.5, 1.0, 0.5])

    def test_infeasible_returns_none(self):
        assert lp_solve([1.0, 1.0], [1.0, 1.0], 3.5, 2,
                        UniformMatroid(2, 2).is_independent) is None

    def test_matches_enumeration_on_random_instances(self):
        hits = 0
        for seed in range(120):
            rng = np.random.default_rng((971, seed))
            n = int(rng.integers(3, 8))
            kind = ("uniform", "partition", "graphic")[seed % 3]
            matroid = random_matroid(n, kind, seed)
            indep = matroid.is_independent
            p = dyadic(rng, n)
            w = dyadic(rng, n)
            cap = sum(sorted(w, reverse=True)[:matroid.rank()])
            theta = float(rng.integers(0, 17)) / 16.0 * cap
            sol = lp_solve(p, w, theta, n, indep)
            expected = enumerate_opt(p, w, theta, n, indep)
            if expected is None:
                assert sol is None
                continue
            hits += 1
            assert sol.objective == expected
            assert sol.coverage >= Fraction(float(theta))
            assert len(sol.fractional_support()) <= 2
            for base, _ in sol.bases:
                assert indep(list(base))
        assert hits > 60  # the sweep must actually exercise feasible cases

    def test_mix_coefficients_sum_to_one(self):
        sol = lp_solve([4.0, 2.0, 1.0], [1.0, 3.0, 2.0], 4.5, 3,
                       UniformMatroid(3, 2).is_independent)
        assert sum(c for _, c in sol.bases) == 1

    def test_zero_theta_never_mixes(self):
        sol = lp_solve([1.0, 2.0], [1.0, 1.0], 0.0, 2,
                       UniformMatroid(2, 1).is_independent)
        assert sol.bases == [((1,), Fraction(1))]


class TestSwapRounding:
    def frozen_solution(self):
        return lp_solve([4.0, 2.0, 1.0], [1.0, 3.0, 2.0], 4.5, 3,
                        UniformMatroid(3, 2).is_independent)

    def test_preserves_marginals(self):
        sol = self.frozen_solution()
        indep = UniformMatroid(3, 2).is_independent
        rng = np.random.default_rng(7)
        rounds = 4000
        counts = np.zeros(3)
        for _ in range(rounds):
            for e in swap_rounding(sol.bases, indep, rng):
                counts[e] += 1
        freq = counts / rounds
        se = np.sqrt(np.maximum(sol.x() * (1 - sol.x()), 1e-12) / rounds)
        assert np.all(np.abs(freq - sol.x()) <= 3 * se + 1e-12)

    def test_output_is_always_a_base(self):
        matroid = PartitionMatroid(5, [[0, 1, 2], [3, 4]], [1, 1])
        bases = [((0, 3), Fraction(1, 2)), ((2, 4), Fraction(1, 2))]
        rng = np.random.default_rng(0)
        for _ in range(50):
            out = swap_rounding(bases, matroid.is_independent, rng)
            assert len(out) == 2
            assert matroid.is_independent(out)

    def test_single_base_passes_through(self):
        rng = np.random.default_rng(0)
        out = swap_rounding([((1, 4), Fraction(1))], lambda s: True, rng)
        assert out == [1, 4]

    def test_zero_coefficients_dropped(self):
        rng = np.random.default_rng(0)
        out = swap_rounding([((0, 1), Fraction(1)), ((2, 3), Fraction(0))],
                            lambda s: True, rng)
        assert out == [0, 1]

    def test_deterministic_under_seed(self):
        sol = self.frozen_solution()
        indep = UniformMatroid(3, 2).is_independent
        runs = []
        for _ in range(2):
            rng = np.random.default_rng(42)
            runs.append([swap_rounding(sol.bases, indep, rng) for _ in range(20)])
        assert runs[0] == runs[1]

    def test_unequal_sizes_rejected(self):
        with pytest.raises(ValueError):
            swap_rounding([((0,), Fraction(1, 2)), ((1, 2), Fraction(1, 2))],
                          lambda s: True, np.random.default_rng(0))

    def test_empty_input(self):
        assert swap_rounding([], lambda s: True, np.random.default_rng(0)) == []
