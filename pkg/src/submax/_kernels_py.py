"""Pure-Python evaluation kernels.

One kernel per set-function family. A kernel owns the instance data and
exposes incremental "state" handles so a growing set's value and marginal
gains cost O(change) instead of O(|S|) per query. The compiled module
(submax._kernels) implements the same interface; submax.kernels picks one
at import time.

Float contract shared with the compiled kernels: gains and values are
accumulated left-to-right in ascending universe order, so both paths
produce bit-identical floats whenever the instance weights are exactly
representable (the generators only emit small integers and dyadic
rationals).
"""

from __future__ import annotations

import numpy as np

COMPILED = False


def _fold_mask(masks, elems):
    m = 0
    for e in elems:
        m |= masks[e]
    return m


class CoverageKernel:
    """Weighted coverage: f(S) = weight of the union of the elements' subsets.

    State is a single Python int bitmask over universe points (arbitrary
    width, C-speed bitwise ops).
    """

    family = "coverage"

    def __init__(self, sets, universe, weights=None):
        self.n = len(sets)
        self.universe = int(universe)
        self.masks = []
        for sub in sets:
            m = 0
            for j in sub:
                if not 0 <= j < self.universe:
                    raise ValueError(f"universe point {j} out of range")
                m |= 1 << j
            self.masks.append(m)
        if weights is None:
            self.weights = None
        else:
            self.weights = np.asarray(weights, dtype=np.float64)
            if self.weights.shape != (self.universe,):
                raise ValueError("coverage weights must have one entry per universe point")

    def _weight_of(self, bits):
        if self.weights is None:
            return float(bits.bit_count())
        total = 0.0
        w = self.weights
        while bits:
            lsb = bits & -bits
            total += w[lsb.bit_length() - 1]
            bits ^= lsb
        return float(total)

    def empty_state(self):
        return [0]

    def state_from(self, S):
        return [_fold_mask(self.masks, S)]

    def copy_state(self, state):
        return [state[0]]

    def state_value(self, state):
        return self._weight_of(state[0])

    def gain(self, state, e):
        return self._weight_of(self.masks[e] & ~state[0])

    def add(self, state, e):
        g = self._weight_of(self.masks[e] & ~state[0])
        state[0] |= self.masks[e]
        return g

    def gains(self, state, elems):
        covered = state[0]
        return np.array([self._weight_of(self.masks[e] & ~covered) for e in elems])

    def mean_gains(self, incl):
        incl = np.asarray(incl, dtype=bool)
        samples, n = incl.shape
        acc = np.zeros(n)
        for s in range(samples):
            covered = _fold_mask(self.masks, np.flatnonzero(incl[s]))
            for e in range(n):
                acc[e] += self._weight_of(self.masks[e] & ~covered)
        return acc / samples


class FacilityKernel:
    """Facility location: f(S) = sum_j max_{i in S} sim[i, j], f(empty) = 0.

    State is the per-column running maximum.
    """

    family = "facility"

    def __init__(self, sim):
        self.sim = np.asarray(sim, dtype=np.float64)
        if self.sim.ndim != 2:
            raise ValueError("similarity must be a 2-d matrix")
        if np.any(self.sim < 0):
            raise ValueError("similarity entries must be nonnegative")
        self.n, self.m = self.sim.shape

    def empty_state(self):
        return [np.zeros(self.m)]

    def state_from(self, S):
        st = self.empty_state()
        for e in S:
            np.maximum(st[0], self.sim[e], out=st[0])
        return st

    def copy_state(self, state):
        return [state[0].copy()]

    def state_value(self, state):
        return float(state[0].sum())

    def gain(self, state, e):
        return float(np.maximum(self.sim[e] - state[0], 0.0).sum())

    def add(self, state, e):
        g = float(np.maximum(self.sim[e] - state[0], 0.0).sum())
        np.maximum(state[0], self.sim[e], out=state[0])
        return g

    def gains(self, state, elems):
        rows = self.sim[np.asarray(elems, dtype=np.intp)]
        return np.maximum(rows - state[0][None, :], 0.0).sum(axis=1)

    def mean_gains(self, incl):
        incl = np.asarray(incl, dtype=bool)
        samples, n = incl.shape
        acc = np.zeros(n)
        all_e = np.arange(n)
        for s in range(samples):
            picked = np.flatnonzero(incl[s])
            colmax = self.sim[picked].max(axis=0) if picked.size else np.zeros(self.m)
            acc += np.maximum(self.sim[all_e] - colmax[None, :], 0.0).sum(axis=1)
        return acc / samples


class ModularKernel:
    """Modular: f(S) = sum of per-element weights. State is the running sum."""

    family = "modular"

    def __init__(self, weights):
        self.weights = np.asarray(weights, dtype=np.float64)
        if self.weights.ndim != 1:
            raise ValueError("modular weights must be a vector")
        if np.any(self.weights < 0):
            raise ValueError("modular weights must be nonnegative")
        self.n = self.weights.shape[0]

    def empty_state(self):
        return [0.0]

    def state_from(self, S):
        st = [0.0]
        for e in S:
            st[0] += self.weights[e]
        return st

    def copy_state(self, state):
        return [state[0]]

    def state_value(self, state):
        return float(state[0])

    def gain(self, state, e):
        return float(self.weights[e])

    def add(self, state, e):
        state[0] += self.weights[e]
        return float(self.weights[e])

    def gains(self, state, elems):
        return self.weights[np.asarray(elems, dtype=np.intp)].astype(np.float64)

    def mean_gains(self, incl):
        incl = np.asarray(incl, dtype=bool)
        return self.weights.astype(np.float64).copy()


class MixKernel:
    """Coverage part plus gamma * modular part (the curvature-mix family).

    f(S) = coverage(S) + gamma * sum_{e in S} mod_weights[e]; gamma tunes the
    total curvature between the coverage part's and 0.
    """

    family = "curvature-mix"

    def __init__(self, sets, universe, mod_weights, gamma):
        self.cov = CoverageKernel(sets, universe, None)
        self.mod = np.asarray(mod_weights, dtype=np.float64)
        if self.mod.shape != (self.cov.n,):
            raise ValueError("modular part must have one weight per element")
        if np.any(self.mod < 0):
            raise ValueError("modular weights must be nonnegative")
        self.gamma = float(gamma)
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        self.n = self.cov.n
        self.universe = self.cov.universe

    def empty_state(self):
        return [0, 0.0]

    def state_from(self, S):
        st = [0, 0.0]
        for e in S:
            st[0] |= self.cov.masks[e]
            st[1] += self.mod[e]
        return st

    def copy_state(self, state):
        return [state[0], state[1]]

    def state_value(self, state):
        return self.cov._weight_of(state[0]) + self.gamma * state[1]

    def gain(self, state, e):
        return self.cov._weight_of(self.cov.masks[e] & ~state[0]) + self.gamma * self.mod[e]

    def add(self, state, e):
        g = self.gain(state, e)
        state[0] |= self.cov.masks[e]
        state[1] += self.mod[e]
        return g

    def gains(self, state, elems):
        covered = state[0]
        return np.array(
            [
                self.cov._weight_of(self.cov.masks[e] & ~covered) + self.gamma * self.mod[e]
                for e in elems
            ]
        )

    def mean_gains(self, incl):
        # mean over the coverage part only, then the (state-independent)
        # modular term; keeps the float op order identical to the compiled path
        return self.cov.mean_gains(incl) + self.gamma * self.mod
