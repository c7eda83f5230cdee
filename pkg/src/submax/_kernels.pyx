# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels.

Mirrors submax._kernels_py class by class; see that module for the float
contract (ascending-order left-to-right accumulation) that keeps the two
paths bit-identical on exactly-representable weights.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline double _masked_weight(const cnp.uint64_t* row, const cnp.uint64_t* state,
                                  const double* weights, Py_ssize_t words,
                                  bint weighted) nogil:
    """Weight of (row & ~state), scanning bits in ascending universe order."""
    cdef double total = 0.0
    cdef Py_ssize_t w
    cdef unsigned long long bits
    cdef int b
    for w in range(words):
        bits = row[w] & ~state[w]
        if not weighted:
            total += __builtin_popcountll(bits)
        else:
            while bits:
                b = __builtin_ctzll(bits)
                total += weights[64 * w + b]
                bits &= bits - 1
    return total


cdef class CoverageKernel:
    family = "coverage"

    cdef public Py_ssize_t n, universe
    cdef Py_ssize_t words
    cdef cnp.uint64_t[:, ::1] masks
    cdef object weights_arr
    cdef double[::1] weights
    cdef bint weighted

    def __init__(self, sets, universe, weights=None):
        self.n = len(sets)
        self.universe = int(universe)
        self.words = (self.universe + 63) // 64 if self.universe else 1
        arr = np.zeros((self.n, self.words), dtype=np.uint64)
        cdef Py_ssize_t e
        for e, sub in enumerate(sets):
            for j in sub:
                if not 0 <= j < self.universe:
                    raise ValueError(f"universe point {j} out of range")
                arr[e, j // 64] |= np.uint64(1) << np.uint64(j % 64)
        self.masks = arr
        if weights is None:
            self.weighted = False
            self.weights_arr = None
            self.weights = np.zeros(1)
        else:
            w = np.ascontiguousarray(weights, dtype=np.float64)
            if w.shape != (self.universe,):
                raise ValueError("coverage weights must have one entry per universe point")
            self.weighted = True
            self.weights_arr = w
            self.weights = w

    def empty_state(self):
        return np.zeros(self.words, dtype=np.uint64)

    def state_from(self, S):
        cdef cnp.uint64_t[::1] st = np.zeros(self.words, dtype=np.uint64)
        cdef Py_ssize_t w
        for e in S:
            for w in range(self.words):
                st[w] |= self.masks[e, w]
        return np.asarray(st)

    def copy_state(self, state):
        return state.copy()

    def state_value(self, state):
        cdef cnp.uint64_t[::1] st = state
        cdef cnp.uint64_t[::1] zero = np.zeros(self.words, dtype=np.uint64)
        return _masked_weight(&st[0], &zero[0], &self.weights[0], self.words, self.weighted)

    def gain(self, state, e):
        cdef cnp.uint64_t[::1] st = state
        cdef Py_ssize_t ee = e
        return _masked_weight(&self.masks[ee, 0], &st[0], &self.weights[0],
                              self.words, self.weighted)

    def add(self, state, e):
        cdef cnp.uint64_t[::1] st = state
        cdef Py_ssize_t ee = e
        cdef double g = _masked_weight(&self.masks[ee, 0], &st[0], &self.weights[0],
                                       self.words, self.weighted)
        cdef Py_ssize_t w
        for w in range(self.words):
            st[w] |= self.masks[ee, w]
        return g

    def gains(self, state, elems):
        cdef cnp.uint64_t[::1] st = state
        cdef cnp.intp_t[::1] idx = np.ascontiguousarray(elems, dtype=np.intp)
        out = np.empty(idx.shape[0])
        cdef double[::1] o = out
        cdef Py_ssize_t i
        for i in range(idx.shape[0]):
            o[i] = _masked_weight(&self.masks[idx[i], 0], &st[0], &self.weights[0],
                                  self.words, self.weighted)
        return out

    def mean_gains(self, incl):
        cdef cnp.uint8_t[:, ::1] inc = np.ascontiguousarray(incl, dtype=np.uint8)
        cdef Py_ssize_t samples = inc.shape[0], n = inc.shape[1]
        if n != self.n:
            raise ValueError("inclusion matrix width must equal n")
        acc = np.zeros(n)
        cdef double[::1] a = acc
        cdef cnp.uint64_t[::1] st = np.empty(self.words, dtype=np.uint64)
        cdef Py_ssize_t s, e, w
        for s in range(samples):
            for w in range(self.words):
                st[w] = 0
            for e in range(n):
                if inc[s, e]:
                    for w in range(self.words):
                        st[w] |= self.masks[e, w]
            for e in range(n):
                a[e] += _masked_weight(&self.masks[e, 0], &st[0], &self.weights[0],
                                       self.words, self.weighted)
        return acc / samples


cdef class FacilityKernel:
    family = "facility"

    cdef public Py_ssize_t n, m
    cdef object sim_arr
    cdef double[:, ::1] sim

    def __init__(self, sim):
        s = np.ascontiguousarray(sim, dtype=np.float64)
        if s.ndim != 2:
            raise ValueError("similarity must be a 2-d matrix")
        if np.any(s < 0):
            raise ValueError("similarity entries must be nonnegative")
        self.sim_arr = s
        self.sim = s
        self.n = s.shape[0]
        self.m = s.shape[1]

    def empty_state(self):
        return np.zeros(self.m)

    def state_from(self, S):
        cdef double[::1] st = np.zeros(self.m)
        cdef Py_ssize_t j
        for e in S:
            for j in range(self.m):
                if self.sim[e, j] > st[j]:
                    st[j] = self.sim[e, j]
        return np.asarray(st)

    def copy_state(self, state):
        return state.copy()

    def state_value(self, state):
        cdef double[::1] st = state
        cdef double total = 0.0
        cdef Py_ssize_t j
        for j in range(self.m):
            total += st[j]
        return total

    cdef double _gain(self, double[::1] st, Py_ssize_t e) nogil:
        cdef double total = 0.0, d
        cdef Py_ssize_t j
        for j in range(self.m):
            d = self.sim[e, j] - st[j]
            if d > 0:
                total += d
        return total

    def gain(self, state, e):
        cdef double[::1] st = state
        return self._gain(st, e)

    def add(self, state, e):
        cdef double[::1] st = state
        cdef Py_ssize_t ee = e, j
        cdef double g = self._gain(st, ee)
        for j in range(self.m):
            if self.sim[ee, j] > st[j]:
                st[j] = self.sim[ee, j]
        return g

    def gains(self, state, elems):
        cdef double[::1] st = state
        cdef cnp.intp_t[::1] idx = np.ascontiguousarray(elems, dtype=np.intp)
        out = np.empty(idx.shape[0])
        cdef double[::1] o = out
        cdef Py_ssize_t i
        for i in range(idx.shape[0]):
            o[i] = self._gain(st, idx[i])
        return out

    def mean_gains(self, incl):
        cdef cnp.uint8_t[:, ::1] inc = np.ascontiguousarray(incl, dtype=np.uint8)
        cdef Py_ssize_t samples = inc.shape[0], n = inc.shape[1]
        if n != self.n:
            raise ValueError("inclusion matrix width must equal n")
        acc = np.zeros(n)
        cdef double[::1] a = acc
        cdef double[::1] st = np.empty(self.m)
        cdef Py_ssize_t s, e, j
        for s in range(samples):
            for j in range(self.m):
                st[j] = 0.0
            for e in range(n):
                if inc[s, e]:
                    for j in range(self.m):
                        if self.sim[e, j] > st[j]:
                            st[j] = self.sim[e, j]
            for e in range(n):
                a[e] += self._gain(st, e)
        return acc / samples


cdef class MixKernel:
    family = "curvature-mix"

    cdef public Py_ssize_t n, universe
    cdef public object cov
    cdef object mod_arr
    cdef double[::1] mod
    cdef public double gamma

    def __init__(self, sets, universe, mod_weights, gamma):
        self.cov = CoverageKernel(sets, universe, None)
        m = np.ascontiguousarray(mod_weights, dtype=np.float64)
        if m.shape != (len(sets),):
            raise ValueError("modular part must have one weight per element")
        if np.any(m < 0):
            raise ValueError("modular weights must be nonnegative")
        self.mod_arr = m
        self.mod = m
        self.gamma = float(gamma)
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        self.n = len(sets)
        self.universe = int(universe)

    def empty_state(self):
        return [self.cov.empty_state(), 0.0]

    def state_from(self, S):
        st = [self.cov.empty_state(), 0.0]
        for e in S:
            self.cov.add(st[0], e)
            st[1] += self.mod[e]
        return st

    def copy_state(self, state):
        return [state[0].copy(), state[1]]

    def state_value(self, state):
        return self.cov.state_value(state[0]) + self.gamma * state[1]

    def gain(self, state, e):
        return self.cov.gain(state[0], e) + self.gamma * self.mod[e]

    def add(self, state, e):
        cdef double g = self.cov.add(state[0], e) + self.gamma * self.mod[e]
        state[1] += self.mod[e]
        return g

    def gains(self, state, elems):
        idx = np.ascontiguousarray(elems, dtype=np.intp)
        out = self.cov.gains(state[0], idx)
        cdef double[::1] o = out
        cdef cnp.intp_t[::1] ii = idx
        cdef Py_ssize_t i
        for i in range(ii.shape[0]):
            o[i] = o[i] + self.gamma * self.mod[ii[i]]
        return out

    def mean_gains(self, incl):
        out = self.cov.mean_gains(incl)
        cdef double[::1] o = out
        cdef Py_ssize_t e
        for e in range(self.n):
            o[e] = o[e] + self.gamma * self.mod[e]
        return out
