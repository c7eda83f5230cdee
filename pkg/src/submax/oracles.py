"""Value oracles: set-function families, query counting, and self checks.

Query accounting convention (used consistently by every algorithm here):
one evaluate call is one query; a marginal against a cached base value is
one query, two otherwise. Diagnostics (self checks, final report
re-evaluation) use the uncounted peek path so pinned query counts stay
exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels


class InstanceFormatError(ValueError):
    """Malformed instance payload (bad schema, bad types, bad ranges)."""


FAMILIES = ("coverage", "facility", "modular", "curvature-mix")


def canon(S: Iterable[int], n: int) -> tuple[int, ...]:
    """Canonical set representation: sorted tuple of distinct valid indices."""
    out = sorted(set(int(e) for e in S))
    if out and (out[0] < 0 or out[-1] >= n):
        raise ValueError(f"element index out of range for n={n}: {out}")
    return tuple(out)


class SetFunction:
    """A monotone normalized set function: kernel plus JSON-able metadata."""

    def __init__(self, kernel, meta: dict):
        self.kernel = kernel
        self.meta = meta
        self.n = kernel.n

    @property
    def family(self) -> str:
        return self.kernel.family

    def value(self, S: Iterable[int]) -> float:
        st = self.kernel.state_from(canon(S, self.n))
        return self.kernel.state_value(st)

    def singleton_values(self) -> np.ndarray:
        st = self.kernel.empty_state()
        return np.asarray(self.kernel.gains(st, np.arange(self.n)))

    def to_json(self) -> dict:
        return dict(self.meta)

    def __repr__(self):
        return f"SetFunction({self.family}, n={self.n})"


def coverage_function(sets, universe, weights=None) -> SetFunction:
    meta = {
        "type": "coverage",
        "universe": int(universe),
        "sets": [sorted(int(j) for j in sub) for sub in sets],
        "weights": None if weights is None else [float(w) for w in weights],
    }
    return SetFunction(kernels.CoverageKernel(meta["sets"], universe, weights), meta)


def facility_function(similarity) -> SetFunction:
    sim = np.asarray(similarity, dtype=np.float64)
    meta = {"type": "facility", "similarity": sim.tolist()}
    return SetFunction(kernels.FacilityKernel(sim), meta)


def modular_function(weights) -> SetFunction:
    meta = {"type": "modular", "weights": [float(w) for w in weights]}
    return SetFunction(kernels.ModularKernel(weights), meta)


def mix_function(sets, universe, mod_weights, gamma) -> SetFunction:
    meta = {
        "type": "curvature-mix",
        "universe": int(universe),
        "sets": [sorted(int(j) for j in sub) for sub in sets],
        "modular_weights": [float(w) for w in mod_weights],
        "gamma": float(gamma),
    }
    return SetFunction(kernels.MixKernel(meta["sets"], universe, mod_weights, gamma), meta)


def function_from_json(d: dict) -> SetFunction:
    if not isinstance(d, dict) or "type" not in d:
        raise InstanceFormatError("function block must be an object with a 'type' tag")
    kind = d["type"]
    try:
        if kind == "coverage":
            return coverage_function(d["sets"], d["universe"], d.get("weights"))
        if kind == "facility":
            return facility_function(d["similarity"])
        if kind == "modular":
            return modular_function(d["weights"])
        if kind == "curvature-mix":
            return mix_function(d["sets"], d["universe"], d["modular_weights"], d["gamma"])
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad {kind} function block: {exc}") from exc
    raise InstanceFormatError(f"unknown function type {kind!r} (expected one of {FAMILIES})")


class EvalCursor:
    """Incremental view of f on a growing set; gains are counted queries."""

    def __init__(self, oracle: "ValueOracle", S: Iterable[int] = ()):
        self.oracle = oracle
        self._kernel = oracle.fn.kernel
        members = canon(S, oracle.fn.n)
        self._state = self._kernel.state_from(members)
        self.members = list(members)
        self.value = self._kernel.state_value(self._state) if members else 0.0

    def __len__(self):
        return len(self.members)

    def gain(self, e: int) -> float:
        self.oracle.query_count += 1
        return self._kernel.gain(self._state, e)

    def gains(self, elems) -> np.ndarray:
        elems = np.asarray(elems, dtype=np.intp)
        self.oracle.query_count += len(elems)
        return np.asarray(self._kernel.gains(self._state, elems))

    def add(self, e: int) -> float:
        """Extend the set; query-free (the value update reuses known gains)."""
        g = self._kernel.add(self._state, e)
        self.members.append(int(e))
        self.value += g
        return g


class ValueOracle:
    """Query-counting wrapper around a set function."""

    def __init__(self, fn: SetFunction):
        self.fn = fn
        self.query_count = 0

    @property
    def n(self) -> int:
        return self.fn.n

    def reset_count(self):
        self.query_count = 0

    def evaluate(self, S: Iterable[int]) -> float:
        self.query_count += 1
        return self.fn.value(S)

    def peek(self, S: Iterable[int]) -> float:
        """Uncounted evaluation (verification/reporting only)."""
        return self.fn.value(S)

    def marginal(self, S: Iterable[int], e: int, cached_fS: Optional[float] = None) -> float:
        """f(S + e) - f(S); one query with a cached base value, two without."""
        S = canon(S, self.n)
        if e in S:
            raise ValueError(f"element {e} already in S")
        if cached_fS is None:
            cached_fS = self.evaluate(S)
        self.query_count += 1
        st = self.fn.kernel.state_from(S)
        return self.fn.kernel.gain(st, e)

    def cursor(self, S: Iterable[int] = ()) -> EvalCursor:
        return EvalCursor(self, S)

    def sampled_mean_gains(self, incl: np.ndarray) -> np.ndarray:
        """Mean marginal gain of every element over the sampled sets in incl.

        Counts one query per sampled base set plus one per (sample, element)
        marginal: samples * (n + 1).
        """
        incl = np.asarray(incl)
        self.query_count += incl.shape[0] * (self.n + 1)
        return np.asarray(self.fn.kernel.mean_gains(incl))


class ShiftedCursor:
    """Cursor for f minus a modular offset; counts queries on the base oracle."""

    def __init__(self, base_cursor: EvalCursor, offsets: np.ndarray):
        self._cur = base_cursor
        self._off = offsets
        self.value = base_cursor.value - float(offsets[base_cursor.members].sum())

    def __len__(self):
        return len(self._cur)

    @property
    def members(self):
        return self._cur.members

    def gain(self, e: int) -> float:
        return self._cur.gain(e) - float(self._off[e])

    def gains(self, elems) -> np.ndarray:
        elems = np.asarray(elems, dtype=np.intp)
        return self._cur.gains(elems) - self._off[elems]

    def add(self, e: int) -> float:
        g = self._cur.add(e) - float(self._off[e])
        self.value += g
        return g


class ModularShiftedOracle:
    """g = f - sum of per-element offsets; shares the base oracle's counter."""

    def __init__(self, base: ValueOracle, offsets):
        self.base = base
        self.offsets = np.asarray(offsets, dtype=np.float64)
        if self.offsets.shape != (base.n,):
            raise ValueError("offsets must have one entry per element")

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def query_count(self) -> int:
        return self.base.query_count

    def evaluate(self, S: Iterable[int]) -> float:
        S = canon(S, self.n)
        return self.base.evaluate(S) - float(self.offsets[list(S)].sum())

    def peek(self, S: Iterable[int]) -> float:
        S = canon(S, self.n)
        return self.base.peek(S) - float(self.offsets[list(S)].sum())

    def cursor(self, S: Iterable[int] = ()) -> ShiftedCursor:
        return ShiftedCursor(self.base.cursor(S), self.offsets)

    def sampled_mean_gains(self, incl: np.ndarray) -> np.ndarray:
        return self.base.sampled_mean_gains(incl) - self.offsets


@dataclass
class SelfCheckReport:
    ok: bool
    checks: int
    violation: Optional[dict] = None
    messages: list = field(default_factory=list)


def _peek(oracle_or_fn, S):
    if hasattr(oracle_or_fn, "peek"):
        return oracle_or_fn.peek(S)
    return oracle_or_fn.value(S)


def self_check_submodular(oracle_or_fn, trials: int = 200, seed: int = 0,
                          tol: float = 1e-9) -> SelfCheckReport:
    """Randomized monotone-submodularity check; never raises, reports instead.

    Uses uncounted evaluations. A violation report carries the witnessing
    pair so the caller can reproduce it.
    """
    n = oracle_or_fn.n
    rng = np.random.default_rng(seed)
    checks = 0

    if abs(_peek(oracle_or_fn, ())) > tol:
        return SelfCheckReport(False, 1, {"kind": "normalization", "f_empty": _peek(oracle_or_fn, ())})
    checks += 1

    for _ in range(trials):
        a = np.flatnonzero(rng.random(n) < 0.5)
        b = np.flatnonzero(rng.random(n) < 0.5)
        A, B = tuple(a.tolist()), tuple(b.tolist())
        U = tuple(sorted(set(A) | set(B)))
        I = tuple(sorted(set(A) & set(B)))
        fa, fb = _peek(oracle_or_fn, A), _peek(oracle_or_fn, B)
        fu, fi = _peek(oracle_or_fn, U), _peek(oracle_or_fn, I)
        checks += 1
        if fa + fb + tol < fu + fi:
            return SelfCheckReport(False, checks, {
                "kind": "submodularity", "A": A, "B": B,
                "lhs": fa + fb, "rhs": fu + fi,
            })
        checks += 1
        if fa > fu + tol:
            return SelfCheckReport(False, checks, {
                "kind": "monotonicity", "A": A, "B": U, "f_A": fa, "f_B": fu,
            })
    return SelfCheckReport(True, checks)
