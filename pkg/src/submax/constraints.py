"""Feasibility structures: knapsacks, matroids, p-systems, counted oracles."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from .oracles import InstanceFormatError

KNAPSACK_TOL = 1e-9


class KnapsackSystem:
    """d budget dimensions, all normalized to capacity 1 per dimension.

    Feasibility checks are plain arithmetic on cached totals and are not
    counted as oracle queries.
    """

    def __init__(self, costs):
        c = np.asarray(costs, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] < 1:
            raise InstanceFormatError("knapsack costs must be a d x n matrix")
        if (c < 0).any():
            raise InstanceFormatError("knapsack costs must be nonnegative")
        self.costs = c
        self.d, self.n = c.shape

    def cost_sum(self, e: int) -> float:
        """Total cost of one element across dimensions (density denominator)."""
        return float(self.costs[:, e].sum())

    def totals(self, S: Iterable[int]) -> np.ndarray:
        S = list(S)
        if not S:
            return np.zeros(self.d)
        return self.costs[:, S].sum(axis=1)

    def fits(self, S: Iterable[int]) -> bool:
        return bool((self.totals(S) <= 1.0 + KNAPSACK_TOL).all())

    def can_add(self, totals: np.ndarray, e: int) -> bool:
        return bool((totals + self.costs[:, e] <= 1.0 + KNAPSACK_TOL).all())

    def add(self, totals: np.ndarray, e: int) -> None:
        totals += self.costs[:, e]

    def is_big(self, e: int) -> bool:
        """Big in any single dimension: cost above half that budget."""
        return bool((self.costs[:, e] > 0.5).any())

    def feasible_singleton(self, e: int) -> bool:
        return bool((self.costs[:, e] <= 1.0 + KNAPSACK_TOL).all())


class UniformMatroid:
    kind = "uniform"

    def __init__(self, n: int, k: int):
        if k < 0:
            raise InstanceFormatError("uniform matroid needs k >= 0")
        self.n = int(n)
        self.k = int(k)

    def is_independent(self, S: Iterable[int]) -> bool:
        return len(set(S)) <= self.k

    def rank(self) -> int:
        return min(self.k, self.n)

    def to_json(self) -> dict:
        return {"type": "uniform", "n": self.n, "k": self.k}


class PartitionMatroid:
    kind = "partition"

    def __init__(self, n: int, parts: Sequence[Sequence[int]], capacities: Sequence[int]):
        if len(parts) != len(capacities):
            raise InstanceFormatError("one capacity per part is required")
        self.n = int(n)
        self.part_of = np.full(n, -1, dtype=np.intp)
        for i, part in enumerate(parts):
            for e in part:
                if not 0 <= e < n or self.part_of[e] != -1:
                    raise InstanceFormatError("parts must partition 0..n-1")
                self.part_of[e] = i
        if (self.part_of == -1).any():
            raise InstanceFormatError("parts must cover every element")
        self.parts = [sorted(int(e) for e in part) for part in parts]
        self.capacities = [int(c) for c in capacities]
        if any(c < 0 for c in self.capacities):
            raise InstanceFormatError("capacities must be >= 0")

    def is_independent(self, S: Iterable[int]) -> bool:
        counts = np.zeros(len(self.capacities), dtype=np.intp)
        for e in set(S):
            counts[self.part_of[e]] += 1
        return bool((counts <= self.capacities).all())

    def rank(self) -> int:
        return sum(min(cap, len(part)) for cap, part in zip(self.capacities, self.parts))

    def to_json(self) -> dict:
        return {"type": "partition", "n": self.n, "parts": self.parts,
                "capacities": self.capacities}


class GraphicMatroid:
    """Ground set = edges of a multigraph; independent = forms a forest."""

    kind = "graphic"

    def __init__(self, n_vertices: int, edges: Sequence[Sequence[int]]):
        self.n_vertices = int(n_vertices)
        self.edges = []
        for uv in edges:
            u, v = int(uv[0]), int(uv[1])
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise InstanceFormatError("edge endpoint out of range")
            self.edges.append((u, v))
        self.n = len(self.edges)

    def is_independent(self, S: Iterable[int]) -> bool:
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in set(S):
            u, v = self.edges[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def rank(self) -> int:
        parent = list(range(self.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        size = 0
        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                size += 1
        return size

    def to_json(self) -> dict:
        return {"type": "graphic", "n_vertices": self.n_vertices,
                "edges": [list(uv) for uv in self.edges]}


class MatroidIntersection:
    """Intersection of matroids; a p-system with p = number of matroids."""

    def __init__(self, matroids):
        if not matroids:
            raise InstanceFormatError("a p-system needs at least one matroid")
        self.matroids = list(matroids)
        self.n = self.matroids[0].n
        if any(m.n != self.n for m in self.matroids):
            raise InstanceFormatError("all matroids must share one ground set")
        self.p = len(self.matroids)

    def is_independent(self, S: Iterable[int]) -> bool:
        S = list(S)
        return all(m.is_independent(S) for m in self.matroids)

    def rank(self) -> int:
        return min(m.rank() for m in self.matroids)

    def to_json(self) -> dict:
        return {"type": "intersection", "matroids": [m.to_json() for m in self.matroids]}


class IndependenceOracle:
    """Counts independence queries; one call is one query, however many
    matroids back the system."""

    def __init__(self, system):
        self.system = system
        self.query_count = 0

    @property
    def n(self) -> int:
        return self.system.n

    def reset_count(self):
        self.query_count = 0

    def is_independent(self, S: Iterable[int]) -> bool:
        self.query_count += 1
        return self.system.is_independent(S)

    def peek(self, S: Iterable[int]) -> bool:
        """Uncounted check (verification/reporting only)."""
        return self.system.is_independent(S)


def matroid_from_json(d: dict, n: int):
    if not isinstance(d, dict) or "type" not in d:
        raise InstanceFormatError("matroid block must be an object with a 'type' tag")
    kind = d["type"]
    try:
        if kind == "uniform":
            return UniformMatroid(n, d["k"])
        if kind == "partition":
            return PartitionMatroid(n, d["parts"], d["capacities"])
        if kind == "graphic":
            m = GraphicMatroid(d["n_vertices"], d["edges"])
            if m.n != n:
                raise InstanceFormatError("graphic matroid must have one edge per element")
            return m
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad {kind} matroid block: {exc}") from exc
    raise InstanceFormatError(f"unknown matroid type {kind!r}")


class ConstraintSystem:
    """Parsed constraint block of an instance.

    kind is one of cardinality / knapsack / matroid / psystem; a psystem
    optionally carries knapsack costs alongside its matroid list.
    """

    def __init__(self, kind: str, *, k: Optional[int] = None, knapsack=None,
                 matroids: Optional[list] = None):
        self.kind = kind
        self.k = k
        self.knapsack = knapsack
        self.matroids = matroids or []

    @property
    def p(self) -> int:
        return len(self.matroids)

    @property
    def d(self) -> int:
        return 0 if self.knapsack is None else self.knapsack.d

    def intersection(self) -> MatroidIntersection:
        return MatroidIntersection(self.matroids)

    def k_or_rank(self) -> int:
        if self.kind == "cardinality":
            return int(self.k)
        if self.matroids:
            return min(m.rank() for m in self.matroids)
        return 0

    @classmethod
    def from_json(cls, d: dict, n: int) -> "ConstraintSystem":
        if not isinstance(d, dict) or "kind" not in d:
            raise InstanceFormatError("constraint block must be an object with a 'kind' tag")
        kind = d["kind"]
        try:
            if kind == "cardinality":
                k = int(d["k"])
                if k < 0:
                    raise InstanceFormatError("cardinality constraint needs k >= 0")
                return cls("cardinality", k=k)
            if kind == "knapsack":
                ks = KnapsackSystem(d["costs"])
                if ks.n != n:
                    raise InstanceFormatError("knapsack costs must have one column per element")
                return cls("knapsack", knapsack=ks)
            if kind == "matroid":
                return cls("matroid", matroids=[matroid_from_json(d["matroid"], n)])
            if kind == "psystem":
                mats = [matroid_from_json(m, n) for m in d["matroids"]]
                ks = None
                if d.get("costs") is not None:
                    ks = KnapsackSystem(d["costs"])
                    if ks.n != n:
                        raise InstanceFormatError("knapsack costs must have one column per element")
                return cls("psystem", matroids=mats, knapsack=ks)
        except InstanceFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"bad {kind} constraint block: {exc}") from exc
        raise InstanceFormatError(f"unknown constraint kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "cardinality":
            return {"kind": "cardinality", "k": self.k}
        if self.kind == "knapsack":
            return {"kind": "knapsack", "costs": self.knapsack.costs.tolist()}
        if self.kind == "matroid":
            return {"kind": "matroid", "matroid": self.matroids[0].to_json()}
        out = {"kind": "psystem", "matroids": [m.to_json() for m in self.matroids]}
        if self.knapsack is not None:
            out["costs"] = self.knapsack.costs.tolist()
        return out
