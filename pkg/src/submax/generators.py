"""Deterministic random instances for benchmarks and certification.

All weights are dyadic rationals (small integers over a power of two), so
every sum a kernel computes is exact in binary floating point and therefore
independent of accumulation order. That is what makes rerun-for-rerun
byte-identical CSV output possible.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .constraints import (ConstraintSystem, GraphicMatroid, PartitionMatroid,
                          UniformMatroid)
from .instances import Instance
from .oracles import (SetFunction, coverage_function, facility_function,
                      mix_function, modular_function)

FAMILY_TAGS = {"coverage": 0, "facility": 1, "modular": 2, "curvature-mix": 3}


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng((int(seed),) + tuple(int(x) for x in key))


def _coverage_parts(n: int, m: int, rng):
    hi = max(2, m // 6)
    sets = [sorted(rng.choice(m, size=int(rng.integers(1, hi + 1)),
                              replace=False).tolist()) for _ in range(n)]
    weights = (rng.integers(1, 65, size=m) / 64.0).tolist()
    return sets, weights


def coverage_instance(n: int, seed: int, m: Optional[int] = None) -> SetFunction:
    m = 2 * n if m is None else m
    sets, weights = _coverage_parts(n, m, _rng(seed, FAMILY_TAGS["coverage"]))
    return coverage_function(sets, m, weights)


def facility_instance(n: int, seed: int, m: Optional[int] = None) -> SetFunction:
    m = 2 * n if m is None else m
    rng = _rng(seed, FAMILY_TAGS["facility"])
    sim = rng.integers(0, 129, size=(n, m)) / 128.0
    sim *= rng.random((n, m)) < 0.5
    return facility_function(sim)


def modular_instance(n: int, seed: int) -> SetFunction:
    rng = _rng(seed, FAMILY_TAGS["modular"])
    return modular_function((rng.integers(1, 257, size=n) / 256.0).tolist())


def mix_instance(n: int, seed: int, target_kappa: float,
                 m: Optional[int] = None) -> SetFunction:
    """Coverage plus gamma * modular, with gamma bisected to hit the target
    total curvature. Target 0 short-circuits to a purely modular mix."""
    m = 2 * n if m is None else m
    rng = _rng(seed, FAMILY_TAGS["curvature-mix"])
    mod = (rng.integers(16, 257, size=n) / 256.0).tolist()
    if target_kappa <= 0.0:
        return mix_function([[] for _ in range(n)], m, mod, 1.0)
    sets, _ = _coverage_parts(n, m, rng)

    # The mix kernel's coverage part is unweighted, so the curvature formula
    # below counts points: cov = |covered|, solo = |covered by e alone|.
    cov = np.zeros(n)
    solo = np.zeros(n)
    owners = np.zeros(m, dtype=np.intp)
    for sub in sets:
        for j in sub:
            owners[j] += 1
    for e, sub in enumerate(sets):
        cov[e] = float(len(sub))
        solo[e] = float(sum(1 for j in sub if owners[j] == 1))
    mvec = np.asarray(mod)

    def kappa_of(gamma: float) -> float:
        ratios = (solo + gamma * mvec) / (cov + gamma * mvec)
        return min(1.0, max(0.0, 1.0 - float(ratios.min())))

    lo, hi = 0.0, 1.0
    while kappa_of(hi) > target_kappa and hi < 2.0 ** 40:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if kappa_of(mid) > target_kappa:
            lo = mid
        else:
            hi = mid
    return mix_function(sets, m, mod, hi)


def make_function(family: str, n: int, seed: int,
                  target_kappa: float = 0.5) -> SetFunction:
    if family == "coverage":
        return coverage_instance(n, seed)
    if family == "facility":
        return facility_instance(n, seed)
    if family == "modular":
        return modular_instance(n, seed)
    if family == "curvature-mix":
        return mix_instance(n, seed, target_kappa)
    raise ValueError(f"unknown family {family!r}")


def random_matroid(n: int, kind: str, seed: int, rank: Optional[int] = None):
    rng = _rng(seed, 17)
    if kind == "uniform":
        return UniformMatroid(n, rank if rank is not None else max(1, n // 3))
    if kind == "partition":
        perm = rng.permutation(n)
        parts_count = max(2, n // 4)
        parts = [perm[i::parts_count].tolist() for i in range(parts_count)]
        caps = rng.integers(1, 3, size=parts_count).tolist()
        return PartitionMatroid(n, parts, caps)
    if kind == "graphic":
        v = max(3, n // 2 + 1)
        edges = [[int(rng.integers(0, v)), 0] for _ in range(n)]
        for uv in edges:
            w = int(rng.integers(0, v - 1))
            uv[1] = w if w < uv[0] else w + 1
        return GraphicMatroid(v, edges)
    raise ValueError(f"unknown matroid kind {kind!r}")


def random_costs(n: int, d: int, seed: int) -> list:
    rng = _rng(seed, 23)
    return (rng.integers(8, 41, size=(d, n)) / 64.0).tolist()


def make_instance(family: str, constraint: str, n: int, *, k: Optional[int] = None,
                  d: int = 1, p: int = 2, matroid_kind: str = "uniform",
                  seed: int = 0, target_kappa: float = 0.5) -> Instance:
    fn = make_function(family, n, seed, target_kappa)
    if constraint == "cardinality":
        k = max(1, n // 3) if k is None else k
        block = ConstraintSystem("cardinality", k=k)
        tag = f"k{k}"
    elif constraint == "knapsack":
        block = ConstraintSystem.from_json(
            {"kind": "knapsack", "costs": random_costs(n, d, seed)}, n)
        tag = f"d{d}"
    elif constraint == "matroid":
        block = ConstraintSystem(
            "matroid", matroids=[random_matroid(n, matroid_kind, seed, k)])
        tag = matroid_kind
    elif constraint == "psystem":
        kinds = ["partition", "uniform", "graphic"]
        mats = [random_matroid(n, kinds[i % 3], seed + 101 * i,
                               rank=max(1, n // 3)) for i in range(p)]
        costs = random_costs(n, d, seed) if d > 0 else None
        block = ConstraintSystem.from_json(
            {"kind": "psystem", "matroids": [mt.to_json() for mt in mats],
             "costs": costs}, n)
        tag = f"p{p}d{d}"
    else:
        raise ValueError(f"unknown constraint kind {constraint!r}")
    inst_id = f"{family}-{constraint}-{tag}-n{n}-s{seed}"
    return Instance(inst_id, fn, block)


def suite_cardinality(count: int, n: int = 12, k: int = 6, seed0: int = 0):
    """Mixed coverage/facility cardinality instances, exact-checkable size."""
    fams = ["coverage", "facility"]
    return [make_instance(fams[i % 2], "cardinality", n, k=k, seed=seed0 + i)
            for i in range(count)]


def suite_psystem_knapsack(count: int, n: int = 12, p: int = 2, d: int = 1,
                           seed0: int = 0):
    fams = ["coverage", "facility"]
    return [make_instance(fams[i % 2], "psystem", n, p=p, d=d, seed=seed0 + i)
            for i in range(count)]


def suite_knapsack(count: int, n: int = 12, seed0: int = 0):
    fams = ["coverage", "facility"]
    return [make_instance(fams[i % 2], "knapsack", n, d=1 + i % 2, seed=seed0 + i)
            for i in range(count)]


def suite_curvature_matroid(count: int, n: int = 26, seed0: int = 0,
                            target_kappa: float = 0.5):
    kinds = ["uniform", "partition"]
    return [make_instance("curvature-mix", "matroid", n, k=max(2, n // 5),
                          matroid_kind=kinds[i % 2], seed=seed0 + i,
                          target_kappa=target_kappa)
            for i in range(count)]


def suite_modular_matroid(count: int, n: int = 20, seed0: int = 0):
    return [make_instance("modular", "matroid", n, k=max(2, n // 4),
                          matroid_kind="uniform", seed=seed0 + i)
            for i in range(count)]
