"""Uniform result records for algorithm runs and their CSV projection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

CSV_COLUMNS = (
    "instance_id", "alg", "eps", "n", "k_or_rank", "value", "opt", "ratio",
    "value_queries", "independence_queries", "wall_ms", "seed",
)


def fmt(x) -> str:
    """Nine-significant-digit float formatting; blanks for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return "{:.9g}".format(float(x))


@dataclass
class RunReport:
    instance_id: str
    alg: str
    eps: Optional[float]
    n: int
    k_or_rank: int
    value: float
    selected: tuple
    value_queries: int
    independence_queries: int = 0
    opt: Optional[float] = None
    ratio: Optional[float] = None
    wall_ms: Optional[float] = None
    seed: Optional[int] = None
    extras: dict = field(default_factory=dict)

    def csv_row(self, timing: bool) -> list:
        return [
            self.instance_id,
            self.alg,
            fmt(self.eps),
            str(self.n),
            str(self.k_or_rank),
            fmt(self.value),
            fmt(self.opt),
            fmt(self.ratio),
            str(self.value_queries),
            str(self.independence_queries),
            fmt(self.wall_ms) if timing else "",
            fmt(self.seed),
        ]


@dataclass
class ThresholdTrace:
    """Per-round interval history of a decreasing-threshold run."""

    rounds: list = field(default_factory=list)

    def record(self, i: int, alpha: float, lo: float, hi: float):
        self.rounds.append({"i": i, "alpha": alpha, "lo": lo, "hi": hi})
