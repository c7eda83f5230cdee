"""Instance files: a set function plus a constraint, JSON round-trippable."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .constraints import ConstraintSystem
from .oracles import InstanceFormatError, SetFunction, function_from_json


@dataclass
class Instance:
    id: str
    fn: SetFunction
    constraint: ConstraintSystem
    opt: Optional[float] = None
    opt_set: Optional[tuple] = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.fn.n

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "n": self.n,
            "function": self.fn.to_json(),
            "constraint": self.constraint.to_json(),
        }
        if self.opt is not None:
            out["opt"] = self.opt
        if self.opt_set is not None:
            out["opt_set"] = list(self.opt_set)
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Instance":
        if not isinstance(d, dict):
            raise InstanceFormatError("instance must be a JSON object")
        for key in ("id", "n", "function", "constraint"):
            if key not in d:
                raise InstanceFormatError(f"instance is missing {key!r}")
        fn = function_from_json(d["function"])
        if fn.n != int(d["n"]):
            raise InstanceFormatError(
                f"declared n={d['n']} but the function has {fn.n} elements")
        constraint = ConstraintSystem.from_json(d["constraint"], fn.n)
        opt = d.get("opt")
        opt_set = d.get("opt_set")
        return cls(
            id=str(d["id"]),
            fn=fn,
            constraint=constraint,
            opt=None if opt is None else float(opt),
            opt_set=None if opt_set is None else tuple(int(e) for e in opt_set),
            meta=d.get("meta", {}),
        )


def dumps(inst: Instance) -> str:
    return json.dumps(inst.to_json(), indent=2, sort_keys=True) + "\n"


def load_path(path) -> Instance:
    with open(path, "r") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from exc
    return Instance.from_json(payload)


def save_path(inst: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(inst))
