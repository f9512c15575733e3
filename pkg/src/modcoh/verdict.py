"""Truncation boxes and pass/fail certificates shared by the checkers."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

PASS = "pass"
FAIL = "fail"
WITNESSED = "strict-inclusion-witnessed"
STATUSES = (PASS, FAIL, WITNESSED)


class DefectError(RuntimeError):
    """Two independent computations that must agree did not."""


@dataclass(frozen=True)
class Box:
    """Product of closed integer intervals, one per exponent coordinate."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ivs = tuple((int(lo), int(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def cube(cls, dim: int, lo: int, hi: int) -> "Box":
        return cls(((lo, hi),) * dim)

    @classmethod
    def symmetric(cls, dim: int, radius: int) -> "Box":
        return cls.cube(dim, -radius, radius)

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(lo, hi + 1) for lo, hi in self.intervals))

    def __len__(self) -> int:
        n = 1
        for lo, hi in self.intervals:
            n *= hi - lo + 1
        return n

    def __contains__(self, m) -> bool:
        return len(m) == self.dim and all(lo <= x <= hi for x, (lo, hi) in zip(m, self.intervals))

    def extend(self, more: Iterable[tuple[int, int]]) -> "Box":
        return Box(self.intervals + tuple(more))

    def to_list(self) -> list[list[int]]:
        return [[lo, hi] for lo, hi in self.intervals]

    def __str__(self):
        return " x ".join(f"[{lo},{hi}]" for lo, hi in self.intervals) or "point"


@dataclass
class TheoremVerdict:
    theorem: str
    parameters: dict
    status: str
    box: Box | None = None
    witness: str | None = None
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status != PASS and self.witness is None:
            raise ValueError(f"{self.status} verdict for {self.theorem} needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "theorem": self.theorem,
            "parameters": _jsonable(self.parameters),
            "box": self.box.to_list() if self.box is not None else None,
            "status": self.status,
            "witness": self.witness,
            "details": _jsonable(self.details),
        }
        if timing:
            out["seconds"] = round(self.seconds, 6)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2)

    def summary(self) -> str:
        line = f"{self.theorem:<12} {self.status}"
        if self.witness is not None:
            line += f"  witness: {self.witness}"
        return line


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Box):
        return obj.to_list()
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)
