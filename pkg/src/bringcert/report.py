"""Certificate outcome records and their JSON form."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from fractions import Fraction

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CertReport:
    name: str
    status: str
    precision_used: int = 0
    order_used: str = ""
    witness: dict = field(default_factory=dict)
    millis: int = 0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def ok(self) -> bool:
        """Pass or skipped: the statuses that do not fail a run."""
        return self.status in (PASS, SKIPPED)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["witness"] = jsonable(self.witness)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CertReport":
        return cls(**{k: d[k] for k in ("name", "status", "precision_used", "order_used", "witness", "millis")})


def jsonable(obj):
    """Convert exact values (Fractions, field elements, polynomials) to JSON-safe data."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    return str(obj)


def dumps(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


def loads(text: str) -> list:
    return [CertReport.from_dict(d) for d in json.loads(text)]


@contextmanager
def stopwatch():
    """Yield a one-element list that receives elapsed milliseconds on exit."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int((time.perf_counter() - start) * 1000)
