"""Check report record shared by the verification harness and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CheckReport"]


def _plain(value):
    """Recursively convert numpy scalars/arrays so json can serialize."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class CheckReport:
    """Outcome of one verification check.

    ``statistic`` is compared against ``threshold`` (pass iff statistic <=
    threshold); ``params`` records the inputs, ``details`` any diagnostics.
    """

    name: str
    status: str
    statistic: float
    threshold: float
    reps: int
    seed: int
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @classmethod
    def from_statistic(cls, name, statistic, threshold, reps, seed, params, details=None):
        statistic = float(statistic)
        return cls(
            name=name,
            status="pass" if statistic <= threshold else "fail",
            statistic=statistic,
            threshold=float(threshold),
            reps=int(reps),
            seed=int(seed),
            params=_plain(params),
            details=_plain(details or {}),
        )

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "statistic": _plain(self.statistic),
            "threshold": _plain(self.threshold),
            "reps": int(self.reps),
            "seed": int(self.seed),
            "params": _plain(self.params),
            "details": _plain(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=True)
