from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any

from scipy.stats import norm

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator
    from os import PathLike

__all__ = [
    "BernoulliTally",
    "TrialRecord",
    "read_records",
    "wilson_interval",
    "write_records",
]


@dataclass(frozen=True)
class TrialRecord:
    """Statistics of one trial; the section is recoverable from (seed, trial)."""

    experiment: str
    trial: int
    N: int
    count: int | None = None
    fraction: float | None = None
    log_max: float | None = None
    signed_log: float | None = None
    abs_log: float | None = None
    hole: bool | None = None
    bound_ok: bool | None = None
    pl_error: float | None = None
    flagged: str | None = None
    wall_time: float | None = None

    @property
    def ok(self) -> bool:
        return self.flagged is None

    def to_dict(self) -> dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TrialRecord:
        return cls(**data)

    @classmethod
    def from_json(cls, line: str) -> TrialRecord:
        return cls.from_dict(json.loads(line))


def write_records(records: Iterable[TrialRecord], path: str | PathLike[str]) -> int:
    """Write records as JSON lines; returns the number written."""
    n = 0
    with open(path, "w") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
            n += 1
    return n


def read_records(path: str | PathLike[str]) -> Iterator[TrialRecord]:
    """Stream records back from a JSONL file."""
    with open(path) as fh:
        for line in fh:
            if line.strip():
                yield TrialRecord.from_json(line)


def wilson_interval(
    hits: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    if not 0 <= hits <= trials:
        raise ValueError(f"hits must lie in [0, {trials}], got {hits}")
    z = float(norm.ppf(0.5 + confidence / 2))
    p = hits / trials
    z2n = z * z / trials
    center = (p + z2n / 2) / (1 + z2n)
    half = z / (1 + z2n) * math.sqrt(p * (1 - p) / trials + z2n / (4 * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class BernoulliTally:
    """Streaming hit counter with O(1) memory."""

    trials: int = 0
    hits: int = 0

    def add(self, hit: bool) -> None:
        self.trials += 1
        self.hits += bool(hit)

    def update(self, hits: Iterable[bool]) -> BernoulliTally:
        for hit in hits:
            self.add(hit)
        return self

    def merge(self, other: BernoulliTally) -> BernoulliTally:
        return BernoulliTally(self.trials + other.trials, self.hits + other.hits)

    @property
    def estimate(self) -> float:
        return self.hits / self.trials if self.trials else math.nan

    def interval(self, confidence: float = 0.95) -> tuple[float, float]:
        return wilson_interval(self.hits, self.trials, confidence)

    def half_width(self, confidence: float = 0.95) -> float:
        lo, hi = self.interval(confidence)
        return 0.5 * (hi - lo)
