"""Seeded random streams and duration samplers."""

from dataclasses import dataclass
import hashlib
import math
from typing import Any, Dict, Mapping

import numpy as np

TRAFFIC = "traffic"
UL_GRANT = "ul-grant"
GNB_PROC = "gnb-proc"
CORE_DELAY = "core-delay"
LOSS = "loss"
PLACEMENT = "placement"

RngStream = np.random.Generator


def derive_seed(seed: int, stream_id: str) -> int:
    """Sub-seed for one labelled stream; adding new labels leaves old ones untouched."""
    digest = hashlib.sha256(f"{seed}:{stream_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class RandomStreams:
    """Lazily created, mutually independent generators keyed by label."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._streams: Dict[str, RngStream] = {}

    def get(self, stream_id: str) -> RngStream:
        if stream_id not in self._streams:
            self._streams[stream_id] = np.random.default_rng(derive_seed(self.seed, stream_id))
        return self._streams[stream_id]

    def __getitem__(self, stream_id: str) -> RngStream:
        return self.get(stream_id)


@dataclass(frozen=True)
class Sampler:
    """Integer-microsecond duration sampler: fixed value or inclusive uniform range."""
    low: int
    high: int

    @classmethod
    def fixed(cls, value: int) -> "Sampler":
        return cls(int(value), int(value))

    @classmethod
    def uniform(cls, low: int, high: int) -> "Sampler":
        return cls(int(low), int(high))

    @classmethod
    def from_spec(cls, spec: Any) -> "Sampler":
        """Parse `{fixed: x}`, `{uniform: [lo, hi]}` or a bare number."""
        if isinstance(spec, Sampler):
            return spec
        if isinstance(spec, bool):
            raise ValueError(f"Not a sampler: {spec!r}")
        if isinstance(spec, (int, float)):
            return cls.fixed(_as_int(spec))
        if isinstance(spec, Mapping) and len(spec) == 1:
            if "fixed" in spec:
                return cls.fixed(_as_int(spec["fixed"]))
            if "uniform" in spec:
                bounds = spec["uniform"]
                if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
                    raise ValueError(f"uniform sampler needs [lo, hi], got {bounds!r}")
                return cls.uniform(_as_int(bounds[0]), _as_int(bounds[1]))
        raise ValueError(f"Sampler must be {{fixed: x}} or {{uniform: [lo, hi]}}, got {spec!r}")

    def to_spec(self) -> Dict[str, Any]:
        if self.is_fixed:
            return {"fixed": self.low}
        return {"uniform": [self.low, self.high]}

    @property
    def is_fixed(self) -> bool:
        return self.low == self.high

    @property
    def mean(self) -> float:
        return (self.low + self.high) / 2

    def sample(self, rng: RngStream) -> int:
        if self.is_fixed:
            return self.low
        return int(rng.integers(self.low, self.high, endpoint=True))

    def __str__(self) -> str:
        return f"fixed({self.low})" if self.is_fixed else f"uniform({self.low}, {self.high})"


def _as_int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Expected a number of microseconds, got {value!r}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"Durations must be finite, got {value!r}")
    if float(value) != int(value):
        raise ValueError(f"Durations are integer microseconds, got {value!r}")
    return int(value)
