"""On/off uplink sources.

Each source alternates an ON window and an OFF window. During ON, packets are
emitted at the fixed inter-arrival packet_bits / data_rate (fluid model of a
constant bit rate); the only randomness is the per-source phase. An optional
switch replaces the fixed spacing with exponential gaps of the same mean.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..engine import RngStream, US_PER_S


@dataclass(frozen=True)
class OnOffProfile:
    on_time_us: int = 10_000
    off_time_us: int = 90_000
    data_rate_bps: int = 1_000_000
    packet_bits: int = 1002
    exp_interarrival: bool = False
    synchronized_phases: bool = False

    def __post_init__(self):
        for name in ("on_time_us", "off_time_us", "data_rate_bps", "packet_bits"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if self.interarrival_us < 1:
            raise ValueError("data_rate_bps too high: inter-arrival rounds below 1 us")

    @property
    def cycle_us(self) -> int:
        return self.on_time_us + self.off_time_us

    @property
    def interarrival_us(self) -> int:
        return (self.packet_bits * US_PER_S + self.data_rate_bps // 2) // self.data_rate_bps

    @property
    def packets_per_on_window(self) -> int:
        return -(-self.on_time_us // self.interarrival_us)

    @property
    def mean_rate_bps(self) -> float:
        return self.data_rate_bps * self.on_time_us / self.cycle_us


def generate_arrivals(
    profile: OnOffProfile,
    horizon_us: int,
    phase_us: int,
    rng: Optional[RngStream] = None,
) -> List[int]:
    """Arrival instants in [0, horizon) for a source whose first cycle starts at -phase."""
    if horizon_us <= 0:
        raise ValueError(f"horizon must be positive, got {horizon_us}")
    if not 0 <= phase_us < profile.cycle_us:
        raise ValueError(f"phase must lie in [0, {profile.cycle_us}), got {phase_us}")

    window_starts = np.arange(-phase_us, horizon_us, profile.cycle_us, dtype=np.int64)

    if profile.exp_interarrival:
        if rng is None:
            raise ValueError("exponential inter-arrivals need a random stream")
        arrivals: List[int] = []
        for start in window_starts:
            offset = 0
            while offset < profile.on_time_us:
                t = int(start) + offset
                if 0 <= t < horizon_us:
                    arrivals.append(t)
                offset += max(1, int(round(rng.exponential(profile.interarrival_us))))
        return arrivals

    offsets = np.arange(0, profile.on_time_us, profile.interarrival_us, dtype=np.int64)
    grid = (window_starts[:, None] + offsets[None, :]).ravel()
    grid = grid[(grid >= 0) & (grid < horizon_us)]
    return [int(t) for t in grid]


def assign_phases(n_sources: int, profile: OnOffProfile, rng: RngStream) -> List[int]:
    """Per-source phase, uniform over one on/off cycle (all zero when synchronized)."""
    if n_sources < 1:
        raise ValueError(f"n_sources must be >= 1, got {n_sources}")
    if profile.synchronized_phases:
        return [0] * n_sources
    return [int(p) for p in rng.integers(0, profile.cycle_us, size=n_sources)]
