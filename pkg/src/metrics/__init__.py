"""Latency ledger, reliability and per-path statistics."""

from .latency import (
    COMPONENTS,
    PACKET_COLUMNS,
    LatencyLedger,
    LatencyStats,
    PathKind,
    PduEntry,
    ReliabilityReport,
    clopper_pearson_lower,
    latency_stats,
    reliability,
)

__all__ = [
    "COMPONENTS",
    "PACKET_COLUMNS",
    "LatencyLedger",
    "LatencyStats",
    "PathKind",
    "PduEntry",
    "ReliabilityReport",
    "clopper_pearson_lower",
    "latency_stats",
    "reliability",
]
