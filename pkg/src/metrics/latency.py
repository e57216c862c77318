"""Per-packet latency ledger and the statistics built on it.

Every (PDU, receiver) pair carries the decomposition

    L = t_rqt + t_ul + t_gnb_proc + t_core + t_dl_schd + t_dl + t_repair_extra

with t_core = 0 on the local-breakout path. All values are integer
microseconds and the identity is checked exactly when the ledger closes.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from ..domain import Pdu, UeId
from ..errors import InvariantViolation

T_RQT = "t_rqt"
T_UL = "t_ul"
T_GNB_PROC = "t_gnb_proc"
T_CORE = "t_core"
T_DL_SCHD = "t_dl_schd"
T_DL = "t_dl"
T_REPAIR_EXTRA = "t_repair_extra"

COMPONENTS = (T_RQT, T_UL, T_GNB_PROC, T_CORE, T_DL_SCHD, T_DL, T_REPAIR_EXTRA)
# Components that default to zero when never recorded.
_OPTIONAL = (T_CORE, T_REPAIR_EXTRA)
# Counted from the end of gNB processing when reporting DL-only latency.
_DL_ONLY = (T_CORE, T_DL_SCHD, T_DL, T_REPAIR_EXTRA)

PACKET_COLUMNS = [
    "pdu_seq", "source", "receiver", "path",
    "t_rqt_us", "t_ul_us", "t_gnb_us", "t_core_us", "t_dlschd_us", "t_dl_us", "t_repair_us",
    "latency_us", "met_deadline", "lost",
]


class PathKind(Enum):
    CORE_ANCHORED = "core_anchored"
    LOCAL_BREAKOUT = "local_breakout"


@dataclass
class PduEntry:
    """Ledger rows of one PDU: shared components plus per-receiver exceptions."""
    pdu: Pdu
    receivers: Tuple[UeId, ...]
    path: Optional[PathKind] = None
    shared: Dict[str, int] = field(default_factory=dict)
    per_receiver: Dict[UeId, Dict[str, int]] = field(default_factory=dict)
    ptm_done_at: Optional[int] = None
    delivered_at: Dict[UeId, int] = field(default_factory=dict)
    pending: Set[UeId] = field(default_factory=set)
    lost: Set[UeId] = field(default_factory=set)

    @property
    def is_uniform(self) -> bool:
        """All receivers share one record (no repair, no loss, no overrides)."""
        return not self.per_receiver and not self.delivered_at and not self.lost and not self.pending

    def component(self, receiver: UeId, name: str) -> int:
        own = self.per_receiver.get(receiver)
        if own is not None and name in own:
            return own[name]
        if name in self.shared:
            return self.shared[name]
        if name in _OPTIONAL:
            return 0
        raise InvariantViolation(f"PDU {self.pdu.seq}: {name} never recorded for receiver {receiver}")

    def delivery_time(self, receiver: UeId) -> Optional[int]:
        if receiver in self.lost or receiver in self.pending:
            return None
        return self.delivered_at.get(receiver, self.ptm_done_at)

    def latency(self, receiver: UeId, dl_only: bool = False) -> Optional[int]:
        delivered = self.delivery_time(receiver)
        if delivered is None:
            return None
        if dl_only:
            return sum(self.component(receiver, c) for c in _DL_ONLY)
        return delivered - self.pdu.created_at


class LatencyLedger:
    """Collects delay components for every (PDU, receiver) pair of one run."""

    def __init__(self):
        self._entries: Dict[int, PduEntry] = {}
        self.closed = False

    def open(self, pdu: Pdu, receivers: Sequence[UeId]) -> PduEntry:
        if pdu.seq in self._entries:
            raise InvariantViolation(f"PDU {pdu.seq} opened twice in the ledger")
        entry = PduEntry(pdu=pdu, receivers=tuple(receivers))
        self._entries[pdu.seq] = entry
        return entry

    def entry(self, seq: int) -> PduEntry:
        return self._entries[seq]

    def set_path(self, seq: int, path: PathKind):
        entry = self._entries[seq]
        if entry.path is not None and entry.path is not path:
            raise InvariantViolation(f"PDU {seq} already routed {entry.path.value}")
        if path is PathKind.LOCAL_BREAKOUT and self._has_component(entry, T_CORE):
            raise InvariantViolation(f"PDU {seq} carries t_core but is routed local_breakout")
        entry.path = path

    def record_component(self, seq: int, receiver: Optional[UeId], component: str, value: int):
        """Store one component; receiver=None applies it to every receiver of the PDU."""
        if component not in COMPONENTS:
            raise InvariantViolation(f"Unknown latency component '{component}'")
        if value < 0:
            raise InvariantViolation(f"PDU {seq}: negative {component} ({value} us)")
        entry = self._entries[seq]
        if component == T_CORE and entry.path is PathKind.LOCAL_BREAKOUT:
            raise InvariantViolation(f"PDU {seq}: t_core recorded on a local-breakout packet")
        if receiver is None:
            if component in entry.shared or any(component in own for own in entry.per_receiver.values()):
                raise InvariantViolation(f"PDU {seq}: {component} recorded twice")
            entry.shared[component] = int(value)
            return
        if receiver not in entry.receivers:
            raise InvariantViolation(f"PDU {seq}: UE {receiver} is not a receiver")
        own = entry.per_receiver.setdefault(receiver, {})
        if component in own or component in entry.shared:
            raise InvariantViolation(f"PDU {seq}: {component} recorded twice for UE {receiver}")
        own[component] = int(value)

    def complete_ptm(self, seq: int, at: int, nak: Sequence[UeId] = ()):
        entry = self._entries[seq]
        if entry.ptm_done_at is not None:
            raise InvariantViolation(f"PDU {seq}: more than one PTM transmission")
        entry.ptm_done_at = at
        entry.pending.update(nak)

    def deliver(self, seq: int, receiver: UeId, at: int):
        entry = self._entries[seq]
        if receiver not in entry.pending:
            raise InvariantViolation(f"PDU {seq}: UE {receiver} delivered twice")
        entry.pending.discard(receiver)
        entry.delivered_at[receiver] = at

    def mark_lost(self, seq: int, receiver: UeId):
        entry = self._entries[seq]
        if receiver not in entry.pending:
            raise InvariantViolation(f"PDU {seq}: UE {receiver} is not awaiting repair")
        entry.pending.discard(receiver)
        entry.lost.add(receiver)

    @staticmethod
    def _has_component(entry: PduEntry, name: str) -> bool:
        return name in entry.shared or any(name in own for own in entry.per_receiver.values())

    def close(self):
        """Check completeness and the exact sum identity for every delivered pair."""
        for seq, entry in self._entries.items():
            if entry.path is None or entry.ptm_done_at is None:
                raise InvariantViolation(f"PDU {seq} never completed its PTM transmission")
            if entry.pending:
                raise InvariantViolation(f"PDU {seq}: receivers {sorted(entry.pending)} still awaiting repair")
            if entry.path is PathKind.LOCAL_BREAKOUT and self._has_component(entry, T_CORE):
                raise InvariantViolation(f"PDU {seq}: local-breakout packet accrued core delay")
            if entry.path is PathKind.CORE_ANCHORED and T_CORE not in entry.shared:
                raise InvariantViolation(f"PDU {seq}: core-anchored packet has no core segment")
            receivers = entry.receivers[:1] if entry.is_uniform else entry.receivers
            for r in receivers:
                delivered = entry.delivery_time(r)
                if delivered is None:
                    continue
                total = sum(entry.component(r, c) for c in COMPONENTS)
                if total != delivered - entry.pdu.created_at:
                    raise InvariantViolation(
                        f"PDU {seq}, UE {r}: components sum to {total} us but latency is "
                        f"{delivered - entry.pdu.created_at} us"
                    )
        self.closed = True

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[PduEntry]:
        return iter(self._entries[k] for k in sorted(self._entries))

    @property
    def n_pairs(self) -> int:
        return sum(len(e.receivers) for e in self._entries.values())

    @property
    def n_lost(self) -> int:
        return sum(len(e.lost) for e in self._entries.values())

    def latencies(self, dl_only: bool = False) -> np.ndarray:
        """Latency of every delivered pair, ordered by (pdu, receiver)."""
        values: List[int] = []
        counts: List[int] = []
        for entry in self:
            if entry.is_uniform:
                values.append(entry.latency(entry.receivers[0], dl_only))
                counts.append(len(entry.receivers))
                continue
            for r in entry.receivers:
                lat = entry.latency(r, dl_only)
                if lat is not None:
                    values.append(lat)
                    counts.append(1)
        return np.repeat(np.asarray(values, dtype=np.int64), np.asarray(counts, dtype=np.int64))

    def pair_latencies(self, dl_only: bool = False) -> Dict[Tuple[int, UeId], int]:
        out = {}
        for entry in self:
            for r in entry.receivers:
                lat = entry.latency(r, dl_only)
                if lat is not None:
                    out[(entry.pdu.seq, r)] = lat
        return out

    def to_frame(self, deadline_us: int, dl_only: bool = False) -> pd.DataFrame:
        """Per-packet table, one row per (PDU, receiver)."""
        rows: Dict[str, list] = {c: [] for c in PACKET_COLUMNS}
        for entry in self:
            for r in entry.receivers:
                lost = r in entry.lost
                lat = entry.latency(r, dl_only)
                rows["pdu_seq"].append(entry.pdu.seq)
                rows["source"].append(entry.pdu.key.source)
                rows["receiver"].append(r)
                rows["path"].append(entry.path.value)
                rows["t_rqt_us"].append(entry.component(r, T_RQT))
                rows["t_ul_us"].append(entry.component(r, T_UL))
                rows["t_gnb_us"].append(entry.component(r, T_GNB_PROC))
                rows["t_core_us"].append(entry.component(r, T_CORE))
                rows["t_dlschd_us"].append(entry.component(r, T_DL_SCHD))
                rows["t_dl_us"].append(entry.component(r, T_DL))
                rows["t_repair_us"].append(None if lost else entry.component(r, T_REPAIR_EXTRA))
                rows["latency_us"].append(lat)
                rows["met_deadline"].append(lat is not None and lat <= deadline_us)
                rows["lost"].append(lost)
        frame = pd.DataFrame(rows, columns=PACKET_COLUMNS)
        for col in ("t_repair_us", "latency_us"):
            frame[col] = pd.array(rows[col], dtype="Int64")
        return frame


@dataclass
class LatencyStats:
    count: int
    lost: int
    mean_us: float
    p50_us: float
    p95_us: float
    p99_us: float
    min_us: int
    max_us: int

    @classmethod
    def from_values(cls, values: np.ndarray, lost: int = 0) -> "LatencyStats":
        if len(values) == 0:
            return cls(0, lost, 0.0, 0.0, 0.0, 0.0, 0, 0)
        # Integer sum keeps the mean independent of how many receivers repeat a value.
        mean = int(values.sum()) / len(values)
        p50, p95, p99 = np.percentile(values, [50, 95, 99])
        return cls(
            count=len(values),
            lost=lost,
            mean_us=mean,
            p50_us=float(p50),
            p95_us=float(p95),
            p99_us=float(p99),
            min_us=int(values.min()),
            max_us=int(values.max()),
        )


def latency_stats(ledger: LatencyLedger, dl_only: bool = False) -> LatencyStats:
    return LatencyStats.from_values(ledger.latencies(dl_only), lost=ledger.n_lost)


@dataclass
class ReliabilityReport:
    """Pr[L <= D] over every generated (PDU, receiver) pair against target R."""
    deadline_us: int
    target: float
    achieved: float
    met: bool
    n_pairs: int
    n_on_time: int
    n_lost: int
    degenerate: bool = False
    # One-sided Clopper-Pearson bound on the on-time probability.
    confidence: float = 0.95
    lower_bound: float = 0.0

    @property
    def supported(self) -> bool:
        """Whether the sample is large enough to claim the target at this confidence."""
        return not self.degenerate and self.lower_bound >= self.target


def clopper_pearson_lower(successes: int, trials: int, confidence: float = 0.95) -> float:
    if trials == 0 or successes == 0:
        return 0.0
    return float(stats.beta.ppf(1.0 - confidence, successes, trials - successes + 1))


def reliability(
    ledger: LatencyLedger,
    deadline_us: int,
    target: float,
    dl_only: bool = False,
) -> ReliabilityReport:
    if not ledger.closed:
        raise InvariantViolation("Reliability needs a closed ledger")
    n_pairs = ledger.n_pairs
    if n_pairs == 0:
        return ReliabilityReport(deadline_us, target, 1.0, True, 0, 0, 0, degenerate=True)
    # Lost pairs and late repairs both count as failures.
    n_on_time = int(np.count_nonzero(ledger.latencies(dl_only) <= deadline_us))
    achieved = n_on_time / n_pairs
    return ReliabilityReport(
        deadline_us=deadline_us,
        target=target,
        achieved=achieved,
        met=achieved >= target,
        n_pairs=n_pairs,
        n_on_time=n_on_time,
        n_lost=ledger.n_lost,
        lower_bound=clopper_pearson_lower(n_on_time, n_pairs),
    )
