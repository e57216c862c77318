"""One cell run: every module wired to the event engine.

Per-PDU random draws (grant wait, gNB processing, core delay) are taken when
the PDU is generated, each from its own labelled stream, so a local-breakout
run and a core-anchored run with the same seed see the same draws.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..breakout import (
    CellState,
    DecisionCounter,
    RouteDecision,
    ScenarioMode,
    apply_dynamic_event,
    route,
)
from ..corepath import core_segment
from ..domain import (
    FlowKey,
    ForwardingEntry,
    ForwardingTable,
    MulticastGroup,
    Pdu,
    PolicySet,
    PtmBearer,
    Ue,
    place_ues,
)
from ..engine import (
    CORE_DELAY,
    GNB_PROC,
    LOSS,
    PLACEMENT,
    TRAFFIC,
    UL_GRANT,
    Event,
    EventKind,
    RandomStreams,
    Simulator,
    next_slot_boundary,
)
from ..metrics.latency import (
    T_CORE,
    T_DL,
    T_DL_SCHD,
    T_GNB_PROC,
    T_REPAIR_EXTRA,
    T_RQT,
    T_UL,
    LatencyLedger,
    PathKind,
)
from ..ran import PtmSchedule, UlSegment, ptm_deliver, repair_unicast, schedule_ptm, ul_segment
from ..traffic import assign_phases, generate_arrivals
from .config import Measurement, ScenarioConfig


@dataclass
class _Transit:
    """A PDU between generation and its PTM transmission."""
    pdu: Pdu
    group: MulticastGroup
    ul: UlSegment
    proc: int
    core: int
    decision: Optional[RouteDecision] = None
    ingress_at: int = 0


@dataclass
class RunResult:
    config: ScenarioConfig
    mode: ScenarioMode
    ledger: LatencyLedger
    decisions: DecisionCounter
    ues: List[Ue]
    n_pdus: int = 0
    ptm_transmissions: int = 0
    core_segments: int = 0
    repair_transmissions: int = 0
    events_processed: int = 0
    trace: List[Tuple[int, int, EventKind]] = field(default_factory=list)


def build_cell_state(config: ScenarioConfig, ues: List[Ue]) -> CellState:
    groups: Dict[int, MulticastGroup] = {}
    bearers: Dict[int, PtmBearer] = {}
    core_routes: Dict[FlowKey, int] = {}
    policies = PolicySet(
        prb_budget=config.policies.prb_budget,
        prb_required=config.policies.prb_required,
    )
    for gid, g in enumerate(config.resolved_groups()):
        groups[gid] = MulticastGroup(id=gid, source=g.source, receivers=frozenset(g.receivers))
        bearers[gid] = PtmBearer(
            id=gid, group=gid, qos_marking=g.qos_marking, capacity_per_slot=policies.ptm_per_slot,
        )
        core_routes[g.key] = gid
        if config.policies.allowed_flows is None:
            policies.grant(g.key)
    for s, f in config.policies.allowed_flows or ():
        policies.grant(FlowKey(s, f))

    state = CellState(
        ues={ue.id: ue for ue in ues},
        groups=groups,
        bearers=bearers,
        ft=ForwardingTable(),
        policies=policies,
        core_routes=core_routes,
    )
    for gid, g in enumerate(config.resolved_groups()):
        if g.local_ft:
            state.ft.install(ForwardingEntry(key=g.key, group=gid, bearer=gid), groups, bearers)
    return state


class CellSimulator:
    """Runs one scenario on one path (local breakout or core anchored)."""

    def __init__(self, config: ScenarioConfig, mode: Optional[ScenarioMode] = None):
        mode = mode or config.mode
        if mode is ScenarioMode.PAIRED:
            raise ValueError("A single cell run is either local_breakout or core_anchored")
        self.config = config
        self.mode = mode
        self.analytic = config.measurement is Measurement.ANALYTIC
        self.streams = RandomStreams(config.seed)
        self.engine = Simulator(record_trace=config.record_trace)
        self.ledger = LatencyLedger()
        self.decisions = DecisionCounter()

        self.ues = place_ues(
            config.n_ues, config.cell.radius_m, self.streams[PLACEMENT], height_m=config.cell.ue_height_m,
        )
        self.state = build_cell_state(config, self.ues)
        self._receivers = {gid: tuple(g.sorted_receivers) for gid, g in self.state.groups.items()}
        self._transit: Dict[int, _Transit] = {}
        self.result = RunResult(
            config=config, mode=mode, ledger=self.ledger, decisions=self.decisions, ues=self.ues,
        )

        handlers = {
            EventKind.PACKET_ARRIVAL: self._on_packet_arrival,
            EventKind.UL_GRANT_READY: self._on_ul_grant_ready,
            EventKind.UL_TX_DONE: self._on_ul_tx_done,
            EventKind.GNB_PROC_DONE: self._on_gnb_proc_done,
            EventKind.CORE_PATH_DONE: self._on_core_path_done,
            EventKind.DL_SLOT_BOUNDARY: self._on_dl_slot_boundary,
            EventKind.PTM_TX_DONE: self._on_ptm_tx_done,
            EventKind.NAK_REPORT: self._on_nak_report,
            EventKind.REPAIR_TX_DONE: self._on_repair_tx_done,
            EventKind.MOBILITY_CHANGE: self._on_dynamic_event,
            EventKind.POLICY_CHANGE: self._on_dynamic_event,
            EventKind.SCENARIO_END: self._on_scenario_end,
        }
        for kind, handler in handlers.items():
            self.engine.on(kind, handler)

    # -- setup -------------------------------------------------------------

    def _schedule_traffic(self) -> int:
        horizon = self.config.horizon_us
        if horizon == 0:
            return 0
        profile = self.config.traffic
        flows = sorted(self.state.core_routes.items(), key=lambda kv: kv[1])
        rng = self.streams[TRAFFIC]
        phases = assign_phases(len(flows), profile, rng)
        arrivals: List[Tuple[int, int, FlowKey]] = []
        for i, ((key, _), phase) in enumerate(zip(flows, phases)):
            arrivals += [(t, i, key) for t in generate_arrivals(profile, horizon, phase, rng)]
        arrivals.sort()
        for seq, (t, _, key) in enumerate(arrivals):
            pdu = Pdu(seq=seq, key=key, size_bits=profile.packet_bits, created_at=t)
            self.engine.schedule(t, EventKind.PACKET_ARRIVAL, pdu)
        return len(arrivals)

    def _schedule_dynamic_events(self):
        for ev_cfg in sorted(self.config.dynamic_events, key=lambda e: e.at_us):
            ev = ev_cfg.to_event()
            kind = EventKind.MOBILITY_CHANGE if ev.is_mobility else EventKind.POLICY_CHANGE
            self.engine.schedule(ev.at, kind, ev)

    def run(self) -> RunResult:
        n = self._schedule_traffic()
        self._schedule_dynamic_events()
        self.engine.schedule(self.config.horizon_us, EventKind.SCENARIO_END)
        logger.info(f"Running '{self.config.name}' ({self.mode.value}, seed {self.config.seed}): {n} PDUs")
        # Drain past the horizon so in-flight PDUs complete.
        self.engine.run()
        self.ledger.close()

        self.result.n_pdus = n
        self.result.events_processed = self.engine.processed_count
        self.result.trace = self.engine.trace
        logger.info(
            f"'{self.config.name}' {self.mode.value}: {self.ledger.n_pairs} (PDU, receiver) pairs, "
            f"decisions {self.decisions.as_dict()}"
        )
        return self.result

    # -- uplink ------------------------------------------------------------

    def _on_packet_arrival(self, event: Event):
        pdu: Pdu = event.payload
        gid = self.state.core_routes[pdu.key]
        transit = _Transit(
            pdu=pdu,
            group=self.state.groups[gid],
            ul=ul_segment(pdu, self.config.radio, self.streams[UL_GRANT]),
            proc=self.config.radio.gnb_proc_delay.sample(self.streams[GNB_PROC]),
            core=core_segment(pdu, self.config.core, self.streams[CORE_DELAY]),
        )
        self._transit[pdu.seq] = transit
        self.ledger.open(pdu, self._receivers[gid])
        self.ledger.record_component(pdu.seq, None, T_RQT, transit.ul.grant_wait)
        self.ledger.record_component(pdu.seq, None, T_UL, transit.ul.tx_dur)
        self.engine.schedule(event.fire_at + transit.ul.grant_wait, EventKind.UL_GRANT_READY, pdu.seq)

    def _on_ul_grant_ready(self, event: Event):
        transit = self._transit[event.payload]
        self.engine.schedule(event.fire_at + transit.ul.tx_dur, EventKind.UL_TX_DONE, event.payload)

    def _on_ul_tx_done(self, event: Event):
        """gNB ingress: the breakout decision is taken here."""
        transit = self._transit[event.payload]
        decision = route(transit.pdu, self.state, self.mode)
        transit.decision = decision
        transit.ingress_at = event.fire_at
        self.decisions.record(event.fire_at, transit.pdu, decision)
        path = PathKind.LOCAL_BREAKOUT if decision.is_local else PathKind.CORE_ANCHORED
        self.ledger.set_path(transit.pdu.seq, path)
        self.ledger.record_component(transit.pdu.seq, None, T_GNB_PROC, transit.proc)
        logger.debug(f"t={event.fire_at} us: PDU {transit.pdu.seq} {decision.label}")
        self.engine.schedule(event.fire_at + transit.proc, EventKind.GNB_PROC_DONE, event.payload)

    def _on_gnb_proc_done(self, event: Event):
        transit = self._transit[event.payload]
        if transit.decision.is_local:
            self._enqueue_dl(transit, event.fire_at)
            return
        self.ledger.record_component(transit.pdu.seq, None, T_CORE, transit.core)
        self.result.core_segments += 1
        self.engine.schedule(event.fire_at + transit.core, EventKind.CORE_PATH_DONE, event.payload)

    def _on_core_path_done(self, event: Event):
        self._enqueue_dl(self._transit[event.payload], event.fire_at)

    # -- downlink ----------------------------------------------------------

    def _enqueue_dl(self, transit: _Transit, ready_at: int):
        bearer = self.state.bearer_for_group(transit.group.id)
        bearer.enqueue(transit.pdu, ready_at)
        if self.analytic:
            # Slot alignment taken from where the PDU would be without the core segment.
            anchor = ready_at - (0 if transit.decision.is_local else transit.core)
            schedule = schedule_ptm(bearer, ready_at, self.config.radio, align_from=anchor)
            bearer.dequeue()
            self._start_ptm(transit, schedule)
            return
        if bearer.next_service is None:
            bearer.next_service = next_slot_boundary(ready_at, self.config.radio.slot_len_us)
            self.engine.schedule(bearer.next_service, EventKind.DL_SLOT_BOUNDARY, bearer.id)

    def _on_dl_slot_boundary(self, event: Event):
        bearer = self.state.bearers[event.payload]
        bearer.next_service = None
        served = 0
        while len(bearer) and served < bearer.capacity_per_slot:
            pdu, ready_at = bearer.pdcp_queue[0]
            schedule = schedule_ptm(bearer, ready_at, self.config.radio, slot_start=event.fire_at)
            bearer.dequeue()
            self._start_ptm(self._transit[pdu.seq], schedule)
            served += 1
        if len(bearer):
            bearer.next_service = event.fire_at + self.config.radio.slot_len_us
            self.engine.schedule(bearer.next_service, EventKind.DL_SLOT_BOUNDARY, bearer.id)

    def _start_ptm(self, transit: _Transit, schedule: PtmSchedule):
        seq = transit.pdu.seq
        self.ledger.record_component(seq, None, T_DL_SCHD, schedule.dl_wait)
        self.ledger.record_component(seq, None, T_DL, schedule.dl_tx)
        self.result.ptm_transmissions += 1
        self.engine.schedule(schedule.fire_at, EventKind.PTM_TX_DONE, seq)

    def _on_ptm_tx_done(self, event: Event):
        transit = self._transit.pop(event.payload)
        outcome = ptm_deliver(transit.pdu, transit.group, self.config.loss, self.streams[LOSS])
        self.ledger.complete_ptm(transit.pdu.seq, event.fire_at, outcome.nak)
        if outcome.nak:
            self.engine.schedule(
                event.fire_at + self.config.radio.nak_window,
                EventKind.NAK_REPORT,
                (transit.pdu, outcome.nak),
            )

    def _on_nak_report(self, event: Event):
        pdu, nak = event.payload
        outcomes = repair_unicast(pdu, nak, self.config.radio, self.config.loss, self.streams[LOSS], at=event.fire_at)
        for o in outcomes:
            self.result.repair_transmissions += o.attempts
            if o.lost:
                self.ledger.mark_lost(pdu.seq, o.ue)
            else:
                self.engine.schedule(o.delivered_at, EventKind.REPAIR_TX_DONE, (pdu.seq, o.ue))
        logger.debug(f"t={event.fire_at} us: PDU {pdu.seq} repair for {len(nak)} receivers")

    def _on_repair_tx_done(self, event: Event):
        seq, ue = event.payload
        ptm_done = self.ledger.entry(seq).ptm_done_at
        self.ledger.record_component(seq, ue, T_REPAIR_EXTRA, event.fire_at - ptm_done)
        self.ledger.deliver(seq, ue, event.fire_at)

    # -- control -----------------------------------------------------------

    def _on_dynamic_event(self, event: Event):
        apply_dynamic_event(event.payload, self.state)

    def _on_scenario_end(self, event: Event):
        logger.debug(f"Traffic horizon reached at {event.fire_at} us, {len(self.engine)} events in flight")


def run_scenario(config: ScenarioConfig, mode: Optional[ScenarioMode] = None) -> RunResult:
    return CellSimulator(config, mode).run()
