"""Tests for the local breakout router and dynamic events."""

import pytest

from src.breakout import (
    CellState,
    DecisionCounter,
    DynamicEvent,
    DynamicEventKind,
    RouteReason,
    ScenarioMode,
    Verdict,
    apply_dynamic_event,
    route,
)
from src.domain import (
    FlowKey,
    ForwardingEntry,
    MulticastGroup,
    Pdu,
    PolicySet,
    PtmBearer,
    Ue,
)

KEY = FlowKey(0, 0)
LB = ScenarioMode.LOCAL_BREAKOUT
CA = ScenarioMode.CORE_ANCHORED


def make_state(has_ft=True, allowed=True, attached=True, prb_ok=True) -> CellState:
    groups = {0: MulticastGroup(id=0, source=0, receivers=frozenset({1, 2, 3}))}
    bearers = {0: PtmBearer(id=0, group=0)}
    ues = {i: Ue(id=i) for i in range(4)}
    if not attached:
        ues[2].attached = False
    policies = PolicySet(prb_budget=100 if prb_ok else 2, prb_required=4)
    if allowed:
        policies.grant(KEY)
    state = CellState(ues=ues, groups=groups, bearers=bearers, policies=policies, core_routes={KEY: 0})
    if has_ft:
        state.ft.install(ForwardingEntry(KEY, 0, 0), groups, bearers)
    return state


def make_pdu(seq=0) -> Pdu:
    return Pdu(seq=seq, key=KEY, size_bits=1002, created_at=0)


LOCAL = "local"


# (ft, allowed, attached, prb_ok, mode) -> expected reason, or LOCAL
TRUTH_TABLE = [
    (True, True, True, True, LB, LOCAL),
    (True, True, True, False, LB, RouteReason.PRB_EXHAUSTED),
    (True, True, False, True, LB, RouteReason.RECEIVERS_NOT_ATTACHED),
    (True, True, False, False, LB, RouteReason.RECEIVERS_NOT_ATTACHED),
    (True, False, True, True, LB, RouteReason.NOT_ALLOWED),
    (True, False, True, False, LB, RouteReason.NOT_ALLOWED),
    (True, False, False, True, LB, RouteReason.NOT_ALLOWED),
    (True, False, False, False, LB, RouteReason.NOT_ALLOWED),
    (False, True, True, True, LB, RouteReason.NO_FT_ENTRY),
    (False, True, True, False, LB, RouteReason.NO_FT_ENTRY),
    (False, True, False, True, LB, RouteReason.NO_FT_ENTRY),
    (False, True, False, False, LB, RouteReason.NO_FT_ENTRY),
    (False, False, True, True, LB, RouteReason.NO_FT_ENTRY),
    (False, False, True, False, LB, RouteReason.NO_FT_ENTRY),
    (False, False, False, True, LB, RouteReason.NO_FT_ENTRY),
    (False, False, False, False, LB, RouteReason.NO_FT_ENTRY),
    (True, True, True, True, CA, RouteReason.FORCED_CORE_SCENARIO),
]


class TestRoute:
    """Every PDU gets exactly one verdict."""

    @pytest.mark.parametrize("has_ft, allowed, attached, prb_ok, mode, expected", TRUTH_TABLE)
    def test_truth_table(self, has_ft, allowed, attached, prb_ok, mode, expected):
        decision = route(make_pdu(), make_state(has_ft, allowed, attached, prb_ok), mode)
        if expected == LOCAL:
            assert decision.verdict is Verdict.LOCAL_BREAKOUT
            assert (decision.group, decision.bearer, decision.reason) == (0, 0, None)
            assert decision.label == "local_breakout"
        else:
            assert decision.verdict is Verdict.SEND_TO_CORE
            assert decision.reason is expected
            assert decision.group is None
            assert decision.label == expected.value

    def test_route_does_not_mutate_state(self):
        state = make_state()
        before = (set(state.policies.allowed_flows), len(state.ft), [u.attached for u in state.ues.values()])
        route(make_pdu(), state, LB)
        after = (set(state.policies.allowed_flows), len(state.ft), [u.attached for u in state.ues.values()])
        assert before == after

    def test_ft_removal_sends_to_core(self):
        state = make_state()
        state.ft.remove(KEY)
        assert route(make_pdu(), state, LB).reason is RouteReason.NO_FT_ENTRY

    def test_bearer_for_group(self):
        assert make_state().bearer_for_group(0).id == 0


class TestDynamicEvents:
    def test_detach_then_attach(self):
        state = make_state()
        apply_dynamic_event(DynamicEvent(at=50_000, kind=DynamicEventKind.DETACH, ue=1), state)
        assert route(make_pdu(), state, LB).reason is RouteReason.RECEIVERS_NOT_ATTACHED
        apply_dynamic_event(DynamicEvent(at=150_000, kind=DynamicEventKind.ATTACH, ue=1), state)
        assert route(make_pdu(), state, LB).is_local

    def test_revoke_then_grant(self):
        state = make_state()
        apply_dynamic_event(DynamicEvent(at=0, kind=DynamicEventKind.REVOKE, key=KEY), state)
        assert route(make_pdu(), state, LB).reason is RouteReason.NOT_ALLOWED
        apply_dynamic_event(DynamicEvent(at=1, kind=DynamicEventKind.GRANT, key=KEY), state)
        assert route(make_pdu(), state, LB).is_local

    def test_unknown_ue(self):
        with pytest.raises(ValueError):
            apply_dynamic_event(DynamicEvent(at=0, kind=DynamicEventKind.DETACH, ue=99), make_state())

    def test_policy_event_needs_a_flow(self):
        with pytest.raises(ValueError):
            apply_dynamic_event(DynamicEvent(at=0, kind=DynamicEventKind.REVOKE), make_state())


class TestDecisionCounter:
    def test_counts_and_transitions(self):
        state = make_state()
        counter = DecisionCounter()
        counter.record(0, make_pdu(0), route(make_pdu(0), state, LB))
        counter.record(10, make_pdu(1), route(make_pdu(1), state, LB))
        state.ues[3].attached = False
        counter.record(20, make_pdu(2), route(make_pdu(2), state, LB))
        state.ues[3].attached = True
        counter.record(30, make_pdu(3), route(make_pdu(3), state, LB))

        assert counter.total == 4
        assert counter.as_dict() == {"local_breakout": 3, "receivers_not_attached": 1}
        assert [(t, label) for t, _, label in counter.transitions] == [
            (0, "local_breakout"),
            (20, "receivers_not_attached"),
            (30, "local_breakout"),
        ]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
