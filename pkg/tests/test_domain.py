"""Tests for the cell population, forwarding table and eligibility policy."""

import math

import numpy as np
import pytest

from src.domain import (
    Eligibility,
    FlowKey,
    ForwardingEntry,
    ForwardingTable,
    MulticastGroup,
    Pdu,
    PolicySet,
    PtmBearer,
    Ue,
    eligibility,
    place_ues,
    receivers_attached,
)
from src.errors import InvariantViolation


@pytest.fixture
def group():
    return MulticastGroup(id=0, source=0, receivers=frozenset({1, 2, 3}))


@pytest.fixture
def ues():
    return {i: Ue(id=i) for i in range(4)}


class TestGroups:
    def test_members_include_source_and_receivers(self, group):
        assert group.members == frozenset({0, 1, 2, 3})
        assert group.sorted_receivers == [1, 2, 3]

    def test_empty_receivers_rejected(self):
        with pytest.raises(ValueError):
            MulticastGroup(id=0, source=0, receivers=frozenset())

    def test_source_cannot_receive_its_own_flow(self):
        with pytest.raises(ValueError):
            MulticastGroup(id=0, source=1, receivers=frozenset({1, 2}))

    def test_receivers_attached(self, group, ues):
        assert receivers_attached(group, ues.values())
        ues[2].attached = False
        assert not receivers_attached(group, ues.values())

    def test_pdu_validation(self):
        with pytest.raises(ValueError):
            Pdu(seq=0, key=FlowKey(0, 0), size_bits=0, created_at=0)
        with pytest.raises(ValueError):
            Pdu(seq=0, key=FlowKey(0, 0), size_bits=1002, created_at=-1)


class TestPlacement:
    def test_ues_inside_the_cell(self):
        placed = place_ues(150, 100.0, np.random.default_rng(0), height_m=1.5)
        assert [ue.id for ue in placed] == list(range(150))
        assert all(math.hypot(ue.position[0], ue.position[1]) <= 100.0 for ue in placed)
        assert all(ue.position[2] == 1.5 for ue in placed)

    def test_distance_to_gnb(self):
        ue = Ue(id=0, position=(0.0, 0.0, 0.0))
        assert ue.distance_to((0.0, 0.0, 30.0)) == pytest.approx(30.0)


class TestPtmBearer:
    def test_pdcp_queue_is_fifo(self):
        bearer = PtmBearer(id=0, group=0)
        for seq in range(3):
            bearer.enqueue(Pdu(seq=seq, key=FlowKey(0, 0), size_bits=1002, created_at=seq), at=seq * 10)
        assert len(bearer) == 3
        assert [bearer.dequeue()[0].seq for _ in range(3)] == [0, 1, 2]


class TestForwardingTable:
    """FT install, lookup and removal."""

    def setup_method(self):
        self.groups = {0: MulticastGroup(id=0, source=0, receivers=frozenset({1, 2}))}
        self.bearers = {0: PtmBearer(id=0, group=0), 1: PtmBearer(id=1, group=1)}
        self.ft = ForwardingTable()

    def test_install_and_lookup(self):
        entry = ForwardingEntry(key=FlowKey(0, 0), group=0, bearer=0)
        self.ft.install(entry, self.groups, self.bearers)
        assert self.ft.lookup(FlowKey(0, 0)) == entry
        assert FlowKey(0, 0) in self.ft
        assert self.ft.lookup(FlowKey(0, 1)) is None

    def test_remove(self):
        self.ft.install(ForwardingEntry(FlowKey(0, 0), 0, 0), self.groups, self.bearers)
        assert self.ft.remove(FlowKey(0, 0)) is not None
        assert self.ft.lookup(FlowKey(0, 0)) is None
        assert len(self.ft) == 0

    def test_duplicate_key_rejected(self):
        self.ft.install(ForwardingEntry(FlowKey(0, 0), 0, 0), self.groups, self.bearers)
        with pytest.raises(InvariantViolation):
            self.ft.install(ForwardingEntry(FlowKey(0, 0), 0, 0), self.groups, self.bearers)

    def test_bearer_of_another_group_rejected(self):
        with pytest.raises(InvariantViolation):
            self.ft.install(ForwardingEntry(FlowKey(0, 0), 0, 1), self.groups, self.bearers)

    def test_unknown_group_rejected(self):
        with pytest.raises(InvariantViolation):
            self.ft.install(ForwardingEntry(FlowKey(0, 0), 5, 0), self.groups, self.bearers)

    def test_source_mismatch_rejected(self):
        with pytest.raises(InvariantViolation):
            self.ft.install(ForwardingEntry(FlowKey(3, 0), 0, 0), self.groups, self.bearers)


class TestEligibility:
    key = FlowKey(0, 0)

    def test_eligible(self, group, ues):
        policies = PolicySet(allowed_flows={self.key})
        assert eligibility(self.key, group, policies, ues) is Eligibility.ELIGIBLE

    def test_policy_checked_first(self, group, ues):
        ues[1].attached = False
        policies = PolicySet(prb_budget=0)
        assert eligibility(self.key, group, policies, ues) is Eligibility.NOT_ALLOWED

    def test_attachment_checked_before_prbs(self, group, ues):
        ues[3].attached = False
        policies = PolicySet(allowed_flows={self.key}, prb_budget=2, prb_required=4)
        assert eligibility(self.key, group, policies, ues) is Eligibility.RECEIVERS_NOT_ATTACHED

    def test_prb_exhausted(self, group, ues):
        policies = PolicySet(allowed_flows={self.key}, prb_budget=2, prb_required=4)
        assert eligibility(self.key, group, policies, ues) is Eligibility.PRB_EXHAUSTED

    def test_unknown_receiver_counts_as_detached(self, group):
        policies = PolicySet(allowed_flows={self.key})
        assert eligibility(self.key, group, policies, {0: Ue(0), 1: Ue(1)}) is Eligibility.RECEIVERS_NOT_ATTACHED

    def test_grant_and_revoke(self):
        policies = PolicySet()
        policies.grant(self.key)
        assert policies.is_allowed(self.key)
        policies.revoke(self.key)
        assert not policies.is_allowed(self.key)

    def test_ptm_transmissions_per_slot(self):
        assert PolicySet().ptm_per_slot == 25
        assert PolicySet(prb_budget=3, prb_required=4).ptm_per_slot == 1


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
