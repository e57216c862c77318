"""Tests for uplink access, PTM scheduling, delivery and unicast repair."""

import numpy as np
import pytest

from src.corepath import CORE_PRESETS, CorePathModel, core_segment
from src.domain import FlowKey, MulticastGroup, Pdu, PtmBearer
from src.engine import Sampler
from src.ran import (
    GrantMode,
    LossModel,
    RadioTiming,
    ptm_deliver,
    repair_unicast,
    schedule_ptm,
    survival_probability,
    ul_segment,
)


def make_pdu(created_at: int = 0, seq: int = 0) -> Pdu:
    return Pdu(seq=seq, key=FlowKey(0, 0), size_bits=1002, created_at=created_at)


def queued_bearer(ready_at: int = 0) -> PtmBearer:
    bearer = PtmBearer(id=0, group=0)
    bearer.enqueue(make_pdu(), ready_at)
    return bearer


class TestRadioTiming:
    def test_defaults(self):
        timing = RadioTiming()
        assert timing.slot_len_us == 500
        assert timing.ul_grant_delay == Sampler.uniform(250, 1000)
        assert timing.gnb_proc_delay == Sampler.uniform(1000, 2000)
        assert timing.dl_tx_us == 500
        assert timing.nak_window == 500

    def test_invalid(self):
        with pytest.raises(ValueError):
            RadioTiming(slot_len_us=0)
        with pytest.raises(ValueError):
            RadioTiming(dl_tx_slots=0)

    def test_loss_probability_range(self):
        with pytest.raises(ValueError):
            LossModel(per_receiver_loss_prob=1.3)
        with pytest.raises(ValueError):
            LossModel(max_repair_attempts=-1)


class TestUplink:
    def test_request_based_within_sampler_bounds(self):
        timing = RadioTiming()
        rng = np.random.default_rng(0)
        for t in range(0, 50_000, 1002):
            seg = ul_segment(make_pdu(t), timing, rng)
            assert 250 <= seg.grant_wait <= 1000
            assert seg.tx_dur == 500
            assert seg.total == seg.grant_wait + 500

    def test_configured_grant_uses_the_next_occasion(self):
        timing = RadioTiming(
            ul_grant_mode=GrantMode.CONFIGURED_GRANT, ul_grant_delay=Sampler.uniform(0, 1000),
        )
        rng = np.random.default_rng(1)
        for _ in range(200):
            seg = ul_segment(make_pdu(100), timing, rng)
            assert 0 <= seg.grant_wait <= 400

    def test_request_based_mean(self):
        rng = np.random.default_rng(7)
        waits = np.array([ul_segment(make_pdu(0), RadioTiming(), rng).grant_wait for _ in range(10_000)])
        assert waits.min() >= 250
        assert waits.max() <= 1000
        assert waits.mean() == pytest.approx(625, rel=0.05)


class TestSchedulePtm:
    """PTM placement on the slot grid."""

    def test_waits_for_next_boundary(self):
        sched = schedule_ptm(queued_bearer(1200), 1200, RadioTiming())
        assert (sched.dl_wait, sched.dl_tx, sched.start, sched.fire_at) == (300, 500, 1500, 2000)

    def test_on_boundary_no_wait(self):
        sched = schedule_ptm(queued_bearer(1500), 1500, RadioTiming())
        assert sched.dl_wait == 0
        assert sched.fire_at == 2000

    def test_empty_bearer(self):
        with pytest.raises(ValueError):
            schedule_ptm(PtmBearer(id=0, group=0), 0, RadioTiming())

    def test_slot_start_must_be_a_later_boundary(self):
        with pytest.raises(ValueError):
            schedule_ptm(queued_bearer(1200), 1200, RadioTiming(), slot_start=1250)
        with pytest.raises(ValueError):
            schedule_ptm(queued_bearer(1200), 1200, RadioTiming(), slot_start=1000)
        assert schedule_ptm(queued_bearer(1200), 1200, RadioTiming(), slot_start=2000).dl_wait == 800

    def test_alignment_from_another_instant(self):
        sched = schedule_ptm(queued_bearer(10_200), 10_200, RadioTiming(), align_from=1200)
        assert sched.dl_wait == 300
        assert sched.start == 10_500

    def test_multi_slot_transmission(self):
        sched = schedule_ptm(queued_bearer(0), 0, RadioTiming(dl_tx_slots=2))
        assert sched.dl_tx == 1000


class TestDelivery:
    group = MulticastGroup(id=0, source=0, receivers=frozenset(range(1, 11)))

    def test_lossless_single_copy(self):
        out = ptm_deliver(make_pdu(), self.group, LossModel(), np.random.default_rng(0))
        assert out.delivered == tuple(range(1, 11))
        assert out.nak == ()

    def test_total_loss(self):
        out = ptm_deliver(make_pdu(), self.group, LossModel(1.0), np.random.default_rng(0))
        assert out.delivered == ()
        assert out.nak == tuple(range(1, 11))

    def test_loss_rate(self):
        rng = np.random.default_rng(5)
        missed = sum(len(ptm_deliver(make_pdu(), self.group, LossModel(0.2), rng).nak) for _ in range(5000))
        assert missed / 50_000 == pytest.approx(0.2, abs=0.01)


class TestRepair:
    """Selective unicast repair of NAK'd receivers."""

    def test_one_slot_per_receiver_in_id_order(self):
        out = repair_unicast(make_pdu(), [3, 1, 2], RadioTiming(), LossModel(), np.random.default_rng(0), at=1000)
        assert [(o.ue, o.delivered_at, o.attempts) for o in out] == [(1, 1500, 1), (2, 2000, 1), (3, 2500, 1)]

    def test_round_starts_at_next_boundary(self):
        out = repair_unicast(make_pdu(), [4], RadioTiming(), LossModel(), np.random.default_rng(0), at=1100)
        assert out[0].delivered_at == 2000

    def test_no_attempts_means_lost(self):
        out = repair_unicast(make_pdu(), [1, 2], RadioTiming(), LossModel(0.5, 0), np.random.default_rng(0), at=0)
        assert all(o.lost and o.attempts == 0 for o in out)

    def test_gives_up_after_max_attempts(self):
        out = repair_unicast(make_pdu(), [1, 2], RadioTiming(), LossModel(1.0, 3), np.random.default_rng(0), at=0)
        assert all(o.lost and o.attempts == 3 for o in out)

    def test_retry_rounds_are_later(self):
        rng = np.random.default_rng(2)
        out = repair_unicast(make_pdu(), list(range(1, 200)), RadioTiming(), LossModel(0.5, 3), rng, at=0)
        first_round_end = 199 * 500
        assert any(o.attempts > 1 for o in out)
        for o in out:
            if o.attempts > 1 and not o.lost:
                assert o.delivered_at > first_round_end

    def test_empty_nak_set(self):
        with pytest.raises(ValueError):
            repair_unicast(make_pdu(), [], RadioTiming(), LossModel(), np.random.default_rng(0), at=0)

    def test_survival_probability(self):
        assert survival_probability(LossModel(0.1, 3)) == pytest.approx(1 - 0.1 ** 4)
        assert survival_probability(LossModel(0.0, 3)) == 1.0


class TestCorePath:
    def test_default_is_budget_range(self):
        assert CorePathModel().delay_sampler == Sampler.uniform(5000, 10_000)

    def test_presets(self):
        assert CorePathModel.preset("fig3").delay_sampler == Sampler.fixed(10_500)
        assert CorePathModel.preset("fig2").delay_sampler == Sampler.fixed(10_000)
        assert set(CORE_PRESETS) == {"table1", "fig2", "fig3"}
        with pytest.raises(ValueError):
            CorePathModel.preset("nope")

    def test_fixed_delay_is_exact(self):
        model = CorePathModel(delay_sampler=Sampler.fixed(7500))
        assert core_segment(make_pdu(), model, np.random.default_rng(0)) == 7500

    def test_uniform_delay_mean_and_bounds(self):
        model = CorePathModel.preset("table1")
        rng = np.random.default_rng(11)
        draws = np.array([core_segment(make_pdu(seq=i), model, rng) for i in range(10_000)])
        assert draws.min() >= 5000
        assert draws.max() <= 10_000
        assert draws.mean() == pytest.approx(7500, rel=0.03)

    def test_nominal_range(self):
        assert CorePathModel().within_nominal_range
        assert CorePathModel(delay_sampler=Sampler.fixed(12_000)).within_nominal_range
        assert not CorePathModel(delay_sampler=Sampler.fixed(20_000)).within_nominal_range


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
