"""Tests for on/off source generation."""

import numpy as np
import pytest

from src.traffic import OnOffProfile, assign_phases, generate_arrivals


class TestOnOffProfile:
    def test_defaults(self):
        profile = OnOffProfile()
        assert profile.interarrival_us == 1002
        assert profile.packets_per_on_window == 10
        assert profile.cycle_us == 100_000
        assert profile.mean_rate_bps == pytest.approx(100_000)

    @pytest.mark.parametrize("field", ["on_time_us", "off_time_us", "data_rate_bps", "packet_bits"])
    def test_rejects_non_positive(self, field):
        with pytest.raises(ValueError):
            OnOffProfile(**{field: 0})


class TestGenerateArrivals:
    def test_packet_count_matches_analytic_count(self):
        profile = OnOffProfile()
        arrivals = generate_arrivals(profile, horizon_us=1_000_000, phase_us=0)
        assert len(arrivals) == 10 * profile.packets_per_on_window
        assert arrivals[:3] == [0, 1002, 2004]
        assert arrivals == sorted(arrivals)

    def test_no_packets_during_off(self):
        arrivals = generate_arrivals(OnOffProfile(), horizon_us=1_000_000, phase_us=0)
        assert all(t % 100_000 < 10_000 for t in arrivals)

    def test_measured_rate_over_many_cycles(self):
        profile = OnOffProfile()
        arrivals = generate_arrivals(profile, horizon_us=2_000_000, phase_us=0)
        rate = len(arrivals) * profile.packet_bits / 2.0
        assert rate == pytest.approx(profile.mean_rate_bps, rel=0.01)

    def test_phase_shifts_the_first_window(self):
        arrivals = generate_arrivals(OnOffProfile(), horizon_us=200_000, phase_us=5000)
        # The window started at -5000; its sixth packet is the first inside the horizon.
        assert arrivals[0] == 10
        assert arrivals[5] == 95_000

    def test_phase_out_of_range(self):
        with pytest.raises(ValueError):
            generate_arrivals(OnOffProfile(), horizon_us=1000, phase_us=100_000)

    def test_exponential_needs_a_stream(self):
        with pytest.raises(ValueError):
            generate_arrivals(OnOffProfile(exp_interarrival=True), horizon_us=100_000, phase_us=0)

    def test_exponential_keeps_packets_inside_on_windows(self):
        profile = OnOffProfile(exp_interarrival=True)
        arrivals = generate_arrivals(profile, 1_000_000, 0, np.random.default_rng(4))
        assert arrivals
        assert all(t % 100_000 < 10_000 for t in arrivals)


class TestAssignPhases:
    def test_uniform_over_one_cycle(self):
        phases = assign_phases(50, OnOffProfile(), np.random.default_rng(0))
        assert len(phases) == 50
        assert all(0 <= p < 100_000 for p in phases)

    def test_phase_mean_is_half_a_cycle(self):
        phases = assign_phases(100, OnOffProfile(), np.random.default_rng(3))
        assert np.mean(phases) == pytest.approx(50_000, rel=0.2)

    def test_synchronized(self):
        phases = assign_phases(5, OnOffProfile(synchronized_phases=True), np.random.default_rng(0))
        assert phases == [0] * 5


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
