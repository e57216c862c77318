"""Command line surface: outputs, exit codes and reproducibility."""

import json

import pandas as pd
import pytest
from typer.testing import CliRunner

import src.main as cli
from src.errors import ConfigError, InvariantViolation
from src.metrics import PACKET_COLUMNS
from src.metrics.comparison import PAIRED_COLUMNS, SWEEP_COLUMNS
from src.output import UE_COLUMNS

runner = CliRunner()


def invoke(*args):
    return runner.invoke(cli.app, ["--quiet", *args])


class TestRun:
    def test_writes_outputs(self, tmp_path):
        result = invoke("run", "--duration-ms", "200", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        packets = pd.read_csv(tmp_path / "packets.csv")
        assert list(packets.columns) == PACKET_COLUMNS
        assert len(packets) > 0
        ues = pd.read_csv(tmp_path / "ues.csv")
        assert list(ues.columns) == UE_COLUMNS
        assert len(ues) == 150
        assert (ues["distance_to_gnb_m"] >= 28.5).all()
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["mode"] == "local_breakout"
        assert summary["pairs"] == len(packets)

    def test_reruns_are_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            result = invoke("run", "--duration-ms", "200", "--seed", "7", "--out", str(tmp_path / name))
            assert result.exit_code == 0, result.output
        for filename in ("packets.csv", "ues.csv", "summary.json"):
            assert (tmp_path / "a" / filename).read_bytes() == (tmp_path / "b" / filename).read_bytes()

    def test_zero_duration(self, tmp_path):
        result = invoke("run", "--duration-ms", "0", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["packets"] == 0
        assert summary["reliability"]["degenerate"] is True

    def test_core_anchored_mode(self, tmp_path):
        result = invoke("run", "--duration-ms", "200", "--mode", "core_anchored", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        packets = pd.read_csv(tmp_path / "packets.csv")
        assert (packets["path"] == "core_anchored").all()

    def test_paired_preset_writes_both_paths(self, tmp_path):
        result = invoke("run", "--config", "fig2", "--duration-ms", "200", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        for filename in ("packets_lb.csv", "packets_ca.csv", "paired.csv", "summary.json"):
            assert (tmp_path / filename).is_file()

    def test_negative_duration_is_a_config_error(self, tmp_path):
        result = invoke("run", "--duration-ms=-5", "--out", str(tmp_path))
        assert result.exit_code == 1

    def test_invariant_violation_exits_2(self, tmp_path, monkeypatch):
        def broken(config, mode=None):
            raise InvariantViolation("sum of components differs from measured latency")

        monkeypatch.setattr(cli, "run_scenario", broken)
        result = invoke("run", "--duration-ms", "200", "--out", str(tmp_path))
        assert result.exit_code == 2


class TestValidate:
    def test_default_is_clean(self):
        result = invoke("validate")
        assert result.exit_code == 0, result.output

    @pytest.mark.parametrize("name", ["table1-lb", "table1-ca", "fig2", "fig3"])
    def test_presets_are_clean(self, name):
        assert invoke("validate", "--config", name).exit_code == 0

    def test_bad_file(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("groups:\n  - {source: 0, receivers: []}\nloss:\n  per_receiver_loss_prob: 1.3\n")
        result = invoke("validate", "--config", str(path))
        assert result.exit_code == 1

    def test_unknown_preset(self):
        assert invoke("validate", "--config", "nope").exit_code == 1

    @pytest.mark.parametrize("body", [
        "core:\n  delay_us: {fixed: .inf}\n",
        "core:\n  delay_us: {uniform: [5000, .nan]}\n",
        "cell:\n  radius_m: .inf\n",
    ])
    def test_non_finite_values_are_config_errors(self, tmp_path, body):
        path = tmp_path / "inf.yaml"
        path.write_text(body)
        result = invoke("validate", "--config", str(path))
        assert result.exit_code == 1

    def test_named_presets_run(self, tmp_path):
        result = invoke("run", "--config", "table1-lb", "--duration-ms", "200", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["mode"] == "local_breakout"


class TestCompareAndSweep:
    def test_compare(self, tmp_path):
        result = invoke("compare", "--duration-ms", "200", "--out", str(tmp_path))
        assert result.exit_code == 0, result.output
        paired = pd.read_csv(tmp_path / "paired.csv")
        assert list(paired.columns) == PAIRED_COLUMNS
        assert (paired["gap_us"] > 0).all()

    def test_sweep(self, tmp_path):
        result = invoke(
            "sweep", "--config", "fig3", "--sizes", "5,10", "--duration-ms", "200", "--out", str(tmp_path),
        )
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "sweep.csv")
        assert list(frame.columns) == SWEEP_COLUMNS
        assert frame["n_receivers"].tolist() == [5, 5, 10, 10]

    @pytest.mark.parametrize("sizes", ["0,10", "10:160:50", "a,b", "10:20", ","])
    def test_bad_sizes_are_config_errors(self, tmp_path, sizes):
        result = invoke("sweep", "--sizes", sizes, "--duration-ms", "200", "--out", str(tmp_path))
        assert result.exit_code == 1
        assert not (tmp_path / "sweep.csv").exists()

    def test_parse_sizes(self):
        assert cli.parse_sizes("10:50:20") == [10, 30, 50]
        assert cli.parse_sizes("1, 5,9") == [1, 5, 9]
        assert cli.parse_sizes("150") == [150]

    def test_parse_sizes_reports_the_offending_values(self):
        with pytest.raises(ConfigError) as err:
            cli.parse_sizes("0,10,151")
        assert err.value.diagnostics[0].path == "sizes"
        assert "[0, 151]" in err.value.diagnostics[0].message


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
