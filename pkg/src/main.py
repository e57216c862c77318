"""Command line entry point: run, compare, sweep and validate cell scenarios."""

from contextlib import contextmanager
from pathlib import Path
import sys
from typing import Any, Dict, List, Optional

import typer
from loguru import logger
from rich.console import Console
from rich.table import Table

from .breakout import ScenarioMode
from .errors import ConfigError, Diagnostic, InvariantViolation
from .metrics.comparison import paired_compare, sweep, sweep_frame
from .output import RunDataExporter
from .scenario import (
    Measurement,
    ScenarioConfig,
    load_config,
    resolve_config_path,
    run_scenario,
    summarize,
    validate,
)
from .scenario.constants import N_UES_MAX

app = typer.Typer(help="Intra-cell group delivery: core-anchored vs gNB local breakout.", add_completion=False)
console = Console()
err_console = Console(stderr=True)
_state = {"quiet": False}


class GroupDeliveryRunner:
    """Loads a scenario, runs it on one or both paths and writes the results."""

    def __init__(
        self,
        config_name: str,
        seed: Optional[int] = None,
        duration_ms: Optional[int] = None,
        mode: Optional[ScenarioMode] = None,
        measurement: Optional[Measurement] = None,
        output_dir: Optional[Path] = None,
    ):
        self.config: ScenarioConfig = load_config(config_name).with_overrides(
            seed=seed, duration_ms=duration_ms, mode=mode, measurement=measurement,
        )
        problems = validate(self.config)
        if problems:
            raise ConfigError(problems, source="command line overrides")
        stem = resolve_config_path(config_name).stem
        self.output_dir = Path(output_dir) if output_dir else Path("data/output") / stem
        self.exporter = RunDataExporter(str(self.output_dir))

    def run(self) -> List[Dict[str, Any]]:
        if self.config.mode is ScenarioMode.PAIRED:
            return self.compare(write_packets=True)
        result = run_scenario(self.config)
        cfg = self.config
        self.exporter.export_frame(result.ledger.to_frame(cfg.deadline_us, cfg.dl_only), "packets")
        self.exporter.export_ues(result.ues, cfg.cell.gnb_pos)
        summary = summarize(result)
        self.exporter.export_summary(summary)
        return [summary]

    def compare(self, write_packets: bool = False) -> List[Dict[str, Any]]:
        cfg = self.config
        paired = paired_compare(cfg)
        self.exporter.export_frame(paired.frame, "paired")
        if write_packets:
            self.exporter.export_frame(paired.local.ledger.to_frame(cfg.deadline_us, cfg.dl_only), "packets_lb")
            self.exporter.export_frame(paired.core.ledger.to_frame(cfg.deadline_us, cfg.dl_only), "packets_ca")
        self.exporter.export_ues(paired.local.ues, cfg.cell.gnb_pos)
        summaries = [summarize(paired.local), summarize(paired.core)]
        self.exporter.export_summary({
            "paths": summaries,
            "matched_pairs": len(paired.frame),
            "mean_gap_us": paired.mean_gap_us,
        })
        console.print(f"Mean gap (core-anchored - local breakout): [bold]{paired.mean_gap_us / 1000:.3f} ms[/bold]")
        return summaries

    def sweep(self, sizes: List[int], n_seeds: int, workers: int, progress: bool) -> Path:
        seeds = [self.config.seed + k for k in range(n_seeds)]
        points = sweep(sizes, self.config, seeds, workers=workers, progress=progress)
        frame = sweep_frame(points)
        table = Table(title=f"Sweep: {self.config.name}")
        for col in ("receivers", "LB mean (ms)", "CA mean (ms)", "gap (ms)"):
            table.add_column(col, justify="right")
        for p in points:
            table.add_row(
                str(p.n_receivers),
                f"{p.mean_latency_lb / 1000:.3f}",
                f"{p.mean_latency_ca / 1000:.3f}",
                f"{p.gap / 1000:.3f}",
            )
        console.print(table)
        return self.exporter.export_frame(frame, "sweep")


def print_summary(summary: Dict[str, Any]):
    lat = summary["latency"]
    rel = summary["reliability"]
    table = Table(title=f"{summary['scenario']} / {summary['mode']} (seed {summary['seed']})")
    table.add_column("metric")
    table.add_column("value", justify="right")
    table.add_row("packets", str(summary["packets"]))
    table.add_row("(pdu, receiver) pairs", str(summary["pairs"]))
    for label, count in summary["decisions"].items():
        table.add_row(f"decision: {label}", str(count))
    for key in ("mean_us", "p50_us", "p95_us", "p99_us"):
        table.add_row(f"latency {key[:-3]} (ms)", f"{lat[key] / 1000:.3f}")
    table.add_row("lost pairs", str(lat["lost"]))
    verdict = "degenerate" if rel["degenerate"] else ("met" if rel["met"] else "missed")
    table.add_row(
        f"Pr[L <= {rel['deadline_us'] / 1000:g} ms]",
        f"{rel['achieved']:.6f} (target {rel['target']}, {verdict})",
    )
    table.add_row(f"{rel['confidence']:.0%} lower bound", f"{rel['lower_bound']:.6f}")
    console.print(table)


def parse_sizes(spec: str) -> List[int]:
    """`start:stop:step` (inclusive) or a comma separated list, each in [1, N_UES_MAX]."""
    try:
        if ":" in spec:
            start, stop, step = (int(x) for x in spec.split(":"))
            sizes = list(range(start, stop + 1, step))
        else:
            sizes = [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(
            [Diagnostic("sizes", f"expected start:stop:step or a list like 10,20,30, got {spec!r}")],
            source="--sizes",
        )
    if not sizes:
        raise ConfigError([Diagnostic("sizes", f"{spec!r} selects no group size")], source="--sizes")
    bad = [n for n in sizes if not 1 <= n <= N_UES_MAX]
    if bad:
        raise ConfigError(
            [Diagnostic("sizes", f"group sizes must lie in [1, {N_UES_MAX}], got {bad}")], source="--sizes",
        )
    return sizes


@contextmanager
def exit_codes():
    """Config problems exit 1, broken invariants exit 2."""
    try:
        yield
    except ConfigError as e:
        err_console.print(f"[red]{e}[/red]")
        raise typer.Exit(1)
    except InvariantViolation as e:
        logger.error(f"Invariant violated: {e}")
        raise typer.Exit(2)


@app.callback()
def setup(
    log_level: str = typer.Option("INFO", "--log-level", help="loguru level for stderr"),
    quiet: bool = typer.Option(False, "--quiet", help="Only warnings and errors; no progress bar"),
):
    logger.remove()
    logger.add(sys.stderr, level="WARNING" if quiet else log_level.upper())
    _state["quiet"] = quiet


CONFIG_OPT = typer.Option("default", "--config", "-c", help="YAML file or preset name")
SEED_OPT = typer.Option(None, "--seed", help="Override the scenario seed")
OUT_OPT = typer.Option(None, "--out", help="Output directory (default data/output/<config>)")
DURATION_OPT = typer.Option(None, "--duration-ms", help="Override the traffic horizon")
MEASUREMENT_OPT = typer.Option(None, "--measurement", help="event or analytic")


@app.command()
def run(
    config: str = CONFIG_OPT,
    seed: Optional[int] = SEED_OPT,
    out: Optional[Path] = OUT_OPT,
    duration_ms: Optional[int] = DURATION_OPT,
    mode: Optional[ScenarioMode] = typer.Option(None, "--mode", help="Path to simulate"),
    measurement: Optional[Measurement] = MEASUREMENT_OPT,
):
    """Run one scenario and write packets.csv, ues.csv and summary.json."""
    with exit_codes():
        runner = GroupDeliveryRunner(config, seed, duration_ms, mode, measurement, out)
        for summary in runner.run():
            print_summary(summary)


@app.command()
def compare(
    config: str = CONFIG_OPT,
    seed: Optional[int] = SEED_OPT,
    out: Optional[Path] = OUT_OPT,
    duration_ms: Optional[int] = DURATION_OPT,
    measurement: Optional[Measurement] = MEASUREMENT_OPT,
):
    """Run both paths with one seed and write paired.csv."""
    with exit_codes():
        runner = GroupDeliveryRunner(config, seed, duration_ms, ScenarioMode.PAIRED, measurement, out)
        for summary in runner.compare():
            print_summary(summary)


@app.command("sweep")
def sweep_cmd(
    config: str = CONFIG_OPT,
    sizes: str = typer.Option("10:150:10", "--sizes", help="start:stop:step or comma list"),
    seeds: int = typer.Option(1, "--seeds", min=1, help="Seeds per size, starting at the config seed"),
    workers: int = typer.Option(1, "--workers", min=1, help="Worker processes"),
    seed: Optional[int] = SEED_OPT,
    out: Optional[Path] = OUT_OPT,
    duration_ms: Optional[int] = DURATION_OPT,
    measurement: Optional[Measurement] = MEASUREMENT_OPT,
):
    """Group-size sweep of both paths; writes sweep.csv."""
    with exit_codes():
        size_list = parse_sizes(sizes)
        runner = GroupDeliveryRunner(config, seed, duration_ms, None, measurement, out)
        runner.sweep(size_list, seeds, workers, progress=not _state["quiet"])


@app.command("validate")
def validate_cmd(config: str = CONFIG_OPT):
    """Check a config; exit 0 iff it is clean."""
    with exit_codes():
        cfg = load_config(config)
    console.print(f"[green]{cfg.name}: configuration is valid[/green]")


def main():
    app()


if __name__ == "__main__":
    main()
