"""Paired path comparison and group-size sweeps."""

from dataclasses import dataclass, replace
import multiprocessing
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from tqdm import tqdm

from ..breakout import ScenarioMode
from ..scenario.cell import RunResult, run_scenario
from ..scenario.config import GroupConfig, ScenarioConfig, validate
from ..scenario.constants import N_UES_MAX
from ..errors import ConfigError
from .latency import LatencyStats, PathKind, reliability

PAIRED_COLUMNS = ["pdu_seq", "source", "receiver", "latency_ca_us", "latency_lb_us", "gap_us", "t_core_us"]
SWEEP_COLUMNS = ["n_receivers", "path", "mean_us", "p50_us", "p95_us", "p99_us", "reliability"]


@dataclass
class PairedResult:
    local: RunResult
    core: RunResult
    frame: pd.DataFrame

    @property
    def mean_gap_us(self) -> float:
        if self.frame.empty:
            return 0.0
        return int(self.frame["gap_us"].sum()) / len(self.frame)


def paired_compare(config: ScenarioConfig, seed: Optional[int] = None) -> PairedResult:
    """Run both paths with one seed and match deliveries by (pdu, receiver)."""
    if seed is not None:
        config = replace(config, seed=seed)
    local = run_scenario(config, ScenarioMode.LOCAL_BREAKOUT)
    core = run_scenario(config, ScenarioMode.CORE_ANCHORED)

    lb = local.ledger.pair_latencies(config.dl_only)
    ca = core.ledger.pair_latencies(config.dl_only)
    rows: Dict[str, list] = {c: [] for c in PAIRED_COLUMNS}
    for (seq, receiver), l_ca in sorted(ca.items()):
        l_lb = lb.get((seq, receiver))
        if l_lb is None:
            continue
        entry = core.ledger.entry(seq)
        rows["pdu_seq"].append(seq)
        rows["source"].append(entry.pdu.key.source)
        rows["receiver"].append(receiver)
        rows["latency_ca_us"].append(l_ca)
        rows["latency_lb_us"].append(l_lb)
        rows["gap_us"].append(l_ca - l_lb)
        rows["t_core_us"].append(entry.component(receiver, "t_core"))
    frame = pd.DataFrame(rows, columns=PAIRED_COLUMNS)
    result = PairedResult(local=local, core=core, frame=frame)
    logger.info(f"Paired comparison: {len(frame)} matched pairs, mean gap {result.mean_gap_us / 1000:.3f} ms")
    return result


@dataclass
class SweepPoint:
    """Per-size latency summary of both paths, averaged over seeds."""
    n_receivers: int
    stats: Dict[PathKind, LatencyStats]
    reliability: Dict[PathKind, float]

    @property
    def mean_latency_ca(self) -> float:
        return self.stats[PathKind.CORE_ANCHORED].mean_us

    @property
    def mean_latency_lb(self) -> float:
        return self.stats[PathKind.LOCAL_BREAKOUT].mean_us

    @property
    def gap(self) -> float:
        return self.mean_latency_ca - self.mean_latency_lb

    def rows(self) -> List[Dict]:
        return [
            {
                "n_receivers": self.n_receivers,
                "path": path.value,
                "mean_us": self.stats[path].mean_us,
                "p50_us": self.stats[path].p50_us,
                "p95_us": self.stats[path].p95_us,
                "p99_us": self.stats[path].p99_us,
                "reliability": self.reliability[path],
            }
            for path in sorted(self.stats, key=lambda p: p.value)
        ]


def sized_config(config: ScenarioConfig, n_receivers: int) -> ScenarioConfig:
    """One group: UE 0 sources flow 0, UEs 1..n receive."""
    if config.dynamic_events:
        logger.warning("Dynamic events are dropped for group-size sweeps")
    sized = replace(
        config,
        n_ues=n_receivers + 1,
        groups=(GroupConfig(source=0, receivers=tuple(range(1, n_receivers + 1)), flow=0),),
        policies=replace(config.policies, allowed_flows=None),
        dynamic_events=(),
    )
    # The source UE comes on top of up to N_UES_MAX receivers.
    problems = validate(sized, max_ues=N_UES_MAX + 1)
    if problems:
        raise ConfigError(problems, source=f"sweep size {n_receivers}")
    return sized


_Job = Tuple[ScenarioConfig, int, ScenarioMode]


def _run_job(job: _Job) -> Tuple[np.ndarray, int, float]:
    """Module-level worker so the pool can pickle it."""
    config, seed, mode = job
    result = run_scenario(replace(config, seed=seed, record_trace=False), mode)
    rel = reliability(result.ledger, config.deadline_us, config.reliability_target, config.dl_only)
    return result.ledger.latencies(config.dl_only), result.ledger.n_lost, rel.achieved


def sweep(
    n_receivers_list: Sequence[int],
    config: ScenarioConfig,
    seeds: Sequence[int],
    workers: int = 1,
    progress: bool = True,
) -> List[SweepPoint]:
    """Both paths for every (size, seed); per-size statistics averaged over seeds."""
    bad = [n for n in n_receivers_list if not 1 <= n <= N_UES_MAX]
    if bad:
        raise ValueError(f"Group sizes must lie in [1, {N_UES_MAX}], got {bad}")
    sizes = sorted(set(n_receivers_list))
    modes = (ScenarioMode.LOCAL_BREAKOUT, ScenarioMode.CORE_ANCHORED)
    jobs: List[_Job] = [
        (sized_config(config, n), seed, mode) for n in sizes for seed in seeds for mode in modes
    ]
    logger.info(f"Sweep: {len(sizes)} sizes x {len(seeds)} seeds x 2 paths = {len(jobs)} runs")

    bar = tqdm(total=len(jobs), desc="Sweep", unit="run", disable=not progress)
    if workers > 1:
        with multiprocessing.Pool(workers) as pool:
            outputs = []
            for out in pool.imap(_run_job, jobs):
                outputs.append(out)
                bar.update(1)
    else:
        outputs = []
        for job in jobs:
            outputs.append(_run_job(job))
            bar.update(1)
    bar.close()

    points = []
    it = iter(outputs)
    for n in sizes:
        per_path: Dict[PathKind, List[Tuple[np.ndarray, int, float]]] = {PathKind(m.value): [] for m in modes}
        for _ in seeds:
            for mode in modes:
                per_path[PathKind(mode.value)].append(next(it))
        stats = {path: _average_stats(runs) for path, runs in per_path.items()}
        rel = {path: float(np.mean([r[2] for r in runs])) for path, runs in per_path.items()}
        points.append(SweepPoint(n_receivers=n, stats=stats, reliability=rel))
    return points


def _average_stats(runs: List[Tuple[np.ndarray, int, float]]) -> LatencyStats:
    per_seed = [LatencyStats.from_values(values, lost) for values, lost, _ in runs]
    if len(per_seed) == 1:
        return per_seed[0]
    return LatencyStats(
        count=sum(s.count for s in per_seed),
        lost=sum(s.lost for s in per_seed),
        mean_us=float(np.mean([s.mean_us for s in per_seed])),
        p50_us=float(np.mean([s.p50_us for s in per_seed])),
        p95_us=float(np.mean([s.p95_us for s in per_seed])),
        p99_us=float(np.mean([s.p99_us for s in per_seed])),
        min_us=min(s.min_us for s in per_seed),
        max_us=max(s.max_us for s in per_seed),
    )


def sweep_frame(points: Sequence[SweepPoint]) -> pd.DataFrame:
    rows = [row for p in points for row in p.rows()]
    frame = pd.DataFrame(rows, columns=SWEEP_COLUMNS)
    return frame.sort_values(["n_receivers", "path"], kind="stable").reset_index(drop=True)
