"""Run summary: counts, decision tally, latency statistics and reliability."""

from dataclasses import asdict
from typing import Any, Dict

from ..metrics import latency_stats, reliability
from .cell import RunResult
from .config import config_to_dict


def summarize(result: RunResult) -> Dict[str, Any]:
    config = result.config
    ledger = result.ledger
    report = reliability(ledger, config.deadline_us, config.reliability_target, config.dl_only)
    return {
        "scenario": config.name,
        "seed": config.seed,
        "mode": result.mode.value,
        "measurement": config.measurement.value,
        "dl_only": config.dl_only,
        "packets": result.n_pdus,
        "pairs": ledger.n_pairs,
        "ptm_transmissions": result.ptm_transmissions,
        "core_segments": result.core_segments,
        "repair_transmissions": result.repair_transmissions,
        "events_processed": result.events_processed,
        "decisions": result.decisions.as_dict(),
        "transitions": [
            {"at_us": at, "flow": str(key), "decision": label}
            for at, key, label in result.decisions.transitions
        ],
        "latency": asdict(latency_stats(ledger, config.dl_only)),
        "reliability": asdict(report),
        "config": config_to_dict(config),
    }
