"""Export run data to CSV and JSON."""

import json
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd
from loguru import logger

from ..domain import Ue

UE_COLUMNS = ["ue", "x_m", "y_m", "z_m", "distance_to_gnb_m"]


class RunDataExporter:
    def __init__(self, output_dir: str):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def export_frame(self, frame: pd.DataFrame, filename: str) -> Path:
        output_path = self.output_dir / f"{filename}.csv"
        frame.to_csv(output_path, index=False, lineterminator="\n")
        logger.info(f"Exported CSV: {output_path} ({len(frame)} rows)")
        return output_path

    def export_ues(self, ues: List[Ue], gnb_pos, filename: str = "ues") -> Path:
        rows = [
            {
                "ue": ue.id,
                "x_m": round(ue.position[0], 3),
                "y_m": round(ue.position[1], 3),
                "z_m": round(ue.position[2], 3),
                "distance_to_gnb_m": round(ue.distance_to(gnb_pos), 3),
            }
            for ue in ues
        ]
        return self.export_frame(pd.DataFrame(rows, columns=UE_COLUMNS), filename)

    def export_summary(self, summary: Dict[str, Any], filename: str = "summary") -> Path:
        output_path = self.output_dir / f"{filename}.json"
        with open(output_path, "w") as f:
            json.dump(summary, f, indent=2, sort_keys=True, default=str)
        logger.info(f"Exported summary: {output_path}")
        return output_path
