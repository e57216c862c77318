"""CSV and JSON export."""

from .data_export import UE_COLUMNS, RunDataExporter

__all__ = ["UE_COLUMNS", "RunDataExporter"]
