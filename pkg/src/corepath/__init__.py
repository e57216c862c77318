"""Core-anchored segment model."""

from .model import CORE_MAX_US, CORE_MIN_US, CORE_PRESETS, CorePathModel, core_segment

__all__ = ["CORE_MAX_US", "CORE_MIN_US", "CORE_PRESETS", "CorePathModel", "core_segment"]
