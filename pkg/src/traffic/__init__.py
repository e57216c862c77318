"""Uplink traffic sources."""

from .onoff import OnOffProfile, assign_phases, generate_arrivals

__all__ = ["OnOffProfile", "assign_phases", "generate_arrivals"]
