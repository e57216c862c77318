"""Intra-cell group delivery simulator: core-anchored multicast vs gNB local breakout."""

__version__ = "0.1.0"
