"""Iso-entangled bases: constructions, verification and numerical search."""

__version__ = "1.0.0"
