"""Ordinal embeddability ranks at desk scale."""

__version__ = "0.1.0"
