"""Disjoint pattern copies or small hitting sets in tournaments."""

__version__ = "0.1.0"
