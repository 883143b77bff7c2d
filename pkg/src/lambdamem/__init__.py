"""Simulation and analysis tools for Λ-system optical quantum memories."""

__version__ = "0.1.0"
