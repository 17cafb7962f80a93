"""Simulation of the three-suspect GHZ interrogation game."""

__version__ = "0.1.0"
