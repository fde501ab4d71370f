"""Deterministic teleoperation simulator for a two-motor six-legged robot."""

from antsim.protocol import CommandMode

__all__ = ["CommandMode"]
__version__ = "0.1.0"
