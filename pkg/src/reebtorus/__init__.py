"""Homotopy types of stabilizers and orbits of Morse maps on surfaces, computed
from decorated Kronrod-Reeb trees of disk and cylinder pieces."""

from .engine import analyze_instance, analyze_piece
from .model import load_instance, parse_instance

__version__ = "0.1.0"

__all__ = ["analyze_instance", "analyze_piece", "load_instance", "parse_instance"]
