"""Saddle-point coefficient asymptotics and Hayman admissibility for f = exp(g)."""

__version__ = "0.1.0"
