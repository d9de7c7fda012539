"""Exact operator-formalism computations for the stationary Gromov-Witten
theory of the weighted projective line P[r]."""

__version__ = "0.1.0"
