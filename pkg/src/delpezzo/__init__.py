"""Exact computation of initial degrees of fat-point subschemes on blow-ups
of the projective plane at up to eight general points."""

__version__ = "0.1.0"
