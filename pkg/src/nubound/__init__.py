"""Bound states of two-dimensional Kratzer-type and oscillator-type potentials
with a ring-shaped noncentral barrier, solved by the Nikiforov-Uvarov method
and cross-checked against a finite-difference eigensolver."""

from .model import (BarredParams, Family, KratzerParams, NoncentralParams, OscParams,
                    PhysConst, PotentialSpec, SeparationData, separation_data)

__version__ = "0.1.0"

__all__ = [
    "BarredParams", "Family", "KratzerParams", "NoncentralParams", "OscParams",
    "PhysConst", "PotentialSpec", "SeparationData", "separation_data", "__version__",
]
