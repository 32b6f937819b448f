"""Cycle expansions and direct orbit sums of the weighted zeta function."""
from .direct import DirectSum, weighted_zeta_direct
from .expansion import (
    CycleExpansion,
    CycleRecord,
    OrbitLike,
    band_truncation_bound,
    band_value_and_slope,
    build_expansion,
    weighted_zeta,
    weighted_zeta_many,
    zeta_inv,
)

__all__ = [
    "CycleExpansion",
    "CycleRecord",
    "DirectSum",
    "OrbitLike",
    "band_truncation_bound",
    "band_value_and_slope",
    "build_expansion",
    "weighted_zeta",
    "weighted_zeta_direct",
    "weighted_zeta_many",
    "zeta_inv",
]
