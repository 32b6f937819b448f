"""Smoothed invariant Ruelle distributions on the Birkhoff section."""
from .grid import (
    DistributionGrid,
    GridSpec,
    distribution_grid,
    in_sigma1,
    localization_metric,
    sigma1_mask,
)
from .output import (
    failure_messages,
    grid_frame,
    orbit_frame,
    pgm_pixels,
    write_grid_csv,
    write_orbit_table,
    write_pgm,
    write_resonance_table,
    write_zeta_table,
)

__all__ = [
    "DistributionGrid",
    "GridSpec",
    "distribution_grid",
    "failure_messages",
    "grid_frame",
    "in_sigma1",
    "localization_metric",
    "orbit_frame",
    "pgm_pixels",
    "sigma1_mask",
    "write_grid_csv",
    "write_orbit_table",
    "write_pgm",
    "write_resonance_table",
    "write_zeta_table",
]
