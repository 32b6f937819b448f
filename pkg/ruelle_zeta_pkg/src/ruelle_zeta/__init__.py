"""Pollicott-Ruelle resonances of symmetric 3-disc billiards via weighted zeta functions."""

__all__ = [
    "cli",
    "config",
    "geometry",
    "orbits",
    "resonances",
    "ruelle",
    "symbolic",
    "workflow",
    "zeta",
]

__version__ = "0.1.0"
