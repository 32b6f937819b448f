"""Periodic orbits, their stabilities and orbit integrals of observables."""
from .solver import OrbitResult, PeriodicOrbit, find_orbit, length_functional, try_find_orbit
from .stability import compose_monodromy, monodromy_determinant, monodromy_of, stability_of
from .weights import (
    ConstantOne,
    FlowDerivative,
    LinearCombination,
    PhaseGaussian,
    SectionComb,
    WeightSpec,
    orbit_weight,
    orbit_weights,
    section_weight,
    wrapped_gaussian,
)

__all__ = [
    "ConstantOne",
    "FlowDerivative",
    "LinearCombination",
    "OrbitResult",
    "PeriodicOrbit",
    "PhaseGaussian",
    "SectionComb",
    "WeightSpec",
    "compose_monodromy",
    "monodromy_determinant",
    "find_orbit",
    "length_functional",
    "monodromy_of",
    "orbit_weight",
    "orbit_weights",
    "section_weight",
    "stability_of",
    "try_find_orbit",
    "wrapped_gaussian",
]
