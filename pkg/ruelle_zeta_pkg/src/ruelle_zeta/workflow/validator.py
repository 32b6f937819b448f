"""
Sanity checks for solved orbit tables
"""
from typing import Sequence, Union

import numpy as np

from ..orbits.solver import OrbitResult, PeriodicOrbit

RESIDUAL_LIMIT = 1e-10
DET_TOL = 1e-9
EIGEN_TOL = 1e-9


def validate_orbit_table(results: Sequence[Union[OrbitResult, PeriodicOrbit]], logger=None) -> bool:
    """
    Validate a solved orbit table

    Args:
        results: OrbitResult rows or bare PeriodicOrbit objects
        logger: Optional logger

    Returns:
        bool: True if every orbit passed
    """
    orbits = [getattr(r, "orbit", r) for r in results]
    failed = [r.cycle.symbols for r in results if getattr(r, "orbit", r) is None]
    solved = [o for o in orbits if o is not None]

    if not solved:
        if logger:
            logger.error("Orbit table is empty")
        return False

    ok = True
    if failed:
        ok = False
        if logger:
            preview = ", ".join(failed[:5])
            more = "..." if len(failed) > 5 else ""
            logger.warning(f"{len(failed)} cycle(s) have no realization: {preview}{more}")

    bad_det = [o.word for o in solved if abs(abs(o.determinant) - 1.0) > DET_TOL]
    if bad_det:
        ok = False
        if logger:
            logger.warning(f"Monodromy determinant differs from +-1 for: {', '.join(bad_det[:5])}")

    # Lambda and det / Lambda are the two eigenvalues, so they must add up to the trace
    off_trace = [
        o.word for o in solved
        if abs(o.stability + o.determinant / o.stability - np.trace(o.monodromy))
        > EIGEN_TOL * abs(np.trace(o.monodromy))
    ]
    if off_trace:
        ok = False
        if logger:
            logger.warning(f"Stability eigenvalues do not reproduce the trace for: {', '.join(off_trace[:5])}")

    weak = [o.word for o in solved if abs(o.stability) <= 1.0]
    if weak:
        ok = False
        if logger:
            logger.warning(f"Non-hyperbolic orbits: {', '.join(weak[:5])}")

    residuals = np.array([o.residual for o in solved])
    if residuals.max() > RESIDUAL_LIMIT:
        ok = False
        if logger:
            logger.warning(f"Largest gradient residual {residuals.max():.3e} exceeds {RESIDUAL_LIMIT:g}")

    if ok and logger:
        logger.info(f"✅ Orbit table validated: {len(solved)} prime cycles")
    return ok
