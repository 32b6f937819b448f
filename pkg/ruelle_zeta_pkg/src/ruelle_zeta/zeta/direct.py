"""Direct periodic-orbit sum for the weighted zeta function.

Only meaningful where the sum converges absolutely (Re lam above the escape
abscissa); it is the reference the cycle expansion is checked against there.

The stability factor of repetition r expands over the bands as

    1 / |(1 - Lambda^r)(1 - Lambda^-r)| = sum_{k>=1} k sign^(r(k+1)) |Lambda|^(-rk)

so a direct sum cut at ``k_max`` is the reference for an expansion that
keeps the first ``k_max`` bands.
"""
from __future__ import annotations

import logging
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ..errors import DivergenceError
from .expansion import OrbitLike

logger = logging.getLogger(__name__)


class DirectSum(NamedTuple):
    value: complex
    tail_bound: float


def _stability_factor(stability: float, r: int, k_max: Optional[int]) -> float:
    lam_r = stability ** r
    if k_max is None:
        return 1.0 / abs((1.0 - lam_r) * (1.0 - 1.0 / lam_r))
    sign = 1.0 if stability > 0 else -1.0
    inverse = abs(stability) ** -r
    return math.fsum(k * sign ** (r * (k + 1)) * inverse ** k for k in range(1, k_max + 1))


def weighted_zeta_direct(
    orbits: Sequence[OrbitLike],
    lam: complex,
    weights: np.ndarray,
    r_max: int = 20,
    n_max: Optional[int] = None,
    k_max: Optional[int] = None,
) -> DirectSum:
    """sum_p sum_{r<=r_max} exp(-lam r T_p) A_p / |(1 - Lambda^r)(1 - Lambda^-r)|.

    With ``k_max`` the stability factor keeps only the bands k <= k_max.
    The tail bound covers the repetitions r > r_max of the included primes;
    primes longer than ``n_max`` are left out altogether.
    """
    lam = complex(lam)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(orbits),):
        raise ValueError(f"Expected {len(orbits)} orbit weights, got shape {weights.shape}")
    if k_max is not None and k_max < 1:
        raise ValueError(f"k_max must be at least 1, got {k_max}")

    block_mass = {}
    real_parts, imag_parts = [], []
    tail = 0.0
    for orbit, a_p in zip(orbits, weights):
        if n_max is not None and orbit.length > n_max:
            continue
        ratio = math.exp(-lam.real * orbit.period) / abs(orbit.stability)
        if ratio >= 1.0:
            raise DivergenceError(
                f"Repetitions of a length-{orbit.length} orbit diverge at lambda = {lam}"
            )
        block_mass[orbit.length] = block_mass.get(orbit.length, 0.0) + ratio
        for r in range(1, r_max + 1):
            term = np.exp(-lam * r * orbit.period) * a_p * _stability_factor(orbit.stability, r, k_max)
            real_parts.append(float(term.real))
            imag_parts.append(float(term.imag))
        # both factors are bounded by |Lambda|^-r / (1 - |Lambda|^-r)^2, which decreases in r
        inverse = abs(orbit.stability) ** -r_max
        last = abs(a_p) * math.exp(-lam.real * r_max * orbit.period) * inverse / (1.0 - inverse) ** 2
        tail += last * ratio / (1.0 - ratio)

    lengths = sorted(block_mass)
    if len(lengths) >= 3 and block_mass[lengths[-1]] >= block_mass[lengths[-2]]:
        raise DivergenceError(
            f"Orbit sum grows with cycle length at lambda = {lam}; "
            "the point lies below the abscissa of convergence"
        )
    value = complex(math.fsum(real_parts), math.fsum(imag_parts))
    logger.debug("Direct sum at %s: %s (tail <= %.3e)", lam, value, tail)
    return DirectSum(value, tail)


__all__ = ["DirectSum", "weighted_zeta_direct"]
