"""The C3v symmetry group of the symmetric 3-disc system.

Disc ``i`` sits at polar angle ``2*pi*i/3`` around the centroid, which is the
origin of the plane. Every element is written ``R^j S^s`` with ``R`` the
counterclockwise rotation by ``2*pi/3`` and ``S`` the mirror in the x axis
(the axis through disc 0). ``s_j = R^j S`` is the mirror in the line at polar
angle ``pi*j/3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

_COS = (1.0, -0.5, -0.5)
_SIN = (0.0, math.sqrt(3.0) / 2.0, -math.sqrt(3.0) / 2.0)


@dataclass(frozen=True)
class GroupElement:
    rotation: int = 0
    reflected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "rotation", int(self.rotation) % 3)
        object.__setattr__(self, "reflected", bool(self.reflected))

    @property
    def name(self) -> str:
        if self.reflected:
            return f"s{self.rotation}"
        return "e" if self.rotation == 0 else f"r{self.rotation}"

    @property
    def matrix(self) -> np.ndarray:
        c, s = _COS[self.rotation], _SIN[self.rotation]
        if self.reflected:
            return np.array([[c, s], [s, -c]])
        return np.array([[c, -s], [s, c]])

    @property
    def determinant(self) -> int:
        return -1 if self.reflected else 1

    @property
    def permutation(self) -> Tuple[int, int, int]:
        """Image of each disc label under this element."""
        sign = -1 if self.reflected else 1
        return tuple((sign * i + self.rotation) % 3 for i in range(3))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        sign = -1 if self.reflected else 1
        return GroupElement(self.rotation + sign * other.rotation, self.reflected != other.reflected)

    def inverse(self) -> "GroupElement":
        if self.reflected:
            return self
        return GroupElement(-self.rotation, False)

    @property
    def order(self) -> int:
        if self.reflected:
            return 2
        return 1 if self.rotation == 0 else 3

    def act(self, vector) -> np.ndarray:
        return self.matrix @ np.asarray(vector, dtype=float)

    def act_label(self, disc: int) -> int:
        return self.permutation[disc]

    def __repr__(self) -> str:
        return f"GroupElement({self.name})"


IDENTITY = GroupElement(0, False)
ROTATION = GroupElement(1, False)
C3V: Tuple[GroupElement, ...] = (
    IDENTITY,
    ROTATION,
    GroupElement(2, False),
    GroupElement(0, True),
    GroupElement(1, True),
    GroupElement(2, True),
)


def element_mapping(pair_from: Tuple[int, int], pair_to: Tuple[int, int]) -> GroupElement:
    """The unique element sending the ordered disc pair ``pair_from`` to ``pair_to``."""
    for g in C3V:
        if g.act_label(pair_from[0]) == pair_to[0] and g.act_label(pair_from[1]) == pair_to[1]:
            return g
    raise ValueError(f"No group element maps {pair_from} to {pair_to}")


def wedge_sector(position) -> Tuple[float, int]:
    """Polar angle in [0, 2pi) and the index (0..5) of the 1/6 sector holding it."""
    x, y = float(position[0]), float(position[1])
    angle = math.atan2(y, x) % (2.0 * math.pi)
    if angle >= 2.0 * math.pi:
        angle = 0.0
    sector = min(int(angle // (math.pi / 3.0)), 5)
    return angle, sector


def folding_element(position) -> GroupElement:
    """Element ``g`` such that ``g . position`` lies in the closed wedge 0 <= angle <= pi/3.

    Points on the wedge walls (and the centroid) fold with the identity.
    """
    angle, sector = wedge_sector(position)
    if angle <= math.pi / 3.0:
        return IDENTITY
    j = sector // 2
    if sector % 2 == 0:
        return GroupElement(-j, False)
    return GroupElement(1 + j, True)


def in_wedge(position, tol: float = 1e-12) -> bool:
    x, y = float(position[0]), float(position[1])
    if math.hypot(x, y) <= tol:
        return True
    angle = math.atan2(y, x)
    return -tol <= angle <= math.pi / 3.0 + tol


__all__ = [
    "GroupElement",
    "IDENTITY",
    "ROTATION",
    "C3V",
    "element_mapping",
    "folding_element",
    "in_wedge",
    "wedge_sector",
]
