"""Cone geometry in the plane: wedges, distances and polar coordinate maps.

Two coordinate systems are used. The L1 polar map sends a point to
``(|x1| + |x2|, x1 / (|x1| + |x2|))`` and is what the diamond plot shows.
The generalized polar map (GPOLAR) is taken relative to a forbidden cone
and uses Euclidean distance: ``x -> (d(x, C0), x / d(x, C0))``.  Its
angular part lives on the set of points at distance one from the cone.

Scalar functions take a single point given as any length-2 sequence.
Vectorised counterparts take an ``(n, 2)`` array.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    InsideForbiddenZone,
    InvalidWedge,
    OutOfDomain,
    OutOfRangeAngle,
    ZeroPoint,
)


class Point2(NamedTuple):
    x1: float
    x2: float


class Branch(str, enum.Enum):
    """Side of the wedge a point falls on."""

    ABOVE = "above"
    BELOW = "below"


# integer codes used by the vectorised routines
ABOVE = 1
BELOW = -1
INSIDE = 0


@dataclass(frozen=True)
class Wedge:
    """Closed cone ``{x >= 0 : a_l * x1 <= x2 <= a_u * x1}``.

    ``a_l == a_u == 1`` is the diagonal ray.
    """

    a_l: float
    a_u: float

    def __post_init__(self):
        a_l, a_u = float(self.a_l), float(self.a_u)
        if not (math.isfinite(a_l) and math.isfinite(a_u)):
            raise InvalidWedge(f"wedge slopes must be finite, got ({a_l}, {a_u})")
        if not 0 < a_l <= a_u:
            raise InvalidWedge(f"need 0 < a_l <= a_u, got ({a_l}, {a_u})")
        object.__setattr__(self, "a_l", a_l)
        object.__setattr__(self, "a_u", a_u)

    @classmethod
    def diag(cls) -> "Wedge":
        return cls(1.0, 1.0)

    @property
    def valid(self) -> bool:
        """True when ``a_l <= 1 <= a_u`` (needed for tail-equivalent margins)."""
        return self.a_l <= 1.0 <= self.a_u

    @property
    def is_ray(self) -> bool:
        return self.a_l == self.a_u

    @property
    def theta_l(self) -> float:
        return 1.0 / (1.0 + self.a_u)

    @property
    def theta_u(self) -> float:
        return 1.0 / (1.0 + self.a_l)

    def to_dict(self) -> dict:
        return {"a_l": self.a_l, "a_u": self.a_u, "valid": self.valid}


@dataclass(frozen=True)
class DiamondPoint:
    theta1: float
    theta2: float
    norm: float


@dataclass(frozen=True)
class GPolarPoint:
    r: float
    mu: Point2
    branch: Branch

    def to_cartesian(self) -> Point2:
        return gpolar_inverse(self.r, self.mu)


def _point(p) -> tuple[float, float]:
    x1, x2 = (float(v) for v in p)
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise ValueError(f"point coordinates must be finite, got ({x1}, {x2})")
    return x1, x2


def l1_polar(p) -> tuple[float, float]:
    """Return ``(r, theta)`` with ``r = |x1| + |x2|`` and ``theta = x1 / r``."""
    x1, x2 = _point(p)
    r = abs(x1) + abs(x2)
    if r == 0:
        raise ZeroPoint("the origin has no polar angle")
    return r, x1 / r


def to_diamond(p) -> DiamondPoint:
    x1, x2 = _point(p)
    r = abs(x1) + abs(x2)
    if r == 0:
        raise ZeroPoint("the origin has no diamond projection")
    return DiamondPoint(x1 / r, x2 / r, r)


def wedge_from_angles(theta_l: float, theta_u: float) -> Wedge:
    """Convert L1 angle bounds on ``x1 / (x1 + x2)`` to boundary slopes.

    >>> wedge_from_angles(0.4, 0.6)
    Wedge(a_l=0.6666666666666667, a_u=1.5)
    """
    theta_l, theta_u = float(theta_l), float(theta_u)
    if not 0 < theta_l <= theta_u < 1:
        raise OutOfRangeAngle(f"need 0 < theta_l <= theta_u < 1, got ({theta_l}, {theta_u})")
    return Wedge(1.0 / theta_u - 1.0, 1.0 / theta_l - 1.0)


def dist_to_wedge(p, w: Wedge) -> tuple[float, Branch]:
    """Euclidean distance from a first-quadrant point to ``w`` and its side.

    Points inside the closed wedge, boundary included, raise
    ``InsideForbiddenZone``.
    """
    x1, x2 = _point(p)
    if x1 < 0 or x2 < 0:
        raise OutOfDomain(f"point ({x1}, {x2}) is outside the first quadrant")
    if x2 > w.a_u * x1:
        return (x2 - w.a_u * x1) / math.sqrt(1.0 + w.a_u**2), Branch.ABOVE
    if x2 < w.a_l * x1:
        return (w.a_l * x1 - x2) / math.sqrt(1.0 + w.a_l**2), Branch.BELOW
    raise InsideForbiddenZone(f"point ({x1}, {x2}) lies in the wedge [{w.a_l}, {w.a_u}]")


def gpolar(p, w: Wedge) -> GPolarPoint:
    d, branch = dist_to_wedge(p, w)
    x1, x2 = _point(p)
    return GPolarPoint(d, Point2(x1 / d, x2 / d), branch)


def gpolar_inverse(r: float, mu) -> Point2:
    return Point2(r * float(mu[0]), r * float(mu[1]))


def as_sample(points) -> np.ndarray:
    """Coerce to a float ``(n, 2)`` array and reject non-finite values."""
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = np.flatnonzero(~np.all(np.isfinite(arr), axis=1))
        raise ValueError(f"non-finite coordinates at rows {bad[:10].tolist()}")
    return arr


def wedge_distances(points, w: Wedge) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``dist_to_wedge``.

    Returns ``(d, side)`` where ``side`` is ``ABOVE``, ``BELOW`` or ``INSIDE``
    and ``d`` is 0 for inside points.  No quadrant check is made here so the
    same formula serves points kept by ``region_filter_upper``.
    """
    z = as_sample(points)
    x1, x2 = z[:, 0], z[:, 1]
    above = x2 > w.a_u * x1
    below = (x2 < w.a_l * x1) & ~above
    d = np.zeros(len(z))
    d[above] = (x2[above] - w.a_u * x1[above]) / math.sqrt(1.0 + w.a_u**2)
    d[below] = (w.a_l * x1[below] - x2[below]) / math.sqrt(1.0 + w.a_l**2)
    side = np.where(above, ABOVE, np.where(below, BELOW, INSIDE))
    return d, side


def gpolar_array(points, w: Wedge) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """GPOLAR coordinates of every point strictly outside ``w``.

    Returns ``(index, r, mu, side)`` where ``index`` are row numbers into the
    input for the retained points.
    """
    z = as_sample(points)
    d, side = wedge_distances(z, w)
    keep = np.flatnonzero(side != INSIDE)
    r = d[keep]
    mu = z[keep] / r[:, None]
    return keep, r, mu, side[keep]


def diamond_array(points) -> np.ndarray:
    """L1 angular coordinates ``(theta1, theta2)`` for nonzero rows."""
    z = as_sample(points)
    norm = np.abs(z).sum(axis=1)
    if np.any(norm == 0):
        raise ZeroPoint("sample contains the origin")
    return z / norm[:, None]


def region_filter_upper(points, w: Wedge) -> np.ndarray:
    """Keep points whose nearest part of ``w`` is its upper boundary ray.

    The three conditions are ``x2 > 0``, ``x2 - a_u * x1 > 0`` and
    ``x1 + a_u * x2 > 0``.  Used for data on the whole plane, such as returns.
    """
    z = as_sample(points)
    x1, x2 = z[:, 0], z[:, 1]
    mask = (x2 > 0) & (x2 - w.a_u * x1 > 0) & (x1 + w.a_u * x2 > 0)
    return z[mask]
