"""Threshold-based angular analysis: diamond-plot angles, wedge fitting, S0."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateWedgeWarning,
    EmptyAngles,
    InsufficientData,
    InsufficientExceedances,
    WedgeValidityWarning,
)
from .geometry import Wedge, as_sample, gpolar_array, wedge_from_angles

DEFAULT_K_ANGLES = 200


@dataclass
class AngularSample:
    """L1 angles ``theta1`` of the ``k`` points with the largest L1 norm."""

    thetas: np.ndarray
    k: int
    norms: np.ndarray
    points: np.ndarray | None = None

    def first_quadrant(self) -> "AngularSample":
        """Keep only retained points with both coordinates positive.

        Needs ``points``; used for data on the whole plane.
        """
        if self.points is None:
            raise ValueError("angular sample was built without its points")
        m = np.all(self.points > 0, axis=1)
        return AngularSample(self.thetas[m], int(m.sum()), self.norms[m], self.points[m])


@dataclass
class EmpiricalAngularMeasure:
    """Equal-weight atoms on the unit sphere of the wedge complement.

    ``r`` holds the distances of the selected points, decreasing, so
    ``r[-1]`` is the k-th largest distance.
    """

    mu: np.ndarray
    weights: np.ndarray
    r: np.ndarray
    side: np.ndarray

    @property
    def k(self) -> int:
        return len(self.weights)

    def total_mass(self) -> float:
        return float(self.weights.sum())


def top_k_angles(points, k: int) -> AngularSample:
    """Angles of the ``k`` largest points in L1 norm.

    Ties in the norm keep the original row order.  Zero rows are ignored.
    """
    z = as_sample(points)
    norms = np.abs(z).sum(axis=1)
    nz = np.flatnonzero(norms > 0)
    if k < 1 or len(nz) < k:
        raise InsufficientData(f"need {k} nonzero points, have {len(nz)}")
    order = nz[np.argsort(-norms[nz], kind="stable")][:k]
    sel = z[order]
    return AngularSample(sel[:, 0] / norms[order], k, norms[order], sel)


def nearest_rank_quantile(values, q: float) -> float:
    """Empirical quantile by the nearest-rank rule: sorted value ``ceil(q*m)``.

    ``q = 0`` gives the minimum.
    """
    v = np.sort(np.asarray(values, dtype=float))
    m = len(v)
    if m == 0:
        raise EmptyAngles("no values")
    if not 0 <= q <= 1:
        raise ValueError(f"quantile level must be in [0, 1], got {q}")
    # guard against q*m landing a hair above an integer
    idx = max(1, math.ceil(q * m - 1e-9))
    return float(v[idx - 1])


def fit_wedge(angles, q_low: float, q_high: float) -> Wedge:
    """Wedge whose angle bounds are empirical quantiles of the angles.

    ``angles`` is an ``AngularSample`` or a plain array of theta1 values.
    The result is not clamped to ``a_l <= 1 <= a_u``; a violation only
    triggers ``WedgeValidityWarning``.
    """
    thetas = angles.thetas if isinstance(angles, AngularSample) else np.asarray(angles, dtype=float)
    if len(thetas) == 0:
        raise EmptyAngles("cannot fit a wedge to no angles")
    if not 0 <= q_low < q_high <= 1:
        raise ValueError(f"need 0 <= q_low < q_high <= 1, got ({q_low}, {q_high})")
    th_l = nearest_rank_quantile(thetas, q_low)
    th_u = nearest_rank_quantile(thetas, q_high)
    w = wedge_from_angles(th_l, th_u)
    if w.is_ray:
        warnings.warn(f"fitted wedge collapsed to a ray at theta={th_l}", DegenerateWedgeWarning, stacklevel=2)
    if not w.valid:
        warnings.warn(f"fitted wedge ({w.a_l:.4g}, {w.a_u:.4g}) violates a_l <= 1 <= a_u", WedgeValidityWarning, stacklevel=2)
    return w


def empirical_s0(points, w: Wedge, k: int) -> EmpiricalAngularMeasure:
    """Empirical angular measure from the ``k`` points farthest from ``w``."""
    _, r, mu, side = gpolar_array(points, w)
    if k < 1 or len(r) < k:
        raise InsufficientExceedances(f"need {k} points outside the wedge, have {len(r)}")
    order = np.argsort(-r, kind="stable")[:k]
    return EmpiricalAngularMeasure(mu[order], np.full(k, 1.0 / k), r[order], side[order])
