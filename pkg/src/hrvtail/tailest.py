"""One-dimensional tail-index estimators and the Hillish statistic."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFit, InsufficientData, LengthMismatch, NonPositiveTail

DEFAULT_THETA_GRID = np.round(np.arange(0.10, 0.95 + 1e-9, 0.01), 2)


@dataclass
class EstimatorCurve:
    """Estimates indexed by the number of upper order statistics ``k``.

    ``thetas`` is only filled for altHill curves, where ``k = ceil(n**theta)``.
    """

    ks: np.ndarray
    values: np.ndarray
    thetas: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        self.ks = np.asarray(self.ks, dtype=int)
        self.values = np.asarray(self.values, dtype=float)
        if self.thetas is not None:
            self.thetas = np.asarray(self.thetas, dtype=float)
        if self.ks.shape != self.values.shape:
            raise LengthMismatch("ks and values differ in length")
        # altHill grids may repeat a k for small n, so there theta is the index
        if self.thetas is None:
            if np.any(np.diff(self.ks) <= 0):
                raise ValueError("curve ks must be strictly increasing")
        elif np.any(np.diff(self.thetas) <= 0) or np.any(np.diff(self.ks) < 0):
            raise ValueError("altHill thetas must increase strictly and ks must not decrease")

    def __len__(self):
        return len(self.ks)

    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.ks.tolist(), self.values.tolist()))

    def restrict(self, k_lo: int, k_hi: int) -> "EstimatorCurve":
        m = (self.ks >= k_lo) & (self.ks <= k_hi)
        th = None if self.thetas is None else self.thetas[m]
        return EstimatorCurve(self.ks[m], self.values[m], th, self.name)


@dataclass
class ConcomitantRanks:
    k: int
    ranks: np.ndarray = field(repr=False)


def _upper_order_stats(data, k: int) -> np.ndarray:
    """Positive values sorted decreasingly, checked to hold at least ``k + 1``."""
    if k < 1:
        raise InsufficientData(f"k must be at least 1, got {k}")
    x = np.asarray(data, dtype=float).ravel()
    x = x[np.isfinite(x)]
    if len(x) < k + 1:
        raise InsufficientData(f"need at least k+1={k + 1} values, got {len(x)}")
    x = x[x > 0]
    if len(x) < k + 1:
        raise NonPositiveTail(f"need k+1={k + 1} positive values, got {len(x)}")
    return np.sort(x)[::-1]


def hill(data, k: int) -> float:
    """Hill estimate of the tail index alpha from the ``k`` largest values.

    Nonpositive values are discarded first, so the function can be fed
    ``(z2 - a * z1)`` without clipping.
    """
    x = _upper_order_stats(data, k)
    mean_excess = np.mean(np.log(x[:k] / x[k]))
    if mean_excess == 0:
        raise DegenerateFit("top order statistics are all equal")
    return float(1.0 / mean_excess)


def hill_curve(data, ks=None) -> EstimatorCurve:
    """Hill estimates for every ``k`` in ``ks`` (default ``2..n-1``).

    Uses cumulative log sums, so the full plot costs one sort.
    """
    x = np.asarray(data, dtype=float).ravel()
    x = np.sort(x[np.isfinite(x) & (x > 0)])[::-1]
    n = len(x)
    if ks is None:
        ks = np.arange(2, n)
    ks = np.asarray(ks, dtype=int)
    if len(ks) and (ks.min() < 1 or ks.max() > n - 1):
        raise NonPositiveTail(f"k range [{ks.min()}, {ks.max()}] needs {ks.max() + 1} positive values, have {n}")
    logs = np.log(x)
    csum = np.cumsum(logs)
    with np.errstate(divide="ignore"):
        mean_excess = csum[ks - 1] / ks - logs[ks]
        values = 1.0 / mean_excess
    return EstimatorCurve(ks, values, name="hill")


def alt_hill_curve(data, theta_grid=None) -> EstimatorCurve:
    """Hill estimates at ``k = ceil(n**theta)``, capped at ``n - 1``.

    ``n`` counts the positive entries of ``data``.
    """
    theta_grid = DEFAULT_THETA_GRID if theta_grid is None else np.asarray(theta_grid, dtype=float)
    if np.any((theta_grid <= 0) | (theta_grid >= 1)):
        raise ValueError("theta values must lie in (0, 1)")
    if np.any(np.diff(theta_grid) <= 0):
        raise ValueError("theta grid must be strictly increasing")
    x = np.asarray(data, dtype=float).ravel()
    n = int(np.sum(np.isfinite(x) & (x > 0)))
    if n < 3:
        raise NonPositiveTail(f"need at least 3 positive values, got {n}")
    ks = np.minimum(np.ceil(n**theta_grid - 1e-9).astype(int), n - 1)
    ks = np.maximum(ks, 2)
    curve = hill_curve(x, ks)
    return EstimatorCurve(ks, curve.values, theta_grid, name="althill")


def qq_slope(data, k: int) -> float:
    """Tail index from the QQ plot of the ``k`` largest values.

    Fits an ordinary least-squares line through
    ``(log((k+1)/j), log(X_(j) / X_(k+1)))``, ``j = 1..k``, and returns the
    reciprocal of its slope.
    """
    x = _upper_order_stats(data, k)
    j = np.arange(1, k + 1)
    u = np.log((k + 1) / j)
    v = np.log(x[:k] / x[k])
    uc = u - u.mean()
    vc = v - v.mean()
    slope = float(np.dot(uc, vc) / np.dot(uc, uc))
    if np.all(vc == 0) or slope == 0:
        raise DegenerateFit("QQ ordinates are constant")
    return 1.0 / slope


def qq_curve(data, ks) -> EstimatorCurve:
    ks = np.asarray(ks, dtype=int)
    return EstimatorCurve(ks, [qq_slope(data, int(k)) for k in ks], name="qq")


def jitter(values, seed: int = 0, scale: float = 1e-9) -> np.ndarray:
    """Add seeded uniform noise of relative size ``scale`` to break ties."""
    v = np.asarray(values, dtype=float)
    rng = np.random.default_rng(seed)
    mag = np.where(v != 0, np.abs(v), 1.0)
    return v + rng.uniform(-scale, scale, size=v.shape) * mag


def _check_pair(xi, eta, k):
    xi = np.asarray(xi, dtype=float).ravel()
    eta = np.asarray(eta, dtype=float).ravel()
    if len(xi) != len(eta):
        raise LengthMismatch(f"xi has {len(xi)} values, eta has {len(eta)}")
    if k < 1 or k > len(xi):
        raise InsufficientData(f"k={k} outside [1, {len(xi)}]")
    return xi, eta


def _concomitants(xi, eta):
    # stable sort keeps original order among tied xi
    order = np.argsort(-xi, kind="stable")
    return eta[order]


def _ranks_in_prefix(eta_star, k):
    head = eta_star[:k]
    return np.searchsorted(np.sort(head), head, side="right")


def concomitant_ranks(xi, eta, k: int) -> ConcomitantRanks:
    """Ranks ``N_j`` of the concomitants of the ``k`` largest ``xi``.

    ``N_j`` counts the ``l <= k`` with ``eta*_l <= eta*_j``, so tied values
    all receive the largest rank of their group.
    """
    xi, eta = _check_pair(xi, eta, k)
    return ConcomitantRanks(k, _ranks_in_prefix(_concomitants(xi, eta), k))


def _hillish_from_ranks(ranks, k):
    j = np.arange(1, k + 1)
    return float(np.mean(np.log(k / j) * np.log(k / ranks)))


def hillish(xi, eta, k: int) -> float:
    """Hillish statistic ``(1/k) sum_j log(k/j) log(k/N_j)``.

    Tends to 1 for both ``eta`` and ``-eta`` exactly when the conditional
    extreme value limit of ``(xi, eta)`` is a product measure.
    """
    ranks = concomitant_ranks(xi, eta, k).ranks
    return _hillish_from_ranks(ranks, k)


def hillish_curve(xi, eta, ks) -> EstimatorCurve:
    ks = np.asarray(ks, dtype=int)
    xi, eta = _check_pair(xi, eta, int(ks.max()) if len(ks) else 1)
    if len(ks) and ks.min() < 1:
        raise InsufficientData("k must be positive")
    eta_star = _concomitants(xi, eta)
    values = [_hillish_from_ranks(_ranks_in_prefix(eta_star, k), k) for k in ks]
    return EstimatorCurve(ks, values, name="hillish")


def hillish_pair_curve(xi, eta, ks) -> tuple[EstimatorCurve, EstimatorCurve]:
    """Hillish curves for ``(xi, eta)`` and ``(xi, -eta)`` over ``ks``."""
    eta = np.asarray(eta, dtype=float)
    pos = hillish_curve(xi, eta, ks)
    neg = hillish_curve(xi, -eta, ks)
    pos.name, neg.name = "hillish", "hillish_neg"
    return pos, neg
