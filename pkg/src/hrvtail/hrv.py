"""Detection of hidden regular variation outside a wedge.

Each side of the wedge is turned into a pair ``(xi, eta)``: ``xi`` is the
Euclidean distance to the nearest boundary ray and ``eta`` the slope ratio.
Above the wedge ``eta = z2 / z1``, below it ``eta = z1 / z2``.  Under hidden
regular variation ``xi`` has a power tail with index ``alpha0 >= alpha`` and
the pair follows a conditional extreme value model with a product limit,
which is what the Hillish curves check.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .angular import DEFAULT_K_ANGLES, fit_wedge, top_k_angles
from .errors import EmptyBranch, InsufficientData, InsufficientExceedances, OutOfDomain
from .geometry import INSIDE, Branch, Wedge, as_sample, region_filter_upper, wedge_distances
from .tailest import EstimatorCurve, hill, hillish_pair_curve, jitter, qq_slope

SCHEMA_VERSION = 1


@dataclass
class BranchData:
    branch: Branch
    xi: np.ndarray
    eta: np.ndarray
    index: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.xi)


def _branch(b) -> Branch:
    return b if isinstance(b, Branch) else Branch(str(b).lower())


def branch_transform(points, w: Wedge, branch, prefiltered: bool = False) -> BranchData:
    """Distances and slope ratios of the points strictly on one side of ``w``.

    Points on a coordinate axis get ``eta = inf`` (the ratio's limit); only
    the ranks of ``eta`` enter the Hillish statistic, where this ordering is
    the right one.

    ``prefiltered=True`` accepts output of ``region_filter_upper``, which may
    contain second-quadrant points.  There ``z2/z1`` is not monotone in the
    angle, so ``eta = -z1/z2`` is used instead: it orders first-quadrant
    points exactly as ``z2/z1`` does and stays finite across the axis.
    """
    z = as_sample(points)
    branch = _branch(branch)
    if prefiltered:
        if branch is not Branch.ABOVE:
            raise ValueError("prefiltered data only supports the branch above the wedge")
    elif np.any(z < 0):
        raise OutOfDomain("branch_transform needs first-quadrant points; filter returns with region_filter_upper")
    d, side = wedge_distances(z, w)
    code = 1 if branch is Branch.ABOVE else -1
    idx = np.flatnonzero(side == code)
    if len(idx) == 0:
        raise EmptyBranch(f"no points {branch.value} the wedge ({w.a_l:.4g}, {w.a_u:.4g})")
    z1, z2 = z[idx, 0], z[idx, 1]
    with np.errstate(divide="ignore"):
        if prefiltered:
            eta = -z1 / z2
        elif branch is Branch.ABOVE:
            eta = z2 / z1
        else:
            eta = z1 / z2
    return BranchData(branch, d[idx], eta, idx)


def _outside_distances(points, w):
    d, side = wedge_distances(as_sample(points), w)
    return d[side != INSIDE]


def estimate_alpha0(points, w: Wedge, k: int, branches=(Branch.ABOVE, Branch.BELOW), pooled: bool = True,
                    prefiltered: bool = False) -> dict:
    """Hill estimate of the hidden tail index from distances to ``w``.

    Returns ``{"pooled": value}`` when pooling, otherwise one entry per
    branch keyed by ``"above"`` / ``"below"``.
    """
    data = {}
    for b in branches:
        b = _branch(b)
        try:
            data[b.value] = branch_transform(points, w, b, prefiltered=prefiltered).xi
        except EmptyBranch:
            data[b.value] = np.empty(0)
    if pooled:
        xi = np.concatenate(list(data.values()))
        if len(xi) < k + 1:
            raise InsufficientExceedances(f"need {k + 1} points outside the wedge, have {len(xi)}")
        return {"pooled": hill(xi, k)}
    out = {}
    for name, xi in data.items():
        if len(xi) < k + 1:
            raise InsufficientExceedances(f"need {k + 1} points {name} the wedge, have {len(xi)}")
        out[name] = hill(xi, k)
    return out


def kth_largest(distances, k: int) -> float:
    d = np.asarray(distances, dtype=float)
    if k < 1 or len(d) < k:
        raise InsufficientExceedances(f"need {k} exceedances, have {len(d)}")
    return float(np.partition(d, len(d) - k)[len(d) - k])


def count_at_least(distances, b0: float) -> int:
    return int(np.sum(np.asarray(distances, dtype=float) >= b0))


def estimate_b0(points, w: Wedge, k: int) -> float:
    """The ``k``-th largest distance to ``w`` among points outside it."""
    return kth_largest(_outside_distances(points, w), k)


def k_for_b0(points, w: Wedge, b0: float) -> int:
    """Number of points at distance at least ``b0`` from ``w``."""
    if not b0 > 0:
        raise ValueError(f"b0 must be positive, got {b0}")
    return count_at_least(_outside_distances(points, w), b0)


@dataclass
class DetectConfig:
    """Settings for ``detect``.

    ``k`` is the number of order statistics used for the point estimates of
    alpha, alpha0 and b0; ``None`` means ``floor(k_frac * n)``.  The Hillish
    curves are summarised over ``[floor(stable_lo * n), floor(stable_hi * n)]``.

    ``returns=True`` is for data on the whole plane: marginal indices use the
    positive parts, the wedge is fitted on first-quadrant angles, and only
    the region nearest the upper boundary ray is analysed.
    """

    wedge: Wedge | None = None
    k_angles: int = DEFAULT_K_ANGLES
    q_low: float = 0.05
    q_high: float = 0.95
    k: int | None = None
    k_frac: float = 0.02
    stable_lo: float = 0.005
    stable_hi: float = 0.05
    alpha_margin: float = 0.3
    hillish_band: float = 0.15
    pooled: bool = True
    marginal: str = "hill"
    jitter_seed: int | None = None
    returns: bool = False

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["wedge"] = None if self.wedge is None else {"a_l": self.wedge.a_l, "a_u": self.wedge.a_u}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DetectConfig":
        d = dict(d)
        names = {f.name for f in dataclasses.fields(cls)}
        w = d.get("wedge")
        if w is not None and not isinstance(w, Wedge):
            d["wedge"] = Wedge(w["a_l"], w["a_u"])
        return cls(**{k: v for k, v in d.items() if k in names})


@dataclass
class HillishSummary:
    k_lo: int
    k_hi: int
    mean_pos: float
    mean_neg: float
    max_dev_pos: float
    max_dev_neg: float

    @property
    def max_dev(self) -> float:
        return max(self.max_dev_pos, self.max_dev_neg)


@dataclass
class HrvReport:
    wedge: Wedge
    wedge_fitted: bool
    n: int
    alpha_hat: float
    alpha_margins: list
    alpha0_above: float | None
    alpha0_below: float | None
    alpha0_pooled: float | None
    b0_hat: float | None
    k_used: int
    branch_sizes: dict
    hillish_summary: dict
    hrv_supported: dict
    flags: list
    config: dict
    curves: dict = field(default_factory=dict, repr=False)

    def to_dict(self, include_curves: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "generator": f"hrvtail {__version__}",
            "n": self.n,
            "wedge": self.wedge.to_dict(),
            "wedge_fitted": self.wedge_fitted,
            "alpha_hat": self.alpha_hat,
            "alpha_margins": list(self.alpha_margins),
            "alpha0_above": self.alpha0_above,
            "alpha0_below": self.alpha0_below,
            "alpha0_pooled": self.alpha0_pooled,
            "b0_hat": self.b0_hat,
            "k_used": self.k_used,
            "branch_sizes": dict(self.branch_sizes),
            "hillish_summary": {b: dataclasses.asdict(s) for b, s in self.hillish_summary.items()},
            "hrv_supported": dict(self.hrv_supported),
            "flags": list(self.flags),
            "config": self.config,
        }
        if include_curves:
            out["curves"] = {
                name: {"k": c.ks.tolist(), "value": c.values.tolist()} for name, c in self.curves.items()
            }
        return out


def _marginal_alpha(x, k, how):
    est = qq_slope if how == "qq" else hill
    pos = int(np.sum(x > 0))
    return est(x, min(k, pos - 1))


def _stable_range(n, cfg, size):
    lo = max(2, math.floor(cfg.stable_lo * n))
    hi = min(math.floor(cfg.stable_hi * n), size)
    return lo, hi


def detect(points, config: DetectConfig | None = None) -> HrvReport:
    """Run the full detection pipeline and collect the verdicts.

    Steps: marginal tail indices, wedge (given or fitted from the angles of
    the ``k_angles`` largest points), per-branch hidden index, Hillish pair
    curves per branch, and the scaling ``b0`` at ``k``.

    A branch is flagged as supporting HRV when its alpha0 exceeds alpha by
    more than ``alpha_margin`` and both Hillish curves stay within
    ``1 +/- hillish_band`` over the stable range.
    """
    cfg = config or DetectConfig()
    z = as_sample(points)
    n = len(z)
    flags = []
    if n < 1000:
        flags.append(f"small sample: n={n} < 1000")
    k = cfg.k if cfg.k is not None else max(2, math.floor(cfg.k_frac * n))
    if k >= n:
        raise InsufficientData(f"k={k} must be below n={n}")

    margins = [_marginal_alpha(z[:, j], k, cfg.marginal) for j in (0, 1)]
    alpha_hat = float(np.mean(margins))

    if cfg.wedge is not None:
        w, fitted = cfg.wedge, False
    else:
        ang = top_k_angles(z, min(cfg.k_angles, n))
        if np.any(z < 0):
            ang = ang.first_quadrant()
        w, fitted = fit_wedge(ang, cfg.q_low, cfg.q_high), True
    if not w.valid:
        flags.append(f"wedge ({w.a_l:.4g}, {w.a_u:.4g}) violates a_l <= 1 <= a_u")

    if cfg.returns:
        z = region_filter_upper(z, w)
        branches = [Branch.ABOVE]
    else:
        branches = [Branch.ABOVE, Branch.BELOW]
    alpha0 = {"above": None, "below": None}
    sizes = {"above": 0, "below": 0}
    summaries, supported, curves = {}, {}, {}
    xi_all = []
    for b in branches:
        name = b.value
        supported[name] = False
        try:
            bd = branch_transform(z, w, b, prefiltered=cfg.returns)
        except EmptyBranch:
            flags.append(f"no exceedances {name} wedge")
            continue
        sizes[name] = len(bd)
        xi_all.append(bd.xi)
        if len(bd) < 3:
            flags.append(f"too few points {name} wedge ({len(bd)})")
            continue
        alpha0[name] = hill(bd.xi, min(k, len(bd) - 1))
        eta = bd.eta if cfg.jitter_seed is None else jitter(bd.eta, cfg.jitter_seed)
        lo, hi = _stable_range(n, cfg, len(bd))
        if hi < lo:
            flags.append(f"stable k-range empty {name} wedge")
            continue
        ks = np.arange(lo, hi + 1)
        pos, neg = hillish_pair_curve(bd.xi, eta, ks)
        curves[f"hillish_{name}"] = pos
        curves[f"hillish_neg_{name}"] = neg
        s = HillishSummary(lo, hi, float(pos.values.mean()), float(neg.values.mean()),
                           float(np.max(np.abs(pos.values - 1))), float(np.max(np.abs(neg.values - 1))))
        summaries[name] = s
        gap = alpha0[name] - alpha_hat
        stable = s.max_dev <= cfg.hillish_band
        supported[name] = bool(gap > cfg.alpha_margin and stable)
        if abs(gap) <= cfg.alpha_margin:
            flags.append(f"alpha0 ~ alpha {name} wedge: HRV doubtful")
        elif gap < -cfg.alpha_margin:
            flags.append(f"alpha0 < alpha {name} wedge: inconsistent with HRV")
        if not stable:
            flags.append(f"Hillish curves leave 1 +/- {cfg.hillish_band} {name} wedge")

    xi_pool = np.concatenate(xi_all) if xi_all else np.empty(0)
    alpha0_pooled = hill(xi_pool, min(k, len(xi_pool) - 1)) if len(xi_pool) >= 3 else None
    b0_hat = kth_largest(xi_pool, min(k, len(xi_pool))) if len(xi_pool) else None

    return HrvReport(
        wedge=w, wedge_fitted=fitted, n=n, alpha_hat=alpha_hat, alpha_margins=margins,
        alpha0_above=alpha0["above"], alpha0_below=alpha0["below"], alpha0_pooled=alpha0_pooled,
        b0_hat=b0_hat, k_used=k, branch_sizes=sizes, hillish_summary=summaries,
        hrv_supported=supported, flags=flags, config=cfg.to_dict(), curves=curves,
    )
