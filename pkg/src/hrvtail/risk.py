"""Probabilities of half-plane regions ``{z2 - c*z1 > x}`` outside the wedge.

Plain regular variation gives such regions probability zero when the limit
measure sits inside the wedge.  The estimate here uses the hidden regime:

    p(x) ~ x**-a0 * (k/n) * b0**a0 * mean_i( (mu2_i - c*mu1_i)_+ ** a0 )

where ``mu_i`` are the atoms of the empirical angular measure.
"""

from __future__ import annotations

import csv
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .angular import empirical_s0, fit_wedge, top_k_angles
from .errors import InsufficientExceedances, NonPositiveThreshold, WedgeConflict, WedgeConflictWarning
from .geometry import Wedge, as_sample, wedge_from_angles
from .hrv import estimate_alpha0, estimate_b0, k_for_b0
from .simgen import THETA_CORE, gen_example2

# slopes of the two portfolios studied on the strong-dependence model
PORTFOLIO_SLOPES = {"P1": 2.0, "P2": 3.0}
TRUE_ALPHA0 = 2.5


@dataclass(frozen=True)
class RiskQuery:
    c: float
    x: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not self.x > 0:
            raise NonPositiveThreshold(f"x must be positive, got {self.x}")


@dataclass
class RiskEstimate:
    p_hat: float
    alpha0_used: float
    b0_used: float
    k_used: int
    n: int
    c: float
    x: float
    angular_mean: float
    flags: list = field(default_factory=list)

    def recompute(self) -> float:
        return self.x ** -self.alpha0_used * (self.k_used / self.n) * self.b0_used ** self.alpha0_used * self.angular_mean

    def at(self, x: float) -> float:
        """Estimate for another threshold; exact power scaling in ``x``."""
        if not x > 0:
            raise NonPositiveThreshold(f"x must be positive, got {x}")
        return self.p_hat * (x / self.x) ** -self.alpha0_used


def risk_estimate(points, w: Wedge, query: RiskQuery, alpha0: float, k: int | None = None,
                  b0: float | None = None, on_conflict: str = "raise") -> RiskEstimate:
    """Estimate ``P(Z2 - c*Z1 > x)`` through the hidden regime.

    Give either ``k`` (then ``b0`` is the k-th largest distance to ``w``) or
    ``b0`` (then ``k`` is the number of points at least that far away).
    ``c <= a_u`` means the region meets the wedge; this raises
    ``WedgeConflict`` unless ``on_conflict="warn"``.
    """
    z = as_sample(points)
    if not alpha0 > 0:
        raise ValueError(f"alpha0 must be positive, got {alpha0}")
    flags = []
    if query.c <= w.a_u:
        msg = f"c={query.c} <= a_u={w.a_u}: the region meets the wedge, so plain MRV already gives it mass"
        if on_conflict == "raise":
            raise WedgeConflict(msg)
        warnings.warn(msg, WedgeConflictWarning, stacklevel=2)
        flags.append("wedge conflict")
    if b0 is not None:
        k = k_for_b0(z, w, b0)
        if k == 0:
            raise InsufficientExceedances(f"no point lies at distance >= {b0} from the wedge")
        b0_used = float(b0)
    elif k is not None:
        b0_used = estimate_b0(z, w, k)
    else:
        raise ValueError("give either k or b0")
    s0 = empirical_s0(z, w, k)
    g = s0.mu[:, 1] - query.c * s0.mu[:, 0]
    contrib = np.where(g > 0, np.maximum(g, 0.0) ** alpha0, 0.0)
    ang = float(np.dot(s0.weights, contrib))
    n = len(z)
    p = query.x ** -alpha0 * (k / n) * b0_used ** alpha0 * ang
    if p > 1:
        flags.append("estimate exceeds 1")
    return RiskEstimate(float(p), float(alpha0), b0_used, int(k), n, query.c, query.x, ang, flags)


def exact_halfplane_example2(c: float, x: float) -> float:
    """Exact ``P(X2 - c*X1 > x)`` for the strong-dependence model, ``c >= 1.5``.

    Only the light component with angle below ``1/(1+c)`` reaches the region,
    and for ``x >= 1`` the answer is ``(1.25 / (2 * 3.5 * (1 + c))) * x**-2.5``.
    Below 1 the lower support of the Pareto radius caps the probability.
    """
    if not x > 0:
        raise NonPositiveThreshold(f"x must be positive, got {x}")
    lo, hi = THETA_CORE
    m = 1.0 + c
    if 1.0 / m > lo:
        raise ValueError(f"closed form needs c >= {1 / lo - 1}, got {c}")
    density = 1.0 / (1.0 - (hi - lo))
    a = TRUE_ALPHA0
    u = min(x, 1.0)
    # integral over v = 1 - m*theta in (0, 1) of P(R > x / v)
    integral = u ** (a + 1) / ((a + 1) * x**a) + max(0.0, 1.0 - x)
    return 0.5 * density * integral / m


def exact_p_example2(variant: str, x: float) -> float:
    """``P1``: ``P(X2 - 2 X1 > x)``; ``P2``: ``P(X2 - 3 X1 > x)``."""
    return exact_halfplane_example2(PORTFOLIO_SLOPES[str(variant).upper()], x)


@dataclass
class RatioStudyConfig:
    """Settings for the replicated estimate-to-truth ratio study.

    ``wedge=None`` uses the true wedge for the known-index estimates and a
    wedge fitted per replication (angles of the ``k_angles`` largest points,
    quantiles ``q_low``/``q_high``) for the estimated ones.  A given wedge is
    used for both.  ``k`` defaults to the count of points at distance at
    least ``b0``.
    """

    seed: int = 0
    b0: float = 2.0
    xs: tuple = (1.0, 4.0)
    variants: tuple = ("P1", "P2")
    wedge: Wedge | None = None
    k_angles: int = 100
    q_low: float = 0.05
    q_high: float = 0.95
    k_alpha0: int | None = None


QUANTITIES = ("pbar", "phat")


@dataclass
class StudyTable:
    rows: list
    reps: int
    n: int

    def ratios(self, quantity: str, x: float) -> np.ndarray:
        return np.array([r[3] for r in self.rows if r[1] == quantity and r[2] == x])

    def summary(self) -> list[dict]:
        keys = []
        for r in self.rows:
            if (r[1], r[2]) not in keys:
                keys.append((r[1], r[2]))
        out = []
        for q, x in keys:
            v = self.ratios(q, x)
            v = v[np.isfinite(v)]
            if len(v) == 0:
                stats = [math.nan] * 5
            else:
                stats = [float(s) for s in (v.min(), *np.percentile(v, [25, 50, 75]), v.max())]
            out.append(dict(zip(("quantity", "x", "min", "q1", "median", "q3", "max"), (q, x, *stats))))
        return out

    def median(self, quantity: str, x: float) -> float:
        return float(np.median(self.ratios(quantity, x)))

    def write(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["rep", "quantity", "x", "ratio"])
            for r in self.rows:
                wr.writerow([r[0], r[1], repr(float(r[2])), repr(float(r[3]))])

    def write_summary(self, path) -> None:
        rows = self.summary()
        with open(path, "w", newline="") as fh:
            wr = csv.DictWriter(fh, fieldnames=list(rows[0]) if rows else ["quantity"])
            wr.writeheader()
            for r in rows:
                wr.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})


def _one_replication(args):
    rep, n, cfg = args
    x = gen_example2(n, cfg.seed + rep)
    true_w = wedge_from_angles(*THETA_CORE)
    w_bar = cfg.wedge or true_w
    # fitted wedges are often invalid or wider than c; the study reports them anyway
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        w_hat = fit_wedge(top_k_angles(x, cfg.k_angles), cfg.q_low, cfg.q_high) if cfg.wedge is None else cfg.wedge
        k_hat = k_for_b0(x, w_hat, cfg.b0)
        a0_hat = estimate_alpha0(x, w_hat, cfg.k_alpha0 or k_hat)["pooled"]
        ests = []
        for variant in cfg.variants:
            c = PORTFOLIO_SLOPES[variant]
            bar = risk_estimate(x, w_bar, RiskQuery(c, 1.0), TRUE_ALPHA0, b0=cfg.b0, on_conflict="warn")
            hat = risk_estimate(x, w_hat, RiskQuery(c, 1.0), a0_hat, b0=cfg.b0, on_conflict="warn")
            ests.append((variant, c, bar, hat))
    rows = []
    for variant, c, bar, hat in ests:
        tag = variant[-1]
        for xv in cfg.xs:
            truth = exact_halfplane_example2(c, xv)
            rows.append((rep, f"pbar{tag}", float(xv), bar.at(xv) / truth))
            rows.append((rep, f"phat{tag}", float(xv), hat.at(xv) / truth))
    return rows


def ratio_study(reps: int, n: int, config: RatioStudyConfig | None = None, workers: int = 1) -> StudyTable:
    """Replicate the strong-dependence model and compare estimates to truth.

    Replication ``i`` draws its sample with seed ``config.seed + i``, so the
    table does not depend on ``workers``.
    """
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    cfg = config or RatioStudyConfig()
    jobs = [(i, n, cfg) for i in range(reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_one_replication, jobs))
    else:
        parts = [_one_replication(j) for j in jobs]
    return StudyTable([r for p in parts for r in p], reps, n)
