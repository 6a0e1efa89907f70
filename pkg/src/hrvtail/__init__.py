"""Hidden regular variation under strong asymptotic dependence.

Tools to detect multivariate regular variation concentrated on a wedge,
look for a second, lighter regime outside it, and estimate probabilities
of regions the first regime assigns zero mass.
"""

__version__ = "0.1.0"

from .geometry import Branch, Point2, Wedge, dist_to_wedge, gpolar, l1_polar, to_diamond, wedge_from_angles
from .tailest import alt_hill_curve, hill, hillish, hillish_pair_curve, qq_slope
from .angular import empirical_s0, fit_wedge, top_k_angles
from .hrv import DetectConfig, HrvReport, branch_transform, detect, estimate_alpha0, estimate_b0
from .risk import RiskQuery, exact_p_example2, ratio_study, risk_estimate
from .simgen import gen_example1, gen_example2, sample_pareto

__all__ = [
    "Branch", "Point2", "Wedge", "dist_to_wedge", "gpolar", "l1_polar", "to_diamond", "wedge_from_angles",
    "alt_hill_curve", "hill", "hillish", "hillish_pair_curve", "qq_slope",
    "empirical_s0", "fit_wedge", "top_k_angles",
    "DetectConfig", "HrvReport", "branch_transform", "detect", "estimate_alpha0", "estimate_b0",
    "RiskQuery", "exact_p_example2", "ratio_study", "risk_estimate",
    "gen_example1", "gen_example2", "sample_pareto",
]
