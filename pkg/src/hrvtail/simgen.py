"""Seeded generators for the two bivariate simulation models.

All randomness comes from ``numpy.random.Generator`` backed by PCG64,
seeded with ``numpy.random.default_rng(seed)``.  Draws are vectorised and
made in a fixed order, one full array per variable, so a given
``(n, seed)`` always yields the same sample.

Pareto(alpha) means ``P(Z > x) = x**-alpha`` for ``x >= 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveAlpha

# angular support of the heavy component in the strong-dependence model
THETA_CORE = (0.4, 0.6)


class Model(str, enum.Enum):
    EXAMPLE1 = "example1"
    EXAMPLE2 = "example2"


@dataclass(frozen=True)
class SimConfig:
    n: int
    seed: int = 0
    model: Model = Model.EXAMPLE2

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        object.__setattr__(self, "model", Model(self.model))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _pareto(rng, alpha, n):
    # 1 - U lies in (0, 1], so the draw is finite
    return (1.0 - rng.random(n)) ** (-1.0 / alpha)


def sample_pareto(alpha: float, n: int, seed=None) -> np.ndarray:
    """Draw ``n`` Pareto(alpha) variates by inversion, ``Z = U**(-1/alpha)``."""
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    return _pareto(_rng(seed), alpha, n)


def gen_example1(n: int, seed=None) -> np.ndarray:
    """Full asymptotic dependence: every point lies on y=x, y=1.5x or y=0.5x.

    With probability 1/2 the point is ``(Z1, Z1)`` with Z1 ~ Pareto(1.5);
    otherwise ``(Z2, 1.5 Z2)`` or ``(Z2, 0.5 Z2)`` with equal chance and
    Z2 ~ Pareto(2.5).  Draw order: B1, Z1, Z2, B2.
    """
    rng = _rng(seed)
    b1 = rng.random(n) < 0.5
    z1 = _pareto(rng, 1.5, n)
    z2 = _pareto(rng, 2.5, n)
    b2 = rng.random(n) < 0.5
    x1 = np.where(b1, z1, z2)
    x2 = np.where(b1, z1, np.where(b2, 1.5 * z2, 0.5 * z2))
    return np.column_stack([x1, x2])


def _theta_outside_core(rng, n):
    # inverse CDF of Uniform([0, 1] minus [0.4, 0.6)): stretch [0, 0.8) over the two pieces
    lo, hi = THETA_CORE
    v = (1.0 - (hi - lo)) * rng.random(n)
    return np.where(v < lo, v, v + (hi - lo))


def gen_example2(n: int, seed=None, return_labels: bool = False):
    """Strong asymptotic dependence inside the wedge of angles [0.4, 0.6].

    ``X = R * (Theta, 1 - Theta)`` where with probability 1/2
    R ~ Pareto(1.5) and Theta ~ Uniform[0.4, 0.6], else R ~ Pareto(2.5) and
    Theta is uniform on the rest of [0, 1].  Draw order: B, R1, R2, Theta1,
    Theta2.

    With ``return_labels`` the Bernoulli mixing labels are returned too.
    """
    rng = _rng(seed)
    b = rng.random(n) < 0.5
    r1 = _pareto(rng, 1.5, n)
    r2 = _pareto(rng, 2.5, n)
    th1 = rng.uniform(*THETA_CORE, size=n)
    th2 = _theta_outside_core(rng, n)
    r = np.where(b, r1, r2)
    th = np.where(b, th1, th2)
    x = np.column_stack([r * th, r * (1.0 - th)])
    if return_labels:
        return x, b
    return x


def simulate(config: SimConfig) -> np.ndarray:
    if config.model is Model.EXAMPLE1:
        return gen_example1(config.n, config.seed)
    return gen_example2(config.n, config.seed)
