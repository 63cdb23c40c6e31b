"""Portfolio wipe-out probability under the one-factor Gaussian copula.

The wipe-out ("armageddon") event is the default of every name in the pool
before the option expiry.  Its probability feeds two adjustments: the part of
the front-end protection that survives the knock-out, and the downward shift
from the loss-adjusted market spread to the arbitrage-free spread.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.stats import norm

from .curves import DiscountCurve
from .index_legs import IndexLegs

QUAD_NODES = 128
COMONOTONE_EPS = 1e-6
NEGATIVE_FEP_TOL = 1e-12
# Conditional default probabilities outside (_TAIL_EPS, 1 - _HEAD_EPS/n) make
# the n-th power indistinguishable from 0 or 1 in double precision.
_TAIL_EPS = 1e-18
_HEAD_EPS = 1e-15
_FACTOR_BOUND = 9.0


@dataclass(frozen=True)
class CopulaParams:
    """Flat correlation, pool size and per-name default probability at the horizon."""

    rho: float
    n_names: int
    default_prob: float

    def __post_init__(self):
        if not 0 <= self.rho <= 1:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.n_names < 1:
            raise ValueError("n_names must be a positive integer")
        if not 0 <= self.default_prob < 1:
            raise ValueError(f"default_prob must be in [0, 1), got {self.default_prob}")


@dataclass(frozen=True)
class ArmageddonAdjustment:
    """Wipe-out probability with the two quantities it corrects."""

    q_arm: float
    fep_noarm: float
    adjusted_spread: float


@lru_cache(maxsize=8)
def _gl_rule(nodes: int):
    x, w = leggauss(nodes)
    return x, w


def conditional_default_prob(params: CopulaParams, m) -> np.ndarray:
    """Per-name default probability conditional on the market factor m."""
    c = norm.ppf(params.default_prob)
    return norm.cdf((c - math.sqrt(params.rho) * np.asarray(m)) / math.sqrt(1.0 - params.rho))


def armageddon_prob(params: CopulaParams, nodes: int = QUAD_NODES) -> float:
    """Probability that all n names default before the horizon.

    Conditional on the factor m each name defaults independently with
    probability Phi((C - sqrt(rho) m) / sqrt(1 - rho)), C = Phi^{-1}(p), so the
    all-default probability is the factor-density integral of the n-th power of
    that.  For large n and high rho the power is a sharp sigmoid in m; a fixed
    Gauss-Legendre rule is therefore applied only on the bracket where the
    power moves between 1e-18 and 1 - 1e-15, and the saturated left tail is
    added in closed form.  Independence and comonotone endpoints short-circuit
    to p**n and p.
    """
    p, n, rho = params.default_prob, params.n_names, params.rho
    if p <= 0.0:
        return 0.0
    if rho <= 0.0:
        return p**n
    if rho >= 1.0 - COMONOTONE_EPS:
        return p
    c = norm.ppf(p)
    sq_rho = math.sqrt(rho)
    sq_res = math.sqrt(1.0 - rho)
    z_lo = norm.ppf(math.exp(math.log(_TAIL_EPS) / n))
    z_hi = -norm.ppf(-math.expm1(math.log1p(-_HEAD_EPS) / n))
    m_lo = max((c - sq_res * z_hi) / sq_rho, -_FACTOR_BOUND)
    m_hi = min((c - sq_res * z_lo) / sq_rho, _FACTOR_BOUND)
    tail = norm.cdf(m_lo)
    if m_hi <= m_lo:
        return float(tail)
    x, w = _gl_rule(nodes)
    m = 0.5 * (m_hi - m_lo) * x + 0.5 * (m_hi + m_lo)
    g = norm.cdf((c - sq_rho * m) / sq_res) ** n
    return float(tail + 0.5 * (m_hi - m_lo) * np.dot(w, norm.pdf(m) * g))


def no_armageddon_fep(
    legs: IndexLegs,
    q_arm: float,
    recovery: float,
    curve: DiscountCurve,
    expiry: float,
) -> float:
    """Front-end protection restricted to no-wipe-out states.

    On the wipe-out event the accumulated loss is the full (1-R), so the
    knocked-out part of the protection is worth (1-R) P(0,T) q_arm exactly.
    """
    value = legs.fep_value - (1.0 - recovery) * curve.discount(expiry) * q_arm
    if value < -NEGATIVE_FEP_TOL:
        raise ValueError(
            f"inconsistent inputs: no-armageddon protection is negative ({value:.3e})"
        )
    return max(value, 0.0)


def adjusted_spread(legs: IndexLegs, fep_noarm: float) -> float:
    """Arbitrage-free spread: zero-value strike restricted to no-wipe-out states."""
    if legs.annuity <= 0:
        raise ValueError("adjusted spread is undefined: annuity is not positive")
    return (legs.protection_value + fep_noarm) / legs.annuity


def armageddon_adjustment(
    legs: IndexLegs,
    params: CopulaParams,
    recovery: float,
    curve: DiscountCurve,
    expiry: float,
    nodes: int = QUAD_NODES,
) -> ArmageddonAdjustment:
    """Bundle q_arm, the surviving front-end protection and the adjusted spread."""
    q = armageddon_prob(params, nodes)
    fep_hat = no_armageddon_fep(legs, q, recovery, curve, expiry)
    return ArmageddonAdjustment(q_arm=q, fep_noarm=fep_hat, adjusted_spread=adjusted_spread(legs, fep_hat))


def tranched_loss(loss: float, attachment: float, detachment: float) -> float:
    """Loss of the [attachment, detachment) tranche, as a fraction of its width."""
    if not 0.0 <= attachment < detachment <= 1.0:
        raise ValueError(f"need 0 <= attachment < detachment <= 1, got [{attachment}, {detachment})")
    if not 0.0 <= loss <= 1.0:
        raise ValueError(f"loss must be in [0, 1], got {loss}")
    value = (max(loss - attachment, 0.0) - max(loss - detachment, 0.0)) / (detachment - attachment)
    # cancellation can push the saturated ends a few ulps outside [0, 1]
    return min(max(value, 0.0), 1.0)
