"""Black kernel and the two credit index option formulas.

``price_market`` is the standard quotation formula: the annuity times a Black
call/put on the loss-adjusted market spread.  ``price_noarb`` prices the same
contract without ignoring the portfolio wipe-out event: the Black part runs on
the arbitrage-free spread and a payer receives the knocked-out protection
value on top.  At inception (t = 0, no realized defaults) the realized term of
the decomposition is identically zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.optimize import brentq
from scipy.stats import norm

from .copula import ArmageddonAdjustment
from .curves import DiscountCurve
from .index_legs import IndexLegs, market_adjusted_spread

VOL_BRACKET = (1e-4, 5.0)
PRICE_TOL = 1e-10

SIDES = ("payer", "receiver")


class VolInversionError(RuntimeError):
    """Target price is outside the range attainable by any admissible volatility."""


def _check_black_args(forward: float, strike: float, stdev: float):
    if forward <= 0 or strike <= 0:
        raise ValueError(f"forward and strike must be positive, got {forward}, {strike}")
    if stdev < 0:
        raise ValueError(f"total standard deviation must be >= 0, got {stdev}")


def black(forward: float, strike: float, stdev: float) -> float:
    """Undiscounted Black call S*N(d1) - K*N(d2).

    ``stdev`` is the total standard deviation sigma*sqrt(T); at zero it
    degenerates to the intrinsic value (S - K)+.
    """
    _check_black_args(forward, strike, stdev)
    if stdev == 0:
        return max(forward - strike, 0.0)
    d1 = (math.log(forward / strike) + 0.5 * stdev * stdev) / stdev
    d2 = d1 - stdev
    return float(forward * norm.cdf(d1) - strike * norm.cdf(d2))


def black_put(forward: float, strike: float, stdev: float) -> float:
    """Undiscounted Black put K*N(-d2) - S*N(-d1); parity with black() is exact."""
    _check_black_args(forward, strike, stdev)
    if stdev == 0:
        return max(strike - forward, 0.0)
    d1 = (math.log(forward / strike) + 0.5 * stdev * stdev) / stdev
    d2 = d1 - stdev
    return float(strike * norm.cdf(-d2) - forward * norm.cdf(-d1))


@dataclass(frozen=True)
class OptionSpec:
    """Contract terms of one index option; ``vol`` may be left unset for inversion."""

    strike: float
    expiry: float
    maturity: float
    side: str
    vol: float | None = None

    def __post_init__(self):
        if self.strike <= 0:
            raise ValueError(f"strike must be positive, got {self.strike}")
        if not 0 < self.expiry < self.maturity:
            raise ValueError("need 0 < expiry < maturity")
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.vol is not None and self.vol <= 0:
            raise ValueError(f"vol must be positive when set, got {self.vol}")


@dataclass(frozen=True)
class PriceBreakdown:
    """Option value split: Black part, wipe-out part, already-realized part."""

    black_term: float
    armageddon_term: float
    realized_term: float
    total: float


def _total_stdev(spec: OptionSpec) -> float:
    if spec.vol is None:
        raise ValueError("OptionSpec.vol must be set to price; use implied_vol to infer it")
    return spec.vol * math.sqrt(spec.expiry)


def price_market(legs: IndexLegs, spec: OptionSpec) -> float:
    """Standard market formula: annuity times Black on the loss-adjusted spread."""
    s_tilde = market_adjusted_spread(legs)
    v = _total_stdev(spec)
    kernel = black if spec.side == "payer" else black_put
    return legs.annuity * kernel(s_tilde, spec.strike, v)


def price_noarb(
    legs: IndexLegs,
    adjustment: ArmageddonAdjustment,
    spec: OptionSpec,
    curve: DiscountCurve,
    recovery: float,
) -> PriceBreakdown:
    """Wipe-out-aware formula, valued at inception.

    The payer collects (1-R) discounted from expiry whenever the whole pool
    defaults first, hence the additive term (1-R) P(0,T) q_arm.  For the
    receiver the wipe-out exercise value is -(1-R) < 0, so the event knocks the
    option out and only the Black part on the adjusted spread remains.
    """
    v = _total_stdev(spec)
    if spec.side == "payer":
        black_term = legs.annuity * black(adjustment.adjusted_spread, spec.strike, v)
        armageddon_term = (1.0 - recovery) * curve.discount(spec.expiry) * adjustment.q_arm
    else:
        black_term = legs.annuity * black_put(adjustment.adjusted_spread, spec.strike, v)
        armageddon_term = 0.0
    realized_term = 0.0
    return PriceBreakdown(
        black_term=black_term,
        armageddon_term=armageddon_term,
        realized_term=realized_term,
        total=black_term + armageddon_term + realized_term,
    )


def implied_vol(
    legs: IndexLegs,
    spec: OptionSpec,
    target_price: float,
    formula: str = "market",
    adjustment: ArmageddonAdjustment | None = None,
    curve: DiscountCurve | None = None,
    recovery: float | None = None,
) -> float:
    """Invert ``price_market`` or ``price_noarb`` for the flat volatility.

    Bracketed root search on vol in (1e-4, 5]; prices are strictly increasing
    in vol on both sides, so a sign check at the bracket ends decides
    attainability outright.
    """
    if formula not in ("market", "noarb"):
        raise ValueError(f"formula must be 'market' or 'noarb', got {formula!r}")
    if formula == "noarb" and (adjustment is None or curve is None or recovery is None):
        raise ValueError("noarb inversion needs adjustment, curve and recovery")

    def priced(vol: float) -> float:
        s = replace(spec, vol=vol)
        if formula == "market":
            return price_market(legs, s)
        return price_noarb(legs, adjustment, s, curve, recovery).total

    lo, hi = VOL_BRACKET
    f_lo = priced(lo) - target_price
    f_hi = priced(hi) - target_price
    if f_lo > 0 or f_hi < 0:
        raise VolInversionError(
            f"target {target_price} outside attainable range "
            f"[{f_lo + target_price:.6e}, {f_hi + target_price:.6e}]"
        )
    vol = brentq(lambda s: priced(s) - target_price, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=200)
    if abs(priced(vol) - target_price) > PRICE_TOL:
        raise VolInversionError(f"inversion residual above {PRICE_TOL}")
    return vol
