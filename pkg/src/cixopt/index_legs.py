"""Leg values of the (forward) credit index and the spreads built from them.

Everything here is valued at t = 0 with no realized defaults, under the
homogeneous-portfolio convention: one intensity, one recovery, losses paid on
premium dates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .curves import DiscountCurve, Schedule
    from .hazard import HazardCurve


@dataclass(frozen=True)
class IndexLegs:
    """Valued legs of one index: protection, premium annuity, upfront protection.

    ``fep_value`` is the value of the protection covering losses between the
    option trade date and the index start (zero for a spot index).
    """

    protection_value: float
    annuity: float
    fep_value: float
    start: float
    maturity: float


def protection_leg(hazard: HazardCurve, curve: DiscountCurve, schedule: Schedule, recovery: float) -> float:
    """(1-R) times the discounted default mass of each period, paid on premium dates."""
    prev_s = hazard.survival(schedule.start)
    total = 0.0
    for t in schedule.payment_times:
        s = hazard.survival(t)
        total += curve.discount(t) * (prev_s - s)
        prev_s = s
    return (1.0 - recovery) * total


def annuity(hazard: HazardCurve, curve: DiscountCurve, schedule: Schedule) -> float:
    """Value of one unit of running spread on the surviving notional."""
    return sum(
        a * curve.discount(t) * hazard.survival(t)
        for t, a in zip(schedule.payment_times, schedule.accruals)
    )


def front_end_protection(hazard: HazardCurve, curve: DiscountCurve, expiry: float, recovery: float) -> float:
    """Value of the expected portfolio loss accumulated by the option expiry."""
    return curve.discount(expiry) * (1.0 - recovery) * (1.0 - hazard.survival(expiry))


def build_legs(hazard: HazardCurve, curve: DiscountCurve, schedule: Schedule, recovery: float) -> IndexLegs:
    """Value all legs of the index defined by ``schedule`` (spot or forward)."""
    return IndexLegs(
        protection_value=protection_leg(hazard, curve, schedule, recovery),
        annuity=annuity(hazard, curve, schedule),
        fep_value=front_end_protection(hazard, curve, schedule.start, recovery),
        start=schedule.start,
        maturity=schedule.maturity,
    )


def market_adjusted_spread(legs: IndexLegs) -> float:
    """Loss-adjusted spread: (protection + upfront protection) / annuity.

    Undefined when the annuity vanishes (every name defaulted); at t = 0 with
    no realized defaults the annuity is strictly positive.
    """
    if legs.annuity <= 0:
        raise ValueError("market-adjusted spread is undefined: annuity is not positive")
    return (legs.protection_value + legs.fep_value) / legs.annuity


def forward_index_value(legs: IndexLegs, strike: float) -> float:
    """Value of entering the loss-adjusted index as protection buyer at ``strike``."""
    return legs.protection_value + legs.fep_value - strike * legs.annuity


def single_name_cds_spread(hazard: HazardCurve, curve: DiscountCurve, schedule: Schedule, recovery: float) -> float:
    """Par spread of one name; equals the plain index spread under homogeneity."""
    return protection_leg(hazard, curve, schedule, recovery) / annuity(hazard, curve, schedule)
