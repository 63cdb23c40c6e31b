"""Deterministic default intensity curves and their calibration to index quotes."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .curves import DiscountCurve, Schedule

MAX_INTENSITY = 20.0
PAR_RESIDUAL_TOL = 1e-12


class CalibrationError(RuntimeError):
    """No admissible intensity reproduces the input quote."""


@dataclass(frozen=True)
class HazardCurve:
    """Piecewise-constant intensity: pillars[i] = (t_i, lambda_i).

    lambda_i applies on (t_{i-1}, t_i]; the last intensity extends flat beyond
    the final pillar, so a single pillar is a flat curve.
    """

    pillars: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.pillars:
            raise ValueError("hazard curve needs at least one pillar")
        prev = 0.0
        for t, lam in self.pillars:
            if t <= prev:
                raise ValueError("pillar times must be strictly increasing and > 0")
            if lam < 0:
                raise ValueError(f"intensities must be >= 0, got {lam}")
            prev = t

    @classmethod
    def flat(cls, intensity: float, horizon: float = 1.0) -> "HazardCurve":
        return cls(((horizon, intensity),))

    def cumulative_hazard(self, t: float) -> float:
        """Integral of the intensity over [0, t]."""
        if t < 0:
            raise ValueError(f"time must be >= 0, got {t}")
        total = 0.0
        prev = 0.0
        for pt, lam in self.pillars:
            if t <= pt:
                return total + lam * (t - prev)
            total += lam * (pt - prev)
            prev = pt
        return total + self.pillars[-1][1] * (t - prev)

    def survival(self, t: float) -> float:
        """Survival probability exp(-integrated intensity), exact for this curve."""
        return math.exp(-self.cumulative_hazard(t))


def calibrate_flat_intensity(
    spread: float,
    recovery: float,
    schedule: Schedule,
    curve: DiscountCurve,
) -> HazardCurve:
    """Solve for the flat intensity that reprices the spot index quote.

    The par condition equates the protection leg to spread times the premium
    annuity.  The residual is monotone in the intensity, so a bracket grown
    geometrically from the credit-triangle guess spread/(1-R) always contains
    the root when one exists in (0, 20]; otherwise the quote is declared
    uncalibratable.
    """
    if spread < 0:
        raise CalibrationError(f"spread must be >= 0, got {spread}")
    if not 0 <= recovery < 1:
        raise CalibrationError(f"recovery must be in [0, 1), got {recovery}")
    if schedule.start != 0.0:
        raise ValueError("calibration expects a spot schedule starting at 0")
    horizon = schedule.maturity
    if spread == 0.0:
        return HazardCurve.flat(0.0, horizon)

    from .index_legs import annuity, protection_leg

    def residual(lam: float) -> float:
        hz = HazardCurve.flat(lam, horizon)
        return protection_leg(hz, curve, schedule, recovery) - spread * annuity(hz, curve, schedule)

    lam0 = min(spread / (1.0 - recovery), MAX_INTENSITY)
    lo = hi = lam0
    for _ in range(200):
        if residual(lo) < 0:
            break
        lo /= 2.0
    else:
        raise CalibrationError("could not bracket the par intensity from below")
    while residual(hi) < 0:
        hi *= 2.0
        if hi >= MAX_INTENSITY:
            hi = MAX_INTENSITY
            if residual(hi) < 0:
                raise CalibrationError(
                    f"spread {spread} is too large: no intensity in (0, {MAX_INTENSITY}] prices it"
                )
            break
    lam = brentq(residual, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    if abs(residual(lam)) > PAR_RESIDUAL_TOL:
        raise CalibrationError(f"par residual {residual(lam):.3e} above tolerance")
    return HazardCurve.flat(lam, horizon)
