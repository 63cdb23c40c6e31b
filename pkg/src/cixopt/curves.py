"""Discounting, payment schedules and market scenario ingestion.

Conventions used throughout the package:

- times are year fractions measured from the valuation date (t = 0),
- rates, spreads and strikes are decimals (0.0361, not 361 bps),
- discounting is flat continuously compounded, one rate per scenario.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

PAYMENT_FREQUENCY = 4  # quarterly premium grid, accrual 1/4 per period
VALID_FREQUENCIES = (1, 2, 4, 12)


@dataclass(frozen=True)
class DiscountCurve:
    """Flat continuously compounded zero curve; discount(t) = exp(-r*t)."""

    zero_rate: float
    valuation_date: float = 0.0

    def discount(self, t: float) -> float:
        """Discount factor to year fraction t >= 0."""
        if t < 0:
            raise ValueError(f"discount time must be >= 0, got {t}")
        return math.exp(-self.zero_rate * t)


@dataclass(frozen=True)
class Schedule:
    """Premium payment grid over (start, maturity] with accrual fractions."""

    start: float
    maturity: float
    payment_times: tuple[float, ...]
    accruals: tuple[float, ...]

    def __post_init__(self):
        if self.start < 0:
            raise ValueError("schedule start must be >= 0")
        if self.maturity <= self.start:
            raise ValueError("schedule maturity must exceed start")
        if not self.payment_times or len(self.payment_times) != len(self.accruals):
            raise ValueError("payment_times and accruals must be non-empty and aligned")
        prev = self.start
        for t, a in zip(self.payment_times, self.accruals):
            if t <= prev:
                raise ValueError("payment times must be strictly increasing and > start")
            if a <= 0:
                raise ValueError("accrual fractions must be positive")
            prev = t


def build_schedule(start: float, maturity: float, frequency: int = PAYMENT_FREQUENCY) -> Schedule:
    """Equally spaced schedule with accrual 1/frequency per period.

    The tenor (maturity - start) must be a whole number of periods; day-count
    subtleties are deliberately out of scope.
    """
    if frequency not in VALID_FREQUENCIES:
        raise ValueError(f"frequency must be one of {VALID_FREQUENCIES}, got {frequency}")
    if start < 0:
        raise ValueError("schedule start must be >= 0")
    tenor = maturity - start
    if tenor <= 0:
        raise ValueError("schedule tenor must be positive")
    n = round(tenor * frequency)
    step = 1.0 / frequency
    if n < 1 or abs(n * step - tenor) > 1e-9:
        raise ValueError(f"tenor {tenor} is not a whole number of 1/{frequency} periods")
    times = tuple(start + (j + 1) * step for j in range(n - 1)) + (maturity,)
    return Schedule(start, maturity, times, (step,) * n)


@dataclass(frozen=True)
class MarketScenario:
    """One trading day of inputs driving the whole pricing pipeline.

    ``index_maturity`` is the tenor of the index the option delivers into, so
    the forward underlying runs from ``option_expiry`` to
    ``option_expiry + index_maturity`` while calibration uses the spot index
    over (0, index_maturity].  ``bid_ask`` optionally maps strike (in bps) to
    the bid/ask half-spread threshold (in bps) used to flag price differences.

    A zero ``index_spread`` parses fine but is rejected as degenerate once
    calibration is attempted.
    """

    label: str
    index_spread: float
    recovery: float
    n_names: int
    rho_grid: tuple[float, ...]
    zero_rate: float
    index_maturity: float
    option_expiry: float
    strikes: tuple[float, ...]
    bid_ask: dict[float, float] | None = None

    def __post_init__(self):
        if not self.label:
            raise ValueError("scenario label must be non-empty")
        if not math.isfinite(self.index_spread) or self.index_spread < 0:
            raise ValueError(f"index_spread must be a finite decimal >= 0, got {self.index_spread}")
        if not 0 <= self.recovery < 1:
            raise ValueError(f"recovery must be in [0, 1), got {self.recovery}")
        if self.n_names < 1:
            raise ValueError("n_names must be a positive integer")
        if not self.rho_grid:
            raise ValueError("rho_grid must be non-empty")
        for rho in self.rho_grid:
            if not 0 <= rho <= 1:
                raise ValueError(f"correlation grid points must be in [0, 1], got {rho}")
        if self.option_expiry <= 0 or self.option_expiry >= self.index_maturity:
            raise ValueError("need 0 < option_expiry < index_maturity")
        if not self.strikes:
            raise ValueError("strikes must be non-empty")
        for k in self.strikes:
            if k <= 0:
                raise ValueError(f"strikes must be positive decimals, got {k}")


_SCENARIO_FIELDS = {
    "label": str,
    "index_spread": (int, float),
    "recovery": (int, float),
    "n_names": int,
    "rho_grid": list,
    "zero_rate": (int, float),
    "index_maturity": (int, float),
    "option_expiry": (int, float),
    "strikes": list,
}


def scenario_from_dict(data: dict) -> MarketScenario:
    """Build a scenario from a parsed JSON object, rejecting schema drift."""
    if not isinstance(data, dict):
        raise ValueError("scenario file must contain a JSON object")
    unknown = set(data) - set(_SCENARIO_FIELDS) - {"bid_ask"}
    if unknown:
        raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
    missing = set(_SCENARIO_FIELDS) - set(data)
    if missing:
        raise ValueError(f"missing scenario fields: {sorted(missing)}")
    for name, typ in _SCENARIO_FIELDS.items():
        if not isinstance(data[name], typ) or isinstance(data[name], bool):
            raise ValueError(f"scenario field {name!r} has wrong type")
    bid_ask = None
    if data.get("bid_ask") is not None:
        if not isinstance(data["bid_ask"], dict):
            raise ValueError("bid_ask must map strike bps to threshold bps")
        try:
            bid_ask = {float(k): float(v) for k, v in data["bid_ask"].items()}
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bid_ask must map strike bps to threshold bps: {exc}") from None
    return MarketScenario(
        label=data["label"],
        index_spread=float(data["index_spread"]),
        recovery=float(data["recovery"]),
        n_names=data["n_names"],
        rho_grid=tuple(float(r) for r in data["rho_grid"]),
        zero_rate=float(data["zero_rate"]),
        index_maturity=float(data["index_maturity"]),
        option_expiry=float(data["option_expiry"]),
        strikes=tuple(float(k) for k in data["strikes"]),
        bid_ask=bid_ask,
    )


def load_scenario(path) -> MarketScenario:
    """Load a scenario JSON file; raises ValueError/OSError on bad input."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return scenario_from_dict(data)


def spot_schedule(scenario: MarketScenario) -> Schedule:
    """Quarterly spot index schedule used to calibrate the intensity."""
    return build_schedule(0.0, scenario.index_maturity)


def forward_schedule(scenario: MarketScenario) -> Schedule:
    """Quarterly schedule of the index the option delivers into at expiry."""
    return build_schedule(scenario.option_expiry, scenario.option_expiry + scenario.index_maturity)
