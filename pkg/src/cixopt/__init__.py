"""Credit index option pricing lab.

Prices credit index options two ways: the standard market Black formula on the
loss-adjusted spread, and an arbitrage-free variant that prices the portfolio
wipe-out event separately instead of ignoring it.  Includes intensity
calibration, a one-factor Gaussian copula for the wipe-out probability, a
Monte Carlo cross-check and a scenario CLI.
"""

from .copula import (
    ArmageddonAdjustment,
    CopulaParams,
    adjusted_spread,
    armageddon_adjustment,
    armageddon_prob,
    no_armageddon_fep,
    tranched_loss,
)
from .curves import (
    DiscountCurve,
    MarketScenario,
    Schedule,
    build_schedule,
    forward_schedule,
    load_scenario,
    scenario_from_dict,
    spot_schedule,
)
from .hazard import CalibrationError, HazardCurve, calibrate_flat_intensity
from .index_legs import (
    IndexLegs,
    annuity,
    build_legs,
    front_end_protection,
    forward_index_value,
    market_adjusted_spread,
    protection_leg,
    single_name_cds_spread,
)
from .mc import McConfig, McEstimate, simulate_armageddon, simulate_loss_given_no_armageddon
from .pricing import (
    OptionSpec,
    PriceBreakdown,
    VolInversionError,
    black,
    black_put,
    implied_vol,
    price_market,
    price_noarb,
)

__version__ = "0.1.0"

__all__ = [
    "ArmageddonAdjustment",
    "CalibrationError",
    "CopulaParams",
    "DiscountCurve",
    "HazardCurve",
    "IndexLegs",
    "MarketScenario",
    "McConfig",
    "McEstimate",
    "OptionSpec",
    "PriceBreakdown",
    "Schedule",
    "VolInversionError",
    "adjusted_spread",
    "annuity",
    "armageddon_adjustment",
    "armageddon_prob",
    "black",
    "black_put",
    "build_legs",
    "build_schedule",
    "calibrate_flat_intensity",
    "forward_index_value",
    "forward_schedule",
    "front_end_protection",
    "implied_vol",
    "load_scenario",
    "market_adjusted_spread",
    "no_armageddon_fep",
    "price_market",
    "price_noarb",
    "protection_leg",
    "scenario_from_dict",
    "simulate_armageddon",
    "simulate_loss_given_no_armageddon",
    "single_name_cds_spread",
    "spot_schedule",
    "tranched_loss",
]
