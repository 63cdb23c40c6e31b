"""Shared fixtures: the three 2007 trading-day scenarios, calibrated."""
from pathlib import Path
from types import SimpleNamespace

import pytest

from cixopt.cli import calibrate_scenario
from cixopt.curves import load_scenario
from cixopt.pricing import OptionSpec, implied_vol

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"

# quoted payer ("put") anchor per trading day: strike bps -> price bps
ANCHORS = {
    "march-21-2007": (200.0, 299.73),
    "aug-14-2007": (300.0, 559.60),
    "dec-06-2007": (325.0, 452.15),
}


def scenario_path(label: str) -> Path:
    return SCENARIO_DIR / f"{label}.json"


@pytest.fixture(scope="session")
def scenarios():
    return {label: load_scenario(scenario_path(label)) for label in ANCHORS}


@pytest.fixture(scope="session")
def pipelines(scenarios):
    """Calibrated scenario plus the flat vol backed out from its anchor quote."""
    out = {}
    for label, scn in scenarios.items():
        cal = calibrate_scenario(scn)
        strike_bps, price_bps = ANCHORS[label]
        anchor = OptionSpec(
            strike=strike_bps / 1e4,
            expiry=scn.option_expiry,
            maturity=scn.option_expiry + scn.index_maturity,
            side="payer",
        )
        sigma = implied_vol(cal.forward, anchor, price_bps / 1e4)
        out[label] = SimpleNamespace(scenario=scn, cal=cal, sigma=sigma)
    return out


@pytest.fixture(scope="session")
def aug(pipelines):
    return pipelines["aug-14-2007"]


@pytest.fixture(scope="session")
def march(pipelines):
    return pipelines["march-21-2007"]


@pytest.fixture(scope="session")
def dec(pipelines):
    return pipelines["dec-06-2007"]
