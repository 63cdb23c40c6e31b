"""Scenario runner for the pricing lab.

Three commands, all driven by a scenario JSON file:

- ``calibrate``    fit the flat intensity to the spot quote and report leg values
- ``table``        back out the flat vol from one anchor quote, then price the
                   strike-by-correlation grid under both formulas
- ``mc-validate``  cross-check quadrature quantities against Monte Carlo

Exit codes: 0 ok, 2 malformed input, 3 numerical failure (calibration or vol
inversion), 4 Monte Carlo validation failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from .copula import QUAD_NODES, CopulaParams, armageddon_adjustment, armageddon_prob
from .curves import (
    DiscountCurve,
    MarketScenario,
    forward_schedule,
    load_scenario,
    spot_schedule,
)
from .hazard import CalibrationError, HazardCurve, calibrate_flat_intensity
from .index_legs import IndexLegs, build_legs, market_adjusted_spread, single_name_cds_spread
from .mc import McConfig, McEstimate, simulate_armageddon, simulate_loss_given_no_armageddon
from .pricing import OptionSpec, VolInversionError, implied_vol, price_market, price_noarb

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

BPS = 1e4
Z_LIMIT = 3.0
DEFAULT_PATHS = 1_000_000
DEFAULT_SEED = 42


@dataclass(frozen=True)
class CalibratedScenario:
    """Scenario with its fitted intensity and valued spot/forward legs."""

    scenario: MarketScenario
    curve: DiscountCurve
    hazard: HazardCurve
    spot: IndexLegs
    forward: IndexLegs


def calibrate_scenario(scenario: MarketScenario) -> CalibratedScenario:
    if scenario.index_spread <= 0:
        raise CalibrationError(f"degenerate index spread {scenario.index_spread}; nothing to calibrate")
    curve = DiscountCurve(scenario.zero_rate)
    hazard = calibrate_flat_intensity(scenario.index_spread, scenario.recovery, spot_schedule(scenario), curve)
    return CalibratedScenario(
        scenario=scenario,
        curve=curve,
        hazard=hazard,
        spot=build_legs(hazard, curve, spot_schedule(scenario), scenario.recovery),
        forward=build_legs(hazard, curve, forward_schedule(scenario), scenario.recovery),
    )


# ---------------------------------------------------------------------------
# calibrate
# ---------------------------------------------------------------------------


def calibration_report(cal: CalibratedScenario) -> dict:
    scn = cal.scenario
    return {
        "label": scn.label,
        "intensity": cal.hazard.pillars[0][1],
        "pillars": [[t, lam] for t, lam in cal.hazard.pillars],
        "survival_expiry": cal.hazard.survival(scn.option_expiry),
        "spot": {
            "protection": cal.spot.protection_value,
            "annuity": cal.spot.annuity,
            "par_spread": single_name_cds_spread(
                cal.hazard, cal.curve, spot_schedule(scn), scn.recovery
            ),
        },
        "forward": {
            "start": cal.forward.start,
            "maturity": cal.forward.maturity,
            "protection": cal.forward.protection_value,
            "annuity": cal.forward.annuity,
            "front_end_protection": cal.forward.fep_value,
            "market_adjusted_spread": market_adjusted_spread(cal.forward),
        },
    }


def _flatten(prefix: str, value, into: list):
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, sub, into)
    elif isinstance(value, list):
        for i, sub in enumerate(value, start=1):
            _flatten(f"{prefix}.{i}", sub, into)
    else:
        into.append((prefix, value))


def calibration_to_csv(report: dict) -> str:
    pairs: list = []
    _flatten("", report, pairs)
    lines = ["field,value"]
    for key, value in pairs:
        lines.append(f"{key},{_num(value)}")
    return "\n".join(lines) + "\n"


def _num(value) -> str:
    return f"{value:.12g}" if isinstance(value, float) else str(value)


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    """One strike of the grid; correlation-keyed values use str(rho) keys."""

    strike_bps: float
    side: str
    market_bps: float
    noarb_bps: dict
    diff_bps: dict
    bid_ask_bps: float | None
    exceeds: dict


@dataclass(frozen=True)
class TableReport:
    scenario: str
    side: str
    sigma: float
    anchor_strike_bps: float
    anchor_price_bps: float
    rho_grid: tuple
    rows: tuple


def _rho_key(rho: float) -> str:
    return repr(float(rho))


def build_table(
    cal: CalibratedScenario,
    side: str,
    anchor_strike_bps: float,
    anchor_price_bps: float,
    rho_grid=None,
    strikes=None,
    nodes: int = QUAD_NODES,
) -> TableReport:
    """Price the strike-by-correlation grid with vol backed out from the anchor.

    The anchor quote is interpreted on the same side as the table and inverted
    through the market formula, mirroring how the quotes are published.
    """
    scn = cal.scenario
    rho_grid = tuple(scn.rho_grid if rho_grid is None else rho_grid)
    strikes = tuple(scn.strikes if strikes is None else strikes)
    expiry = scn.option_expiry
    maturity = expiry + scn.index_maturity
    anchor = OptionSpec(anchor_strike_bps / BPS, expiry, maturity, side)
    sigma = implied_vol(cal.forward, anchor, anchor_price_bps / BPS)
    p = 1.0 - cal.hazard.survival(expiry)
    adjustments = {
        _rho_key(rho): armageddon_adjustment(
            cal.forward, CopulaParams(rho, scn.n_names, p), scn.recovery, cal.curve, expiry, nodes
        )
        for rho in rho_grid
    }
    rows = []
    for strike in strikes:
        spec = OptionSpec(strike, expiry, maturity, side, vol=sigma)
        market_bps = price_market(cal.forward, spec) * BPS
        strike_bps = round(strike * BPS, 6)
        threshold = scn.bid_ask.get(strike_bps) if scn.bid_ask else None
        noarb_bps: dict = {}
        diff_bps: dict = {}
        exceeds: dict = {}
        for rho in rho_grid:
            key = _rho_key(rho)
            breakdown = price_noarb(cal.forward, adjustments[key], spec, cal.curve, scn.recovery)
            noarb_bps[key] = breakdown.total * BPS
            diff_bps[key] = noarb_bps[key] - market_bps
            exceeds[key] = threshold is not None and abs(diff_bps[key]) > threshold
        rows.append(
            ReportRow(
                strike_bps=strike_bps,
                side=side,
                market_bps=market_bps,
                noarb_bps=noarb_bps,
                diff_bps=diff_bps,
                bid_ask_bps=threshold,
                exceeds=exceeds,
            )
        )
    return TableReport(
        scenario=scn.label,
        side=side,
        sigma=sigma,
        anchor_strike_bps=anchor_strike_bps,
        anchor_price_bps=anchor_price_bps,
        rho_grid=rho_grid,
        rows=tuple(rows),
    )


def table_to_csv(report: TableReport) -> str:
    """Grid laid out for eyeballing: strikes as columns, formula/rho as rows."""
    header = "formula," + ",".join(f"{row.strike_bps:.2f}" for row in report.rows)
    lines = [header]
    lines.append("market," + ",".join(f"{row.market_bps:.2f}" for row in report.rows))
    for rho in report.rho_grid:
        key = _rho_key(rho)
        lines.append(f"noarb rho={key}," + ",".join(f"{row.noarb_bps[key]:.2f}" for row in report.rows))
    for rho in report.rho_grid:
        key = _rho_key(rho)
        lines.append(f"diff rho={key}," + ",".join(f"{row.diff_bps[key]:.2f}" for row in report.rows))
    if any(row.bid_ask_bps is not None for row in report.rows):
        for rho in report.rho_grid:
            key = _rho_key(rho)
            cells = [
                "" if row.bid_ask_bps is None else str(int(row.exceeds[key]))
                for row in report.rows
            ]
            lines.append(f"exceeds rho={key}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def table_to_json(report: TableReport) -> dict:
    return {
        "scenario": report.scenario,
        "side": report.side,
        "sigma": report.sigma,
        "anchor_strike_bps": report.anchor_strike_bps,
        "anchor_price_bps": report.anchor_price_bps,
        "rho_grid": list(report.rho_grid),
        "rows": [
            {
                "strike_bps": row.strike_bps,
                "side": row.side,
                "market_bps": row.market_bps,
                "noarb_bps": row.noarb_bps,
                "diff_bps": row.diff_bps,
                "bid_ask_bps": row.bid_ask_bps,
                "exceeds": row.exceeds,
            }
            for row in report.rows
        ],
    }


def table_report_from_json(data: dict) -> TableReport:
    """Rebuild a table report from its JSON form (round-trip support)."""
    rows = tuple(
        ReportRow(
            strike_bps=row["strike_bps"],
            side=row["side"],
            market_bps=row["market_bps"],
            noarb_bps=dict(row["noarb_bps"]),
            diff_bps=dict(row["diff_bps"]),
            bid_ask_bps=row["bid_ask_bps"],
            exceeds=dict(row["exceeds"]),
        )
        for row in data["rows"]
    )
    return TableReport(
        scenario=data["scenario"],
        side=data["side"],
        sigma=data["sigma"],
        anchor_strike_bps=data["anchor_strike_bps"],
        anchor_price_bps=data["anchor_price_bps"],
        rho_grid=tuple(data["rho_grid"]),
        rows=rows,
    )


# ---------------------------------------------------------------------------
# mc-validate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationRow:
    scenario: str
    rho: float
    statistic: str
    reference: float
    mc_mean: float
    mc_std_error: float
    z: float
    n_paths: int


def _z_score(estimate: McEstimate, reference: float, bernoulli: bool) -> float:
    se = estimate.std_error
    if bernoulli:
        # the indicator's null standard error keeps z meaningful when the
        # sampler sees zero hits on a rare event
        se = max(se, math.sqrt(max(reference * (1.0 - reference), 0.0) / estimate.n_paths))
    if se == 0.0:
        return 0.0 if abs(estimate.mean - reference) <= 1e-12 else math.inf
    return (estimate.mean - reference) / se


def mc_validation(
    cal: CalibratedScenario,
    n_paths: int,
    seed: int,
    corrupt_qarm: float = 1.0,
) -> list:
    """Run both simulators against the quadrature references for every rho.

    ``corrupt_qarm`` deliberately scales the reference (negative-control hook
    for the exit-code contract); leave at 1.0 for real validation.
    """
    scn = cal.scenario
    p = 1.0 - cal.hazard.survival(scn.option_expiry)
    rows = []
    for rho in scn.rho_grid:
        params = CopulaParams(rho=rho, n_names=scn.n_names, default_prob=p)
        q_ref = armageddon_prob(params) * corrupt_qarm
        loss_ref = (1.0 - scn.recovery) * (p - q_ref)
        cfg = McConfig(n_paths=n_paths, seed=seed)
        arm = simulate_armageddon(params, cfg)
        loss = simulate_loss_given_no_armageddon(params, cfg, scn.recovery)
        rows.append(
            ValidationRow(scn.label, rho, "armageddon", q_ref, arm.mean, arm.std_error,
                          _z_score(arm, q_ref, bernoulli=True), n_paths)
        )
        rows.append(
            ValidationRow(scn.label, rho, "loss_no_armageddon", loss_ref, loss.mean, loss.std_error,
                          _z_score(loss, loss_ref, bernoulli=False), n_paths)
        )
    return rows


def validation_ok(rows) -> bool:
    return all(math.isfinite(row.z) and abs(row.z) < Z_LIMIT for row in rows)


def validation_to_csv(rows) -> str:
    lines = ["scenario,rho,statistic,reference,mc_mean,mc_std_error,z,n_paths"]
    for r in rows:
        lines.append(
            f"{r.scenario},{_rho_key(r.rho)},{r.statistic},{r.reference:.12g},"
            f"{r.mc_mean:.12g},{r.mc_std_error:.12g},{r.z:.4f},{r.n_paths}"
        )
    return "\n".join(lines) + "\n"


def validation_to_json(rows, seed: int) -> dict:
    return {
        "seed": seed,
        "ok": validation_ok(rows),
        "rows": [
            {
                "scenario": r.scenario,
                "rho": r.rho,
                "statistic": r.statistic,
                "reference": r.reference,
                "mc_mean": r.mc_mean,
                "mc_std_error": r.mc_std_error,
                "z": r.z,
                "n_paths": r.n_paths,
            }
            for r in rows
        ],
    }


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------


def _csv_floats(text: str):
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cixopt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p_cal = sub.add_parser("calibrate", help="fit the intensity and report leg values")
    common(p_cal)

    p_tab = sub.add_parser("table", help="price the strike/correlation grid under both formulas")
    common(p_tab)
    p_tab.add_argument("--side", choices=("payer", "receiver"), default="payer")
    p_tab.add_argument("--anchor-strike", type=float, required=True, help="anchor strike in bps")
    p_tab.add_argument("--anchor-price", type=float, required=True, help="anchor price in bps")
    p_tab.add_argument("--rho-grid", type=_csv_floats, default=None,
                       help="override the scenario correlation grid (decimals)")
    p_tab.add_argument("--strikes", type=_csv_floats, default=None,
                       help="override the scenario strikes (bps)")

    p_mc = sub.add_parser("mc-validate", help="cross-check quadrature against Monte Carlo")
    common(p_mc)
    p_mc.add_argument("--paths", type=int, default=DEFAULT_PATHS)
    p_mc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_mc.add_argument("--corrupt-qarm", type=float, default=1.0, help=argparse.SUPPRESS)
    return parser


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ValueError) as exc:
        print(f"error: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INPUT

    if args.command == "table" and args.rho_grid is not None:
        if any(not 0 <= rho <= 1 for rho in args.rho_grid):
            print("error: correlations must be in [0, 1]", file=sys.stderr)
            return EXIT_INPUT

    try:
        cal = calibrate_scenario(scenario)
        if args.command == "calibrate":
            report = calibration_report(cal)
            text = calibration_to_csv(report) if args.format == "csv" else _json_text(report)
            code = EXIT_OK
        elif args.command == "table":
            strikes = None if args.strikes is None else tuple(k / BPS for k in args.strikes)
            table = build_table(cal, args.side, args.anchor_strike, args.anchor_price,
                                rho_grid=args.rho_grid, strikes=strikes)
            text = table_to_csv(table) if args.format == "csv" else _json_text(table_to_json(table))
            code = EXIT_OK
        else:
            rows = mc_validation(cal, args.paths, args.seed, corrupt_qarm=args.corrupt_qarm)
            text = validation_to_csv(rows) if args.format == "csv" else _json_text(
                validation_to_json(rows, args.seed)
            )
            code = EXIT_OK if validation_ok(rows) else EXIT_VALIDATION
    except (CalibrationError, VolInversionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    _emit(text, args.out)
    return code


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


if __name__ == "__main__":
    sys.exit(main())
