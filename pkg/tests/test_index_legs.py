import math

import pytest

from cixopt.curves import DiscountCurve, build_schedule
from cixopt.hazard import HazardCurve, calibrate_flat_intensity
from cixopt.index_legs import (
    IndexLegs,
    annuity,
    build_legs,
    forward_index_value,
    front_end_protection,
    market_adjusted_spread,
    protection_leg,
    single_name_cds_spread,
)

CURVE = DiscountCurve(0.04)
SPOT_5Y = build_schedule(0.0, 5.0, 4)
FWD = build_schedule(0.75, 5.75, 4)
FLAT = HazardCurve.flat(0.060167)


class TestProtectionLeg:
    def test_riskless_is_zero(self):
        assert protection_leg(HazardCurve.flat(0.0), CURVE, SPOT_5Y, 0.4) == 0.0

    def test_full_recovery_is_zero(self):
        assert protection_leg(FLAT, CURVE, SPOT_5Y, 1.0) == 0.0

    def test_par_identity_for_calibrated_curve(self):
        hz = calibrate_flat_intensity(0.0361, 0.4, SPOT_5Y, CURVE)
        prot = protection_leg(hz, CURVE, SPOT_5Y, 0.4)
        ann = annuity(hz, CURVE, SPOT_5Y)
        assert prot == pytest.approx(0.0361 * ann, rel=1e-10)

    def test_lgd_scaling(self):
        # recovery 0.4 has twice the loss-given-default of recovery 0.7
        assert protection_leg(FLAT, CURVE, FWD, 0.4) == pytest.approx(
            2.0 * protection_leg(FLAT, CURVE, FWD, 0.7), rel=1e-14
        )


class TestAnnuity:
    def test_riskless_zero_rate_sums_accruals(self):
        assert annuity(HazardCurve.flat(0.0), DiscountCurve(0.0), SPOT_5Y) == pytest.approx(5.0, abs=1e-12)

    def test_immediate_default_limit(self):
        assert annuity(HazardCurve.flat(20.0), CURVE, SPOT_5Y) < 0.01

    def test_forward_annuity_pin(self):
        value = annuity(FLAT, CURVE, FWD)
        assert 0 < value < 5.0
        assert value == pytest.approx(3.603039828967, abs=1e-9)


class TestFrontEndProtection:
    def test_no_elapsed_risk(self):
        assert front_end_protection(FLAT, CURVE, 0.0, 0.4) == 0.0

    def test_riskless_is_zero(self):
        assert front_end_protection(HazardCurve.flat(0.0), CURVE, 0.75, 0.4) == 0.0

    def test_closed_form_product(self):
        value = front_end_protection(FLAT, CURVE, 0.75, 0.4)
        expected = math.exp(-0.03) * 0.6 * (1.0 - math.exp(-0.060167 * 0.75))
        assert value == pytest.approx(expected, abs=1e-15)
        assert value == pytest.approx(0.0256909, abs=1e-6)

    def test_lgd_scaling(self):
        assert front_end_protection(FLAT, CURVE, 0.75, 0.4) == pytest.approx(
            2.0 * front_end_protection(FLAT, CURVE, 0.75, 0.7), rel=1e-14
        )


class TestBuildLegs:
    def test_spot_legs_have_no_fep(self):
        legs = build_legs(FLAT, CURVE, SPOT_5Y, 0.4)
        assert legs.fep_value == 0.0
        assert legs.start == 0.0

    def test_value_bounds(self):
        legs = build_legs(FLAT, CURVE, FWD, 0.4)
        cap = 0.6 * CURVE.discount(legs.start)
        assert 0 <= legs.protection_value <= cap
        assert 0 <= legs.fep_value <= cap
        assert legs.annuity > 0


class TestMarketAdjustedSpread:
    def test_reduces_to_plain_spread_without_fep(self):
        legs = build_legs(FLAT, CURVE, SPOT_5Y, 0.4)
        assert market_adjusted_spread(legs) == legs.protection_value / legs.annuity

    def test_arithmetic(self):
        legs = IndexLegs(protection_value=0.10, annuity=4.0, fep_value=0.02, start=0.75, maturity=5.75)
        assert market_adjusted_spread(legs) == pytest.approx(0.03, abs=1e-15)

    def test_zero_annuity_rejected(self):
        legs = IndexLegs(protection_value=0.10, annuity=0.0, fep_value=0.02, start=0.75, maturity=5.75)
        with pytest.raises(ValueError, match="annuity"):
            market_adjusted_spread(legs)

    def test_strictly_above_plain_forward_spread(self):
        legs = build_legs(FLAT, CURVE, FWD, 0.4)
        assert market_adjusted_spread(legs) > legs.protection_value / legs.annuity

    def test_august_pipeline_pin(self):
        hz = calibrate_flat_intensity(0.0361, 0.4, SPOT_5Y, CURVE)
        legs = build_legs(hz, CURVE, FWD, 0.4)
        assert market_adjusted_spread(legs) == pytest.approx(0.043168352538, abs=1e-9)


class TestForwardIndexValue:
    def setup_method(self):
        self.legs = build_legs(FLAT, CURVE, FWD, 0.4)

    def test_par_strike_is_zero(self):
        par = market_adjusted_spread(self.legs)
        assert forward_index_value(self.legs, par) == pytest.approx(0.0, abs=1e-15)

    def test_zero_strike(self):
        assert forward_index_value(self.legs, 0.0) == (
            self.legs.protection_value + self.legs.fep_value
        )

    def test_affine_in_strike(self):
        k1, k2 = 0.02, 0.05
        lhs = forward_index_value(self.legs, k1) + forward_index_value(self.legs, k2)
        rhs = 2.0 * forward_index_value(self.legs, (k1 + k2) / 2.0)
        assert lhs == pytest.approx(rhs, abs=1e-15)

    def test_slope_is_minus_annuity(self):
        k1, k2 = 0.02, 0.03
        slope = (forward_index_value(self.legs, k2) - forward_index_value(self.legs, k1)) / (k2 - k1)
        assert slope == pytest.approx(-self.legs.annuity, rel=1e-12)


class TestSingleNameSpread:
    def test_riskless_is_zero(self):
        assert single_name_cds_spread(HazardCurve.flat(0.0), CURVE, SPOT_5Y, 0.4) == 0.0

    def test_homogeneity_identity(self):
        # one name and the whole homogeneous index quote the same par spread
        legs = build_legs(FLAT, CURVE, SPOT_5Y, 0.4)
        single = single_name_cds_spread(FLAT, CURVE, SPOT_5Y, 0.4)
        assert single == pytest.approx(legs.protection_value / legs.annuity, abs=1e-12)

    def test_triangle_level(self):
        single = single_name_cds_spread(FLAT, CURVE, SPOT_5Y, 0.4)
        assert single == pytest.approx(0.0361, rel=0.01)
