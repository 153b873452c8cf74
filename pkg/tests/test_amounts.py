"""Log-domain amount arithmetic: exactness of parsing, lossless rendering,
and additive behavior."""
import math
import random

import pytest
from hypothesis import given, strategies as st

from compute_thresholds.amounts import (
    AmountError,
    ComputeAmount,
    MoneyAmount,
    ZERO,
    total,
)


class TestParseExactness:
    def test_round_powers_parse_to_exact_logs(self):
        assert ComputeAmount.parse("1e26").log10_flop == 26.0
        assert ComputeAmount.parse("1e25").log10_flop == 25.0
        assert ComputeAmount.parse("1e0").log10_flop == 0.0
        assert ComputeAmount.parse("10").log10_flop == 1.0
        assert ComputeAmount.parse("1e30").log10_flop == 30.0

    def test_mantissa_parses_via_exact_decomposition(self):
        # log10(mantissa) + integer exponent, mantissa in [1, 10)
        assert ComputeAmount.parse("3e25").log10_flop == math.log10(3.0) + 25
        assert ComputeAmount.parse("1.5e25").log10_flop == math.log10(1.5) + 25
        assert ComputeAmount.parse("9.9e25").log10_flop == math.log10(9.9) + 25
        # equivalent spellings of one value agree exactly
        assert ComputeAmount.parse("0.15e26") == ComputeAmount.parse("1.5e25")
        assert ComputeAmount.parse("15e24") == ComputeAmount.parse("1.5e25")

    def test_power_caret_form_accepted(self):
        assert ComputeAmount.parse("10^26").log10_flop == 26.0
        assert ComputeAmount.parse("10^25.5").log10_flop == 25.5

    def test_zero_sentinel(self):
        z = ComputeAmount.parse("0")
        assert z.is_zero
        assert z == ZERO
        assert z.log10_flop == float("-inf")

    def test_rejects_garbage(self):
        for bad in ("", "abc", "-1e26", "nan", "inf", "1e26 FLOP"):
            with pytest.raises(AmountError):
                ComputeAmount.parse(bad)

    def test_subunit_amounts_rejected(self):
        # domain floor is 1 FLOP
        with pytest.raises(AmountError):
            ComputeAmount.parse("0.5")


class TestArithmetic:
    def test_addition_worked_example(self):
        # 9e24 + 2e24 = 1.1e25
        s = ComputeAmount.parse("9e24") + ComputeAmount.parse("2e24")
        assert s.compact() == "1.1e25"
        assert abs(s.log10_flop - (math.log10(1.1) + 25)) < 1e-12

    def test_addition_identity_and_commutativity(self):
        a = ComputeAmount.parse("7e23")
        assert a + ZERO == a
        assert ZERO + a == a
        b = ComputeAmount.parse("3.3e21")
        assert a + b == b + a

    def test_addition_dominates_max(self):
        a = ComputeAmount.parse("1e26")
        assert (a + ComputeAmount.parse("1e12")) > a
        # an addend ~23 OOMs down is below log-domain float resolution
        tiny = ComputeAmount.parse("1e3")
        assert (a + tiny) == a

    def test_total_folds(self):
        parts = [ComputeAmount.parse("1e24")] * 10
        assert total(parts).compact() == "1e25"
        assert total([]) == ZERO

    def test_scaled_exact_round_factors(self):
        assert ComputeAmount.parse("1e26").scaled(0.5) == ComputeAmount.parse("5e25")
        assert ComputeAmount.parse("1e26").scaled(0.2) == ComputeAmount.parse("2e25")
        assert ComputeAmount.parse("2e24").scaled(10.0) == ComputeAmount.parse("2e25")
        a = ComputeAmount.parse("7.7e24")
        assert a.scaled(1.0) == a

    def test_scaled_validates(self):
        a = ComputeAmount.parse("1e24")
        for bad in (0.0, -1.0, float("nan"), float("inf")):
            with pytest.raises(AmountError):
                a.scaled(bad)

    def test_shifted_ooms(self):
        a = ComputeAmount.parse("1e24")
        assert a.shifted_ooms(2.0) == ComputeAmount.parse("1e26")
        assert a.shifted_ooms(0.0) == a
        assert ZERO.shifted_ooms(3.0) == ZERO

    def test_ratio(self):
        a = ComputeAmount.parse("1.5e25")
        b = ComputeAmount.parse("1e26")
        assert a.ratio_to(b) == pytest.approx(0.15, rel=1e-12)
        assert ZERO.ratio_to(b) == 0.0
        with pytest.raises(AmountError):
            b.ratio_to(ZERO)

    def test_ordering(self):
        xs = ["0", "1e0", "5e10", "1e25", "1.5e25", "1e26"]
        parsed = [ComputeAmount.parse(x) for x in xs]
        assert parsed == sorted(parsed)


class TestRendering:
    def test_round_values_render_short(self):
        for s in ("1e26", "1e25", "3e25", "1.5e25", "9.9e25", "2e24", "9.58e23"):
            assert ComputeAmount.parse(s).render() == s

    def test_zero_renders(self):
        assert ZERO.render() == "0"
        assert ComputeAmount.parse(ZERO.render()) == ZERO

    def test_caret_fallback_round_trips(self):
        # a log with no exact decimal preimage still round-trips
        awkward = ComputeAmount.from_log10(0.30103000000000001)
        r = awkward.render()
        assert ComputeAmount.parse(r) == awkward

    def test_scientific(self):
        assert ComputeAmount.parse("1e26").scientific() == "1.00e+26"
        assert ComputeAmount.parse("1.5e25").scientific() == "1.50e+25"
        # decade carry
        assert ComputeAmount.parse("9.9999e25").scientific(2) == "1.00e+26"
        assert ZERO.scientific() == "0"

    def test_compact(self):
        assert ComputeAmount.parse("1e26").compact() == "1e26"
        assert ComputeAmount.parse("1.5e25").compact() == "1.5e25"
        assert ZERO.compact() == "0"

    @given(st.floats(min_value=0.0, max_value=30.0, allow_nan=False))
    def test_render_parse_round_trip(self, x):
        a = ComputeAmount.from_log10(x)
        assert ComputeAmount.parse(a.render()) == a

    def test_render_round_trip_seeded_sums(self):
        rng = random.Random(1234)
        for _ in range(2000):
            a = ComputeAmount.from_log10(rng.uniform(0, 30))
            b = ComputeAmount.from_log10(rng.uniform(0, 30))
            for v in (a, b, a + b):
                assert ComputeAmount.parse(v.render()) == v


class TestMoney:
    def test_parse_forms(self):
        assert MoneyAmount.parse("$100,000,000").usd == 100_000_000.0
        assert MoneyAmount.parse("100000000").usd == 100_000_000.0
        assert MoneyAmount.parse(1.2e7).usd == 12_000_000.0

    def test_compact(self):
        assert MoneyAmount(100_000_000.0).compact() == "$100M"
        assert MoneyAmount(12_000_000.0).compact() == "$12M"
        assert MoneyAmount(1_500.0).compact() == "$1.5k"

    def test_ordering_and_validation(self):
        assert MoneyAmount(1.0) < MoneyAmount(2.0)
        with pytest.raises(AmountError):
            MoneyAmount(-5.0)
        with pytest.raises(AmountError):
            MoneyAmount(float("nan"))
