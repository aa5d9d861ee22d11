import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cusumopt.run_length import (
    ARL_CEILING,
    ChartDesign,
    arl_profile,
    combine_two_sided,
    in_control_one_sided,
    one_sided_arl,
    out_of_control_one_sided,
    two_sided_arl,
)

# (C_E, ARL_delta, n, h, H) rows of the published yogurt-example front
PUBLISHED_FRONT = [
    (9.50, 8.72, 2, 0.36, 4.19), (9.50, 8.49, 2, 0.37, 4.07), (9.52, 8.10, 2, 0.40, 3.88),
    (9.56, 7.69, 2, 0.43, 3.67), (9.61, 7.37, 2, 0.44, 3.51), (9.69, 6.94, 2, 0.48, 3.29),
    (9.75, 6.71, 2, 0.53, 3.18), (9.75, 6.71, 2, 0.53, 3.18), (9.84, 6.39, 2, 0.55, 3.02),
    (9.92, 6.15, 2, 0.56, 2.89), (10.04, 5.84, 2, 0.65, 2.74), (10.13, 5.63, 2, 0.64, 2.63),
    (10.24, 5.38, 2, 0.71, 2.50), (10.41, 5.05, 2, 0.78, 2.33), (10.55, 4.80, 2, 0.82, 2.20),
    (10.69, 4.58, 2, 0.94, 2.09), (10.92, 4.23, 2, 1.07, 1.90), (11.05, 4.13, 2, 0.94, 1.85),
    (11.16, 3.88, 2, 1.15, 1.73), (11.40, 3.62, 2, 1.19, 1.59), (12.05, 3.37, 2, 1.03, 1.46),
    (13.10, 2.92, 2, 1.07, 1.22),
]


class TestOneSided:
    def test_first_published_row(self):
        assert one_sided_arl(0.5, 4.19 + 1.166) == pytest.approx(8.72, abs=0.005)

    def test_zero_drift_is_b_squared(self):
        assert one_sided_arl(0.0, 3.0) == 9.0

    def test_larger_shift_anchor(self):
        assert one_sided_arl(0.75, 3.08 + 1.166) == pytest.approx(4.78, abs=0.01)

    @pytest.mark.parametrize("b", [1.0, 3.0, 5.356])
    def test_continuous_at_zero_drift(self, b):
        assert abs(one_sided_arl(1e-6, b) - b * b) / (b * b) < 1e-4
        assert abs(one_sided_arl(-1e-6, b) - b * b) / (b * b) < 1e-4

    @pytest.mark.parametrize("bad", [(0.5, 0.0), (0.5, -1.0), (math.nan, 1.0), (0.5, math.inf)])
    def test_rejects_bad_input(self, bad):
        with pytest.raises(ValueError):
            one_sided_arl(*bad)

    def test_overflow_is_capped(self):
        assert one_sided_arl(-400.0, 6.0) == ARL_CEILING
        assert one_sided_arl(-5.0, 6.0) == ARL_CEILING


class TestInControl:
    # 50-digit mpmath evaluations of (exp(2Kb) - 2Kb - 1) / (2K^2)
    @pytest.mark.parametrize("K, b, expected", [
        (0.5, 5.356, 411.039492393043),
        (0.5, 2.386, 14.9678543178541),
    ])
    def test_values(self, K, b, expected):
        assert in_control_one_sided(K, b) == pytest.approx(expected, rel=1e-12)

    def test_identity_with_negative_drift(self):
        rng = random.Random(5)
        for _ in range(100):
            K, b = rng.uniform(0.01, 3.0), rng.uniform(0.1, 8.0)
            assert in_control_one_sided(K, b) == one_sided_arl(-K, b)

    def test_rejects_zero_reference(self):
        with pytest.raises(ValueError):
            in_control_one_sided(0.0, 2.0)


class TestOutOfControl:
    @pytest.mark.parametrize("b, lower, upper", [
        (5.356, 2113637.19121331, 8.72143949477891),
        (2.386, 283.595929588202, 2.95599387325769),
    ])
    def test_values(self, b, lower, upper):
        lo, up = out_of_control_one_sided(1.0, 0.5, b)
        assert lo == pytest.approx(lower, rel=1e-10)
        assert up == pytest.approx(upper, rel=1e-12)
        assert up < lo

    def test_shift_equal_reference_uses_zero_branch(self):
        _, up = out_of_control_one_sided(0.7, 0.7, 2.5)
        assert up == 2.5 ** 2


class TestCombine:
    def test_equal_inputs_halve(self):
        assert combine_two_sided(411.0, 411.0) == pytest.approx(205.5)

    def test_published_rows(self):
        assert combine_two_sided(8.72143949477891, 2113637.19121331) == pytest.approx(8.7214, abs=1e-4)
        assert round(combine_two_sided(2.95599387325769, 283.595929588202), 3) == 2.926

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            combine_two_sided(0.0, 3.0)

    @given(st.floats(1e-3, 1e9), st.floats(1e-3, 1e9))
    def test_commutative_and_bounded(self, a, b):
        c = combine_two_sided(a, b)
        assert c == combine_two_sided(b, a)
        assert c <= min(a, b) * (1 + 1e-15)


class TestProfile:
    def test_first_row(self):
        rl = arl_profile(1.0, 4.19)
        assert rl.arl_delta == pytest.approx(8.72, abs=0.005)
        assert rl.arl0 == pytest.approx(205.519746197, rel=1e-10)

    @pytest.mark.parametrize("delta, H, expected", [(1.0, 2.50, 5.38), (2.0, 2.30, 2.96)])
    def test_published_values(self, delta, H, expected):
        assert arl_profile(delta, H).arl_delta == pytest.approx(expected, abs=0.01)

    @pytest.mark.parametrize("row", PUBLISHED_FRONT, ids=[f"H={r[4]}" for r in PUBLISHED_FRONT])
    def test_published_column(self, row):
        assert arl_profile(1.0, row[4]).arl_delta == pytest.approx(row[1], abs=0.05)

    @pytest.mark.parametrize("delta", [1.0, 1.5, 2.0, 2.5])
    def test_strictly_increasing_in_H(self, delta):
        Hs = np.linspace(0.0001, 5.0, 400)
        arl0 = [arl_profile(delta, H).arl0 for H in Hs]
        arld = [arl_profile(delta, H).arl_delta for H in Hs]
        assert np.all(np.diff(arl0) > 0)
        assert np.all(np.diff(arld) > 0)

    @given(st.floats(0.05, 4.0), st.floats(0.0001, 6.0))
    def test_detects_faster_than_false_alarms(self, delta, H):
        rl = arl_profile(delta, H)
        assert 0 < rl.arl_delta < rl.arl0 < math.inf

    def test_does_not_depend_on_sample_size(self):
        # the profile has no n argument at all; designs only differ through H
        d2 = ChartDesign.for_shift(2, 0.5, 3.0, 1.0)
        d9 = ChartDesign.for_shift(9, 0.5, 3.0, 1.0)
        assert arl_profile(1.0, d2.decision_interval) == arl_profile(1.0, d9.decision_interval)

    def test_two_sided_helper_matches_profile(self):
        rl = arl_profile(1.5, 3.0)
        assert two_sided_arl(1.5, 0.75, 3.0) == rl.arl_delta
        assert two_sided_arl(0.0, 0.75, 3.0) == pytest.approx(rl.arl0, rel=1e-15)


class TestChartDesign:
    def test_reference_is_half_shift(self):
        assert ChartDesign.for_shift(2, 0.36, 4.19, 1.0).reference_value == 0.5
        assert ChartDesign.for_shift(2, 0.36, 4.19, 2.5).reference_value == 1.25

    @pytest.mark.parametrize("args", [(0, 1.0, 1.0), (2.5, 1.0, 1.0), (2, 0.0, 1.0),
                                      (2, 1.0, 0.0), (2, 1.0, -1.0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            ChartDesign(*args)
