import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonclassic.criteria import (
    StirlingTable,
    hoa_d,
    hosps_D,
    hosps_D2_special,
    report,
    stirling2,
)
from nonclassic.fock import FockCutoffs, Mode, make_coherent_vacuum, make_fock
from nonclassic.shorttime import ShortTimeInput, moments_fwm

from conftest import (
    count_set_partitions,
    pmf_central_moment,
    pmf_factorial_moments,
    pmf_mean,
    poisson_central_moment,
    synthetic_moments,
    thermal_pmf,
)

pmf_strategy = st.lists(
    st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=2, max_size=12
).filter(lambda w: sum(w) > 1e-3)


def normalize(weights) -> np.ndarray:
    arr = np.asarray(weights, dtype=float)
    return arr / arr.sum()


class TestStirling:
    def test_boundary_identities(self):
        assert stirling2(0, 0) == 1
        for n in range(1, 15):
            assert stirling2(n, n) == 1
            assert stirling2(n, 1) == 1
            assert stirling2(n, 0) == 0

    def test_small_values_vs_enumeration(self):
        assert stirling2(4, 2) == 7 == count_set_partitions(4, 2)
        assert stirling2(5, 3) == 25 == count_set_partitions(5, 3)

    def test_full_table_vs_enumeration(self):
        for n in range(0, 9):
            for k in range(0, n + 1):
                assert stirling2(n, k) == count_set_partitions(n, k)

    def test_recurrence_holds_on_stored_entries(self):
        table = StirlingTable(12)
        for n in range(2, 13):
            for k in range(1, n):
                assert table.value(n, k) == k * table.value(n - 1, k) + table.value(
                    n - 1, k - 1
                )

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            stirling2(21, 3)
        with pytest.raises(ValueError):
            stirling2(3, 4)
        with pytest.raises(ValueError):
            stirling2(3, -1)


class TestHoaD:
    def test_coherent_boundary(self):
        mom = synthetic_moments([2.0, 4.0, 8.0, 16.0])
        assert hoa_d(mom, 1) == 0.0

    def test_fock_three(self):
        mom = pmf_factorial_moments([0, 0, 0, 1.0], 2)
        assert hoa_d(mom, 1) == pytest.approx(-3.0, abs=1e-12)

    def test_fwm_short_time_leading_order(self):
        lam, g, t = 1.5, 1e-3, 0.5
        d1 = hoa_d(moments_fwm(ShortTimeInput(lam, g, t)), 1)
        expected = -12.0 * (g * t) ** 2 * lam**3
        # agreement up to the quartic cross term 36 (gt)^4 lam^6
        assert d1 == pytest.approx(expected, abs=40.0 * (g * t) ** 4 * lam**6)

    def test_insufficient_orders(self):
        mom = synthetic_moments([1.0, 1.0])
        with pytest.raises(ValueError):
            hoa_d(mom, 2)
        with pytest.raises(ValueError):
            hoa_d(mom, 0)

    def test_fock_scaling_identity(self):
        # d(l) = n!/(n-l-1)! - n^(l+1) < 0 for all 1 <= l < n
        for n in range(2, 11):
            mom = pmf_factorial_moments([0.0] * n + [1.0], min(8, n + 1))
            for l in range(1, min(n, mom.k_max)):
                expected = math.factorial(n) / math.factorial(n - l - 1) - float(n) ** (
                    l + 1
                )
                val = hoa_d(mom, l)
                assert val < 0.0
                assert val == pytest.approx(expected, rel=1e-12)


class TestHospsD:
    def test_coherent_boundary(self):
        for lam in (0.3, 1.0, 2.5):
            mom = synthetic_moments([lam**i for i in range(1, 5)])
            for l in (2, 3, 4):
                assert abs(hosps_D(mom, l)) < 1e-9

    def test_l2_is_variance_minus_mean_on_thermal(self):
        for lam in (0.5, 1.0, 2.0):
            pmf = thermal_pmf(lam)
            mom = pmf_factorial_moments(pmf, 2)
            # geometric distribution: variance - mean = lam^2
            assert hosps_D(mom, 2) == pytest.approx(lam**2, rel=1e-9)
            variance = pmf_central_moment(pmf, 2)
            assert hosps_D(mom, 2) == pytest.approx(variance - pmf_mean(pmf), abs=1e-10)

    def test_fwm_short_time_leading_order(self):
        lam, g, t = 1.0, 1e-3, 1.0
        D2 = hosps_D(moments_fwm(ShortTimeInput(lam, g, t)), 3)
        assert D2 == pytest.approx(-48.0 * (g * t) ** 2 * lam**3, abs=400.0 * (g * t) ** 4)

    def test_requires_orders_and_bounds(self):
        mom = synthetic_moments([1.0, 1.0])
        with pytest.raises(ValueError):
            hosps_D(mom, 3)
        with pytest.raises(ValueError):
            hosps_D(mom, 1)

    @given(weights=pmf_strategy)
    @settings(max_examples=150, deadline=None)
    def test_poisson_difference_identity(self, weights):
        # D(l-1) equals mu_l - mu_l^{Poisson(mean)} with both central
        # moments computed brute-force
        pmf = normalize(weights)
        mom = pmf_factorial_moments(pmf, 4)
        for l in (2, 3, 4):
            expected = pmf_central_moment(pmf, l) - poisson_central_moment(
                pmf_mean(pmf), l
            )
            assert hosps_D(mom, l) == pytest.approx(expected, abs=1e-9)


class TestD2SpecialCase:
    def test_coherent_unit_mean_term_by_term(self):
        mom = synthetic_moments([1.0, 1.0, 1.0])
        # 1 + 2 - 3 + 3 - 3 = 0
        assert hosps_D2_special(mom) == pytest.approx(0.0, abs=1e-15)

    def test_fock_two(self):
        mom = pmf_factorial_moments([0.0, 0.0, 1.0], 3)
        # moments (2, 2, 0): 0 + 16 - 12 + 6 - 12 = -2
        assert hosps_D2_special(mom) == pytest.approx(-2.0, abs=1e-12)

    @given(weights=pmf_strategy)
    @settings(max_examples=200, deadline=None)
    def test_equals_general_form_at_l3(self, weights):
        pmf = normalize(weights)
        mom = pmf_factorial_moments(pmf, 3)
        scale = max(1.0, abs(mom.order(3)), abs(mom.mean) ** 3)
        assert abs(hosps_D2_special(mom) - hosps_D(mom, 3)) <= 1e-12 * scale


@given(weights=pmf_strategy, pad=st.integers(min_value=1, max_value=6))
@settings(max_examples=100, deadline=None)
def test_padding_invariance(weights, pad):
    pmf = normalize(weights)
    padded = np.concatenate([pmf, np.zeros(pad)])
    mom = pmf_factorial_moments(pmf, 4)
    mom_pad = pmf_factorial_moments(padded, 4)
    for l in (1, 2, 3):
        assert hoa_d(mom, l) == hoa_d(mom_pad, l)
    for l in (2, 3, 4):
        assert hosps_D(mom, l) == hosps_D(mom_pad, l)


@given(weights=pmf_strategy)
@settings(max_examples=100, deadline=None)
def test_d1_is_variance_minus_mean(weights):
    pmf = normalize(weights)
    mom = pmf_factorial_moments(pmf, 2)
    expected = pmf_central_moment(pmf, 2) - pmf_mean(pmf)
    assert hoa_d(mom, 1) == pytest.approx(expected, abs=1e-10)


class TestReport:
    def test_vacuum_all_zero(self):
        state = make_fock(0, 0, FockCutoffs(4, 4))
        rep = report(state, Mode.A, 0.0, 3)
        assert all(v == 0.0 for v in rep.d_values.values())
        assert all(v == 0.0 for v in rep.D_values.values())

    def test_coherent_initial_state_zero(self):
        state = make_coherent_vacuum(1.0, FockCutoffs(30, 4))
        for mode in Mode:
            rep = report(state, mode, 0.0, 3)
            assert set(rep.d_values) == {1, 2, 3}
            assert set(rep.D_values) == {1, 2}
            for v in list(rep.d_values.values()) + list(rep.D_values.values()):
                assert abs(v) < 1e-9
        assert rep.leakage == state.leakage()

    def test_l_max_bound(self):
        state = make_fock(0, 0, FockCutoffs(3, 3))
        with pytest.raises(ValueError):
            report(state, Mode.A, 0.0, 8)  # needs moment order 9
        with pytest.raises(ValueError):
            report(state, Mode.A, 0.0, 0)
