import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravdecoherence.constants import CONSTANTS, G, M_EARTH, c
from gravdecoherence.errors import DomainError, InvalidArgumentError
from gravdecoherence.metric import (
    custom_profile,
    entropy_exchange_rate,
    linear_potential,
    local_temperature,
    numerical_derivative,
    redshift_difference,
    schwarzschild_profile,
    weak_field_profile,
)


def test_constants():
    assert CONSTANTS.hbar == CONSTANTS.h / (2 * math.pi)
    assert CONSTANTS.c == 299792458.0
    assert CONSTANTS.k_B == 1.380649e-23


class TestWeakField:
    def test_reference_point(self):
        assert weak_field_profile(9.8, 0.0).f(0.0) == 1.0
        assert weak_field_profile(9.8, 5.0).f(5.0) == 1.0

    def test_gradient(self):
        assert weak_field_profile(9.8).Df(3.0) == pytest.approx(9.8 / 2.99792458e8**2, rel=1e-15)
        assert weak_field_profile(9.8).Df(0.0) == pytest.approx(1.0903e-16, rel=1e-4)

    def test_flat_limit(self):
        p = weak_field_profile(0.0)
        assert p.f(123.0) == 1.0
        assert redshift_difference(p, -4.0, 9.0) == 0.0

    def test_potential_defaults_to_zero(self):
        assert weak_field_profile(9.8).V(2.0) == 0.0

    def test_domain_where_f_positive(self):
        p = weak_field_profile(9.8)
        with pytest.raises(DomainError):
            p.f(-c**2 / 9.8 * 1.01)


class TestSchwarzschild:
    def test_asymptotically_flat(self):
        assert schwarzschild_profile(M_EARTH).f(1e30) == pytest.approx(1.0, abs=1e-15)

    def test_earth_surface(self):
        p = schwarzschild_profile(5.972e24)
        r = 6.371e6
        expected = G * 5.972e24 / (r * c**2)
        assert 1 - p.f(r) == pytest.approx(expected, rel=1e-8)
        assert -p.f_minus_one(r) == pytest.approx(6.95e-10, rel=2e-3)

    def test_gradient_closed_form(self):
        p = schwarzschild_profile(M_EARTH)
        r = 7e6
        assert p.Df(r) == pytest.approx(G * M_EARTH / (c**2 * r**2 * p.f(r)), rel=1e-14)

    def test_horizon_excluded(self):
        p = schwarzschild_profile(M_EARTH)
        r_s = 2 * G * M_EARTH / c**2
        with pytest.raises(DomainError):
            p.f(r_s)
        with pytest.raises(DomainError):
            p.f(0.5 * r_s)

    def test_rejects_nonpositive_mass(self):
        with pytest.raises(InvalidArgumentError):
            schwarzschild_profile(0.0)


class TestCustom:
    def test_constant_table(self):
        p = custom_profile([[0, 1, 0], [1, 1, 0], [2, 1, 0]])
        np.testing.assert_array_equal(p.Df(np.linspace(0, 2, 7)), 0.0)

    def test_linear_table_exact(self):
        a = 3e-3
        xs = np.linspace(-2, 5, 8)
        p = custom_profile([[x, 1 + a * x, 0.0] for x in xs])
        np.testing.assert_allclose(p.Df(np.linspace(-2, 5, 29)), a, rtol=1e-10)

    def test_potential_interpolated(self):
        p = custom_profile([[0, 1, 0.0], [1, 1, 2.0], [2, 1, 4.0]])
        assert p.V(1.5) == pytest.approx(3.0, rel=1e-12)

    def test_repeated_positions(self):
        with pytest.raises(InvalidArgumentError):
            custom_profile([[0, 1, 0], [0, 1.1, 0]])

    def test_nonpositive_f(self):
        with pytest.raises(InvalidArgumentError):
            custom_profile([[0, 1, 0], [1, 0.0, 0]])

    def test_outside_range(self):
        p = custom_profile([[0, 1], [1, 1.1]])
        with pytest.raises(DomainError):
            p.f(1.5)


BUILTINS = [
    ("weak", weak_field_profile(9.8, 0.0), [0.0, 1.0, -30.0, 1e4]),
    ("weak_strong", weak_field_profile(3e14, 0.0), [0.0, 5.0, 100.0]),
    ("schwarzschild", schwarzschild_profile(M_EARTH), [6.371e6, 1e7, 4.2e7]),
    ("custom", custom_profile([[x, 1 + 0.01 * math.sin(x), 0] for x in np.linspace(0, 6, 25)]), [0.3, 2.0, 5.5]),
]


@pytest.mark.parametrize("name,profile,points", BUILTINS, ids=[b[0] for b in BUILTINS])
def test_derivative_matches_finite_difference(name, profile, points):
    for x in points:
        fd = numerical_derivative(profile, x)
        assert fd == pytest.approx(float(profile.Df(x)), rel=1e-6)


class TestRedshiftDifference:
    def test_same_point(self):
        assert redshift_difference(weak_field_profile(9.8), 2.0, 2.0) == 0.0

    def test_one_metre_on_earth(self):
        assert redshift_difference(weak_field_profile(9.8), 1.0, 0.0) == pytest.approx(9.8 / c**2, rel=1e-14)

    @given(st.floats(-100, 100), st.floats(-100, 100))
    def test_antisymmetric(self, x, y):
        p = weak_field_profile(9.8)
        assert redshift_difference(p, x, y) == -redshift_difference(p, y, x)


class TestTolman:
    def test_flat(self):
        assert local_temperature(weak_field_profile(0.0), 300.0, 12.0) == 300.0

    def test_weak_field_first_order(self):
        T = local_temperature(weak_field_profile(9.8), 300.0, 1.0)
        assert T == pytest.approx(300 * (1 - 9.8 / c**2), rel=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidArgumentError):
            local_temperature(weak_field_profile(9.8), 0.0, 0.0)

    @pytest.mark.parametrize("profile,xs", [
        (weak_field_profile(3e13), np.linspace(0, 1000, 11)),
        (schwarzschild_profile(M_EARTH), np.linspace(6.4e6, 4e7, 11)),
    ])
    def test_f_times_T_constant(self, profile, xs):
        T_global = 287.3
        for x in xs:
            fT = float(profile.f(x)) * float(local_temperature(profile, T_global, x))
            assert abs(fT - T_global) <= math.ulp(T_global)

    @given(st.integers(0, 10**6), st.floats(1e-3, 1e4))
    @settings(max_examples=100, deadline=None)
    def test_equilibrium_field_random_profiles(self, seed, T_global):
        from scenarios import random_profile

        prof, x1, x2 = random_profile(np.random.default_rng(seed))
        T1 = float(local_temperature(prof, T_global, x1))
        T2 = float(local_temperature(prof, T_global, x2))
        assert abs(float(prof.f(x1)) * T1 - T_global) <= math.ulp(T_global)
        dS = entropy_exchange_rate(prof, x1, x2, T1, T2, 1e-21)
        assert abs(dS) <= 4 * np.finfo(float).eps * 1e-21 / T1


class TestEntropyExchange:
    def test_vanishes_at_equilibrium_pair(self):
        p = custom_profile([[0, 1.0], [1, 1.25]])
        T1 = 300.0
        T2 = T1 * 1.0 / 1.25
        assert entropy_exchange_rate(p, 0.0, 1.0, T1, T2, 1.0) == 0.0

    def test_flat_equal_temperatures(self):
        assert entropy_exchange_rate(weak_field_profile(0.0), 0.0, 5.0, 300.0, 300.0, 2.0) == 0.0

    def test_tiny_redshift(self):
        # f1 = 1, f2 = 1 + 1e-16 via a weak field chosen so that g * 1 m / c^2 = 1e-16
        p = weak_field_profile(1e-16 * c**2)
        dS = entropy_exchange_rate(p, 0.0, 1.0, 300.0, 300.0, 1.0)
        expected = (1 / 300.0) * (1 - 1 / (1 + 1e-16))
        assert dS == pytest.approx(expected, rel=1e-6)
        assert dS == pytest.approx(3.33e-19, rel=1e-3)

    @pytest.mark.parametrize("profile,xs", [
        (weak_field_profile(3e13), np.linspace(0, 1000, 6)),
        (schwarzschild_profile(M_EARTH), np.linspace(6.4e6, 4e7, 6)),
    ])
    def test_vanishes_on_tolman_field(self, profile, xs):
        T_global = 287.3
        for x1 in xs:
            for x2 in xs:
                T1 = float(local_temperature(profile, T_global, x1))
                T2 = float(local_temperature(profile, T_global, x2))
                dS = entropy_exchange_rate(profile, x1, x2, T1, T2, 1.0)
                # only the rounding of T1, T2 themselves survives
                assert abs(dS) <= 4 * np.finfo(float).eps / T1
                off = entropy_exchange_rate(profile, x1, x2, T1, 1.01 * T2, 1.0)
                assert abs(off) > 1e-5 / T1

    def test_linear_in_energy(self, rng):
        p = weak_field_profile(2e14)
        for _ in range(20):
            T1, T2 = rng.uniform(100, 400, 2)
            d = rng.uniform(-5, 5)
            base = entropy_exchange_rate(p, 0.0, 3.0, T1, T2, 1.0)
            assert entropy_exchange_rate(p, 0.0, 3.0, T1, T2, d) == pytest.approx(d * base, rel=1e-14)

    def test_rejects_nonpositive_temperature(self):
        with pytest.raises(InvalidArgumentError):
            entropy_exchange_rate(weak_field_profile(9.8), 0, 1, -1.0, 300.0, 1.0)


def test_linear_potential():
    V = linear_potential(2.0, 1.0)
    assert V(3.0) == 7.0
