import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstnoise.channel import (
    ChannelParams,
    crosstalk_power_watts,
    crosstalk_rate_per_s,
    mean_noise_photons_per_window,
    raman_power_watts,
    raman_rate_per_s,
    transmittance,
)

H = 6.62607015e-34
C = 2.99792458e8


def table1(**kw):
    return ChannelParams(**kw)


def si_photon_rate(power_w, wavelength_m):
    # photons per second = P / (h c / lambda)
    photon_energy_j = H * C / wavelength_m
    return power_w / photon_energy_j


class TestTransmittance:
    def test_zero_length(self):
        assert transmittance(table1(length_km=0.0)) == 1.0

    @pytest.mark.parametrize("L, expected", [(50.0, 0.1), (100.0, 0.01)])
    def test_db_convention(self, L, expected):
        assert transmittance(table1(length_km=L)) == pytest.approx(expected, rel=1e-14)

    def test_monotone(self):
        Ls = np.linspace(0, 300, 301)
        T = [transmittance(table1(length_km=L)) for L in Ls]
        assert all(b < a for a, b in zip(T, T[1:]))
        G = [transmittance(table1(length_km=20, gamma_db_per_km=g)) for g in np.linspace(0.01, 1, 50)]
        assert all(b < a for a, b in zip(G, G[1:]))


class TestRaman:
    def test_no_power(self):
        assert raman_power_watts(table1(length_km=50)) == 0.0
        assert raman_rate_per_s(table1(length_km=50)) == 0.0

    def test_no_length(self):
        assert raman_power_watts(table1(p_in_watts=1e-3)) == 0.0

    def test_power_hand_value(self):
        p = raman_power_watts(table1(p_in_watts=1e-3, length_km=50))
        assert p == pytest.approx(1e-3 * 50 * 0.1 * 1.5e-9 * 0.045, rel=1e-12)
        assert p == pytest.approx(3.375e-13, rel=1e-12)

    def test_rate_unit_audit(self):
        # SI route: d in 1/(m*m) -> 1.5e-9 / (1e3 m * 1e-9 m) ; L in m ; dlambda in m
        d_si = 1.5e-9 / (1e3 * 1e-9)
        power = 1e-3 * 50e3 * 10 ** (-0.2 * 50 / 10) * d_si * 45e-12
        expected = si_photon_rate(power, 1548e-9)
        got = raman_rate_per_s(table1(p_in_watts=1e-3, length_km=50))
        assert got == pytest.approx(expected, rel=1e-9)
        assert got == pytest.approx(2.63e6, rel=2e-3)

    def test_linear_in_power(self):
        a = raman_rate_per_s(table1(p_in_watts=1e-3, length_km=30))
        b = raman_rate_per_s(table1(p_in_watts=2e-3, length_km=30))
        assert b == pytest.approx(2 * a, rel=1e-12)


class TestCrosstalk:
    def test_zero_xi(self):
        assert crosstalk_rate_per_s(table1(p_in_watts=1e-3, length_km=50)) == 0.0

    def test_zero_length(self):
        assert crosstalk_rate_per_s(table1(p_in_watts=1e-3, xi_per_km=5e-9)) == 0.0

    def test_hand_values(self):
        ch = table1(p_in_watts=1e-3, length_km=50, xi_per_km=5e-9)
        assert crosstalk_power_watts(ch) == pytest.approx(2.5e-11, rel=1e-12)
        xi_si = 5e-9 / 1e3
        expected = si_photon_rate(1e-3 * 50e3 * 0.1 * xi_si, 1548e-9)
        assert crosstalk_rate_per_s(ch) == pytest.approx(expected, rel=1e-9)
        assert crosstalk_rate_per_s(ch) == pytest.approx(1.95e8, rel=2e-3)


class TestNoiseBudget:
    def test_no_power(self):
        assert mean_noise_photons_per_window(table1(length_km=50, xi_per_km=1e-9)) == 0.0

    def test_raman_only(self):
        n = mean_noise_photons_per_window(table1(p_in_watts=1e-3, length_km=50))
        assert n == pytest.approx(26.3, rel=0.01)

    def test_with_crosstalk(self):
        ch = table1(p_in_watts=1e-3, length_km=50, xi_per_km=5e-9)
        n = mean_noise_photons_per_window(ch)
        assert n == pytest.approx(1e-5 * (raman_rate_per_s(ch) + crosstalk_rate_per_s(ch)), rel=1e-15)
        assert n == pytest.approx(1.97e3, rel=0.01)

    @given(
        st.floats(0, 0.5),
        st.floats(0, 500),
        st.floats(1e-6, 1),
        st.floats(0, 1e-8),
        st.floats(1.0001, 100),
    )
    def test_nonnegative_and_linear(self, gamma, L, p, xi, k):
        ch = table1(gamma_db_per_km=gamma, length_km=L, p_in_watts=p, xi_per_km=xi)
        scaled = dataclasses.replace(ch, p_in_watts=p * k)
        for f in (raman_power_watts, crosstalk_rate_per_s, mean_noise_photons_per_window):
            a, b = f(ch), f(scaled)
            assert a >= 0 and b >= 0
            assert b == pytest.approx(k * a, rel=1e-12, abs=1e-300)


class TestValidation:
    @pytest.mark.parametrize(
        "kw",
        [
            {"gamma_db_per_km": -1},
            {"length_km": -0.1},
            {"lambda_q_nm": 0},
            {"tau_s": 0},
            {"p_in_watts": float("nan")},
            {"xi_per_km": float("inf")},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            ChannelParams(**kw)

    def test_defaults_are_table_values(self):
        ch = ChannelParams()
        assert (ch.lambda_q_nm, ch.delta_lambda_nm, ch.raman_cross_section_per_km_nm) == (
            1548.0,
            0.045,
            1.5e-9,
        )
        assert (ch.gamma_db_per_km, ch.tau_s) == (0.2, 1e-5)
