"""Fiber link noise budget: attenuation, forward Raman scatter and WDM crosstalk.

Lengths are kept in km, wavelengths in nm and powers in W on the public
surface. Conversion to SI happens only inside the photon-rate functions.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

PLANCK_J_S = 6.62607015e-34
SPEED_OF_LIGHT_M_S = 2.99792458e8

NM_TO_M = 1e-9


@dataclass(frozen=True)
class ChannelParams:
    """Physical constants of one quantum channel sharing a fiber with a classical one.

    Defaults are the 1548 nm quantum channel next to a 1550 nm carrier:
    0.2 dB/km loss, 45 pm filter, effective Raman cross-section
    1.5e-9 per km per nm and a 10 us detection window.
    """

    gamma_db_per_km: float = 0.2
    length_km: float = 0.0
    lambda_q_nm: float = 1548.0
    delta_lambda_nm: float = 0.045
    raman_cross_section_per_km_nm: float = 1.5e-9
    p_in_watts: float = 0.0
    xi_per_km: float = 0.0
    tau_s: float = 1e-5

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"{f.name} must be a finite number, got {v!r}")
            if v < 0:
                raise ValueError(f"{f.name} must be non-negative, got {v!r}")
        if self.lambda_q_nm <= 0:
            raise ValueError("lambda_q_nm must be positive")
        if self.tau_s <= 0:
            raise ValueError("tau_s must be positive")

    def with_length(self, length_km: float) -> "ChannelParams":
        return dataclasses.replace(self, length_km=float(length_km))


def transmittance(params: ChannelParams) -> float:
    """Fraction of signal power surviving the fiber, ``10**(-gamma L / 10)``."""
    if params.length_km == 0 or params.gamma_db_per_km == 0:
        return 1.0
    return 10.0 ** (-params.gamma_db_per_km * params.length_km / 10.0)


def _photons_per_joule(params: ChannelParams) -> float:
    return params.lambda_q_nm * NM_TO_M / (PLANCK_J_S * SPEED_OF_LIGHT_M_S)


def raman_power_watts(params: ChannelParams) -> float:
    """Forward Raman power in the quantum band, in W."""
    return (
        params.p_in_watts
        * params.length_km
        * transmittance(params)
        * params.raman_cross_section_per_km_nm
        * params.delta_lambda_nm
    )


def raman_rate_per_s(params: ChannelParams) -> float:
    return raman_power_watts(params) * _photons_per_joule(params)


def crosstalk_power_watts(params: ChannelParams) -> float:
    return params.p_in_watts * params.length_km * transmittance(params) * params.xi_per_km


def crosstalk_rate_per_s(params: ChannelParams) -> float:
    return crosstalk_power_watts(params) * _photons_per_joule(params)


def mean_noise_photons_per_window(params: ChannelParams) -> float:
    """Expected Raman plus crosstalk photons in one detection window."""
    return params.tau_s * (raman_rate_per_s(params) + crosstalk_rate_per_s(params))
