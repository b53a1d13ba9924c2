"""Tolman-equilibrium pair states and the complex-temperature form of gamma."""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from .coherence import PairState
from .constants import c, h, hbar, k_B
from .errors import InvalidArgumentError, NoDephasingError
from .metric import MetricProfile, local_temperature, redshift_difference
from .spectra import EnergySpectrum, partition_function, thermal_moments


@dataclass(frozen=True)
class ThermalScenario:
    T_global: float
    profile: MetricProfile
    spectrum: EnergySpectrum
    x: float
    x_prime: float
    A0: complex = 1.0

    def __post_init__(self):
        if not (self.T_global > 0 and math.isfinite(self.T_global)):
            raise InvalidArgumentError(f"global temperature must be positive, got {self.T_global!r}")
        f = self.profile.f(np.array([self.x, self.x_prime]))
        if not np.all(f > 0):
            raise InvalidArgumentError("redshift factor must be positive at both points")
        if self.A0 == 0:
            raise InvalidArgumentError("A0 must be nonzero")

    @property
    def T_local(self) -> float:
        return float(local_temperature(self.profile, self.T_global, self.x))

    @property
    def T_local_prime(self) -> float:
        return float(local_temperature(self.profile, self.T_global, self.x_prime))

    @property
    def mean_beta(self) -> float:
        """Real inverse temperature ``(f + f') / (2 k_B T_global)`` (1/J)."""
        d, dp = self.profile.f_minus_one(self.x), self.profile.f_minus_one(self.x_prime)
        return float((1.0 + 0.5 * (d + dp)) / (k_B * self.T_global))


@dataclass(frozen=True)
class ComplexTemperature:
    inv_value: complex  # 1/K

    @property
    def beta(self) -> complex:
        return self.inv_value / k_B


def complex_temperature(scenario: ThermalScenario, t: float) -> ComplexTemperature:
    """``1/T_c = (f + f')/(2 T_global) - k_B (f - f') t / (i hbar)``."""
    df = float(redshift_difference(scenario.profile, scenario.x, scenario.x_prime))
    real = scenario.mean_beta * k_B
    return ComplexTemperature(complex(real, k_B * df * t / hbar))


def pair_partition_function(scenario: ThermalScenario) -> float:
    """Geometric mean of the local partition functions at x and x'."""
    Z1 = partition_function(scenario.spectrum, 1.0 / (k_B * scenario.T_local)).real
    Z2 = partition_function(scenario.spectrum, 1.0 / (k_B * scenario.T_local_prime)).real
    return math.sqrt(Z1 * Z2)


def thermal_pair_state(scenario: ThermalScenario) -> PairState:
    """Diagonal block with Boltzmann weights at the mean inverse temperature.

    ``rho_n = A0 / Z(T; x, x') * exp(-E_n (f + f') / (2 k_B T_global))``.
    """
    E = scenario.spectrum.levels
    w = np.exp(-scenario.mean_beta * E)
    rho = complex(scenario.A0) / pair_partition_function(scenario) * w
    return PairState(scenario.spectrum, scenario.x, scenario.x_prime, rho, np.diag(rho))


def thermal_family(T_global: float, profile: MetricProfile, spectrum: EnergySpectrum, A0: complex = 1.0):
    """``(x, x') -> thermal_pair_state`` for use with ``moments_at_coincidence``."""

    def family(x, x_prime):
        return thermal_pair_state(ThermalScenario(T_global, profile, spectrum, x, x_prime, A0))

    return family


def _shifted_partition(scenario: ThermalScenario, beta: complex) -> complex:
    # Z(beta) = exp(-beta E_0) * sum exp(-beta (E - E_0)); the prefactor is kept apart
    return partition_function(scenario.spectrum.shifted(-scenario.spectrum.levels[0]), beta)


def gamma_thermal_closed_form(scenario: ThermalScenario, t):
    """Visibility for the thermal pair state as a ratio of partition functions.

    ``gamma(t) = Z(T_c(t)) / Z(T_c(0))``, evaluated at complex inverse
    temperature; equals 1 at t = 0.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    beta0 = complex_temperature(scenario, 0.0).beta
    Z0 = _shifted_partition(scenario, beta0)
    E0 = scenario.spectrum.levels[0]
    out = np.empty(t_arr.shape, dtype=complex)
    for i, ti in enumerate(t_arr):
        beta = complex_temperature(scenario, ti).beta
        out[i] = np.exp(-1j * beta.imag * E0) * _shifted_partition(scenario, beta) / Z0
    out[t_arr == 0.0] = 1.0
    return complex(out[0]) if np.ndim(t) == 0 else out


def thermal_overlap(scenario: ThermalScenario, t):
    """``Z(T_c(t)) / Z(T_global; x, x')``, normalized by the pair partition function.

    At t = 0 this is at most 1 (log-convexity of Z), with equality when
    f(x) = f(x').
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    Zgm = pair_partition_function(scenario)
    out = np.array([partition_function(scenario.spectrum, complex_temperature(scenario, ti).beta)
                    for ti in t_arr]) / Zgm
    return complex(out[0]) if np.ndim(t) == 0 else out


def local_heat_capacity(scenario: ThermalScenario) -> float:
    return thermal_moments(scenario.spectrum, scenario.T_local).heat_capacity


def thermal_tau2(scenario: ThermalScenario) -> Optional[float]:
    """Proper-time quadratic decoherence scale at x for the thermal state.

    ``h f(x)^2 / (|(x' - x) Df(x)| sqrt(k_B C(x)) T_global)``; ``None`` when
    the heat capacity vanishes.
    """
    dx = scenario.x_prime - scenario.x
    Df = float(scenario.profile.Df(scenario.x))
    if dx == 0.0 or Df == 0.0:
        raise NoDephasingError("tau2 needs x' != x and a nonzero redshift gradient")
    C = local_heat_capacity(scenario)
    if C <= 0.0:
        return None
    f = float(scenario.profile.f(scenario.x))
    return h * f / (abs(dx * Df) * math.sqrt(k_B * C) * scenario.T_local)


def tau2_weak_field_estimate(T: float, C: float, g: float, dx: float) -> float:
    """Weak-field ``tau2 ~ (h / (k_B T)) sqrt(k_B / C) c^2 / (g dx)``."""
    if not (T > 0 and C > 0 and g > 0 and dx > 0):
        raise InvalidArgumentError("T, C, g and dx must all be positive")
    return (h / (k_B * T)) * math.sqrt(k_B / C) * c**2 / (g * dx)
