"""Internal energy spectra and their thermal statistics.

Energies are stored in joules. Degenerate levels are represented by
repetition, so every sum over levels is a sum over internal states.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Iterable, Optional

import numpy as np

from .constants import eV, k_B
from .errors import InvalidArgumentError

ENERGY_UNITS = ("J", "eV", "meV", "kT")


def energy_in_joules(value, unit: str = "J", T_ref: Optional[float] = None):
    """Convert an energy (scalar or array) to joules.

    ``unit="kT"`` means multiples of ``k_B * T_ref``.
    """
    value = np.asarray(value, dtype=float)
    if unit == "J":
        out = value
    elif unit == "eV":
        out = value * eV
    elif unit == "meV":
        out = value * (1e-3 * eV)
    elif unit == "kT":
        if T_ref is None or not T_ref > 0:
            raise InvalidArgumentError("unit 'kT' needs a positive reference temperature T_ref")
        out = value * (k_B * T_ref)
    else:
        raise InvalidArgumentError(f"unknown energy unit {unit!r}; expected one of {ENERGY_UNITS}")
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class EnergySpectrum:
    """A finite, ascending list of internal energy levels (J)."""

    levels: np.ndarray

    def __post_init__(self):
        levels = np.sort(np.asarray(self.levels, dtype=float).ravel())
        if levels.size == 0:
            raise InvalidArgumentError("a spectrum needs at least one level")
        if not np.all(np.isfinite(levels)):
            raise InvalidArgumentError("energy levels must be finite")
        levels.setflags(write=False)
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_ev(cls, levels: Iterable[float]) -> "EnergySpectrum":
        return cls(energy_in_joules(np.asarray(list(levels), dtype=float), "eV"))

    @classmethod
    def from_thermal_units(cls, multiples: Iterable[float], T_ref: float) -> "EnergySpectrum":
        """Levels given as multiples of ``k_B * T_ref``."""
        return cls(energy_in_joules(np.asarray(list(multiples), dtype=float), "kT", T_ref))

    def __len__(self) -> int:
        return self.levels.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, EnergySpectrum):
            return NotImplemented
        return np.array_equal(self.levels, other.levels)

    def __hash__(self) -> int:
        return hash(self.levels.tobytes())

    def shifted(self, delta: float) -> "EnergySpectrum":
        return EnergySpectrum(self.levels + delta)


@dataclass(frozen=True)
class ThermalMoments:
    mean_energy: float
    energy_std: float
    heat_capacity: float
    partition_value: complex


def make_harmonic(quantum: float, n_levels: int) -> EnergySpectrum:
    """Return the levels ``0, quantum, ..., (n_levels - 1) * quantum``."""
    if not quantum > 0 or not math.isfinite(quantum):
        raise InvalidArgumentError(f"quantum must be positive and finite, got {quantum!r}")
    if int(n_levels) != n_levels or n_levels < 1:
        raise InvalidArgumentError(f"n_levels must be a positive integer, got {n_levels!r}")
    return EnergySpectrum(np.arange(int(n_levels), dtype=float) * quantum)


def _divides(eps: float, values: np.ndarray, rel_tol: float) -> bool:
    q = values / eps
    return bool(np.all(np.abs(q - np.round(q)) <= rel_tol))


def commensurate_gcd(spectrum: EnergySpectrum, rel_tol: float = 1e-9) -> Optional[float]:
    """Greatest common divisor of the nonzero levels, or ``None``.

    Floating-point Euclid with nearest-integer remainders; a remainder below
    ``rel_tol * max|E|`` counts as zero. The Euclid result is refitted by
    least squares to the integer multiples it implies, and accepted only if
    every ``E_n / eps`` lies within ``rel_tol`` of an integer.
    """
    if not 0 < rel_tol <= 1e-3:
        raise InvalidArgumentError(f"rel_tol must lie in (0, 1e-3], got {rel_tol!r}")
    values = np.abs(spectrum.levels)
    scale = float(values.max())
    if scale == 0.0:
        raise InvalidArgumentError("commensurability is undefined for an all-zero spectrum")
    cutoff = rel_tol * scale
    nonzero = np.unique(values[values > cutoff])
    if nonzero.size == 0:
        return None

    eps = float(nonzero[-1])
    for v in nonzero[::-1][1:]:
        a, b = eps, float(v)
        while b >= cutoff:
            r = abs(a - round(a / b) * b)
            a, b = b, r
        eps = a
        if eps < cutoff:
            return None

    # Euclid amplifies rounding; refit eps to the integer multiples it implies
    k = np.round(nonzero / eps)
    common = math.gcd(*(int(v) for v in k))
    k = k / common
    eps = float(np.dot(k, nonzero) / np.dot(k, k))
    if not _divides(eps, nonzero, rel_tol):
        return None
    return eps


def partition_function(spectrum: EnergySpectrum, beta: complex) -> complex:
    """Sum of ``exp(-beta * E_n)`` at a real or complex inverse temperature (1/J).

    Real and imaginary parts are accumulated with ``math.fsum``.
    """
    terms = np.exp(-complex(beta) * spectrum.levels)
    if not np.all(np.isfinite(terms)):
        raise OverflowError("partition sum overflows; shift the spectrum toward zero")
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def boltzmann_weights(spectrum: EnergySpectrum, beta: float) -> np.ndarray:
    """Normalized occupations at real inverse temperature ``beta`` (1/J)."""
    shifted = spectrum.levels - spectrum.levels[0]
    w = np.exp(-beta * shifted)
    return w / math.fsum(w)


def thermal_moments(spectrum: EnergySpectrum, temperature: float) -> ThermalMoments:
    if not temperature > 0:
        raise InvalidArgumentError(f"temperature must be positive, got {temperature!r}")
    beta = 1.0 / (k_B * temperature)
    p = boltzmann_weights(spectrum, beta)
    E = spectrum.levels
    mean = math.fsum(p * E)
    # variance about the mean avoids cancellation for offset spectra
    var = math.fsum(p * (E - mean) ** 2)
    Z_shifted = math.fsum(np.exp(-beta * (E - E[0])))
    Z = math.exp(-beta * E[0]) * Z_shifted
    return ThermalMoments(
        mean_energy=mean,
        energy_std=math.sqrt(var),
        heat_capacity=var / (k_B * temperature**2),
        partition_value=complex(Z),
    )
