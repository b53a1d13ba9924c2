"""Scenario files: JSON documents with explicit units.

A quantity is either a bare number (SI) or ``{"value": v, "unit": "..."}``.
Complex numbers are a bare real or ``[re, im]``.

Example::

    {
      "spectrum": {"kind": "harmonic", "quantum": 1.0, "unit": "kT", "T_ref": 300, "n_levels": 60},
      "profile": {"kind": "weak_field", "g": 9.8, "x_ref": 0.0},
      "state": {"kind": "thermal", "T_global": 300},
      "x": 0.0,
      "x_prime": {"value": 1, "unit": "m"},
      "time": {"t_max": 5000, "n_points": 101, "spacing": "linear"},
      "analyses": ["trace", "timescales", "thermal", "period"]
    }
"""

from __future__ import annotations

from dataclasses import dataclass, field
import hashlib
import json
import math
from typing import Any, Optional

import numpy as np

from . import metric
from .coherence import PairState, pure_superposition_state
from .constants import M_EARTH, M_SUN, g_earth
from .errors import InvalidArgumentError
from .spectra import EnergySpectrum, energy_in_joules, make_harmonic
from .thermal import ThermalScenario, thermal_pair_state

ANALYSES = ("trace", "expansion", "timescales", "thermal", "period")
STATE_KINDS = ("thermal", "pure_superposition", "explicit")

_UNITS = {
    "length": {"m": 1.0, "km": 1e3, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "min": 60.0, "h": 3600.0, "d": 86400.0},
    "temperature": {"K": 1.0},
    "acceleration": {"m/s^2": 1.0, "m/s2": 1.0, "g0": g_earth},
    "mass": {"kg": 1.0, "M_earth": M_EARTH, "M_sun": M_SUN},
    "energy_gradient": {"J/m": 1.0, "eV/m": 1.602_176_634e-19},
}


class ConfigError(InvalidArgumentError):
    """A scenario file failed to parse or validate; ``path`` names the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def _get(d: dict, key: str, path: str, default: Any = ...):
    if not isinstance(d, dict):
        raise ConfigError(path, "expected an object")
    if key not in d:
        if default is ...:
            raise ConfigError(f"{path}.{key}".lstrip("."), "required field is missing")
        return default
    return d[key]


def quantity(value, dimension: str, path: str, default_unit: Optional[str] = None) -> float:
    unit = default_unit
    if isinstance(value, dict):
        unit = value.get("unit", unit)
        value = value.get("value")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    table = _UNITS[dimension]
    unit = unit or next(iter(table))
    if unit not in table:
        raise ConfigError(path, f"unknown {dimension} unit {unit!r}; expected one of {sorted(table)}")
    out = float(value) * table[unit]
    if not math.isfinite(out):
        raise ConfigError(path, "must be finite")
    return out


def complex_value(value, path: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        return complex(value[0], value[1])
    raise ConfigError(path, f"expected a number or [re, im], got {value!r}")


def _energy(value, path: str, unit: str, T_ref):
    if isinstance(value, dict):
        unit = value.get("unit", unit)
        value = value.get("value")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    try:
        return energy_in_joules(float(value), unit, T_ref)
    except InvalidArgumentError as exc:
        raise ConfigError(path, str(exc)) from None


def build_spectrum(spec: dict, path: str = "spectrum") -> EnergySpectrum:
    kind = _get(spec, "kind", path)
    unit = _get(spec, "unit", path, "J")
    T_ref = _get(spec, "T_ref", path, None)
    if T_ref is not None:
        T_ref = quantity(T_ref, "temperature", f"{path}.T_ref")
    try:
        if kind == "harmonic":
            quantum = _energy(_get(spec, "quantum", path), f"{path}.quantum", unit, T_ref)
            n = _get(spec, "n_levels", path)
            if isinstance(n, bool) or not isinstance(n, int):
                raise ConfigError(f"{path}.n_levels", f"expected an integer, got {n!r}")
            return make_harmonic(quantum, n)
        if kind == "custom":
            levels = _get(spec, "levels", path)
            if not isinstance(levels, list) or not levels:
                raise ConfigError(f"{path}.levels", "expected a non-empty list")
            return EnergySpectrum([_energy(v, f"{path}.levels[{i}]", unit, T_ref)
                                   for i, v in enumerate(levels)])
    except ConfigError:
        raise
    except InvalidArgumentError as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(f"{path}.kind", f"unknown spectrum kind {kind!r}; expected 'harmonic' or 'custom'")


def _potential(spec, path: str):
    if spec is None:
        return metric._zero
    kind = _get(spec, "kind", path)
    if kind == "zero":
        return metric._zero
    if kind == "linear":
        slope = quantity(_get(spec, "slope", path), "energy_gradient", f"{path}.slope")
        offset = _energy(_get(spec, "offset", path, 0.0), f"{path}.offset", "J", None)
        return metric.linear_potential(slope, offset)
    raise ConfigError(f"{path}.kind", f"unknown potential kind {kind!r}; expected 'zero' or 'linear'")


def build_profile(spec: dict, path: str = "profile") -> metric.MetricProfile:
    kind = _get(spec, "kind", path)
    if kind == "weak_field":
        g = quantity(_get(spec, "g", path), "acceleration", f"{path}.g")
        x_ref = quantity(_get(spec, "x_ref", path, 0.0), "length", f"{path}.x_ref")
        prof = metric.weak_field_profile(g, x_ref)
    elif kind == "schwarzschild":
        mass = quantity(_get(spec, "mass", path), "mass", f"{path}.mass")
        try:
            prof = metric.schwarzschild_profile(mass)
        except InvalidArgumentError as exc:
            raise ConfigError(f"{path}.mass", str(exc)) from None
    elif kind == "custom":
        try:
            return metric.custom_profile(_get(spec, "samples", path))
        except (InvalidArgumentError, ValueError, TypeError) as exc:
            raise ConfigError(f"{path}.samples", str(exc)) from None
    else:
        raise ConfigError(f"{path}.kind",
                          f"unknown profile kind {kind!r}; expected 'weak_field', 'schwarzschild' or 'custom'")
    pot = _get(spec, "potential", path, None)
    if pot is not None:
        prof = prof.with_potential(_potential(pot, f"{path}.potential"), pot)
    return prof


@dataclass
class TimeGrid:
    t_max: float
    n_points: int
    spacing: str = "linear"
    t_min: Optional[float] = None

    def times(self) -> np.ndarray:
        if self.spacing == "linear":
            return np.linspace(0.0, self.t_max, self.n_points)
        t_min = self.t_min if self.t_min is not None else self.t_max * 1e-6
        return np.concatenate([[0.0], np.geomspace(t_min, self.t_max, self.n_points - 1)])


def build_time(spec: dict, path: str = "time") -> TimeGrid:
    t_max = quantity(_get(spec, "t_max", path), "time", f"{path}.t_max")
    n = _get(spec, "n_points", path)
    spacing = _get(spec, "spacing", path, "linear")
    if not t_max > 0:
        raise ConfigError(f"{path}.t_max", "must be positive")
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ConfigError(f"{path}.n_points", f"expected an integer >= 2, got {n!r}")
    if spacing not in ("linear", "log"):
        raise ConfigError(f"{path}.spacing", f"expected 'linear' or 'log', got {spacing!r}")
    t_min = _get(spec, "t_min", path, None)
    if t_min is not None:
        t_min = quantity(t_min, "time", f"{path}.t_min")
        if not 0 < t_min < t_max:
            raise ConfigError(f"{path}.t_min", "must lie in (0, t_max)")
    return TimeGrid(t_max, n, spacing, t_min)


@dataclass
class Scenario:
    """A validated, fully built scenario."""

    raw: dict
    spectrum: EnergySpectrum
    profile: metric.MetricProfile
    x: float
    x_prime: float
    state_kind: str
    state: PairState
    time: TimeGrid
    analyses: tuple
    thermal: Optional[ThermalScenario] = None
    scales: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        return config_hash(self.raw)


def config_hash(raw: dict) -> str:
    canonical = json.dumps(raw, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(canonical.encode()).hexdigest()


def _build_state(spec: dict, spectrum, profile, x, x_prime, path: str = "state"):
    kind = _get(spec, "kind", path)
    if kind not in STATE_KINDS:
        raise ConfigError(f"{path}.kind", f"unknown state kind {kind!r}; expected one of {list(STATE_KINDS)}")
    try:
        if kind == "thermal":
            T = quantity(_get(spec, "T_global", path), "temperature", f"{path}.T_global")
            A0 = complex_value(_get(spec, "A0", path, 1.0), f"{path}.A0")
            th = ThermalScenario(T, profile, spectrum, x, x_prime, A0)
            return kind, thermal_pair_state(th), th
        if kind == "pure_superposition":
            alpha = complex_value(_get(spec, "alpha", path), f"{path}.alpha")
            beta = complex_value(_get(spec, "beta", path), f"{path}.beta")
            amps = _get(spec, "amplitudes", path)
            if not isinstance(amps, list):
                raise ConfigError(f"{path}.amplitudes", "expected a list")
            c = [complex_value(v, f"{path}.amplitudes[{i}]") for i, v in enumerate(amps)]
            return kind, pure_superposition_state(spectrum, x, x_prime, alpha, beta, c), None
        weights = _get(spec, "weights", path)
        if not isinstance(weights, list):
            raise ConfigError(f"{path}.weights", "expected a list")
        w = [complex_value(v, f"{path}.weights[{i}]") for i, v in enumerate(weights)]
        return kind, PairState(spectrum, x, x_prime, np.array(w)), None
    except ConfigError:
        raise
    except InvalidArgumentError as exc:
        raise ConfigError(path, str(exc)) from None


def build_scenario(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ConfigError("", "top level must be an object")
    if "states" in raw:
        raise ConfigError("states", "exactly one 'state' block is allowed")
    spectrum = build_spectrum(_get(raw, "spectrum", ""))
    profile = build_profile(_get(raw, "profile", ""))
    x = quantity(_get(raw, "x", ""), "length", "x")
    x_prime = quantity(_get(raw, "x_prime", ""), "length", "x_prime")
    try:
        profile.f(np.array([x, x_prime]))
    except Exception as exc:
        raise ConfigError("x", str(exc)) from None
    kind, state, th = _build_state(_get(raw, "state", ""), spectrum, profile, x, x_prime)
    time = build_time(_get(raw, "time", ""))

    analyses = _get(raw, "analyses", "", ["trace"])
    if not isinstance(analyses, list) or any(a not in ANALYSES for a in analyses):
        raise ConfigError("analyses", f"expected a subset of {list(ANALYSES)}, got {analyses!r}")
    if "thermal" in analyses and th is None:
        raise ConfigError("analyses", "'thermal' analysis needs a thermal state")

    scales = {}
    raw_scales = _get(raw, "scales", "", {}) or {}
    for key in ("ell", "L", "dx_extent"):
        if key in raw_scales:
            scales[key] = quantity(raw_scales[key], "length", f"scales.{key}")
            if not scales[key] > 0:
                raise ConfigError(f"scales.{key}", "must be positive")
    return Scenario(raw, spectrum, profile, x, x_prime, kind, state, time,
                    tuple(dict.fromkeys(analyses)), th, scales)


def load_config(path) -> dict:
    """Read a scenario or run manifest; a manifest contributes its ``config`` block."""
    with open(path) as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if isinstance(raw, dict) and "manifest_version" in raw and "config" in raw:
        raw = raw["config"]
    return raw


def regime_warnings(scales: dict, threshold: float = 0.1) -> list:
    """Warn unless the system size is much smaller than L and the delocalization."""
    out = []
    ell = scales.get("ell")
    if ell is None:
        return out
    for key, label in (("L", "curvature length L"), ("dx_extent", "delocalization extent")):
        if key in scales and ell / scales[key] >= threshold:
            out.append(f"system size ell={ell:g} m is not much smaller than the {label} "
                       f"({scales[key]:g} m); small-system approximation is questionable")
    return out

