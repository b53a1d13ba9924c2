"""Static redshift profiles f(x), external potentials V(x), Tolman temperatures.

Positions are a single coordinate in metres. Every profile carries the
deficit ``f(x) - 1`` as its own function, because in weak fields redshift
differences (~1e-16 per metre on Earth) sit below the resolution of ``f``
itself in double precision. Differences of ``f`` are always formed from the
deficit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .constants import G, c
from .errors import DomainError, InvalidArgumentError

ArrayFunc = Callable[[np.ndarray], np.ndarray]


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class MetricProfile:
    """A static redshift profile.

    Attributes
    ----------
    deficit : callable
        ``f(x) - 1``, dimensionless.
    df : callable
        ``df/dx`` in 1/m.
    potential : callable
        External potential ``V(x)`` in J.
    domain : (float, float)
        Open interval of valid positions; ``closed`` makes it closed.
    descriptor : dict
        Profile kind and parameters, suitable for serialization.
    """

    deficit: ArrayFunc
    df: ArrayFunc
    potential: ArrayFunc = _zero
    domain: tuple = (-math.inf, math.inf)
    closed: bool = False
    descriptor: dict = field(default_factory=dict)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi = self.domain
        if self.closed:
            ok = (x >= lo) & (x <= hi)
        else:
            ok = (x > lo) & (x < hi)
        if not np.all(ok & np.isfinite(x)):
            bad = x[~ok] if x.ndim else x
            raise DomainError(
                f"position(s) {np.atleast_1d(bad)[:3].tolist()} outside profile domain "
                f"{'[' if self.closed else '('}{lo}, {hi}{']' if self.closed else ')'}"
            )
        return x

    def f(self, x):
        x = self._check(x)
        return 1.0 + self.deficit(x)

    def f_minus_one(self, x):
        return self.deficit(self._check(x))

    def Df(self, x):
        return self.df(self._check(x))

    def V(self, x):
        return self.potential(self._check(x))

    def with_potential(self, potential: ArrayFunc, descriptor: Optional[dict] = None) -> "MetricProfile":
        desc = dict(self.descriptor)
        if descriptor is not None:
            desc["potential"] = descriptor
        return MetricProfile(self.deficit, self.df, potential, self.domain, self.closed, desc)


def linear_potential(slope: float, offset: float = 0.0) -> ArrayFunc:
    """``V(x) = offset + slope * x`` (J, with slope in J/m)."""

    def V(x):
        return offset + slope * np.asarray(x, dtype=float)

    return V


def weak_field_profile(g: float, x_ref: float = 0.0, potential: ArrayFunc = _zero) -> MetricProfile:
    """Uniform field: ``f(x) = 1 + g (x - x_ref) / c^2``."""
    k = g / c**2

    def deficit(x):
        return k * (np.asarray(x, dtype=float) - x_ref)

    def df(x):
        return np.full_like(np.asarray(x, dtype=float), k)

    if g > 0:
        domain = (x_ref - 1.0 / k, math.inf)
    elif g < 0:
        domain = (-math.inf, x_ref - 1.0 / k)
    else:
        domain = (-math.inf, math.inf)
    return MetricProfile(deficit, df, potential, domain, False,
                         {"kind": "weak_field", "g": g, "x_ref": x_ref})


def schwarzschild_profile(mass: float, potential: ArrayFunc = _zero) -> MetricProfile:
    """Exterior Schwarzschild lapse ``f(r) = sqrt(1 - 2GM/(r c^2))``, r in metres."""
    if not mass > 0:
        raise InvalidArgumentError(f"mass must be positive, got {mass!r}")
    r_s = 2.0 * G * mass / c**2

    def deficit(r):
        u = r_s / np.asarray(r, dtype=float)
        # sqrt(1 - u) - 1 without cancellation
        return -u / (1.0 + np.sqrt(1.0 - u))

    def df(r):
        r = np.asarray(r, dtype=float)
        return 0.5 * r_s / (r**2 * np.sqrt(1.0 - r_s / r))

    return MetricProfile(deficit, df, potential, (r_s, math.inf), False,
                         {"kind": "schwarzschild", "mass": mass})


def custom_profile(samples: Sequence[Sequence[float]]) -> MetricProfile:
    """Cubic-spline profile through ``[[x, f, V], ...]`` rows (V optional)."""
    table = np.asarray(samples, dtype=float)
    if table.ndim != 2 or table.shape[1] not in (2, 3) or table.shape[0] < 2:
        raise InvalidArgumentError("samples must be at least two rows of [x, f] or [x, f, V]")
    x, fv = table[:, 0], table[:, 1]
    if not np.all(np.isfinite(table)):
        raise InvalidArgumentError("samples must be finite")
    if not np.all(np.diff(x) > 0):
        raise InvalidArgumentError("sample positions must be strictly increasing")
    if not np.all(fv > 0):
        raise InvalidArgumentError("redshift factor samples must be positive")
    Vv = table[:, 2] if table.shape[1] == 3 else np.zeros_like(x)

    spline_d = CubicSpline(x, fv - 1.0)
    spline_dd = spline_d.derivative()
    spline_V = CubicSpline(x, Vv)

    def deficit(q):
        return spline_d(q)

    def df(q):
        return spline_dd(q)

    def potential(q):
        return spline_V(q)

    return MetricProfile(deficit, df, potential, (float(x[0]), float(x[-1])), True,
                         {"kind": "custom", "samples": table.tolist()})


def numerical_derivative(profile: MetricProfile, x: float, step: Optional[float] = None) -> float:
    """Central difference of f at x, formed on the deficit.

    The default step is ``max(|x|, 1) * 1e-6`` m.
    """
    if step is None:
        step = max(abs(x), 1.0) * 1e-6
    step = max(step, 1e-9)
    return float((profile.f_minus_one(x + step) - profile.f_minus_one(x - step)) / (2.0 * step))


def redshift_difference(profile: MetricProfile, x, x_prime):
    """``f(x) - f(x')``."""
    return profile.f_minus_one(x) - profile.f_minus_one(x_prime)


def local_temperature(profile: MetricProfile, T_global: float, x):
    """Tolman local temperature ``T_global / f(x)``."""
    if not T_global > 0:
        raise InvalidArgumentError(f"global temperature must be positive, got {T_global!r}")
    return T_global / profile.f(x)


def entropy_exchange_rate(profile: MetricProfile, x1: float, x2: float,
                          T1: float, T2: float, delta1: float) -> float:
    """Entropy change when local energy ``delta1`` leaves x1's bath for x2's.

    Energy conservation under the global Hamiltonian gives
    ``delta2 = -(f1/f2) delta1``, and ``dS = delta1/T1 + delta2/T2`` which is
    rewritten as ``delta1 (f2 T2 - f1 T1) / (f2 T1 T2)``.
    """
    if not (T1 > 0 and T2 > 0):
        raise InvalidArgumentError("temperatures must be positive")
    d1 = float(profile.f_minus_one(x1))
    d2 = float(profile.f_minus_one(x2))
    mismatch = math.fsum([T2, -T1, d2 * T2, -d1 * T1])
    return delta1 * mismatch / ((1.0 + d2) * T1 * T2)
