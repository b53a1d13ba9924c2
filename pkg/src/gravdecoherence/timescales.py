"""Short-time behaviour of |gamma|^2 and the two decoherence time scales."""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math
from typing import Callable, Optional
import warnings

import numpy as np

from .coherence import PairState, decompose, revival_period, visibility
from .constants import h, hbar
from .errors import InvalidArgumentError, NoDephasingError, PrecisionWarning
from .metric import MetricProfile, redshift_difference

StateFamily = Callable[[float, float], PairState]

_MIN_PHASE_STEP = 1e-13


@dataclass(frozen=True)
class ShortTimeReport:
    """Second-order-in-(x' - x) description of the early coherence change.

    ``|gamma|^2 ~ 1 + slope_linear * t + curvature * t**2``. Undefined time
    scales are ``None``.
    """

    slope_linear: float
    curvature: float
    E_Dchi: float
    delta_E: float
    t1: Optional[float]
    t2: Optional[float]
    tau1: Optional[float]
    tau2: Optional[float]
    validity_radius: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return "".join(f"{k} = {_fmt(v)}\n" for k, v in self.as_dict().items())


def _fmt(v) -> str:
    return "absent" if v is None else format(float(v), ".17g")


def expansion_coefficients(state: PairState, profile: MetricProfile):
    """Coefficients ``(c1, c2)`` of t and t^2 in the expansion of |gamma|^2."""
    dec = decompose(state)
    s = float(redshift_difference(profile, state.x, state.x_prime)) / hbar
    E = state.spectrum.levels
    a, chi = dec.weights, dec.phases
    m1 = np.sum(E * a * np.exp(1j * chi))
    c1 = 2.0 * s * float(np.sum(E * a * np.sin(chi)))
    c2 = s**2 * (abs(m1) ** 2 - float(np.sum(E**2 * a * np.cos(chi))))
    return c1, c2


def expand_visibility(state: PairState, profile: MetricProfile, t):
    """Quadratic approximation of ``|gamma(t)|^2``."""
    c1, c2 = expansion_coefficients(state, profile)
    t = np.asarray(t, dtype=float)
    out = 1.0 + c1 * t + c2 * t**2
    return float(out) if out.ndim == 0 else out


def expansion_remainder(state: PairState, profile: MetricProfile, t):
    """Exact ``|gamma|^2`` minus its quadratic approximation."""
    exact = np.abs(visibility(state, profile, t)) ** 2
    return exact - expand_visibility(state, profile, t)


def richardson_ratios(state: PairState, profile: MetricProfile, t: float):
    """``R(t)/R(t/2)`` and ``R(t/2)/R(t/4)`` for the expansion remainder R.

    Both approach 8 when the remainder is cubic.
    """
    r = expansion_remainder(state, profile, np.array([t, t / 2, t / 4]))
    return float(r[0] / r[1]), float(r[1] / r[2])


def _wrap(phase):
    phase = np.asarray(phase, dtype=float)
    # only touch values outside (-pi, pi]; the modulo would flush tiny phases to zero
    wrapped = (phase + math.pi) % (2 * math.pi) - math.pi
    return np.where(np.abs(phase) > math.pi, wrapped, phase)


def moments_at_coincidence(state_family: StateFamily, x: float,
                           dx_step: Optional[float] = None):
    """``(<E D chi>(x; 0), Delta E(x; 0))`` from a family ``(x, x') -> PairState``.

    The derivative of each chi_n in its second argument is a central
    difference about x' = x; the weights are taken at coincidence.
    """
    if dx_step is None:
        dx_step = max(abs(x), 1.0) * 1e-6
    if not dx_step > 0:
        raise InvalidArgumentError("dx_step must be positive")
    coincident = state_family(x, x)
    E = coincident.spectrum.levels
    a = decompose(coincident).weights

    for _ in range(8):
        up = decompose(state_family(x, x + dx_step)).phases
        down = decompose(state_family(x, x - dx_step)).phases
        diff = _wrap(up - down)
        largest = float(np.max(np.abs(diff)))
        if largest == 0.0 or largest >= _MIN_PHASE_STEP:
            break
        warnings.warn(
            f"phase difference {largest:.3g} rad below resolution at dx={dx_step:g} m; widening step",
            PrecisionWarning,
            stacklevel=2,
        )
        dx_step *= 10.0
    d2chi = diff / (2.0 * dx_step)
    e_dchi = float(np.sum(E * a * d2chi))

    mean = float(np.sum(a * E))
    delta_e = math.sqrt(max(float(np.sum(a * (E - mean) ** 2)), 0.0))
    return e_dchi, delta_e


def decoherence_timescales(profile: MetricProfile, x: float, x_prime: float,
                           E_Dchi: float, delta_E: float,
                           state: Optional[PairState] = None) -> ShortTimeReport:
    """Time scales t1, t2 (coordinate) and tau1, tau2 (proper, at x).

    When ``state`` is given the report also carries ``validity_radius``, the
    time at which the quadratic model first departs from the exact |gamma|^2
    by 1 %.
    """
    dx = x_prime - x
    Df = float(profile.Df(x))
    if Df == 0.0 or dx == 0.0:
        raise NoDephasingError("time scales need x' != x and a nonzero redshift gradient")
    fx = float(profile.f(x))

    t1 = h / abs(dx**2 * Df * E_Dchi) if E_Dchi != 0.0 else None
    t2 = h / (abs(dx * Df) * delta_E) if delta_E > 0.0 else None
    slope = -2.0 * dx**2 * Df * E_Dchi / hbar + 0.0  # no signed zero in reports
    curvature = -(dx * Df * delta_E / hbar) ** 2

    radius = None
    if state is not None:
        radius = validity_radius(state, profile, slope, curvature, [t for t in (t1, t2) if t])
    return ShortTimeReport(
        slope_linear=slope,
        curvature=curvature,
        E_Dchi=E_Dchi,
        delta_E=delta_E,
        t1=t1,
        t2=t2,
        tau1=None if t1 is None else fx * t1,
        tau2=None if t2 is None else fx * t2,
        validity_radius=radius,
    )


def validity_radius(state: PairState, profile: MetricProfile, slope: float, curvature: float,
                    scales=(), rel: float = 0.01) -> Optional[float]:
    """Earliest t at which ``1 + slope t + curvature t^2`` misses exact |gamma|^2 by ``rel``.

    Searched up to one revival period when the spectrum is commensurate,
    otherwise up to ten times the longest supplied time scale.
    """
    try:
        t0 = revival_period(state, profile)
    except NoDephasingError:
        return None
    cap = t0 if t0 is not None else (10.0 * max(scales) if scales else None)
    if cap is None:
        return None

    def err(t):
        exact = np.abs(visibility(state, profile, t)) ** 2
        model = 1.0 + slope * t + curvature * t**2
        return np.abs(exact - model) / np.maximum(exact, 1e-300)

    grid = cap * np.logspace(-6, 0, 241)
    e = err(grid)
    over = np.nonzero(e > rel)[0]
    if over.size == 0:
        return cap
    k = over[0]
    if k == 0:
        lo, hi = 0.0, grid[0]
    else:
        lo, hi = grid[k - 1], grid[k]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if err(mid) > rel:
            hi = mid
        else:
            lo = mid
    return float(0.5 * (lo + hi))
