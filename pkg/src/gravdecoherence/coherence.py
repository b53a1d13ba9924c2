"""Two-point density blocks, their exact evolution, and the visibility gamma.

The block ``rho(x, x'; n, n'; t)`` evolves under the global Hamiltonian
``f(X) H + V(X)`` by a pure phase, so everything here is closed form; no
time stepping is involved.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
import io
import math
from typing import Optional, Sequence

import numpy as np

from .constants import h, hbar
from .errors import DegenerateStateError, InvalidArgumentError, NoDephasingError
from .metric import MetricProfile, redshift_difference
from .spectra import EnergySpectrum, commensurate_gcd

_NORM_TOL = 1e-12
# |sum rho| below this fraction of sum |rho| is treated as an exact cancellation
_DEGENERATE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class PairState:
    """Correlation block between positions ``x`` and ``x_prime``.

    ``rho_diag[n]`` is ``rho(x, x'; n, n; 0)``. ``rho_full``, when present,
    is the whole ``N x N`` internal block; its off-diagonal entries never
    enter the visibility.
    """

    spectrum: EnergySpectrum
    x: float
    x_prime: float
    rho_diag: np.ndarray
    rho_full: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.spectrum)
        diag = np.asarray(self.rho_diag, dtype=complex).ravel()
        if diag.size != n:
            raise InvalidArgumentError(f"rho_diag has {diag.size} entries for a {n}-level spectrum")
        if not np.all(np.isfinite(diag)):
            raise InvalidArgumentError("rho_diag must be finite")
        full = self.rho_full
        if full is not None:
            full = np.asarray(full, dtype=complex)
            if full.shape != (n, n):
                raise InvalidArgumentError(f"rho_full must be {n}x{n}, got {full.shape}")
            if not np.allclose(np.diag(full), diag, rtol=1e-12, atol=0.0):
                raise InvalidArgumentError("diagonal of rho_full disagrees with rho_diag")
            full.setflags(write=False)
        if self.x == self.x_prime:
            scale = float(np.abs(diag).max(initial=0.0))
            if np.any(np.abs(diag.imag) > 1e-12 * scale) or np.any(diag.real < -1e-12 * scale):
                raise InvalidArgumentError("coincident-point weights must be real and nonnegative")
        diag.setflags(write=False)
        object.__setattr__(self, "rho_diag", diag)
        object.__setattr__(self, "rho_full", full)
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "x_prime", float(self.x_prime))

    @property
    def trace(self) -> complex:
        """``A(x, x'; 0) = sum_n rho_n``."""
        return complex(math.fsum(self.rho_diag.real), math.fsum(self.rho_diag.imag))


@dataclass(frozen=True)
class Decomposition:
    trace: complex
    weights: np.ndarray
    phases: np.ndarray


@dataclass(frozen=True, eq=False)
class VisibilityTrace:
    times: np.ndarray
    gamma: np.ndarray
    phases: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.gamma)

    def to_csv(self, dest=None, scenario_hash: str = "") -> str:
        """Write ``t,re_gamma,im_gamma,abs_gamma`` rows, floats at 17 significant digits.

        The first line is a ``# scenario_hash=...`` comment. Returns the text
        and, when ``dest`` is a path, also writes it there.
        """
        buf = io.StringIO()
        buf.write(f"# scenario_hash={scenario_hash}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "re_gamma", "im_gamma", "abs_gamma"])
        for t, g, m in zip(self.times, self.gamma, self.magnitude):
            writer.writerow([_fmt(t), _fmt(g.real), _fmt(g.imag), _fmt(m)])
        text = buf.getvalue()
        if dest is not None:
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        return text


def _fmt(v) -> str:
    return format(float(v), ".17g")


def pure_superposition_state(spectrum: EnergySpectrum, x: float, x_prime: float,
                             alpha: complex, beta: complex,
                             amplitudes: Sequence[complex]) -> PairState:
    """Block of ``(alpha|x> + beta|x'>) (x) sum_n c_n |n>`` between x and x'."""
    c = np.asarray(amplitudes, dtype=complex).ravel()
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > _NORM_TOL:
        raise InvalidArgumentError("|alpha|^2 + |beta|^2 must equal 1")
    if abs(float(np.sum(np.abs(c) ** 2)) - 1.0) > _NORM_TOL:
        raise InvalidArgumentError("internal amplitudes must be normalized")
    if c.size != len(spectrum):
        raise InvalidArgumentError(f"{c.size} amplitudes for a {len(spectrum)}-level spectrum")
    coeff = complex(alpha) * complex(beta).conjugate()
    full = coeff * np.outer(c, c.conj())
    return PairState(spectrum, x, x_prime, np.diag(full).copy(), full)


def decompose(state: PairState) -> Decomposition:
    """Split the weights as ``rho_n = A * a_n * exp(i chi_n)`` with ``sum a_n e^{i chi_n} = 1``.

    Phases lie in (-pi, pi]; levels with zero weight get ``chi_n = 0``.
    """
    A = state.trace
    total = float(np.sum(np.abs(state.rho_diag)))
    if total == 0.0 or abs(A) <= _DEGENERATE_TOL * total:
        raise DegenerateStateError(
            f"internal trace A(x, x'; 0) vanishes for x={state.x}, x'={state.x_prime}"
        )
    ratio = state.rho_diag / A
    a = np.abs(ratio)
    chi = np.where(a > 0, np.angle(ratio), 0.0)
    chi = np.where(chi <= -math.pi, math.pi, chi)
    return Decomposition(A, a, chi)


def _redshift_rate(state: PairState, profile: MetricProfile) -> np.ndarray:
    """Angular frequencies ``(f(x) - f(x')) E_n / hbar`` (rad/s) of the diagonal weights."""
    df = float(redshift_difference(profile, state.x, state.x_prime))
    return df * state.spectrum.levels / hbar


def _potential_rate(state: PairState, profile: MetricProfile) -> float:
    return float(profile.V(state.x) - profile.V(state.x_prime)) / hbar


def evolve_density(state: PairState, profile: MetricProfile, t: float) -> PairState:
    """Exact evolution of the block to coordinate time ``t`` (s).

    ``f(X) H`` and ``V(X)`` commute, so their phases are applied as separate
    factors; a large potential term then cannot spoil the relative phases
    between levels.
    """
    E = state.spectrum.levels
    d, dp = float(profile.f_minus_one(state.x)), float(profile.f_minus_one(state.x_prime))
    v_phase = np.exp(-1j * _potential_rate(state, profile) * t)
    diag = state.rho_diag * np.exp(-1j * _redshift_rate(state, profile) * t) * v_phase
    full = state.rho_full
    if full is not None:
        # E_n f(x) - E_n' f(x') split so that the tiny redshift part is not lost
        energy = (E[:, None] - E[None, :]) + (d * E[:, None] - dp * E[None, :])
        full = full * np.exp(-1j * energy * t / hbar) * v_phase
        full[np.diag_indices_from(full)] = diag
    return replace(state, rho_diag=diag, rho_full=full)


def coherence_functionals(state: PairState, profile: MetricProfile, t):
    """Return ``(A(t), A_tilde(t))``; A drops the potential phase, A_tilde keeps it.

    ``A_tilde`` is the trace of the evolved block, summed level by level.
    """
    t = np.asarray(t, dtype=float)
    ts = np.atleast_1d(t)
    A = np.exp(-1j * np.multiply.outer(ts, _redshift_rate(state, profile))) @ state.rho_diag
    A_tilde = np.array([evolve_density(state, profile, ti).trace for ti in ts])
    if t.ndim == 0:
        return complex(A[0]), complex(A_tilde[0])
    return A, A_tilde


def visibility(state: PairState, profile: MetricProfile, t):
    """``gamma(x, x'; t) = A(t) / A(0)`` for scalar or array ``t``."""
    dec = decompose(state)
    t = np.asarray(t, dtype=float)
    ts = np.atleast_1d(t)
    terms = dec.weights * np.exp(1j * dec.phases)
    g = np.exp(-1j * np.multiply.outer(ts, _redshift_rate(state, profile))) @ terms
    g[ts == 0.0] = 1.0
    return complex(g[0]) if t.ndim == 0 else g


def phase_trajectories(state: PairState, profile: MetricProfile, times) -> np.ndarray:
    """Unwrapped per-level phases ``chi_n(0) - (f(x) - f(x')) E_n t / hbar``.

    Shape ``(len(times), N)``.
    """
    dec = decompose(state)
    w = _redshift_rate(state, profile)
    return dec.phases[None, :] - np.multiply.outer(np.asarray(times, dtype=float).ravel(), w)


def visibility_trace(state: PairState, profile: MetricProfile, times,
                     with_phases: bool = False) -> VisibilityTrace:
    times = np.asarray(times, dtype=float).ravel()
    gamma = np.asarray(visibility(state, profile, times))
    phases = phase_trajectories(state, profile, times) if with_phases else None
    return VisibilityTrace(times, gamma, phases)


def revival_period(state: PairState, profile: MetricProfile, rel_tol: float = 1e-9) -> Optional[float]:
    """Period ``h / (|f(x) - f(x')| eps)`` of |gamma|, eps the level GCD; ``None`` if incommensurate."""
    df = float(redshift_difference(profile, state.x, state.x_prime))
    if df == 0.0:
        raise NoDephasingError("zero redshift difference: the visibility is constant")
    eps = commensurate_gcd(state.spectrum, rel_tol)
    if eps is None:
        return None
    return h / (abs(df) * eps)
