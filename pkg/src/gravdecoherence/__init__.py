"""Spatial coherence of small quantum systems delocalized in a static gravitational field.

A system with internal levels E_n, held in superposition at two heights,
accumulates a level-dependent phase proportional to the redshift difference
``f(x) - f(x')``. Tracing out the internal state turns this into a decay
(or, for suitably phased states, a growth) of the visibility
``gamma(x, x'; t)``. The modules here evaluate that visibility exactly,
its short-time expansion and time scales, and the thermal-equilibrium case
where gamma becomes a ratio of partition functions at complex temperature.
"""

__version__ = "0.1.0"

from .coherence import (
    Decomposition,
    PairState,
    VisibilityTrace,
    coherence_functionals,
    decompose,
    evolve_density,
    phase_trajectories,
    pure_superposition_state,
    revival_period,
    visibility,
    visibility_trace,
)
from .constants import CONSTANTS, PhysicalConstants
from .errors import (
    DegenerateStateError,
    DomainError,
    InvalidArgumentError,
    NoDephasingError,
    PrecisionWarning,
)
from .metric import (
    MetricProfile,
    custom_profile,
    entropy_exchange_rate,
    linear_potential,
    local_temperature,
    redshift_difference,
    schwarzschild_profile,
    weak_field_profile,
)
from .spectra import (
    EnergySpectrum,
    ThermalMoments,
    commensurate_gcd,
    make_harmonic,
    partition_function,
    thermal_moments,
)
from .thermal import (
    ComplexTemperature,
    ThermalScenario,
    complex_temperature,
    gamma_thermal_closed_form,
    tau2_weak_field_estimate,
    thermal_overlap,
    thermal_pair_state,
    thermal_tau2,
)
from .timescales import (
    ShortTimeReport,
    decoherence_timescales,
    expand_visibility,
    moments_at_coincidence,
)
