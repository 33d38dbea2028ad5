"""Relativistic cyclotron-resonance observables in a refractive medium.

Landau spectra and resonance kinematics (:mod:`cyclores.core`), stable
Laguerre/Hermite evaluation with a quadrature oracle
(:mod:`cyclores.special`), pulse drift integrals
(:mod:`cyclores.pulse`), multiphoton transition tables
(:mod:`cyclores.transitions`), and a batch CLI (:mod:`cyclores.cli`).
All public quantities are CGS-Gaussian.
"""

from .constants import C_LIGHT, E_CHARGE, ERG_PER_EV, HBAR, M_ELECTRON, M_PROTON
from .core import (
    DerivedScales,
    FieldConfig,
    ParticleState,
    Regime,
    ValidityReport,
    classify_doppler,
    derived_scales,
    landau_energy,
    resonant_momentum,
    validity_report,
)
from .errors import (
    CherenkovDegenerateError,
    EnvelopeNotClosedError,
    NoRootError,
    QuadratureError,
)
from .kernels import BACKEND
from .pulse import (
    DriftState,
    EnvelopeKind,
    PulseEnvelope,
    asymptotic_displacement,
    drift_integral,
)
from .special import (
    LaguerreArgument,
    OscillatorFunction,
    OverlapResult,
    laguerre_I,
    overlap_oracle,
    phi_eval,
    transition_probability_row,
)
from .transitions import (
    CutoffMeta,
    PeakComparison,
    QuasiclassicalPrediction,
    TransitionRecord,
    TransitionTable,
    peak_compare,
    quasiclassical_predict,
    transition_table,
    zeta_from_amplitude,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "C_LIGHT",
    "CherenkovDegenerateError",
    "CutoffMeta",
    "DerivedScales",
    "DriftState",
    "E_CHARGE",
    "ERG_PER_EV",
    "EnvelopeKind",
    "EnvelopeNotClosedError",
    "FieldConfig",
    "HBAR",
    "LaguerreArgument",
    "M_ELECTRON",
    "M_PROTON",
    "NoRootError",
    "OscillatorFunction",
    "OverlapResult",
    "ParticleState",
    "PeakComparison",
    "PulseEnvelope",
    "QuadratureError",
    "QuasiclassicalPrediction",
    "Regime",
    "TransitionRecord",
    "TransitionTable",
    "ValidityReport",
    "asymptotic_displacement",
    "classify_doppler",
    "derived_scales",
    "drift_integral",
    "landau_energy",
    "laguerre_I",
    "overlap_oracle",
    "peak_compare",
    "phi_eval",
    "quasiclassical_predict",
    "resonant_momentum",
    "transition_probability_row",
    "transition_table",
    "validity_report",
    "zeta_from_amplitude",
]
