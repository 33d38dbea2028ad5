"""Multiphoton Landau-level transition tables and quasiclassical
comparisons.

A pulse characterized by the displacement parameter zeta redistributes
an initial level s over final levels s' with probabilities
w = I_{s,s'}(zeta)^2.  Each record carries conservation bookkeeping on
the wave side: ``photons`` = s - s' > 0 means net emission of quanta
into the wave, and ``delta_E``/``delta_pz`` are the energy and
longitudinal momentum carried by those quanta (so in the normal regime
the probability-weighted delta_E sums negative, net absorption, while
in the anomalous regime it sums positive: the wave is amplified at the
expense of longitudinal motion).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .constants import C_LIGHT, HBAR
from .special import LaguerreArgument, transition_probability_row

_KEEP_THRESHOLD = 1e-16  # records below this probability are dropped
_TAIL_THRESHOLD = 1e-14  # cutoff extends until the running tail term is below


@dataclass(frozen=True)
class TransitionRecord:
    """One final level: probability plus wave-side conservation deltas."""

    s_prime: int
    w: float
    photons: int  # s - s_prime; positive = emission into the wave
    delta_pz: float  # (s - s') g omega n hbar / c  (g*cm/s)
    delta_E: float  # (s - s') g omega hbar  (erg)


@dataclass(frozen=True)
class CutoffMeta:
    """Truncation audit for a transition table: retained index range,
    number of dropped sub-threshold records, and the probability mass
    assigned to everything not in the table."""

    s_prime_min: int
    s_prime_max: int
    n_dropped: int
    tail_estimate: float


@dataclass(frozen=True)
class TransitionTable:
    s: int
    zeta: float
    records: tuple
    total: float
    cutoff_meta: CutoffMeta


@dataclass(frozen=True)
class QuasiclassicalPrediction:
    """Classical-trajectory estimate of the transition peak.

    delta_eps_cl = e E_field v_tr T is the classical energy gain over
    the interaction time (E_field = omega A_bar / c), v_tr the mean
    transverse velocity, predicted_shift = delta_eps_cl/(hbar omega)
    the expected photon-number shift (algebraically 2 sqrt(s zeta)),
    zeta_from_cl the displacement parameter reconstructed from the
    classical quantities, and zeta_peak_band the s' band
    [(sqrt(s)-sqrt(zeta))^2, (sqrt(s)+sqrt(zeta))^2] outside which the
    probabilities fall exponentially.
    """

    delta_eps_cl: float
    v_tr: float
    zeta_from_cl: float
    predicted_shift: float
    zeta_peak_band: tuple


@dataclass(frozen=True)
class PeakComparison:
    argmax_shift: int
    predicted_shift: float
    relative_gap: float


def _charge_from_scales(f, scales):
    # Omega = e c H0 / E_par, so the charge magnitude is recoverable.
    return scales.Omega * scales.E_par / (C_LIGHT * f.H0)


def zeta_from_amplitude(f, scales):
    """Displacement parameter for a flat-top pulse of average amplitude
    A_bar over time T: zeta = e^2 A_bar^2 T^2 Omega / (2 hbar E_par)."""
    charge = _charge_from_scales(f, scales)
    drive = charge * f.A_bar * f.T
    return drive * drive * scales.Omega / (2.0 * HBAR * scales.E_par)


def transition_table(s, zeta, f, scales):
    """Build the full transition table from level s at displacement
    parameter zeta.

    Final levels are scanned from 0 upward until the running tail term
    falls below 1e-14 and the band parameter (sqrt(s')-sqrt(s))^2
    exceeds zeta + 10 sqrt(zeta), so the retained set always covers the
    classically allowed band.  Probabilities below 1e-16 are dropped
    from the records but audited in the cutoff metadata.
    """
    arg = LaguerreArgument(s=s, s_prime=0, zeta=float(zeta))
    s, zeta = arg.s, arg.zeta
    if zeta == 0.0:
        record = _make_record(s, s, f)
        meta = CutoffMeta(s_prime_min=s, s_prime_max=s, n_dropped=0, tail_estimate=0.0)
        return TransitionTable(s=s, zeta=zeta, records=(record,), total=1.0, cutoff_meta=meta)

    band_edge = zeta + 10.0 * math.sqrt(zeta)
    m_max = int(math.ceil((math.sqrt(s) + math.sqrt(band_edge)) ** 2)) + 10
    while True:
        w_row = transition_probability_row(s, zeta, m_max)
        if w_row[-1] < _TAIL_THRESHOLD:
            break
        m_max = int(math.ceil(m_max * 1.25)) + 32

    keep = np.nonzero(w_row >= _KEEP_THRESHOLD)[0]
    records = tuple(
        _make_record(s, int(sp), f, w=min(float(w_row[sp]), 1.0)) for sp in keep
    )
    total = math.fsum(r.w for r in records)
    if 1.0 < total <= 1.0 + 1e-12:
        # The true sum is provably <= 1; an excess within summation
        # rounding is indistinguishable from exact unitarity.  Larger
        # excesses are kept as-is: they signal a genuine defect.
        total = 1.0
    dropped_mass = math.fsum(
        float(w_row[i]) for i in range(len(w_row)) if w_row[i] < _KEEP_THRESHOLD
    )
    beyond = max(0.0, 1.0 - math.fsum(float(v) for v in w_row))
    meta = CutoffMeta(
        s_prime_min=int(keep[0]) if keep.size else 0,
        s_prime_max=int(keep[-1]) if keep.size else m_max,
        n_dropped=int(np.count_nonzero((w_row > 0.0) & (w_row < _KEEP_THRESHOLD))),
        tail_estimate=dropped_mass + beyond,
    )
    return TransitionTable(s=s, zeta=zeta, records=records, total=total, cutoff_meta=meta)


def _make_record(s, s_prime, f, w=1.0):
    photons = s - s_prime
    delta_E = photons * f.g * HBAR * f.omega
    delta_pz = delta_E * f.n / C_LIGHT
    return TransitionRecord(
        s_prime=s_prime, w=w, photons=photons, delta_pz=delta_pz, delta_E=delta_E
    )


def quasiclassical_predict(s, f, scales):
    """Quasiclassical peak prediction for level s driven by the field
    configuration (uses A_bar and T from the config).

    Warns below s = 100: the estimate is asymptotic in s.
    """
    if not (isinstance(s, (int, np.integer)) and s >= 0):
        raise ValueError(f"s must be a non-negative integer, got {s!r}")
    if s < 100:
        warnings.warn(
            "quasiclassical prediction is asymptotic in s; s < 100 is outside "
            "its reliable range",
            stacklevel=2,
        )
    zeta = zeta_from_amplitude(f, scales)
    charge = _charge_from_scales(f, scales)
    v_tr = C_LIGHT * math.sqrt(2.0 * HBAR * s * scales.Omega / scales.E_par)
    e_field = f.omega * f.A_bar / C_LIGHT
    delta_eps_cl = charge * e_field * v_tr * f.T
    predicted_shift = delta_eps_cl / (HBAR * f.omega)
    zeta_from_cl = predicted_shift * predicted_shift / (4.0 * s) if s > 0 else 0.0
    root_s, root_z = math.sqrt(s), math.sqrt(zeta)
    band = ((root_s - root_z) ** 2, (root_s + root_z) ** 2)
    return QuasiclassicalPrediction(
        delta_eps_cl=delta_eps_cl,
        v_tr=v_tr,
        zeta_from_cl=zeta_from_cl,
        predicted_shift=predicted_shift,
        zeta_peak_band=band,
    )


def peak_compare(s, zeta):
    """Locate the most probable final level by exhaustive scan and
    compare its shift against the quasiclassical prediction
    2 sqrt(s zeta).

    Meaningful when the predicted shift is at least ~10 (otherwise the
    row peaks at or near the elastic line and the comparison is moot);
    argmax_shift is signed (negative = peak on the emission side).
    """
    arg = LaguerreArgument(s=s, s_prime=0, zeta=float(zeta))
    s, zeta = arg.s, arg.zeta
    predicted = 2.0 * math.sqrt(s * zeta)
    m_max = int(s + 4.0 * (predicted + math.sqrt(s))) + 4
    ln_row = kernels.displacement_ln_row(s, zeta, m_max)
    argmax_shift = int(np.argmax(ln_row)) - s
    if predicted > 0.0:
        gap = abs(abs(argmax_shift) - predicted) / predicted
    else:
        gap = 0.0 if argmax_shift == 0 else math.inf
    return PeakComparison(
        argmax_shift=argmax_shift, predicted_shift=predicted, relative_gap=gap
    )
