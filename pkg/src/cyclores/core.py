"""Landau spectra, derived kinematic scales, Doppler-regime
classification, resonance root-finding, and validity diagnostics.

All public quantities are CGS-Gaussian.  The longitudinal energy
E_par = sqrt(m^2 c^4 + c^2 p_z^2) (transverse excitation excluded) sets
the cyclotron frequency Omega = e c H0 / E_par and the longitudinal
velocity v_z = c^2 p_z / E_par; the Doppler-shifted frequency seen by
the particle is omega' = (1 - n v_z / c) omega.  In a medium with
n v_z / c > 1 the shifted frequency is negative and resonance couples
to the opposite circular polarization (anomalous Doppler effect).
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import C_LIGHT, E_CHARGE, HBAR, M_ELECTRON, M_PROTON
from .errors import CherenkovDegenerateError, NoRootError

_RESIDUAL_TOL = 1e-12  # relative to omega, for the resonance root


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ParticleState:
    """Charged particle in a uniform magnetic field.

    Attributes:
        mass: rest mass (g).
        charge: magnitude of the charge (esu); the sign is stored
            separately in ``charge_sign``.
        charge_sign: +1 or -1.
        p_z: longitudinal momentum along the field (g*cm/s).
        p_y: transverse generalized momentum fixing the guiding center
            (g*cm/s).
        s: Landau index (non-negative integer).
    """

    mass: float
    charge: float
    charge_sign: int = -1
    p_z: float = 0.0
    p_y: float = 0.0
    s: int = 0

    def __post_init__(self):
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive and finite, got {self.mass!r}")
        if not (self.charge > 0.0 and math.isfinite(self.charge)):
            raise ValueError(
                f"charge magnitude must be positive and finite, got {self.charge!r}"
            )
        if self.charge_sign not in (-1, 1):
            raise ValueError(f"charge_sign must be +1 or -1, got {self.charge_sign!r}")
        _require_finite("p_z", self.p_z)
        _require_finite("p_y", self.p_y)
        if not (isinstance(self.s, (int, np.integer)) and self.s >= 0):
            raise ValueError(f"s must be a non-negative integer, got {self.s!r}")

    @classmethod
    def electron(cls, **kwargs):
        return cls(mass=M_ELECTRON, charge=E_CHARGE, charge_sign=-1, **kwargs)

    @classmethod
    def proton(cls, **kwargs):
        return cls(mass=M_PROTON, charge=E_CHARGE, charge_sign=+1, **kwargs)


@dataclass(frozen=True)
class FieldConfig:
    """Uniform magnetic field plus a circularly polarized wave.

    Attributes:
        H0: magnetic field strength (G).
        n: refraction index of the medium (dimensionless, > 0).
        omega: wave angular frequency (rad/s).
        g: circular polarization sign, +1 or -1.
        A_bar: average vector-potential amplitude of the wave (G*cm).
        T: coherent interaction time (s).
    """

    H0: float
    n: float
    omega: float
    g: int
    A_bar: float = 0.0
    T: float = 0.0

    def __post_init__(self):
        if not (self.H0 > 0.0 and math.isfinite(self.H0)):
            raise ValueError(f"H0 must be positive and finite, got {self.H0!r}")
        if not (self.n > 0.0 and math.isfinite(self.n)):
            raise ValueError(f"refraction index must be positive, got {self.n!r}")
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive and finite, got {self.omega!r}")
        if self.g not in (-1, 1):
            raise ValueError(f"polarization sign g must be +1 or -1, got {self.g!r}")
        if not (self.A_bar >= 0.0 and math.isfinite(self.A_bar)):
            raise ValueError(f"A_bar must be non-negative, got {self.A_bar!r}")
        if not (self.T >= 0.0 and math.isfinite(self.T)):
            raise ValueError(f"T must be non-negative, got {self.T!r}")


@dataclass(frozen=True)
class DerivedScales:
    """Kinematic scales derived from a particle and field.

    Attributes:
        E_par: longitudinal energy sqrt(m^2 c^4 + c^2 p_z^2) (erg).
        Omega: cyclotron frequency e c H0 / E_par (rad/s).
        l_B: magnetic length sqrt(hbar c / (e H0)) (cm).
        v_z: longitudinal velocity c^2 p_z / E_par (cm/s).
        omega_prime: Doppler-shifted frequency (1 - n v_z/c) omega (rad/s).
    """

    E_par: float
    Omega: float
    l_B: float
    v_z: float
    omega_prime: float


class Regime(enum.Enum):
    NORMAL = "normal"
    ANOMALOUS = "anomalous"
    NON_RESONANT = "non_resonant"


@dataclass(frozen=True)
class ValidityReport:
    """Dimensionless smallness ratios behind the first-order treatment.

    ratio_photon = hbar*omega / E (single photon vs total energy),
    ratio_exchange = |delta_E| / E (total exchange vs total energy),
    ratio_landau = hbar*Omega*s / E_par (transverse excitation vs
    longitudinal energy).  Each carries a flag at ``threshold``;
    ``holds_exchange`` is None when no exchange estimate was supplied.
    A report never blocks a computation.
    """

    ratio_photon: float
    ratio_exchange: float
    ratio_landau: float
    holds_photon: bool
    holds_exchange: bool | None
    holds_landau: bool
    threshold: float


def landau_energy(p, H0):
    """Total energy of Landau level s at longitudinal momentum p_z:
    sqrt(m^2 c^4 + c^2 p_z^2 + 2 e c H0 hbar (s + 1/2)), in erg."""
    if not (H0 > 0.0 and math.isfinite(H0)):
        raise ValueError(f"H0 must be positive and finite, got {H0!r}")
    rest = p.mass * C_LIGHT * C_LIGHT
    magnetic = 2.0 * p.charge * C_LIGHT * H0 * HBAR * (p.s + 0.5)
    return math.sqrt(rest * rest + (C_LIGHT * p.p_z) ** 2 + magnetic)


def derived_scales(p, f):
    """Compute the kinematic scales for a particle in a field config."""
    E_par = math.hypot(p.mass * C_LIGHT * C_LIGHT, C_LIGHT * p.p_z)
    Omega = p.charge * C_LIGHT * f.H0 / E_par
    l_B = math.sqrt(HBAR * C_LIGHT / (p.charge * f.H0))
    v_z = C_LIGHT * C_LIGHT * p.p_z / E_par
    omega_prime = (1.0 - f.n * v_z / C_LIGHT) * f.omega
    return DerivedScales(E_par=E_par, Omega=Omega, l_B=l_B, v_z=v_z, omega_prime=omega_prime)


def classify_doppler(scales, g):
    """Classify the Doppler regime of a configuration.

    Normal: omega' > 0 with g = +1.  Anomalous: omega' < 0 with g = -1
    (superluminal-in-medium longitudinal motion).  Everything else is
    NonResonant because omega' = g * Omega cannot hold with Omega > 0.
    Raises CherenkovDegenerateError when omega' is exactly zero.
    """
    if g not in (-1, 1):
        raise ValueError(f"polarization sign g must be +1 or -1, got {g!r}")
    if scales.omega_prime == 0.0:
        raise CherenkovDegenerateError(
            "1 - n v_z/c = 0: the wave phase is stationary in the particle "
            "frame (Cherenkov-degenerate kinematics)"
        )
    if scales.omega_prime > 0.0 and g == 1:
        return Regime.NORMAL
    if scales.omega_prime < 0.0 and g == -1:
        return Regime.ANOMALOUS
    return Regime.NON_RESONANT


def _beta_residual(f, omega_rest, beta):
    # Resonance residual (1 - n*beta)*omega - g*Omega(beta), with
    # Omega(beta) = omega_rest*sqrt(1 - beta^2) for omega_rest = eH0/(mc).
    return (1.0 - f.n * beta) * f.omega - f.g * omega_rest * np.sqrt(1.0 - beta * beta)


def _polish_momentum(f, p_template, p_z):
    # Newton refinement in momentum space.  A root carried in v_z/c
    # loses up to gamma^2 ulps of residual accuracy when converted to
    # p_z, while the residual as a function of p_z is flat in exactly
    # that regime, so a few Newton steps recover it to evaluation noise.
    best_p, best_r = p_z, math.inf
    for _ in range(6):
        scales = derived_scales(replace(p_template, p_z=p_z), f)
        residual = scales.omega_prime - f.g * scales.Omega
        if abs(residual) < best_r:
            best_p, best_r = p_z, abs(residual)
        if residual == 0.0:
            break
        # d(residual)/dp_z with dv_z/dp_z = (c^2 - v_z^2)/E_par and
        # dOmega/dp_z = -Omega v_z/E_par.
        slope = (
            -f.n * f.omega * (C_LIGHT * C_LIGHT - scales.v_z * scales.v_z)
            / (C_LIGHT * scales.E_par)
            + f.g * scales.Omega * scales.v_z / scales.E_par
        )
        step = residual / slope if slope != 0.0 else math.inf
        if not math.isfinite(step):
            break
        p_z = p_z - step
    return best_p


def resonant_momentum(f, p_template):
    """Solve the resonance condition (1 - n v_z/c) omega = g Omega for
    the longitudinal momentum.

    Scans the residual over v_z/c in (-1, 1), bisects every bracketed
    sign change, Newton-polishes the winner in momentum space, and
    returns the root of smallest |p_z| with a relative frequency
    residual at or below 1e-12.  Raises NoRootError (with the residual
    extrema) when the residual never changes sign.
    """
    m = p_template.mass
    omega_rest = p_template.charge * f.H0 / (m * C_LIGHT)
    bound = 1.0 - 1e-12
    grid = np.linspace(-bound, bound, 4097)
    res = _beta_residual(f, omega_rest, grid)

    roots = [float(grid[i]) for i in np.nonzero(res == 0.0)[0]]
    for i in np.nonzero(res[:-1] * res[1:] < 0.0)[0]:
        lo, hi = float(grid[i]), float(grid[i + 1])
        r_lo = float(res[i])
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            r_mid = float(_beta_residual(f, omega_rest, mid))
            if r_mid == 0.0:
                lo = hi = mid
                break
            if (r_lo < 0.0) == (r_mid < 0.0):
                lo, r_lo = mid, r_mid
            else:
                hi = mid
            if hi - lo < 1e-17:
                break
        roots.append(0.5 * (lo + hi))

    if not roots:
        raise NoRootError(
            "resonance condition has no solution for |v_z| < c: residual "
            f"range [{res.min():.6e}, {res.max():.6e}] has fixed sign",
            residual_min=float(res.min()),
            residual_max=float(res.max()),
        )

    beta = min(roots, key=abs)
    p_z = m * C_LIGHT * beta / math.sqrt(1.0 - beta * beta)
    p_z = _polish_momentum(f, p_template, p_z)

    # Verify against scales re-derived from the returned momentum.
    scales = derived_scales(replace(p_template, p_z=p_z), f)
    residual = scales.omega_prime - f.g * scales.Omega
    if abs(residual) > _RESIDUAL_TOL * f.omega:
        raise NoRootError(
            f"bisection root failed verification: |residual|/omega = "
            f"{abs(residual) / f.omega:.3e}",
            residual_min=float(res.min()),
            residual_max=float(res.max()),
        )
    return p_z


def validity_report(p, f, delta_E_estimate=0.0, threshold=1e-2):
    """Report the smallness ratios for a configuration.

    ``delta_E_estimate`` is the anticipated total energy exchange (erg);
    pass 0 to leave the exchange flag undetermined.
    """
    if not (delta_E_estimate >= 0.0 and math.isfinite(delta_E_estimate)):
        raise ValueError(
            f"delta_E_estimate must be non-negative, got {delta_E_estimate!r}"
        )
    energy = landau_energy(p, f.H0)
    scales = derived_scales(p, f)
    ratio_photon = HBAR * f.omega / energy
    ratio_exchange = delta_E_estimate / energy
    ratio_landau = HBAR * scales.Omega * p.s / scales.E_par
    return ValidityReport(
        ratio_photon=ratio_photon,
        ratio_exchange=ratio_exchange,
        ratio_landau=ratio_landau,
        holds_photon=ratio_photon < threshold,
        holds_exchange=None if delta_E_estimate == 0.0 else ratio_exchange < threshold,
        holds_landau=ratio_landau < threshold,
        threshold=threshold,
    )
