"""Landau-level eigenfunctions, Laguerre overlap factors, and the
brute-force quadrature oracle for the displaced-oscillator overlap
integral.

The analytic path (``laguerre_I``) and the quadrature path
(``overlap_oracle``) are deliberately independent: the former runs the
stable recurrences from :mod:`cyclores.kernels`, the latter integrates
the product of oscillator eigenfunctions directly.  Their agreement
pins the sign/phase convention of the Laguerre factors.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .errors import QuadratureError

_MAX_OSCILLATOR_S = 200  # accuracy-audited range for phi_eval
_MAX_ORACLE_S = 60  # quadrature oracle stays well-conditioned here
_ORACLE_TOL = 1e-13


@dataclass(frozen=True)
class OscillatorFunction:
    """Oscillator eigenfunction of level ``s`` with magnetic length
    ``length_scale`` centered on the guiding-center coordinate
    ``center`` = c p_y / (e H0)."""

    s: int
    length_scale: float
    center: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.s, (int, np.integer)) and self.s >= 0):
            raise ValueError(f"s must be a non-negative integer, got {self.s!r}")
        if not (self.length_scale > 0.0 and math.isfinite(self.length_scale)):
            raise ValueError(
                f"length_scale must be positive and finite, got {self.length_scale!r}"
            )
        if not math.isfinite(self.center):
            raise ValueError(f"center must be finite, got {self.center!r}")


@dataclass(frozen=True)
class LaguerreArgument:
    """Index pair (s, s_prime) and displacement parameter zeta for the
    Laguerre overlap factor I_{s,s'}(zeta)."""

    s: int
    s_prime: int
    zeta: float

    def __post_init__(self):
        for name, idx in (("s", self.s), ("s_prime", self.s_prime)):
            if not (isinstance(idx, (int, np.integer)) and idx >= 0):
                raise ValueError(f"{name} must be a non-negative integer, got {idx!r}")
        if not (self.zeta >= 0.0 and math.isfinite(self.zeta)):
            raise ValueError(f"zeta must be non-negative and finite, got {self.zeta!r}")


@dataclass(frozen=True)
class OverlapResult:
    """Quadrature value of the overlap integral, the analytic
    prediction, and the auxiliary parameters entering it."""

    quadrature: complex
    analytic: complex
    error_estimate: float
    zeta: float
    mu: float
    lam: float


def phi_eval(fn, x):
    """Evaluate the unit-normalized oscillator eigenfunction at ``x``.

    Uses the upward recurrence on normalized Hermite functions, so the
    result is overflow-safe for any argument.  Levels above 200 are
    rejected: that is the audited accuracy range (1e-12 relative within
    ten classical turning-point radii).
    """
    if fn.s > _MAX_OSCILLATOR_S:
        raise ValueError(
            f"oscillator level {fn.s} exceeds the audited range {_MAX_OSCILLATOR_S}"
        )
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    u = (x - fn.center) / fn.length_scale
    return kernels.hermite_norm(fn.s, u) / math.sqrt(fn.length_scale)


def laguerre_I(arg):
    """Signed Laguerre overlap factor I_{s,s'}(zeta).

    Convention (pinned by the quadrature oracle): for s' >= s,
    I = sqrt(s!/s'!) e^(-zeta/2) zeta^((s'-s)/2) L_s^(s'-s)(zeta),
    extended symmetrically to s' < s.  All factorial ratios are handled
    in log space; indices up to 1e5 are safe.
    """
    return kernels.laguerre_i(arg.s, arg.s_prime, arg.zeta)


def transition_probability_row(s, zeta, m_max):
    """Row of transition probabilities w = I_{s,m}(zeta)^2 for
    m = 0..m_max, as a float64 array.  Tail entries whose probability
    underflows double precision come out as exact zeros."""
    arg = LaguerreArgument(s=s, s_prime=0, zeta=float(zeta))  # validates inputs
    if not (isinstance(m_max, (int, np.integer)) and m_max >= 0):
        raise ValueError(f"m_max must be a non-negative integer, got {m_max!r}")
    ln_row = kernels.displacement_ln_row(arg.s, arg.zeta, int(m_max))
    return np.exp(2.0 * ln_row)


def overlap_oracle(s, s_prime, k, b, b_prime, length_scale=1.0):
    """Brute-force overlap integral of two displaced oscillator
    eigenfunctions against a plane-wave kernel, plus its analytic form.

    Computes integral of exp(-i k x) phi_s(x; center=-a^2 b)
    phi_{s'}(x; center=-a^2 b') dx with a = ``length_scale`` by adaptive
    quadrature (absolute tolerance 1e-13), over a domain covering the
    classical turning points plus ten decay lengths.  The analytic
    prediction is exp(i(mu + (s-s')lam)) I_{s,s'}(zeta), times
    (-1)^(s-s') when s > s', with mu = k a^2 (b+b')/2,
    lam = atan2(k, b'-b), zeta = a^2 (k^2 + (b-b')^2)/2.  The branch of
    lam at b' = b (and the extra parity factor) are implementation
    defined; magnitudes are convention-free.

    Raises QuadratureError when the integrator's reported error exceeds
    1e-9.
    """
    for name, idx in (("s", s), ("s_prime", s_prime)):
        if not (isinstance(idx, (int, np.integer)) and 0 <= idx <= _MAX_ORACLE_S):
            raise ValueError(
                f"{name} must be an integer in [0, {_MAX_ORACLE_S}] for the oracle, "
                f"got {idx!r}"
            )
    for name, val in (("k", k), ("b", b), ("b_prime", b_prime)):
        if not math.isfinite(val):
            raise ValueError(f"{name} must be finite, got {val!r}")
    a = length_scale
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"length_scale must be positive, got {a!r}")

    center_s = -a * a * b
    center_sp = -a * a * b_prime
    fn_s = OscillatorFunction(s=s, length_scale=a, center=center_s)
    fn_sp = OscillatorFunction(s=s_prime, length_scale=a, center=center_sp)
    radius = (math.sqrt(2.0 * max(s, s_prime) + 1.0) + 10.0) * a
    lo = min(center_s, center_sp) - radius
    hi = max(center_s, center_sp) + radius

    def product(x):
        return phi_eval(fn_s, x) * phi_eval(fn_sp, x)

    re, re_err = quad(
        lambda x: math.cos(k * x) * product(x),
        lo, hi, epsabs=_ORACLE_TOL, epsrel=_ORACLE_TOL, limit=400,
    )
    im, im_err = quad(
        lambda x: -math.sin(k * x) * product(x),
        lo, hi, epsabs=_ORACLE_TOL, epsrel=_ORACLE_TOL, limit=400,
    )
    error_estimate = re_err + im_err
    if error_estimate > 1e-9:
        raise QuadratureError(
            f"overlap quadrature error estimate {error_estimate:.3e} exceeds 1e-9",
            achieved=error_estimate,
        )

    mu = k * a * a * (b + b_prime) / 2.0
    lam = math.atan2(k, b_prime - b)
    zeta = a * a * (k * k + (b - b_prime) ** 2) / 2.0
    value = kernels.laguerre_i(s, s_prime, zeta)
    if s > s_prime and (s - s_prime) % 2 == 1:
        value = -value
    analytic = complex(value) * complex(math.cos(mu + (s - s_prime) * lam),
                                        math.sin(mu + (s - s_prime) * lam))
    return OverlapResult(
        quadrature=complex(re, im),
        analytic=analytic,
        error_estimate=error_estimate,
        zeta=zeta,
        mu=mu,
        lam=lam,
    )
