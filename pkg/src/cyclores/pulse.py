"""Pulse envelopes and the eikonal drift integral.

The wave enters through a circularly polarized vector potential
A_x + i A_y = i g A(tau) exp(i g omega tau) with a slow real envelope
A(tau) in retarded time tau = t - n z / c.  The guiding-center drift

    K(tau) = -exp(i Wt tau) * integral_{-inf}^{tau}
             (e c / (hbar Et)) (A_x + i A_y)(tau') exp(-i Wt tau') dtau'

with Et = E_par (1 - n v_z / c) and Wt = e c H0 / Et grows linearly at
resonance (g omega = Wt) and is suppressed off resonance.  Writing
J(tau) = integral A(tau') exp(i delta tau') dtau' with the detuning
delta = g omega - Wt gives K = -i g (e c / (hbar Et)) exp(i Wt tau) J,
which is what the quadrature below accumulates: the integrand
oscillates only at the detuning, never at the carrier.

The accumulated dynamical phase comes from

    Q(tau) = (c^2 / 2 Et) [ (e/c)^2 |Aw - i hbar H0 K|^2
             - (e Et hbar^2 / c^3) H0 Im(conj(K) dK/dtau) ],

reduced here to detuning-frequency (never carrier-frequency) terms;
the Wt^2 |J|^2 contributions of its two terms cancel exactly and are
dropped algebraically, leaving Q = (e^2/2 Et) A (A + Wt Im(conj(J)
exp(i delta tau))).  The sign of the second term is pinned by requiring
that the phase stops accumulating once the envelope has closed
(post-pulse Q vanishes identically) and vanishes smoothly as the
amplitude goes to zero.
"""

import bisect
import csv
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, HBAR
from .errors import CherenkovDegenerateError, EnvelopeNotClosedError, QuadratureError

_REL_TOL = 1e-9  # quadrature budget relative to integral of |A|
_CLOSURE_TOL = 1e-6  # |A(end)| / peak for "envelope has closed"
_DOPPLER_EPS = 1e-12  # |1 - n v_z/c| below this is Cherenkov-degenerate
_MIN_CARRIER_SAMPLES = 20.0  # sampled grids must resolve 2 pi / omega'

# 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK dqk15).
_XGK = (
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
)
_WGK = (
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
)
_WG = (0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469)


class EnvelopeKind(enum.Enum):
    FLAT_TOP_RAMPED = "flat_top_ramped"
    GAUSSIAN = "gaussian"
    SAMPLED = "sampled"


@dataclass(frozen=True, eq=False)
class PulseEnvelope:
    """Real, non-negative pulse envelope A(tau) in G*cm.

    ``amplitude`` is the peak/plateau value; the average over the
    support (what enters the flat-top closed forms) is
    ``mean_amplitude()``.  Flat-top envelopes switch on and off through
    sin^2-shaped ramps of length ``ramp``; Gaussian envelopes are
    windowed to the support with sigma = duration/12 so the edge value
    is ~1.5e-8 of the peak; sampled envelopes interpolate linearly
    between the given (tau, A) nodes.
    """

    kind: EnvelopeKind
    amplitude: float
    duration: float
    ramp: float = 0.0
    t_start: float = 0.0
    samples: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if not isinstance(self.kind, EnvelopeKind):
            raise ValueError(f"kind must be an EnvelopeKind, got {self.kind!r}")
        if not (self.amplitude >= 0.0 and math.isfinite(self.amplitude)):
            raise ValueError(f"amplitude must be non-negative, got {self.amplitude!r}")
        if not (self.duration > 0.0 and math.isfinite(self.duration)):
            raise ValueError(f"duration must be positive, got {self.duration!r}")
        if not math.isfinite(self.t_start):
            raise ValueError(f"t_start must be finite, got {self.t_start!r}")
        if not (self.ramp >= 0.0 and 2.0 * self.ramp <= self.duration):
            raise ValueError(
                f"ramp must satisfy 0 <= 2*ramp <= duration, got ramp={self.ramp!r}"
            )
        if self.kind is EnvelopeKind.SAMPLED:
            if self.samples is None:
                raise ValueError("sampled envelope requires samples")
            tau, val = self.samples
            if len(tau) < 3:
                raise ValueError("sampled envelope needs at least 3 nodes")
            if not (np.all(np.isfinite(tau)) and np.all(np.isfinite(val))):
                raise ValueError("sampled envelope nodes must be finite")
            if not np.all(np.diff(tau) > 0.0):
                raise ValueError("sampled envelope grid must be strictly increasing")
            if np.any(val < 0.0):
                raise ValueError("sampled envelope values must be non-negative")
            peak = float(val.max())
            if peak > 0.0 and (val[0] > _CLOSURE_TOL * peak or val[-1] > _CLOSURE_TOL * peak):
                raise ValueError(
                    "sampled envelope must be adiabatic: A at both grid ends "
                    f"exceeds {_CLOSURE_TOL} of the peak"
                )
        elif self.samples is not None:
            raise ValueError(f"samples are only valid for sampled envelopes")

    @classmethod
    def flat_top(cls, amplitude, duration, ramp, t_start=0.0):
        return cls(
            kind=EnvelopeKind.FLAT_TOP_RAMPED,
            amplitude=amplitude,
            duration=duration,
            ramp=ramp,
            t_start=t_start,
        )

    @classmethod
    def gaussian(cls, amplitude, duration, t_start=0.0):
        return cls(
            kind=EnvelopeKind.GAUSSIAN,
            amplitude=amplitude,
            duration=duration,
            t_start=t_start,
        )

    @classmethod
    def sampled(cls, tau, values):
        tau = np.asarray(tau, dtype=float)
        values = np.asarray(values, dtype=float)
        if tau.shape != values.shape or tau.ndim != 1:
            raise ValueError("tau and values must be 1-d arrays of equal length")
        return cls(
            kind=EnvelopeKind.SAMPLED,
            amplitude=float(values.max()) if values.size else 0.0,
            duration=float(tau[-1] - tau[0]),
            t_start=float(tau[0]),
            samples=(tau, values),
        )

    @classmethod
    def from_csv(cls, path):
        """Read a sampled envelope from two-column CSV
        (tau_seconds, A_gauss_cm); the header row is required."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["tau_seconds", "A_gauss_cm"]:
                raise ValueError(
                    f"{path}: expected header 'tau_seconds,A_gauss_cm', got {header!r}"
                )
            rows = [(float(r[0]), float(r[1])) for r in reader if r]
        if not rows:
            raise ValueError(f"{path}: no envelope samples")
        tau, values = zip(*rows)
        return cls.sampled(np.array(tau), np.array(values))

    @property
    def support(self):
        return (self.t_start, self.t_start + self.duration)

    def value(self, tau):
        """Envelope value A(tau), zero outside the support."""
        t0, t1 = self.support
        if tau <= t0 or tau >= t1:
            return 0.0
        if self.kind is EnvelopeKind.FLAT_TOP_RAMPED:
            rel = tau - t0
            if self.ramp > 0.0:
                if rel < self.ramp:
                    return self.amplitude * math.sin(0.5 * math.pi * rel / self.ramp) ** 2
                if rel > self.duration - self.ramp:
                    rem = self.duration - rel
                    return self.amplitude * math.sin(0.5 * math.pi * rem / self.ramp) ** 2
            return self.amplitude
        if self.kind is EnvelopeKind.GAUSSIAN:
            sigma = self.duration / 12.0
            arg = (tau - (t0 + 0.5 * self.duration)) / sigma
            return self.amplitude * math.exp(-0.5 * arg * arg)
        tau_nodes, val_nodes = self.samples
        return float(np.interp(tau, tau_nodes, val_nodes))

    def mean_amplitude(self):
        """Average of A over the support: the A-bar of the flat-top
        closed forms."""
        if self.kind is EnvelopeKind.FLAT_TOP_RAMPED:
            return self.amplitude * (self.duration - self.ramp) / self.duration
        if self.kind is EnvelopeKind.GAUSSIAN:
            sigma = self.duration / 12.0
            mass = sigma * math.sqrt(2.0 * math.pi) * math.erf(
                self.duration / (2.0 * math.sqrt(2.0) * sigma)
            )
            return self.amplitude * mass / self.duration
        tau_nodes, val_nodes = self.samples
        mass = 0.5 * np.sum((val_nodes[1:] + val_nodes[:-1]) * np.diff(tau_nodes))
        return float(mass) / self.duration

    def breakpoints(self):
        """Quadrature knots: support edges plus envelope features."""
        t0, t1 = self.support
        if self.kind is EnvelopeKind.FLAT_TOP_RAMPED:
            pts = {t0, t1}
            for j in range(9):
                pts.add(t0 + self.ramp * j / 8.0)
                pts.add(t1 - self.ramp * j / 8.0)
            return sorted(pts)
        if self.kind is EnvelopeKind.GAUSSIAN:
            return [t0 + self.duration * j / 16.0 for j in range(17)]
        return [float(t) for t in self.samples[0]]


@dataclass(frozen=True)
class DriftState:
    """Drift integral snapshot at retarded time ``tau``: complex drift
    K_x + i K_y, accumulated phase integral of Q/hbar, and the envelope
    value at ``tau`` (carried so asymptotic quantities can verify the
    pulse has closed)."""

    tau: float
    K: complex
    phase_Q: float
    A_value: float


def _gk15(fun, a, b):
    # One Kronrod-15 panel with the embedded Gauss-7 error estimate.
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    f_mid = fun(mid)
    resk = _WGK[7] * f_mid
    resg = _WG[3] * f_mid
    for j in range(7):
        dx = half * _XGK[j]
        f_lo = fun(mid - dx)
        f_hi = fun(mid + dx)
        resk += _WGK[j] * (f_lo + f_hi)
        if j % 2 == 1:
            resg += _WG[j // 2] * (f_lo + f_hi)
    return resk * half, abs(resk - resg) * half


def _drift_coefficients(f, scales):
    doppler = 1.0 - f.n * scales.v_z / C_LIGHT
    if abs(doppler) < _DOPPLER_EPS:
        raise CherenkovDegenerateError(
            "E_par (1 - n v_z/c) is numerically zero: drift integral is "
            "undefined at Cherenkov-degenerate kinematics"
        )
    E_tilde = scales.E_par * doppler
    Omega_tilde = scales.Omega * scales.E_par / E_tilde
    charge = scales.Omega * scales.E_par / (C_LIGHT * f.H0)
    coupling = charge * C_LIGHT / (HBAR * E_tilde)  # e c / (hbar Et)
    delta = f.g * f.omega - Omega_tilde
    return E_tilde, Omega_tilde, charge, coupling, delta


def drift_integral(env, f, scales, tau_grid):
    """Evaluate the drift integral and accumulated phase on a time grid.

    Returns one DriftState per requested time, in input order.  Times
    before the envelope switches on give K = 0 and zero phase exactly;
    times after it closes rotate the frozen drift at the retarded
    cyclotron frequency.  Adaptive Kronrod quadrature with panel
    splitting keyed to the detuning oscillation period; relative
    tolerance 1e-9 (against the integrated envelope magnitude).

    Raises CherenkovDegenerateError for 1 - n v_z/c = 0, ValueError for
    sampled grids too coarse for the Doppler-shifted carrier (fewer
    than 20 nodes per period), and QuadratureError if the error budget
    cannot be met.
    """
    times = [float(t) for t in tau_grid]
    E_tilde, Omega_tilde, charge, coupling, delta = _drift_coefficients(f, scales)

    if env.kind is EnvelopeKind.SAMPLED and scales.omega_prime != 0.0:
        max_step = float(np.max(np.diff(env.samples[0])))
        if max_step > 2.0 * math.pi / (_MIN_CARRIER_SAMPLES * abs(scales.omega_prime)):
            raise ValueError(
                "sampled envelope grid is too coarse: need at least "
                f"{_MIN_CARRIER_SAMPLES:.0f} nodes per Doppler-shifted carrier "
                "period 2 pi/|omega'|"
            )

    t0, t1 = env.support
    scale_mass = env.mean_amplitude() * env.duration  # integral of |A|
    if scale_mass == 0.0:
        return [DriftState(tau=t, K=0j, phase_Q=0.0, A_value=env.value(t)) for t in times]

    def integrand(tau):
        a_val = env.value(tau)
        if a_val == 0.0:
            return 0j
        ph = delta * tau
        return a_val * complex(math.cos(ph), math.sin(ph))

    # Base knots: envelope features, requested times inside the support,
    # and a width cap so panels resolve the detuning oscillation.
    knots = set(env.breakpoints())
    knots.update(t for t in times if t0 < t < t1)
    cap = env.duration / 64.0
    if delta != 0.0:
        cap = min(cap, 2.0 * math.pi / (8.0 * abs(delta)))
    base = sorted(knots)
    refined = []
    for a, b in zip(base[:-1], base[1:]):
        refined.append(a)
        width = b - a
        if width > cap:
            pieces = math.ceil(width / cap)
            refined.extend(a + width * j / pieces for j in range(1, pieces))
    refined.append(base[-1])

    # Adaptive refinement of every base panel, left to right, with a
    # per-leaf error budget proportional to leaf width.
    budget = _REL_TOL * scale_mass
    err_total = 0.0
    edges = [refined[0]]
    J_edges = [0j]
    leaves = []
    J_running = 0j
    for a0, b0 in zip(refined[:-1], refined[1:]):
        stack = [(a0, b0, 0)]
        while stack:
            a, b, depth = stack.pop()
            val, err = _gk15(integrand, a, b)
            if err <= budget * (b - a) / env.duration or depth >= 48:
                J_running += val
                err_total += err
                edges.append(b)
                J_edges.append(J_running)
                leaves.append((a, b))
            else:
                mid = 0.5 * (a + b)
                stack.append((mid, b, depth + 1))
                stack.append((a, mid, depth + 1))
    if err_total > 10.0 * budget:
        raise QuadratureError(
            "drift quadrature error budget exceeded: achieved "
            f"{err_total / scale_mass:.3e} relative vs requested {_REL_TOL:.0e}",
            achieved=err_total / scale_mass,
        )

    q_prefactor = (charge / C_LIGHT) ** 2 * C_LIGHT * C_LIGHT / (2.0 * E_tilde)

    def q_value(tau, j_val):
        # Slow (detuning-frequency) reduction of the phase density Q.
        # The Wt^2 |J|^2 pieces of its two terms cancel in exact algebra
        # and are dropped here rather than subtracted: what survives is
        # proportional to the envelope, so Q vanishes identically (not
        # just to rounding) once the pulse has closed.
        a_val = env.value(tau)
        if a_val == 0.0:
            return 0.0
        ph = delta * tau
        rot = complex(math.cos(ph), math.sin(ph))
        im_part = (j_val.conjugate() * rot).imag
        return q_prefactor * a_val * (a_val + Omega_tilde * im_part)

    # Phase pass: composite Simpson over each accepted leaf, with the
    # cumulative J at interior points filled in by short Kronrod panels.
    phase_edges = [0.0]
    phase_running = 0.0
    for (a, b), J_a in zip(leaves, J_edges[:-1]):
        h = b - a
        q1 = a + 0.25 * h
        mid = a + 0.5 * h
        q3 = a + 0.75 * h
        J_q1 = J_a + _gk15(integrand, a, q1)[0]
        J_mid = J_a + _gk15(integrand, a, mid)[0]
        J_q3 = J_a + _gk15(integrand, a, q3)[0]
        J_b = J_a + _gk15(integrand, a, b)[0]
        total = (
            q_value(a, J_a)
            + 4.0 * q_value(q1, J_q1)
            + 2.0 * q_value(mid, J_mid)
            + 4.0 * q_value(q3, J_q3)
            + q_value(b, J_b)
        ) * h / 12.0
        phase_running += total / HBAR
        phase_edges.append(phase_running)

    J_end = J_edges[-1]
    phase_end = phase_edges[-1]
    # Zero unless a sampled envelope carries a (tolerated) residual
    # amplitude at its last node.
    q_post = q_value(t1, J_end)

    def state_at(tau):
        if tau <= edges[0]:
            return DriftState(tau=tau, K=0j, phase_Q=0.0, A_value=env.value(tau))
        if tau >= edges[-1]:
            j_val = J_end
            phase = phase_end + q_post * (tau - edges[-1]) / HBAR
        else:
            idx = bisect.bisect_left(edges, tau)
            if edges[idx] != tau:
                raise AssertionError(f"requested time {tau!r} is not a quadrature edge")
            j_val = J_edges[idx]
            phase = phase_edges[idx]
        ang = Omega_tilde * tau
        K = -1j * f.g * coupling * complex(math.cos(ang), math.sin(ang)) * j_val
        return DriftState(tau=tau, K=K, phase_Q=phase, A_value=env.value(tau))

    return [state_at(t) for t in times]


def asymptotic_displacement(states, l_B):
    """Dimensionless displacement parameter zeta_eff =
    (hbar |K(end)|)^2 / (2 l_B^2) from the final drift state.

    The last state must lie after the envelope has closed (its envelope
    value at most 1e-6 of the peak seen on the grid); otherwise
    EnvelopeNotClosedError is raised, since zeta is a post-interaction
    quantity.
    """
    if not states:
        raise ValueError("states must be non-empty")
    if not (l_B > 0.0 and math.isfinite(l_B)):
        raise ValueError(f"l_B must be positive and finite, got {l_B!r}")
    peak = max(abs(st.A_value) for st in states)
    final = states[-1]
    if peak > 0.0 and abs(final.A_value) > _CLOSURE_TOL * peak:
        raise EnvelopeNotClosedError(
            "envelope has not closed at the final state: "
            f"A = {final.A_value!r} vs peak {peak!r}"
        )
    displacement = HBAR * abs(final.K)
    return displacement * displacement / (2.0 * l_B * l_B)
