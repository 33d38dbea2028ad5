"""Pure Python recurrence kernels.

Three numerical primitives live here (and in the compiled twin
``_kernels_cy``): normalized Hermite oscillator functions, the signed
Laguerre overlap factor I_{s,s'}(zeta), and full rows of displaced-state
log-amplitudes over the final index.  All three work in scaled mantissa
plus log-ledger form so no intermediate can overflow or underflow, which
keeps them usable out to indices of order 1e5 and deep into tails where
the probabilities themselves underflow double precision.

The recurrences are arranged so the recursion always moves in a
direction where the wanted solution is non-decaying: the degree
recurrence for I starts at the extreme-offset member (always in the
classically forbidden region) and moves toward balance, and the row
recurrence runs upward only to the upper turning point, switching to a
backward (Miller) pass for the decaying tail beyond it.
"""

import math

import numpy as np

_HUGE = 1e250
_TINY = 1e-250
_SCALE_DN = 2.0**-512
_SCALE_UP = 2.0**512
_LN_SCALE = 512.0 * math.log(2.0)
_LN_UNDERFLOW = -745.0


def hermite_norm(s, u):
    """Normalized Hermite function h_s(u) = H_s(u) exp(-u^2/2) /
    sqrt(2^s s! sqrt(pi)), evaluated by the stable upward recurrence on
    the normalized functions themselves (never on raw polynomials).
    """
    ledger = -0.5 * u * u
    h_prev = 0.0
    h = math.pi**-0.25
    for j in range(s):
        h_next = math.sqrt(2.0 / (j + 1)) * u * h - math.sqrt(j / (j + 1.0)) * h_prev
        h_prev = h
        h = h_next
        if abs(h) > _HUGE:
            h *= _SCALE_DN
            h_prev *= _SCALE_DN
            ledger += _LN_SCALE
    if h == 0.0:
        return 0.0
    ln = math.log(abs(h)) + ledger
    if ln < _LN_UNDERFLOW:
        return 0.0
    return math.copysign(math.exp(ln), h)


def laguerre_i(s, s_prime, zeta):
    """Signed Laguerre overlap factor I_{s,s'}(zeta).

    Convention: I = sqrt(min!/max!) exp(-zeta/2) zeta^(k/2) L_min^k(zeta)
    with k = |s - s'|, symmetric under swapping s and s'.  Evaluated by
    the degree recurrence on the normalized values T_j = I_{j, j+k},
    seeded at T_0 = I_{0,k} which is log-exact.
    """
    if zeta == 0.0:
        return 1.0 if s == s_prime else 0.0
    n = min(s, s_prime)
    k = abs(s - s_prime)
    if k == 0:
        ledger = -0.5 * zeta
    else:
        ledger = -0.5 * zeta + 0.5 * (k * math.log(zeta) - math.lgamma(k + 1.0))
    t_prev = 0.0
    t = 1.0
    for j in range(n):
        a = (2.0 * j + k + 1.0 - zeta) / math.sqrt((j + 1.0) * (j + k + 1.0))
        b = math.sqrt(j * (j + k) / ((j + 1.0) * (j + k + 1.0)))
        t_next = a * t - b * t_prev
        t_prev = t
        t = t_next
        at = abs(t)
        if at > _HUGE:
            t *= _SCALE_DN
            t_prev *= _SCALE_DN
            ledger += _LN_SCALE
        elif 0.0 < at < _TINY:
            t *= _SCALE_UP
            t_prev *= _SCALE_UP
            ledger -= _LN_SCALE
    if t == 0.0:
        return 0.0
    ln = math.log(abs(t)) + ledger
    if ln < _LN_UNDERFLOW:
        return 0.0
    return math.copysign(math.exp(ln), t)


def displacement_ln_row(n, zeta, m_max):
    """ln |I_{n,m}(zeta)| for m = 0..m_max at fixed initial index n.

    Returns a float64 array of length m_max + 1; entries that are
    exactly zero are reported as -inf.  The row recurrence in m is run
    upward only while stable (through the upper classical turning point
    m_t ~ (sqrt(n) + sqrt(zeta))^2); the decaying tail beyond m_t comes
    from a backward Miller pass seeded in the deep forbidden region and
    matched to the upward pass near the turning point.  Match quality is
    probed on neighbouring indices and the seed buffer is enlarged until
    the two passes agree, so tail values stay accurate even when the
    probabilities underflow by hundreds of orders of magnitude.
    """
    ln = np.full(m_max + 1, -math.inf)
    if zeta == 0.0:
        if n <= m_max:
            ln[n] = 0.0
        return ln

    m_turn = int((math.sqrt(n) + math.sqrt(zeta)) ** 2) + 2
    m_up = min(m_max, m_turn)

    # Upward pass: d_{m+1} = [(m - n + zeta) d_m - sqrt(zeta m) d_{m-1}]
    #              / sqrt(zeta (m+1)),  d_0 = I_{n,0} in log form.
    ledger = -0.5 * zeta + 0.5 * (n * math.log(zeta) - math.lgamma(n + 1.0))
    d_prev = 0.0
    d = 1.0
    ln[0] = ledger
    for m in range(m_up):
        d_next = ((m - n + zeta) * d - math.sqrt(zeta * m) * d_prev) / math.sqrt(
            zeta * (m + 1.0)
        )
        d_prev = d
        d = d_next
        ad = abs(d)
        if ad > _HUGE:
            d *= _SCALE_DN
            d_prev *= _SCALE_DN
            ledger += _LN_SCALE
        elif 0.0 < ad < _TINY:
            d *= _SCALE_UP
            d_prev *= _SCALE_UP
            ledger -= _LN_SCALE
        ln[m + 1] = math.log(abs(d)) + ledger if d != 0.0 else -math.inf

    if m_max <= m_turn:
        return ln

    # Backward Miller pass for the tail (m_up .. m_max].  Seeded with an
    # arbitrary unit value well beyond m_max; the decaying solution
    # dominates after recurring down through the forbidden region.
    match_lo = max(m_up - 10, 0)
    span = m_max - match_lo
    vals = np.empty(span + 1)
    buf = 60
    while True:
        t_up = 0.0
        t = 1.0
        led = 0.0
        for m in range(m_max + buf, match_lo, -1):
            t_dn = ((m - n + zeta) * t - math.sqrt(zeta * (m + 1.0)) * t_up) / math.sqrt(
                zeta * m
            )
            t_up = t
            t = t_dn
            if abs(t) > _HUGE:
                t *= _SCALE_DN
                t_up *= _SCALE_DN
                led += _LN_SCALE
            idx = m - 1 - match_lo
            if 0 <= idx <= span:
                vals[idx] = math.log(abs(t)) + led if t != 0.0 else -math.inf
        # Match on the largest upward-pass amplitude near the turning
        # point (guaranteed away from a zero of the row), then check
        # consistency on the remaining overlap indices.
        overlap_hi = m_up - match_lo
        rel = int(np.argmax(ln[match_lo : m_up + 1]))
        offset = ln[match_lo + rel] - vals[rel]
        ok = True
        for q in range(overlap_hi + 1):
            if q == rel:
                continue
            if not np.isfinite(ln[match_lo + q]) or not np.isfinite(vals[q]):
                continue
            if abs(vals[q] + offset - ln[match_lo + q]) > 1e-9:
                ok = False
                break
        if ok or buf >= 4096:
            break
        buf *= 2

    ln[m_up + 1 : m_max + 1] = vals[m_up + 1 - match_lo :] + offset
    return ln
