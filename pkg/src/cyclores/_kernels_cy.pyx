# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled recurrence kernels: same algorithms and bitwise-comparable
results to the pure Python twin in ``_kernels_py`` (both use double
arithmetic with identical operation ordering), just faster loops.
"""

import math

import numpy as np

from libc.math cimport INFINITY, copysign, exp, fabs, log, sqrt

cdef double _HUGE = 1e250
cdef double _TINY = 1e-250
cdef double _SCALE_DN = 2.0 ** -512
cdef double _SCALE_UP = 2.0 ** 512
cdef double _LN_SCALE = 512.0 * 0.6931471805599453
cdef double _LN_UNDERFLOW = -745.0
cdef double _PI_QUARTER = 0.7511255444649425  # pi ** -0.25


def hermite_norm(s, u):
    """Normalized Hermite function h_s(u); see the pure twin."""
    return _hermite_norm(s, u)


cdef double _hermite_norm(long s, double u):
    cdef double ledger = -0.5 * u * u
    cdef double h_prev = 0.0
    cdef double h = _PI_QUARTER
    cdef double h_next, ln
    cdef long j
    for j in range(s):
        h_next = sqrt(2.0 / (j + 1)) * u * h - sqrt(j / (j + 1.0)) * h_prev
        h_prev = h
        h = h_next
        if fabs(h) > _HUGE:
            h *= _SCALE_DN
            h_prev *= _SCALE_DN
            ledger += _LN_SCALE
    if h == 0.0:
        return 0.0
    ln = log(fabs(h)) + ledger
    if ln < _LN_UNDERFLOW:
        return 0.0
    return copysign(exp(ln), h)


def laguerre_i(s, s_prime, zeta):
    """Signed Laguerre overlap factor I_{s,s'}(zeta); see the pure twin."""
    return _laguerre_i(s, s_prime, zeta)


cdef double _laguerre_i(long s, long s_prime, double zeta):
    cdef long n, k, j
    cdef double ledger, t_prev, t, t_next, a, b, at, ln
    if zeta == 0.0:
        return 1.0 if s == s_prime else 0.0
    n = min(s, s_prime)
    k = s - s_prime if s > s_prime else s_prime - s
    if k == 0:
        ledger = -0.5 * zeta
    else:
        # math.lgamma, not libm lgamma: CPython's own implementation
        # differs by an ulp and the twins must agree bitwise.
        ledger = -0.5 * zeta + 0.5 * (k * log(zeta) - math.lgamma(k + 1.0))
    t_prev = 0.0
    t = 1.0
    for j in range(n):
        a = (2.0 * j + k + 1.0 - zeta) / sqrt((j + 1.0) * (j + k + 1.0))
        b = sqrt(j * (j + k) / ((j + 1.0) * (j + k + 1.0)))
        t_next = a * t - b * t_prev
        t_prev = t
        t = t_next
        at = fabs(t)
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
    ln = log(fabs(t)) + ledger
    if ln < _LN_UNDERFLOW:
        return 0.0
    return copysign(exp(ln), t)


def displacement_ln_row(n, zeta, m_max):
    """ln |I_{n,m}(zeta)| for m = 0..m_max; see the pure twin."""
    cdef long cn = n
    cdef long cm_max = m_max
    cdef double czeta = zeta
    out = np.full(cm_max + 1, -INFINITY)
    cdef double[::1] ln = out
    cdef long m_turn, m_up, match_lo, span, buf, m, idx, rel, q, overlap_hi
    cdef double ledger, d_prev, d, d_next, ad, t_up, t, t_dn, led, offset, best
    cdef bint ok

    if czeta == 0.0:
        if cn <= cm_max:
            ln[cn] = 0.0
        return out

    m_turn = <long>((sqrt(<double>cn) + sqrt(czeta)) ** 2) + 2
    m_up = cm_max if cm_max < m_turn else m_turn

    ledger = -0.5 * czeta + 0.5 * (cn * log(czeta) - math.lgamma(cn + 1.0))
    d_prev = 0.0
    d = 1.0
    ln[0] = ledger
    for m in range(m_up):
        d_next = ((m - cn + czeta) * d - sqrt(czeta * m) * d_prev) / sqrt(
            czeta * (m + 1.0)
        )
        d_prev = d
        d = d_next
        ad = fabs(d)
        if ad > _HUGE:
            d *= _SCALE_DN
            d_prev *= _SCALE_DN
            ledger += _LN_SCALE
        elif 0.0 < ad < _TINY:
            d *= _SCALE_UP
            d_prev *= _SCALE_UP
            ledger -= _LN_SCALE
        ln[m + 1] = log(fabs(d)) + ledger if d != 0.0 else -INFINITY

    if cm_max <= m_turn:
        return out

    match_lo = m_up - 10 if m_up >= 10 else 0
    span = cm_max - match_lo
    vals_arr = np.empty(span + 1)
    cdef double[::1] vals = vals_arr
    buf = 60
    while True:
        t_up = 0.0
        t = 1.0
        led = 0.0
        for m in range(cm_max + buf, match_lo, -1):
            t_dn = ((m - cn + czeta) * t - sqrt(czeta * (m + 1.0)) * t_up) / sqrt(
                czeta * m
            )
            t_up = t
            t = t_dn
            if fabs(t) > _HUGE:
                t *= _SCALE_DN
                t_up *= _SCALE_DN
                led += _LN_SCALE
            idx = m - 1 - match_lo
            if 0 <= idx <= span:
                vals[idx] = log(fabs(t)) + led if t != 0.0 else -INFINITY
        overlap_hi = m_up - match_lo
        rel = 0
        best = ln[match_lo]
        for q in range(1, overlap_hi + 1):
            if ln[match_lo + q] > best:
                best = ln[match_lo + q]
                rel = q
        offset = ln[match_lo + rel] - vals[rel]
        ok = True
        for q in range(overlap_hi + 1):
            if q == rel:
                continue
            if ln[match_lo + q] == -INFINITY or vals[q] == -INFINITY:
                continue
            if fabs(vals[q] + offset - ln[match_lo + q]) > 1e-9:
                ok = False
                break
        if ok or buf >= 4096:
            break
        buf *= 2

    for m in range(m_up + 1, cm_max + 1):
        ln[m] = vals[m - match_lo] + offset
    return out
