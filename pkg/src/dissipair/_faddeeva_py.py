"""Pure-Python complex error function kernels.

Fallback for the compiled ``_faddeeva`` extension, same algorithm and
region boundaries line for line (see that module's docstring).
"""
import cmath
import math

import numpy as np

TWO_OVER_SQRTPI = 2.0 / math.sqrt(math.pi)
INV_SQRTPI = 1.0 / math.sqrt(math.pi)
SERIES_RADIUS = 2.0
SERIES_STRIP = 1.5
CF_MAX_ITER = 20000
NAN = complex(math.nan, math.nan)


def _in_series_region(x, y):
    return math.hypot(x, y) <= SERIES_RADIUS or x <= SERIES_STRIP


def _maclaurin(z):
    z2 = z * z
    term = z
    s = z
    n = 0
    while True:
        n += 1
        term = term * (-z2) / n
        add = term / (2 * n + 1)
        s += add
        if n > 3 and abs(add) <= 1e-17 * abs(s):
            break
        if n > 100000:
            return NAN
    return TWO_OVER_SQRTPI * s


def _kummer(z):
    z2 = 2.0 * z * z
    term = 1.0 + 0j
    s = 1.0 + 0j
    n = 0
    while True:
        n += 1
        term = term * z2 / (2 * n + 1)
        s += term
        if abs(term) <= 1e-17 * abs(s):
            break
        if n > 100000:
            return NAN
    return TWO_OVER_SQRTPI * z * _cexp(-z * z) * s


def _cexp(z):
    try:
        return cmath.exp(z)
    except OverflowError:
        return complex(math.inf, math.inf)


def _erf_series(q):
    if q.real <= q.imag:
        return _maclaurin(q)
    return _kummer(q)


def _w_cf(zeta):
    tiny = 1e-300
    f = zeta
    c = zeta
    d = 0j
    n = 0
    while True:
        n += 1
        a = -0.5 * n
        d = zeta + a * d
        if d == 0:
            d = tiny
        d = 1.0 / d
        c = zeta + a / c
        if c == 0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
        if n >= CF_MAX_ITER:
            return NAN
    return (1j * INV_SQRTPI) / f


def _erf_q(q):
    if _in_series_region(q.real, q.imag):
        return _erf_series(q)
    return 1.0 - _cexp(-q * q) * _w_cf(1j * q)


def _erfcx_q(q):
    if _in_series_region(q.real, q.imag):
        return _cexp(q * q) * (1.0 - _erf_series(q))
    return _w_cf(1j * q)


def erf(z):
    z = complex(z)
    r = _erf_q(complex(abs(z.real), abs(z.imag)))
    if z.real < 0:
        r = -r.conjugate()
    if z.imag < 0:
        r = r.conjugate()
    return r


def erfcx(z):
    z = complex(z)
    if z.real >= 0:
        r = _erfcx_q(complex(z.real, abs(z.imag)))
        return r.conjugate() if z.imag < 0 else r
    return 2.0 * _cexp(z * z) - erfcx(-z)


def erfc(z):
    z = complex(z)
    if z.real >= 0:
        q = complex(z.real, abs(z.imag))
        if _in_series_region(q.real, q.imag):
            r = 1.0 - _erf_series(q)
        else:
            r = _cexp(-q * q) * _w_cf(1j * q)
        return r.conjugate() if z.imag < 0 else r
    return 2.0 - erfc(-z)


def _vectorize(scalar):
    def apply(z):
        z = np.ascontiguousarray(z, dtype=np.complex128)
        return np.array([scalar(v) for v in z], dtype=np.complex128)
    apply.__name__ = scalar.__name__ + "_array"
    return apply


erf_array = _vectorize(erf)
erfc_array = _vectorize(erfc)
erfcx_array = _vectorize(erfcx)
