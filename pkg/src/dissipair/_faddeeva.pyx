# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled complex error function kernels.

Mirror of :mod:`dissipair._faddeeva_py`; both modules must agree to
rounding.  No domain checks happen here, out-of-range input yields
``nan``/``inf`` and the caller in :mod:`dissipair.special` decides.

Regions, for ``q = x + iy`` folded into the first quadrant:

* ``|q| <= 2`` or ``x <= 1.5``: power series.  Maclaurin series when
  ``x <= y`` (no cancellation near the imaginary axis), the
  ``exp(-z^2)``-weighted series otherwise (positive terms near the real
  axis).
* elsewhere: Laplace continued fraction for ``w(iq)`` by modified Lentz,
  ``erf(q) = 1 - exp(-q^2) w(iq)``.
"""
import numpy as np

from libc.math cimport exp, cos, sin, sqrt, fabs, hypot, NAN

cdef double TWO_OVER_SQRTPI = 1.1283791670955126
cdef double INV_SQRTPI = 0.5641895835477563
cdef double SERIES_RADIUS = 2.0
cdef double SERIES_STRIP = 1.5
cdef int CF_MAX_ITER = 20000


cdef inline double complex _cexp(double complex z) nogil:
    cdef double r = exp(z.real)
    return r * cos(z.imag) + 1j * (r * sin(z.imag))


cdef inline double complex _conj(double complex z) nogil:
    return z.real - 1j * z.imag


cdef inline double _cabs(double complex z) nogil:
    return hypot(z.real, z.imag)


cdef inline bint _in_series_region(double x, double y) nogil:
    return hypot(x, y) <= SERIES_RADIUS or x <= SERIES_STRIP


cdef double complex _maclaurin(double complex z) nogil:
    cdef double complex z2 = z * z
    cdef double complex term = z
    cdef double complex s = z
    cdef double complex add
    cdef int n = 0
    while True:
        n += 1
        term = term * (-z2) / n
        add = term / (2 * n + 1)
        s = s + add
        if n > 3 and _cabs(add) <= 1e-17 * _cabs(s):
            break
        if n > 100000:
            return NAN
    return TWO_OVER_SQRTPI * s


cdef double complex _kummer(double complex z) nogil:
    cdef double complex z2 = 2.0 * z * z
    cdef double complex term = 1.0
    cdef double complex s = 1.0
    cdef int n = 0
    while True:
        n += 1
        term = term * z2 / (2 * n + 1)
        s = s + term
        if _cabs(term) <= 1e-17 * _cabs(s):
            break
        if n > 100000:
            return NAN
    return TWO_OVER_SQRTPI * z * _cexp(-z * z) * s


cdef double complex _erf_series(double complex q) nogil:
    if q.real <= q.imag:
        return _maclaurin(q)
    return _kummer(q)


cdef double complex _w_cf(double complex zeta) nogil:
    # w(zeta) = (i/sqrt(pi)) / (zeta - (1/2)/(zeta - (2/2)/(zeta - ...))), Im zeta > 0
    cdef double tiny = 1e-300
    cdef double complex f = zeta
    cdef double complex c = zeta
    cdef double complex d = 0.0
    cdef double complex delta
    cdef double a
    cdef int n = 0
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
        f = f * delta
        if _cabs(delta - 1.0) < 1e-16:
            break
        if n >= CF_MAX_ITER:
            return NAN
    return (1j * INV_SQRTPI) / f


cdef double complex _erf_q(double complex q) nogil:
    if _in_series_region(q.real, q.imag):
        return _erf_series(q)
    return 1.0 - _cexp(-q * q) * _w_cf(1j * q)


cdef double complex _erfcx_q(double complex q) nogil:
    # exp(q^2) erfc(q) for Re q >= 0, Im q >= 0
    if _in_series_region(q.real, q.imag):
        return _cexp(q * q) * (1.0 - _erf_series(q))
    return _w_cf(1j * q)


cdef double complex erf_c(double complex z) nogil:
    cdef double complex q = fabs(z.real) + 1j * fabs(z.imag)
    cdef double complex r = _erf_q(q)
    if z.real < 0:
        r = -_conj(r)
    if z.imag < 0:
        r = _conj(r)
    return r


cdef double complex erfcx_c(double complex z) nogil:
    cdef double complex q
    cdef double complex r
    if z.real >= 0:
        q = z.real + 1j * fabs(z.imag)
        r = _erfcx_q(q)
        if z.imag < 0:
            r = _conj(r)
        return r
    return 2.0 * _cexp(z * z) - erfcx_c(-z)


cdef double complex erfc_c(double complex z) nogil:
    cdef double complex q
    cdef double complex r
    if z.real >= 0:
        q = z.real + 1j * fabs(z.imag)
        if _in_series_region(q.real, q.imag):
            r = 1.0 - _erf_series(q)
        else:
            r = _cexp(-q * q) * _w_cf(1j * q)
        if z.imag < 0:
            r = _conj(r)
        return r
    return 2.0 - erfc_c(-z)


cpdef double complex erf(double complex z):
    return erf_c(z)


cpdef double complex erfc(double complex z):
    return erfc_c(z)


cpdef double complex erfcx(double complex z):
    return erfcx_c(z)


def erf_array(double complex[::1] z):
    cdef Py_ssize_t i, n = z.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erf_c(z[i])
    return out


def erfc_array(double complex[::1] z):
    cdef Py_ssize_t i, n = z.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erfc_c(z[i])
    return out


def erfcx_array(double complex[::1] z):
    cdef Py_ssize_t i, n = z.shape[0]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = erfcx_c(z[i])
    return out
