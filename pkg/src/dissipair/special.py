"""Complex error function and finite-interval Gaussian integrals.

The kernel is the compiled ``_faddeeva`` extension when it imports,
otherwise the pure-Python twin.  Set ``DISSIPAIR_PURE_PYTHON=1`` to
force the fallback.  :data:`BACKEND` names the one in use.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass

import numpy as np

from . import _faddeeva_py
from .errors import BranchError, DomainError

if os.environ.get("DISSIPAIR_PURE_PYTHON"):
    _kernel = _faddeeva_py
    BACKEND = "python"
else:
    try:
        from . import _faddeeva as _kernel
        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _kernel = _faddeeva_py
        BACKEND = "python"

#: components beyond this are outside the validated domain of erf
DOMAIN_LIMIT = 30.0

SQRT_PI = math.sqrt(math.pi)


def kernel(name: str | None = None):
    """Return a kernel module by name ("compiled"/"python"), default the active one."""
    if name is None:
        return _kernel
    if name == "python":
        return _faddeeva_py
    if name == "compiled":
        from . import _faddeeva
        return _faddeeva
    raise ValueError(f"unknown kernel {name!r}")


def set_backend(name: str) -> str:
    """Switch the active kernel ("compiled"/"python"); returns the previous name.

    Process-wide and not thread safe; meant for benchmarks and parity tests.
    """
    global _kernel, BACKEND
    previous = BACKEND
    _kernel = kernel(name)
    BACKEND = name
    return previous


def _check_domain(z: np.ndarray) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("erf argument has non-finite components")
    if np.any(np.abs(z.real) > DOMAIN_LIMIT) or np.any(np.abs(z.imag) > DOMAIN_LIMIT):
        raise DomainError(f"erf argument outside |Re z|, |Im z| <= {DOMAIN_LIMIT}")


def _apply(fn_scalar, fn_array, z, check=True):
    if np.isscalar(z):
        zc = complex(z)
        if check:
            _check_domain(np.asarray(zc))
        out = fn_scalar(zc)
        if not cmath.isfinite(out):
            raise DomainError(f"{fn_scalar.__name__}({zc}) is not representable")
        return out
    arr = np.asarray(z, dtype=np.complex128)
    if check:
        _check_domain(arr)
    out = fn_array(np.ascontiguousarray(arr.ravel())).reshape(arr.shape)
    if not np.all(np.isfinite(out)):
        raise DomainError(f"{fn_scalar.__name__} result is not representable")
    return out


def erf_complex(z):
    """Error function of a complex scalar or array.

    Relative accuracy is about 1e-13 wherever erf is well conditioned
    inside ``|Re z|, |Im z| <= 30``; values that overflow raise
    :class:`DomainError`, as does input outside that box.
    """
    return _apply(_kernel.erf, _kernel.erf_array, z)


def erfc_complex(z):
    """Complementary error function, same domain rules as :func:`erf_complex`."""
    return _apply(_kernel.erfc, _kernel.erfc_array, z)


def erfcx_complex(z):
    """Scaled complementary error function ``exp(z**2) * erfc(z)``.

    Not restricted to the erf box: for ``Re z >= 0`` it stays finite far
    out, which is what tail integrals need.
    """
    return _apply(_kernel.erfcx, _kernel.erfcx_array, z, check=False)


def gaussian_interval_integral(a, b, c, lo: float, hi: float) -> complex:
    """Integral of ``exp(-a x**2 + b x + c)`` over ``[lo, hi]``.

    ``a``, ``b``, ``c`` are complex with ``Re a > 0``; ``lo``/``hi`` may
    be infinite.  Completing the square gives
    ``sqrt(pi/a)/2 * exp(c + b**2/4a) * [erf(v) - erf(u)]`` with
    ``u, v = sqrt(a) * (lo|hi - b/2a)``.  When both ends lie in the same
    tail the difference is taken between scaled ``erfc`` values instead,
    folding the Gaussian exponent in so nothing underflows early.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    if not a.real > 0:
        raise DomainError(f"divergent Gaussian integral, Re(a) = {a.real} <= 0")
    if not lo < hi:
        if lo == hi:
            return 0j
        return -gaussian_interval_integral(a, b, c, hi, lo)
    try:
        return _interval(a, b, c, lo, hi)
    except OverflowError as exc:
        raise DomainError(f"gaussian_interval_integral overflow: {exc}") from None


def _interval(a, b, c, lo, hi):
    sa = cmath.sqrt(a)
    center = b / (2 * a)
    expo = c + b * b / (4 * a)
    half = 0.5 * SQRT_PI / sa

    if math.isinf(lo) and math.isinf(hi):
        return _finite(2 * half * cmath.exp(expo), "gaussian_interval_integral")

    u = None if math.isinf(lo) else sa * (lo - center)
    v = None if math.isinf(hi) else sa * (hi - center)

    if u is not None and u.real >= 0:
        # right tail: erfc(u) - erfc(v)
        left = cmath.exp(expo - u * u) * _kernel.erfcx(u)
        right = 0j if v is None else cmath.exp(expo - v * v) * _kernel.erfcx(v)
        return _finite(half * (left - right), "gaussian_interval_integral")
    if v is not None and v.real <= 0:
        # left tail: erfc(-v) - erfc(-u)
        right = cmath.exp(expo - v * v) * _kernel.erfcx(-v)
        left = 0j if u is None else cmath.exp(expo - u * u) * _kernel.erfcx(-u)
        return _finite(half * (right - left), "gaussian_interval_integral")
    # straddles the center: Re u < 0 < Re v
    ev = 1.0 if v is None else 1.0 - cmath.exp(-v * v) * _kernel.erfcx(v)
    eu = -1.0 if u is None else -(1.0 - cmath.exp(-u * u) * _kernel.erfcx(-u))
    return _finite(half * cmath.exp(expo) * (ev - eu), "gaussian_interval_integral")


def _finite(val: complex, where: str) -> complex:
    if not cmath.isfinite(val):
        raise DomainError(f"{where}: result is not representable")
    return val


def gaussian_moments(a, b, c) -> tuple[complex, complex, complex]:
    """Full-line moments ``int x**n exp(-a x**2 + b x + c) dx`` for n = 0, 1, 2."""
    a = complex(a)
    b = complex(b)
    c = complex(c)
    if not a.real > 0:
        raise DomainError(f"divergent Gaussian integral, Re(a) = {a.real} <= 0")
    m0 = cmath.sqrt(math.pi / a) * cmath.exp(c + b * b / (4 * a))
    mean = b / (2 * a)
    return m0, m0 * mean, m0 * (mean * mean + 1 / (2 * a))


@dataclass(frozen=True)
class ComplexGaussian:
    """The function ``x -> exp(-a x**2 + b x + c)`` with complex coefficients."""

    a: complex
    b: complex
    c: complex

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-self.a * x * x + self.b * x + self.c)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return (self.b - 2 * self.a * x) * self(x)

    def conj(self) -> "ComplexGaussian":
        return ComplexGaussian(self.a.conjugate(), self.b.conjugate(), self.c.conjugate())

    def __mul__(self, other: "ComplexGaussian") -> "ComplexGaussian":
        return ComplexGaussian(self.a + other.a, self.b + other.b, self.c + other.c)

    def scaled(self, factor: complex) -> "ComplexGaussian":
        return ComplexGaussian(self.a, self.b, self.c + cmath.log(factor))

    def integral(self, lo: float = -math.inf, hi: float = math.inf) -> complex:
        if not self.a.real > 0:
            raise BranchError(f"Re(a) = {self.a.real} <= 0, Gaussian not integrable")
        return gaussian_interval_integral(self.a, self.b, self.c, lo, hi)

    def moments(self) -> tuple[complex, complex, complex]:
        if not self.a.real > 0:
            raise BranchError(f"Re(a) = {self.a.real} <= 0, Gaussian not integrable")
        return gaussian_moments(self.a, self.b, self.c)
