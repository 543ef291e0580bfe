"""Exchange statistics layer, shared by the CK and CL backends.

A *pair kernel* exposes the four one-particle pair densities
``rho_ab(x) = psi_a(x) conj(psi_b(x))`` (labels ``aa, ab, ba, bb``,
``a`` standing for psi and ``b`` for phi), their interval integrals and
their first three full-line moments.  CK kernels also expose the
wavefunctions themselves, which currents and point detectors need.

Every observable here is a function of the statistics and a kernel, so
the same code serves both frameworks.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import cl
from .ck import CrossMoments, Environment, GaussianPacket, GaussianState
from .errors import DegenerateDetector, NodeAtDetector, PauliExclusion

LABELS = ("aa", "ab", "ba", "bb")

_DENOM_FLOOR = 1e-300
_NODE_FLOOR = 1e-150


class ExchangeStatistics(enum.Enum):
    MB = "mb"
    BE = "be"
    FD = "fd"

    @property
    def sign(self) -> int:
        return {"mb": 0, "be": 1, "fd": -1}[self.value]

    @classmethod
    def parse(cls, value) -> "ExchangeStatistics":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


MB, BE, FD = ExchangeStatistics.MB, ExchangeStatistics.BE, ExchangeStatistics.FD


@dataclass(frozen=True)
class Single:
    d: float


@dataclass(frozen=True)
class Double:
    D: float
    d: float


@dataclass(frozen=True)
class Point:
    D: float


DetectorGeometry = Single | Double | Point


class CKKernel:
    """Pair kernel over two CK one-particle states.

    A state is anything with ``gaussians(t)`` (a list of
    :class:`~dissipair.special.ComplexGaussian` summing to the
    wavefunction), ``__call__(x, t)``, ``derivative(x, t)`` and a
    ``ref_time`` at which its overlaps are evaluated.
    """

    framework = "ck"
    has_wavefunctions = True

    def __init__(self, psi, phi, env: Environment):
        self.psi = psi
        self.phi = phi
        self.env = env
        self._overlap = None

    def _pair(self, label):
        first = self.psi if label[0] == "a" else self.phi
        second = self.psi if label[1] == "a" else self.phi
        if first == second:
            second = first
        return first, second

    def _products(self, label, t):
        first, second = self._pair(label)
        return [g1 * g2.conj() for g1 in first.gaussians(t) for g2 in second.gaussians(t)]

    def interval(self, label: str, lo: float, hi: float, t: float) -> complex:
        first, second = self._pair(label)
        if first is second and hasattr(first, "probability"):
            return complex(first.probability(lo, hi, t))
        return sum(g.integral(lo, hi) for g in self._products(label, t))

    def moments(self, label: str, t: float) -> CrossMoments:
        first, second = self._pair(label)
        if first is second and hasattr(first, "moments"):
            return first.moments(t)
        tot = np.zeros(3, dtype=complex)
        for g in self._products(label, t):
            tot += g.moments()
        return CrossMoments(*tot)

    def density(self, label: str, x, t: float):
        first, second = self._pair(label)
        return first(x, t) * np.conj(second(x, t))

    @property
    def overlap(self) -> complex:
        """``<phi|psi>``, time independent; evaluated at the reference time."""
        if self._overlap is None:
            t_ref = max(self.psi.ref_time, self.phi.ref_time)
            self._overlap = complex(self.moments("ab", t_ref).m0)
        return self._overlap

    def wavefunctions(self, x, t: float):
        return self.psi(x, t), self.phi(x, t)

    def derivatives(self, x, t: float):
        return self.psi.derivative(x, t), self.phi.derivative(x, t)


class CLKernel:
    """Pair kernel over CL diagonals of two co-centered Gaussian packets."""

    framework = "cl"
    has_wavefunctions = False

    def __init__(self, a: GaussianPacket, b: GaussianPacket, env: Environment):
        self.a = a
        self.b = b
        self.env = env
        self.overlap = complex(cl.cl_cross_moments(a, b, 0.0, env).m0)

    def _packets(self, label):
        return (self.a if label[0] == "a" else self.b), (self.a if label[1] == "a" else self.b)

    def interval(self, label: str, lo: float, hi: float, t: float) -> complex:
        p, q = self._packets(label)
        if p is q:
            return complex(cl.interval_aa(p, t, self.env, lo, hi))
        return cl.ab_gaussian(p, q, t, self.env).integral(lo, hi)

    def moments(self, label: str, t: float) -> CrossMoments:
        p, q = self._packets(label)
        if p is q:
            return cl.self_moments(p, t, self.env)
        return cl.cl_cross_moments(p, q, t, self.env)

    def density(self, label: str, x, t: float):
        p, q = self._packets(label)
        if p is q:
            return cl.rho_aa_diag(p, x, t, self.env)
        return cl.rho_ab_diag(p, q, x, t, self.env)


def ck_kernel(a: GaussianPacket, b: GaussianPacket, env: Environment) -> CKKernel:
    return CKKernel(GaussianState(a, env), GaussianState(b, env), env)


def cl_kernel(a: GaussianPacket, b: GaussianPacket, env: Environment) -> CLKernel:
    return CLKernel(a, b, env)


def _require_wavefunctions(kernel, what):
    if not getattr(kernel, "has_wavefunctions", False):
        raise TypeError(f"{what} needs wavefunctions; only the CK backend provides them")


def symmetrized_norm(stats, overlap: complex) -> float:
    """Normalization N of the (anti)symmetrized pair state; 1/sqrt(2) for MB."""
    stats = ExchangeStatistics.parse(stats)
    ov2 = abs(overlap) ** 2
    if ov2 > 1 + 1e-12:
        raise ValueError(f"|overlap| = {math.sqrt(ov2)} exceeds 1")
    if stats is MB:
        return 1 / math.sqrt(2)
    denom = 1 + stats.sign * ov2
    if stats is FD and 1 - ov2 < 1e-12:
        raise PauliExclusion(
            f"antisymmetric state vanishes: 1 - |<phi|psi>|^2 = {1 - ov2:.3e}"
        )
    return 1 / math.sqrt(2 * denom)


def _norm_sq(stats, kernel) -> float:
    return symmetrized_norm(stats, kernel.overlap) ** 2


def mss(stats, kernel, t: float) -> float:
    """Mean square separation of the two particles."""
    stats = ExchangeStatistics.parse(stats)
    _, m1a, m2a = kernel.moments("aa", t)
    _, m1b, m2b = kernel.moments("bb", t)
    mb = (m2a + m2b - 2 * m1a * m1b).real
    if stats is MB:
        return mb
    n2 = _norm_sq(stats, kernel)
    _, m1ab, m2ab = kernel.moments("ab", t)
    m0ba = kernel.moments("ba", t).m0
    s = stats.sign
    return 2 * n2 * (mb - s * 2 * abs(m1ab) ** 2 + s * 2 * (m2ab * m0ba).real)


def _ratio_guard(*vals):
    for v in vals:
        if v < _DENOM_FLOOR:
            raise DegenerateDetector(f"detector probability {v:.3e} below {_DENOM_FLOOR}")


def _two_window_ratio(stats, kernel, t, right, left):
    # detector 1 covers ``right``, detector 2 covers ``left``
    k_psi_r = kernel.interval("aa", *right, t).real
    k_phi_l = kernel.interval("bb", *left, t).real
    k_phi_r = kernel.interval("bb", *right, t).real
    k_psi_l = kernel.interval("aa", *left, t).real
    _ratio_guard(k_psi_r, k_phi_l, k_phi_r, k_psi_l)
    if stats is MB:
        return 1.0
    # int conj(psi) phi on the right, int conj(phi) psi on the left
    j_r = kernel.interval("ba", *right, t)
    j_l = kernel.interval("ab", *left, t)
    denom = k_psi_r * k_phi_l + k_phi_r * k_psi_l
    n2 = _norm_sq(stats, kernel)
    return 2 * n2 * (1 + stats.sign * 2 * (j_r * j_l).real / denom)


def detection_ratio_single(stats, kernel, t: float, d: float) -> float:
    """p_BE/p_MB or p_FD/p_MB for one detector covering ``[-d, d]``.

    Equal to ``2 N**2 (1 +- |I_ab|**2 / (I_aa I_bb))``; evaluated as the
    two-detector ratio with both windows on ``[-d, d]``.
    """
    stats = ExchangeStatistics.parse(stats)
    if not d > 0:
        raise ValueError(f"detector half-width must be positive, got {d}")
    return _two_window_ratio(stats, kernel, t, (-d, d), (-d, d))


def detection_ratio_double(stats, kernel, t: float, D: float, d: float) -> float:
    """Ratio for two detectors of half-width ``d`` centered at ``+D`` and ``-D``."""
    stats = ExchangeStatistics.parse(stats)
    _require_wavefunctions(kernel, "detection_ratio_double")
    if not d > 0:
        raise ValueError(f"detector half-width must be positive, got {d}")
    return _two_window_ratio(stats, kernel, t, (D - d, D + d), (-D - d, -D + d))


def detection_ratio_point(stats, kernel, t: float, D: float) -> float:
    """Point-detector limit of :func:`detection_ratio_double`."""
    stats = ExchangeStatistics.parse(stats)
    _require_wavefunctions(kernel, "detection_ratio_point")
    psi_r, phi_r = kernel.wavefunctions(D, t)
    psi_l, phi_l = kernel.wavefunctions(-D, t)
    for v in (psi_r, phi_r, psi_l, phi_l):
        if abs(v) < _NODE_FLOOR:
            raise NodeAtDetector(f"|wavefunction| = {abs(v):.3e} at a point detector (D = {D})")
    if stats is MB:
        return 1.0
    direct = psi_r * phi_l
    swapped = psi_l * phi_r
    weight = (direct * direct.conjugate()).real + (swapped * swapped.conjugate()).real
    exchange = 2 * (direct.conjugate() * swapped).real / weight
    n2 = _norm_sq(stats, kernel)
    return 2 * n2 * (1 + stats.sign * exchange)


def detection_ratio(stats, kernel, t: float, geometry) -> float:
    if isinstance(geometry, Single):
        return detection_ratio_single(stats, kernel, t, geometry.d)
    if isinstance(geometry, Double):
        return detection_ratio_double(stats, kernel, t, geometry.D, geometry.d)
    if isinstance(geometry, Point):
        return detection_ratio_point(stats, kernel, t, geometry.D)
    raise TypeError(f"unknown detector geometry {geometry!r}")


def sp_density(stats, kernel, x, t: float):
    """Single-particle density, the other particle traced out."""
    stats = ExchangeStatistics.parse(stats)
    rho = kernel.density("aa", x, t).real + kernel.density("bb", x, t).real
    if stats is MB:
        return 0.5 * rho
    n2 = _norm_sq(stats, kernel)
    m0_ba = np.conj(kernel.overlap)
    exch = 2 * (m0_ba * kernel.density("ab", x, t)).real
    return n2 * (rho + stats.sign * exch)


def sp_current(stats, kernel, x, t: float):
    """Single-particle probability current (CK only)."""
    stats = ExchangeStatistics.parse(stats)
    _require_wavefunctions(kernel, "sp_current")
    env = kernel.env
    psi, phi = kernel.wavefunctions(x, t)
    dpsi, dphi = kernel.derivatives(x, t)
    body = np.conj(psi) * dpsi + np.conj(phi) * dphi
    if stats is MB:
        n2 = 0.5
    else:
        n2 = _norm_sq(stats, kernel)
        ov = kernel.overlap  # <phi|psi>
        body = body + stats.sign * (ov * np.conj(psi) * dphi + np.conj(ov) * np.conj(phi) * dpsi)
    return n2 * env.hbar / env.m * math.exp(-2 * env.gamma * t) * body.imag


def joint_density(stats, kernel, x1, x2, t: float):
    """Probability density of finding the particles at ``x1`` and ``x2``.

    CK kernels use the amplitude form, so the fermion density on the
    diagonal is exactly zero; CL kernels combine the pair densities.
    """
    stats = ExchangeStatistics.parse(stats)
    if getattr(kernel, "has_wavefunctions", False):
        psi1, phi1 = kernel.wavefunctions(x1, t)
        psi2, phi2 = kernel.wavefunctions(x2, t)
        if stats is MB:
            return 0.5 * (abs(psi1 * phi2) ** 2 + abs(phi1 * psi2) ** 2)
        n2 = _norm_sq(stats, kernel)
        # same operand order in both products, so the fermion amplitude is exactly 0 at x1 == x2
        amp = psi1 * phi2 + stats.sign * (psi2 * phi1)
        return n2 * np.abs(amp) ** 2
    r = {lab: (kernel.density(lab, x1, t), kernel.density(lab, x2, t)) for lab in LABELS}
    direct = (r["aa"][0] * r["bb"][1] + r["bb"][0] * r["aa"][1]).real
    if stats is MB:
        return 0.5 * direct
    exch = (r["ab"][0] * r["ba"][1] + r["ba"][0] * r["ab"][1]).real
    return _norm_sq(stats, kernel) * (direct + stats.sign * exch)


def stationarity_gap(stats, kernel, t: float, d: float, dt: float = 1.0) -> float:
    """``|p(t + dt) - p(t)|`` for the single detector; small means stationary."""
    return abs(
        detection_ratio_single(stats, kernel, t + dt, d) - detection_ratio_single(stats, kernel, t, d)
    )
