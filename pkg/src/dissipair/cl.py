"""Caldeira-Leggett diagonals of one-particle density matrices.

Only the position diagonals ``rho_ab(x, x, t)`` of Gaussian operators
are built.  The bath adds a state-independent thermal variance to every
diagonal; the coherent part is the CK result at ``gamma`` with the same
rescaled time.

The master equation is a high-temperature approximation.  Nothing here
polices that regime; any ``kBT >= 0`` is evaluated.
"""
from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .ck import CrossMoments, Environment, GaussianPacket, packet_frame, tau
from .errors import BranchError, UnsupportedGeometry
from .special import ComplexGaussian

# h(u) = (2u + 4 e^{-u} - 3 - e^{-2u}) / u^3 = sum_{n>=3} (-1)^n (4 - 2^n) u^{n-3} / n!
_H_COEFFS = [(-1) ** n * (4 - 2 ** n) / math.factorial(n) for n in range(3, 30)]
_SERIES_BELOW = 0.5


class CLDiagonalAA(NamedTuple):
    w_t: float
    x_t: float


class CLDiagonalAB(NamedTuple):
    a0: float
    a1: complex
    a2: complex
    amplitude: float


class CLIntervals(NamedTuple):
    I_aa: float
    I_bb: float
    I_ab: complex
    I_ba: complex


def diffusion(env: Environment) -> float:
    return env.diffusion


def _h(u: float) -> float:
    if u < _SERIES_BELOW:
        return float(np.polyval(_H_COEFFS[::-1], u))
    return (2 * u + 4 * math.expm1(-u) - math.expm1(-2 * u)) / u ** 3


def thermal_variance(t: float, env: Environment) -> float:
    """Position variance the bath adds by time ``t``.

    ``D (4 g t + 4 e^{-2 g t} - 3 - e^{-4 g t}) / (8 m^2 g^3)``; evaluated
    through a series in ``2 g t`` below 0.5, where the closed form
    cancels catastrophically.
    """
    D = env.diffusion
    if D == 0.0 or t == 0.0:
        return 0.0
    u = 2 * env.gamma * t
    return D * t ** 3 * _h(u) / env.m ** 2


def width_sq(packet: GaussianPacket, t: float, env: Environment) -> float:
    """``w_t**2``: coherent CK spread plus thermal spread."""
    return packet_frame(packet, t, env).sigma_t ** 2 + thermal_variance(t, env)


def diagonal_aa(packet: GaussianPacket, t: float, env: Environment) -> CLDiagonalAA:
    fr = packet_frame(packet, t, env)
    return CLDiagonalAA(math.sqrt(fr.sigma_t ** 2 + thermal_variance(t, env)), fr.x_t)


def rho_aa_diag(packet: GaussianPacket, x, t: float, env: Environment):
    w, xt = diagonal_aa(packet, t, env)
    x = np.asarray(x, dtype=float)
    out = np.exp(-((x - xt) ** 2) / (2 * w * w)) / (math.sqrt(2 * math.pi) * w)
    return float(out) if out.ndim == 0 else out


def diagonal_ab(a: GaussianPacket, b: GaussianPacket, t: float, env: Environment) -> CLDiagonalAB:
    """Parameters of ``rho_ab(x, x, t)`` evolved from ``psi_a(x) conj(psi_b(x'))``."""
    if a.x0 != b.x0:
        raise UnsupportedGeometry("CL cross diagonal is closed-form only for co-centered packets")
    hb, m = env.hbar, env.m
    s2, sb2 = a.sigma0 ** 2, b.sigma0 ** 2
    ssum = s2 + sb2
    red = s2 * sb2 / ssum
    dp = a.p0 - b.p0
    tt = tau(t, env)
    a0 = -red * dp * dp / (hb * hb)
    a1 = a.x0 + (a.p0 * s2 + b.p0 * sb2) / (m * ssum) * tt + 1j * red * 2 * dp / hb
    a2 = (
        red
        + hb * hb * tt * tt / (4 * m * m * ssum)
        + 0.5 * thermal_variance(t, env)
        - 1j * hb / (2 * m) * (s2 - sb2) / ssum * tt
    )
    if not a2.real > 0:
        raise BranchError(f"Re(a2) = {a2.real} <= 0")
    amp = math.sqrt(2 * a.sigma0 * b.sigma0 / ssum)
    return CLDiagonalAB(a0, complex(a1), complex(a2), amp)


def ab_gaussian(a: GaussianPacket, b: GaussianPacket, t: float, env: Environment) -> ComplexGaussian:
    """``rho_ab(x, x, t)`` expanded as ``exp(-A x**2 + B x + C)``."""
    a0, a1, a2, amp = diagonal_ab(a, b, t, env)
    inv = 1 / (4 * a2)
    return ComplexGaussian(
        inv,
        2 * a1 * inv,
        a0 - a1 * a1 * inv + math.log(amp) - 0.5 * cmath.log(4 * math.pi * a2),
    )


def rho_ab_diag(a: GaussianPacket, b: GaussianPacket, x, t: float, env: Environment):
    a0, a1, a2, amp = diagonal_ab(a, b, t, env)
    x = np.asarray(x, dtype=float)
    out = amp / (2 * np.sqrt(np.pi * a2)) * np.exp(a0 - (x - a1) ** 2 / (4 * a2))
    return complex(out) if out.ndim == 0 else out


def interval_aa(packet: GaussianPacket, t: float, env: Environment, lo: float, hi: float) -> float:
    w, xt = diagonal_aa(packet, t, env)
    scale = math.sqrt(2) * w
    u = (xt - lo) / scale
    v = (xt - hi) / scale
    if v > 0:
        return 0.5 * (math.erfc(v) - math.erfc(u))
    if u < 0:
        return 0.5 * (math.erfc(-u) - math.erfc(-v))
    return 0.5 * (math.erf(u) - math.erf(v))


def cl_interval_integrals(
    a: GaussianPacket, b: GaussianPacket, t: float, env: Environment, lo: float, hi: float
) -> CLIntervals:
    return CLIntervals(
        interval_aa(a, t, env, lo, hi),
        interval_aa(b, t, env, lo, hi),
        ab_gaussian(a, b, t, env).integral(lo, hi),
        ab_gaussian(b, a, t, env).integral(lo, hi),
    )


def cl_cross_moments(a: GaussianPacket, b: GaussianPacket, t: float, env: Environment) -> CrossMoments:
    """``int x**n rho_ab(x, x, t) dx`` for n = 0, 1, 2."""
    a0, a1, a2, amp = diagonal_ab(a, b, t, env)
    m0 = amp * math.exp(a0)
    return CrossMoments(complex(m0), m0 * a1, m0 * (a1 * a1 + 2 * a2))


def self_moments(packet: GaussianPacket, t: float, env: Environment) -> CrossMoments:
    w, xt = diagonal_aa(packet, t, env)
    return CrossMoments(1.0, xt, w * w + xt * xt)
