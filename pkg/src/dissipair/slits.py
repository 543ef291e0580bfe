"""Two Gaussian slits in the CK framework.

A transverse Gaussian packet spreads freely until ``t0``, is multiplied
by the aperture ``exp(-(x - X)**2 / 2 w**2)`` of one slit and then
propagates freely again.  Each slit state stays Gaussian with
coefficients ``c0, c1, c2`` after the slit.  The right slit has sign
``+1``, the left ``-1`` (``X -> -X``).
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import pairs
from .ck import CKPacketFrame, Environment, GaussianPacket, _log_prefactor, packet_frame, tau, wavefunction_at
from .errors import BranchError, UnsupportedGeometry
from .special import ComplexGaussian

NORM_TOLERANCE = 1e-8


@dataclass(frozen=True)
class SlitConfig:
    """Half-separation ``X``, slit width ``w`` and arrival time ``t0``."""

    X: float = 4.0
    w: float = 1.0
    t0: float = 1.0

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"slit width must be positive, got {self.w}")
        if not self.t0 > 0:
            raise ValueError(f"arrival time must be positive, got {self.t0}")


class SlitState(NamedTuple):
    c0: complex
    c1: complex
    c2: complex
    norm: float
    frame: CKPacketFrame


def _require_source(packet: GaussianPacket):
    if packet.x0 != 0 or packet.p0 != 0:
        raise UnsupportedGeometry("the slit source is a centered packet with zero kick momentum")


def pre_slit_state(packet: GaussianPacket, x, t: float, env: Environment):
    """Transverse wavefunction before the slits, ``0 <= t < t0``."""
    _require_source(packet)
    return wavefunction_at(packet, x, t, env)


def slit_norm(sigma_t0: float, cfg: SlitConfig) -> float:
    w2 = cfg.w ** 2
    return ((w2 + 2 * sigma_t0 ** 2) / w2) ** 0.25 * math.exp(cfg.X ** 2 / (2 * w2 + 4 * sigma_t0 ** 2))


def slit_parameters(packet: GaussianPacket, sign: int, cfg: SlitConfig, t: float, env: Environment) -> SlitState:
    """Coefficients of the slit state ``N pref exp(-c2 x**2 + c1 x + c0)`` at ``t >= t0``."""
    _require_source(packet)
    if sign not in (1, -1):
        raise ValueError(f"slit sign must be +1 or -1, got {sign}")
    if t < cfg.t0:
        raise ValueError(f"slit state is defined for t >= t0 = {cfg.t0}, got t = {t}")
    hb, m = env.hbar, env.m
    fr = packet_frame(packet, cfg.t0, env)
    s = fr.s_t
    sig0 = packet.sigma0
    X = sign * cfg.X
    w2 = cfg.w ** 2
    dtau = tau(t, env) - fr.tau
    den = 4 * m * w2 * sig0 * s + 2j * hb * (w2 + 2 * sig0 * s) * dtau
    c0 = -(2 * m * sig0 * s + 1j * hb * dtau) * X * X / den
    c1 = 4 * m * sig0 * s * X / den
    c2 = m * (w2 + 2 * sig0 * s) / den
    if not c2.real > 0:
        raise BranchError(f"Re(c2) = {c2.real} <= 0 at t = {t}")
    return SlitState(c0, c1, c2, slit_norm(fr.sigma_t, cfg), fr)


def slit_gaussian(packet: GaussianPacket, sign: int, cfg: SlitConfig, t: float, env: Environment) -> ComplexGaussian:
    """The slit state at ``t`` as a :class:`ComplexGaussian`."""
    c0, c1, c2, norm, fr = slit_parameters(packet, sign, cfg, t, env)
    dtau = tau(t, env) - fr.tau
    spread = 1 + 1j * env.hbar / env.m * (1 / cfg.w ** 2 + 1 / (2 * packet.sigma0 * fr.s_t)) * dtau
    log_amp = math.log(norm) + _log_prefactor(packet.sigma0, fr.s_t) - 0.5 * cmath.log(spread)
    return ComplexGaussian(complex(c2), complex(c1), complex(c0 + log_amp))


def slit_state(packet: GaussianPacket, sign: int, cfg: SlitConfig, x, t: float, env: Environment):
    """Wavefunction behind slit ``sign`` at ``t >= t0``."""
    out = slit_gaussian(packet, sign, cfg, t, env)(x)
    return complex(out) if np.ndim(out) == 0 else out


def slit_overlap(
    packet_a: GaussianPacket,
    packet_b: GaussianPacket,
    cfg: SlitConfig,
    env: Environment,
    sign_a: int = 1,
    sign_b: int = -1,
    t: float | None = None,
) -> complex:
    """``<A|B>`` between slit states; time independent, evaluated at ``t0`` by default."""
    t = cfg.t0 if t is None else t
    ga = slit_gaussian(packet_a, sign_a, cfg, t, env)
    gb = slit_gaussian(packet_b, sign_b, cfg, t, env)
    return (ga.conj() * gb).integral()


class SlitSuperposition:
    """Normalized ``N_psi (psi_B + psi_B')`` behind both slits.

    The slit normalization is checked once by integrating ``|psi_B|**2``
    at ``t0``; a deviation beyond :data:`NORM_TOLERANCE` is corrected
    numerically with a :class:`RuntimeWarning`.
    """

    def __init__(self, packet: GaussianPacket, cfg: SlitConfig, env: Environment):
        _require_source(packet)
        self.packet = packet
        self.cfg = cfg
        self.env = env
        self.ref_time = cfg.t0
        g = slit_gaussian(packet, 1, cfg, cfg.t0, env)
        slit_norm_sq = (g.conj() * g).integral().real
        self.slit_correction = 1.0
        if abs(slit_norm_sq - 1) > NORM_TOLERANCE:
            warnings.warn(
                f"slit state norm {slit_norm_sq:.12g} at t0; renormalizing numerically",
                RuntimeWarning,
                stacklevel=2,
            )
            self.slit_correction = 1 / math.sqrt(slit_norm_sq)
        ov = slit_overlap(packet, packet, cfg, env, 1, -1) * self.slit_correction ** 2
        self.slit_overlap = ov
        self.norm = self.slit_correction / math.sqrt(2 * (1 + ov.real))

    def __eq__(self, other):
        if not isinstance(other, SlitSuperposition):
            return NotImplemented
        return (self.packet, self.cfg, self.env) == (other.packet, other.cfg, other.env)

    def __hash__(self):
        return hash((self.packet, self.cfg, self.env))

    def gaussians(self, t: float) -> list[ComplexGaussian]:
        return [slit_gaussian(self.packet, s, self.cfg, t, self.env).scaled(self.norm) for s in (1, -1)]

    def __call__(self, x, t: float):
        out = sum(g(x) for g in self.gaussians(t))
        return complex(out) if np.ndim(out) == 0 else out

    def derivative(self, x, t: float):
        out = sum(g.derivative(x) for g in self.gaussians(t))
        return complex(out) if np.ndim(out) == 0 else out


def superposed_slit_state(packet: GaussianPacket, cfg: SlitConfig, x, t: float, env: Environment):
    return SlitSuperposition(packet, cfg, env)(x, t)


def slit_kernel(packet_a: GaussianPacket, packet_b: GaussianPacket, cfg: SlitConfig, env: Environment) -> pairs.CKKernel:
    """Pair kernel for two particles that each pass both slits."""
    return pairs.CKKernel(SlitSuperposition(packet_a, cfg, env), SlitSuperposition(packet_b, cfg, env), env)


def joint_fixed_moving(stats, packet_a, packet_b, cfg: SlitConfig, x, t: float, env: Environment, kernel=None):
    """Joint density with one detector fixed at the origin and the other at ``x``."""
    kernel = slit_kernel(packet_a, packet_b, cfg, env) if kernel is None else kernel
    return pairs.joint_density(stats, kernel, 0.0, x, t)
