"""Independent numerical ground truth for the closed forms.

Nothing in here uses the closed-form propagators or the erf kernel:

* :func:`adaptive_quadrature`: globally adaptive Gauss-Kronrod (7, 15)
  for complex integrands; infinite ends go through a double-exponential
  change of variables first.
* :func:`grid_evolve_ck`: spectral free propagation on a periodic grid.
  Free CK evolution is free Schrodinger evolution in rescaled time, so
  one exact phase multiplication covers any time step.
* :func:`cl_moment_ode`: RK4 on the closed first/second-moment equations
  of the CL generator, with step doubling.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .ck import Environment, GaussianPacket, tau
from .errors import AliasError, NoConvergence

# Gauss-Kronrod 7-15 on [-1, 1]; nodes listed from the edge inwards
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:7:2] = _WG[:-1]
_GAUSS[7] = _WG[-1]
_GAUSS[9:14:2] = _WG[-2::-1]

# half-width of the double-exponential variable
_DE_LIMIT = 4.0


def _gk15(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    vals = np.asarray(f(mid + half * _NODES))
    if not np.all(np.isfinite(vals)):
        raise NoConvergence(f"integrand is not finite on [{lo}, {hi}]")
    k = half * np.dot(_KRONROD, vals)
    g = half * np.dot(_GAUSS, vals)
    return k, abs(k - g)


def _de_transform(f, lo, hi):
    """Map an infinite interval onto ``[-U, U]``, sinh-sinh or exp-sinh.

    Far out on the map the abscissae overflow; the integrand is taken to
    have decayed there and those nodes contribute zero.
    """
    c = 0.5 * math.pi
    if math.isinf(lo) and math.isinf(hi):
        def raw(u):
            inner = c * np.sinh(u)
            return f(np.sinh(inner)) * c * np.cosh(u) * np.cosh(inner)
    elif math.isinf(hi):
        def raw(u):
            e = np.exp(c * np.sinh(u))
            return f(lo + e) * c * np.cosh(u) * e
    else:
        def raw(u):
            e = np.exp(c * np.sinh(u))
            return f(hi - e) * c * np.cosh(u) * e

    def g(u):
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            v = np.asarray(raw(u), dtype=complex)
        return np.where(np.isfinite(v), v, 0.0)

    return g, -_DE_LIMIT, _DE_LIMIT


def adaptive_quadrature(f, lo: float, hi: float, tol: float = 1e-12, rtol: float = 0.0,
                        max_intervals: int = 20000) -> complex:
    """Integral of a vectorized (complex) ``f`` over ``[lo, hi]``.

    Intervals with the largest Gauss-Kronrod error estimate are bisected
    until the summed estimate drops below ``max(tol, rtol * |I|)``.
    """
    if lo == hi:
        return 0j
    if lo > hi:
        return -adaptive_quadrature(f, hi, lo, tol, rtol, max_intervals)
    if tol < 1e-15 and rtol <= 0:
        raise ValueError("tol below the rounding floor")
    if math.isinf(lo) or math.isinf(hi):
        f, lo, hi = _de_transform(f, lo, hi)
    val, err = _gk15(f, lo, hi)
    heap = [(-err, lo, hi, val)]
    total, total_err = val, err
    while total_err > max(tol, rtol * abs(total)):
        if len(heap) >= max_intervals:
            raise NoConvergence(
                f"adaptive_quadrature: error estimate {total_err:.3e} after {len(heap)} intervals"
            )
        neg_err, a, b, v = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not a < m < b:
            raise NoConvergence("adaptive_quadrature: interval collapsed below rounding")
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        heapq.heappush(heap, (-e1, a, m, v1))
        heapq.heappush(heap, (-e2, m, b, v2))
    # re-sum to shed drift from the running updates
    return complex(sum(item[3] for item in heap))


def quad2d(f, x_range, y_range, tol: float = 1e-12, rtol: float = 0.0) -> complex:
    """Nested quadrature of ``f(x, y)``; ``f`` is vectorized in ``y``."""
    def outer(xs):
        return np.array([
            adaptive_quadrature(lambda y, x=x: f(x, y), *y_range, tol=tol, rtol=rtol) for x in xs
        ])
    return adaptive_quadrature(outer, *x_range, tol=tol, rtol=rtol)


@dataclass(frozen=True)
class Grid1D:
    """Samples on the periodic grid ``x_min + k dx``, ``k = 0 .. n-1``."""

    x_min: float
    x_max: float
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 256 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 256, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("empty grid")
        if len(self.values) != self.n:
            raise ValueError("values do not match the grid size")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @classmethod
    def sample(cls, fn, x_min: float = -40.0, x_max: float = 40.0, n: int = 4096) -> "Grid1D":
        x = x_min + (x_max - x_min) / n * np.arange(n)
        return cls(x_min, x_max, n, np.asarray(fn(x), dtype=complex))

    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.dx)

    def inner(self, other: "Grid1D") -> complex:
        """``<self|other>`` on a shared grid."""
        return complex(np.sum(np.conj(self.values) * other.values) * self.dx)

    def boundary_magnitude(self, width: int = 8) -> float:
        v = np.abs(self.values)
        return float(max(v[:width].max(), v[-width:].max()))


def _check_boundary(grid: Grid1D, guard: float, when: str):
    edge = grid.boundary_magnitude()
    if edge > guard:
        raise AliasError(f"|psi| = {edge:.3e} at the grid boundary {when} (guard {guard:.0e})")


def grid_evolve_ck(initial: Grid1D, t_from: float, t_to: float, env: Environment,
                   guard: float = 1e-12) -> Grid1D:
    """Free CK evolution from ``t_from`` to ``t_to`` by one exact spectral step."""
    _check_boundary(initial, guard, "before evolution")
    dtau = tau(t_to, env) - tau(t_from, env)
    if dtau == 0:
        return initial
    k = 2 * math.pi * np.fft.fftfreq(initial.n, d=initial.dx)
    phase = np.exp(-1j * env.hbar * k * k * dtau / (2 * env.m))
    out = replace(initial, values=np.fft.ifft(phase * np.fft.fft(initial.values)))
    _check_boundary(out, guard, "after evolution")
    return out


def _widened(x_min, x_max, n):
    half = x_max - x_min
    return x_min - half / 2, x_max + half / 2, 2 * n


def evolve_on_grid(initial_fn, t: float, env: Environment, x_min: float = -40.0, x_max: float = 40.0,
                   n: int = 4096, guard: float = 1e-12, max_points: int = 1 << 22) -> Grid1D:
    """Sample ``initial_fn`` at time 0 and evolve to ``t``, widening the box on aliasing."""
    while True:
        try:
            return grid_evolve_ck(Grid1D.sample(initial_fn, x_min, x_max, n), 0.0, t, env, guard)
        except AliasError:
            if 2 * n > max_points:
                raise
            x_min, x_max, n = _widened(x_min, x_max, n)


def gaussian_initial(packet: GaussianPacket, hbar: float = 1.0):
    """The t = 0 Gaussian as a plain function, written out independently."""
    def fn(x):
        dx = x - packet.x0
        return (2 * math.pi * packet.sigma0 ** 2) ** -0.25 * np.exp(
            -dx * dx / (4 * packet.sigma0 ** 2) + 1j * packet.p0 * dx / hbar
        )
    return fn


def evolve_packet_on_grid(packet: GaussianPacket, t: float, env: Environment, **kw) -> Grid1D:
    return evolve_on_grid(gaussian_initial(packet, env.hbar), t, env, **kw)


def evolve_slit_on_grid(packet: GaussianPacket, sign: int, X: float, w: float, t0: float, t: float,
                        env: Environment, x_min: float = -40.0, x_max: float = 40.0, n: int = 4096,
                        guard: float = 1e-12) -> Grid1D:
    """Evolve to ``t0``, apply the Gaussian aperture of one slit, renormalize, evolve to ``t``."""
    while True:
        try:
            g0 = evolve_on_grid(gaussian_initial(packet, env.hbar), t0, env, x_min, x_max, n, guard)
            aperture = np.exp(-((g0.x - sign * X) ** 2) / (2 * w * w))
            cut = replace(g0, values=g0.values * aperture)
            cut = replace(cut, values=cut.values / math.sqrt(cut.norm()))
            return grid_evolve_ck(cut, t0, t, env, guard)
        except AliasError:
            if 2 * n > 1 << 22:
                raise
            x_min, x_max, n = _widened(x_min, x_max, n)


class MomentState(NamedTuple):
    mean_x: float
    mean_p: float
    var_xx: float
    cov_xp: float
    var_pp: float


def _moment_rhs(y, g, inv_m, D):
    x, p, sxx, sxp, spp = y
    return (
        p * inv_m,
        -2 * g * p,
        2 * sxp * inv_m,
        spp * inv_m - 2 * g * sxp,
        -4 * g * spp + 2 * D,
    )


def _rk4(y, t_span, steps, g, inv_m, D):
    h = t_span / steps
    for _ in range(steps):
        k1 = _moment_rhs(y, g, inv_m, D)
        k2 = _moment_rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k1)), g, inv_m, D)
        k3 = _moment_rhs(tuple(a + 0.5 * h * b for a, b in zip(y, k2)), g, inv_m, D)
        k4 = _moment_rhs(tuple(a + h * b for a, b in zip(y, k3)), g, inv_m, D)
        y = tuple(a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))
    return y


def cl_moment_ode(packet: GaussianPacket, t, env: Environment, rtol: float = 1e-12,
                  max_steps: int = 1 << 20):
    """Moments of the CL-evolved packet at ``t`` (a time or an increasing sequence).

    Each leg between output times is integrated with ``n`` and ``2n`` RK4
    steps, doubling ``n`` until they agree to ``rtol``.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and increasing")
    g, inv_m, D = env.gamma, 1 / env.m, env.diffusion
    y = (packet.x0, packet.p0, packet.sigma0 ** 2, 0.0, env.hbar ** 2 / (4 * packet.sigma0 ** 2))
    out = []
    t_prev = 0.0
    for t_next in times:
        span = t_next - t_prev
        if span > 0:
            steps = max(16, int(math.ceil(span / 0.05)))
            coarse = _rk4(y, span, steps, g, inv_m, D)
            while True:
                fine = _rk4(y, span, 2 * steps, g, inv_m, D)
                scale = [max(abs(v), 1e-300) for v in fine]
                if all(abs(a - b) <= rtol * s for a, b, s in zip(coarse, fine, scale)):
                    break
                steps *= 2
                if steps > max_steps:
                    raise NoConvergence("cl_moment_ode: step doubling did not settle")
                coarse = fine
            y = fine
        state = MomentState(*y)
        if state.var_xx * state.var_pp - state.cov_xp ** 2 < -1e-9 * state.var_xx * state.var_pp:
            raise NoConvergence("cl_moment_ode: covariance lost positivity")
        out.append(state)
        t_prev = t_next
    return out[0] if np.ndim(t) == 0 else out
