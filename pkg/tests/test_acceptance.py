"""Acceptance criteria 1-13.

Each criterion is a function returning ``(passed, detail)``.  The pytest
wrappers assert on it, and the verdicts are printed one line per
criterion in the terminal summary (see ``conftest.py``).  Running this
file directly prints the same lines without pytest.
"""
import math
import time

import numpy as np
import pytest

from dissipair import cl, oracle, pairs, slits
from dissipair.ck import Environment, GaussianPacket, initial_overlap, packet_frame, wavefunction_at
from dissipair.pairs import BE, FD, MB

PSI = GaussianPacket(0.0, 3.0, 1.0)
PHI = GaussianPacket(0.0, 3.0, 0.9)
FIG1_GAMMAS = (0.0, 0.1, 0.15, 0.2)
CL_GRID = [(g, k) for g in (0.1, 0.2) for k in (5.0, 10.0)]
CL_TIMES = np.linspace(0.0, 10.0, 41)
SLIT_CFG = slits.SlitConfig(X=4.0, w=1.0, t0=1.0)
SLIT_SOURCE = GaussianPacket(0.0, 0.0, 0.9)

RESULTS = {}


def overlap_invariance():
    start = time.perf_counter()
    reference = initial_overlap(PSI, PHI)
    times = np.linspace(0.0, 50.0, 100)
    closed_gap = grid_gap = 0.0
    for gamma in FIG1_GAMMAS:
        env = Environment(gamma=gamma)
        k = pairs.ck_kernel(PSI, PHI, env)
        for t in times:
            closed_gap = max(closed_gap, abs(k.interval("ab", -math.inf, math.inf, t) - reference))
            psi = oracle.evolve_packet_on_grid(PSI, t, env)
            phi = oracle.evolve_on_grid(oracle.gaussian_initial(PHI), t, env, psi.x_min, psi.x_max, psi.n)
            if phi.n != psi.n:
                psi = oracle.evolve_on_grid(oracle.gaussian_initial(PSI), t, env, phi.x_min, phi.x_max, phi.n)
            grid_gap = max(grid_gap, abs(phi.inner(psi) - reference))
    elapsed = time.perf_counter() - start
    ok = closed_gap < 1e-10 and grid_gap < 1e-6 and elapsed < 5
    return ok, f"closed {closed_gap:.2e} < 1e-10, grid {grid_gap:.2e} < 1e-6, {elapsed:.2f} s < 5 s"


def ck_vs_grid():
    start = time.perf_counter()
    worst = 0.0
    for gamma in (0.0, 0.1, 0.2):
        env = Environment(gamma=gamma)
        for packet in (PSI, PHI):
            for t in np.linspace(0.0, 10.0, 21):
                grid = oracle.evolve_packet_on_grid(packet, t, env)
                inside = np.abs(grid.x) <= 20
                closed = wavefunction_at(packet, grid.x[inside], t, env)
                worst = max(worst, float(np.max(np.abs(grid.values[inside] - closed))))
    elapsed = time.perf_counter() - start
    return worst <= 1e-6 and elapsed < 30, f"max error {worst:.2e} <= 1e-6, {elapsed:.2f} s < 30 s"


def fig1_structure():
    k0 = pairs.ck_kernel(PSI, PHI, Environment())
    times = np.linspace(0.0, 20.0, 201)
    curves = {s: np.array([pairs.mss(s, k0, t) for t in times]) for s in (MB, BE, FD)}
    increasing = all(np.all(np.diff(c) > 0) for c in curves.values())
    ordered = bool(np.all(curves[FD] > curves[MB]) and np.all(curves[MB] >= curves[BE]))
    k2 = pairs.ck_kernel(PSI, PHI, Environment(gamma=0.2))
    drift = max(abs(pairs.mss(s, k2, 50.0) - pairs.mss(s, k2, 40.0)) for s in (MB, BE, FD))
    ok = increasing and ordered and drift < 1e-3
    return ok, f"increasing {increasing}, FD > MB >= BE {ordered}, plateau drift {drift:.2e} < 1e-3"


def delta_p(gamma, t=50.0, d=1.0):
    k = pairs.ck_kernel(PSI, PHI, Environment(gamma=gamma))
    return pairs.detection_ratio_single(BE, k, t, d) - pairs.detection_ratio_single(FD, k, t, d)


def critical_friction():
    lo, hi = 0.70, 0.85
    f_lo, f_hi = delta_p(lo), delta_p(hi)
    if f_lo * f_hi >= 0:
        return False, f"no sign change: dp(0.70) = {f_lo:.3e}, dp(0.85) = {f_hi:.3e}"
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        f_mid = delta_p(mid)
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    root = 0.5 * (lo + hi)
    return abs(root - 0.78) <= 0.05, f"gamma_c = {root:.4f}, expected 0.78 +- 0.05"


def monotonic_regime():
    gammas = np.linspace(0.01, 0.22, 22)[1:-1]
    plus, minus = [], []
    for g in gammas:
        k = pairs.ck_kernel(PSI, PHI, Environment(gamma=g))
        plus.append(pairs.detection_ratio_single(BE, k, 50.0, 1.0))
        minus.append(pairs.detection_ratio_single(FD, k, 50.0, 1.0))
    dec = bool(np.all(np.diff(plus) < 0))
    inc = bool(np.all(np.diff(minus) > 0))
    return dec and inc, f"p+ decreasing {dec}, p- increasing {inc} on {len(gammas)} points"


def fermion_coincidence():
    worst = 0.0
    count = 0
    for sigma_a, sigma_b in ((0.9, 0.7), (0.9, 0.1), (0.9, 0.8), (0.5, 1.3)):
        for cfg in (SLIT_CFG, slits.SlitConfig(X=2.0, w=0.5, t0=0.5)):
            for gamma in (0.0, 0.1, 0.2):
                env = Environment(gamma=gamma)
                a, b = GaussianPacket(0.0, 0.0, sigma_a), GaussianPacket(0.0, 0.0, sigma_b)
                k = slits.slit_kernel(a, b, cfg, env)
                for t in (cfg.t0, 2.0, 5.0, 10.0):
                    worst = max(worst, float(pairs.joint_density(FD, k, 0.0, 0.0, t)))
                    count += 1
    return worst < 1e-20, f"max |Psi_-(0,0,t)|^2 = {worst:.1e} over {count} configurations"


def cl_width():
    start = time.perf_counter()
    worst = 0.0
    for gamma, kbt in CL_GRID:
        env = Environment(gamma=gamma, kBT=kbt)
        for packet in (PSI, PHI):
            states = oracle.cl_moment_ode(packet, CL_TIMES, env)
            for t, state in zip(CL_TIMES, states):
                worst = max(worst, abs(cl.width_sq(packet, t, env) - state.var_xx) / state.var_xx)
    elapsed = time.perf_counter() - start
    return worst <= 1e-8 and elapsed < 5, f"max rel error {worst:.2e} <= 1e-8, {elapsed:.2f} s < 5 s"


def cl_trace():
    reference = initial_overlap(PSI, PHI)
    worst = 0.0
    for gamma, kbt in CL_GRID:
        env = Environment(gamma=gamma, kBT=kbt)
        for t in CL_TIMES[::4]:
            trace = oracle.adaptive_quadrature(
                lambda x: cl.rho_ab_diag(PSI, PHI, x, t, env), -math.inf, math.inf, tol=1e-12
            )
            worst = max(worst, abs(trace - reference))
    return worst < 1e-8, f"max trace gap {worst:.2e} < 1e-8"


def continuity():
    rng = np.random.default_rng(20240607)
    h = 1e-4
    worst = 0.0
    kernels = [
        slits.slit_kernel(SLIT_SOURCE, GaussianPacket(0.0, 0.0, sb), SLIT_CFG, Environment(gamma=g))
        for sb in (0.1, 0.8)
        for g in (0.0, 0.1, 0.2)
    ]
    for _ in range(100):
        x = rng.uniform(-20, 20)
        t = rng.uniform(1.5, 10.0)
        k = kernels[rng.integers(len(kernels))]
        for s in (MB, BE, FD):
            dt_rho = (pairs.sp_density(s, k, x, t + h) - pairs.sp_density(s, k, x, t - h)) / (2 * h)
            dx_j = (pairs.sp_current(s, k, x + h, t) - pairs.sp_current(s, k, x - h, t)) / (2 * h)
            worst = max(worst, abs(float(dt_rho + dx_j)))
    return worst < 1e-5, f"max residual {worst:.2e} < 1e-5 at 100 points x 3 statistics"


def detector_consistency():
    exact = point = 0.0
    for gamma in (0.0, 0.02, 0.05, 0.1):
        k = pairs.ck_kernel(PSI, PHI, Environment(gamma=gamma))
        for t in (0.5, 2.5, 10.0, 50.0):
            for s in (BE, FD):
                for d in (0.3, 1.0, 3.0):
                    exact = max(exact, abs(pairs.detection_ratio_double(s, k, t, 0.0, d)
                                           - pairs.detection_ratio_single(s, k, t, d)))
                point = max(point, abs(pairs.detection_ratio_double(s, k, t, 1.0, 1e-3)
                                       - pairs.detection_ratio_point(s, k, t, 1.0)))
    ok = exact <= 1e-14 and point <= 1e-4
    return ok, f"double(D=0) vs single {exact:.1e} <= 1e-14, point vs d=1e-3 {point:.1e} <= 1e-4"


def whole_line():
    worst = 0.0
    for framework in ("ck", "cl"):
        for gamma in (0.0, 0.1, 0.2):
            env = Environment(gamma=gamma, kBT=5.0 if framework == "cl" else 0.0)
            k = pairs.ck_kernel(PSI, PHI, env) if framework == "ck" else pairs.cl_kernel(PSI, PHI, env)
            for t in (0.0, 2.5, 10.0, 50.0):
                if framework == "ck":
                    width = max(packet_frame(p, t, env).sigma_t for p in (PSI, PHI))
                else:
                    width = max(math.sqrt(cl.width_sq(p, t, env)) for p in (PSI, PHI))
                for s in (BE, FD):
                    worst = max(worst, abs(pairs.detection_ratio_single(s, k, t, 50 * width) - 1))
    return worst < 1e-10, f"max |p - 1| = {worst:.1e} < 1e-10"


def l1_distances(sigmabar, gamma):
    k = slits.slit_kernel(SLIT_SOURCE, GaussianPacket(0.0, 0.0, sigmabar), SLIT_CFG, Environment(gamma=gamma))
    x = np.linspace(-20, 20, 801)
    dx = x[1] - x[0]
    rho = {s: pairs.sp_density(s, k, x, 5 * SLIT_CFG.t0) for s in (MB, BE, FD)}

    def dist(p, q):
        return float(np.sum(np.abs(rho[p] - rho[q])) * dx)

    return {"fd-mb": dist(FD, MB), "be-mb": dist(BE, MB), "fd-be": dist(FD, BE)}


def statistics_separation():
    high = l1_distances(0.8, 0.0)
    separated = high["fd-mb"] > high["be-mb"]
    spread = [max(l1_distances(0.1, g).values()) for g in (0.0, 0.1, 0.2)]
    shrinking = spread[0] > spread[1] > spread[2]
    detail = (f"sigmabar0=0.8: L1(FD,MB) {high['fd-mb']:.4f} > L1(BE,MB) {high['be-mb']:.4f}; "
              f"sigmabar0=0.1 max L1 {spread[0]:.4f} > {spread[1]:.4f} > {spread[2]:.4f}")
    return separated and shrinking, detail


def quadrature_equivalence():
    cases = [
        ("ck", Environment(gamma=0.0), 2.5, 1.0),
        ("ck", Environment(gamma=0.1), 2.5, 1.0),
        ("ck", Environment(gamma=0.05), 10.0, 2.0),
        ("cl", Environment(gamma=0.1, kBT=5.0), 3.0, 1.0),
        ("cl", Environment(gamma=0.2, kBT=10.0), 1.5, 1.0),
        ("cl", Environment(gamma=0.1, kBT=15.0), 5.0, 2.0),
    ]
    worst = 0.0
    for framework, env, t, d in cases:
        k = pairs.ck_kernel(PSI, PHI, env) if framework == "ck" else pairs.cl_kernel(PSI, PHI, env)

        def integral(s):
            return oracle.quad2d(lambda x1, x2: pairs.joint_density(s, k, x1, x2, t), (-d, d), (-d, d),
                                 tol=1e-14, rtol=1e-12).real

        mb = integral(MB)
        for s in (BE, FD):
            worst = max(worst, abs(integral(s) / mb - pairs.detection_ratio_single(s, k, t, d)))
    return worst < 1e-8, f"max |closed - 2D quadrature| {worst:.1e} < 1e-8 at 3 points per framework"


CRITERIA = {
    1: ("overlap invariance", overlap_invariance),
    2: ("CK closed form vs grid oracle", ck_vs_grid),
    3: ("MSS structure", fig1_structure),
    4: ("critical friction", critical_friction),
    5: ("monotonic regime", monotonic_regime),
    6: ("fermion coincidence", fermion_coincidence),
    7: ("CL width vs moment ODE", cl_width),
    8: ("CL trace preservation", cl_trace),
    9: ("continuity equation", continuity),
    10: ("detector consistency", detector_consistency),
    11: ("whole-line limit", whole_line),
    12: ("statistics separation", statistics_separation),
    13: ("2D quadrature equivalence", quadrature_equivalence),
}


def evaluate(number):
    name, check = CRITERIA[number]
    try:
        ok, detail = check()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}"
    RESULTS[number] = line
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    ok, line = evaluate(number)
    print(line)
    assert ok, line


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(evaluate(n)[1])
