"""Parameter sets behind figures 1-8.

Each preset is a list of ``(panel, RunConfig)``; every panel shares the
observable and statistics so the rows stack into one table.
"""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .runconfig import RunConfig

_PAIR = dict(sigma0=1.0, sigmabar0=0.9, p0=3.0, pbar0=3.0, x0=0.0)
_SLITS = dict(sigma0=0.9, p0=0.0, pbar0=0.0, x0=0.0, slit_x=4.0, slit_width=1.0, t0=1.0)


def _fmt(v) -> str:
    return f"{v:g}"


def _gamma_panels(base: RunConfig, gammas) -> list[tuple[str, RunConfig]]:
    return [(f"gamma={_fmt(g)}", replace(base, gamma=(g,))) for g in gammas]


def figure1() -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="ck", observable="mss", t_max=50.0, t_steps=251, **_PAIR)
    return _gamma_panels(base, (0.0, 0.1, 0.15, 0.2))


def _detection_ck(observable: str) -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="ck", observable=observable, stats=("be", "fd"), d=1.0,
                     detector_offset=1.0, t_max=50.0, t_steps=251, **_PAIR)
    panels = _gamma_panels(base, (0.0, 0.02, 0.05, 0.1))
    sweep = tuple(float(g) for g in np.round(np.linspace(0.0, 1.0, 101), 10))
    for t in (2.5, 50.0):
        panels.append((f"sweep,t={_fmt(t)}", replace(base, gamma=sweep, times=(t,))))
    return panels


def figure2() -> list[tuple[str, RunConfig]]:
    return _detection_ck("detect1")


def figure3() -> list[tuple[str, RunConfig]]:
    return _detection_ck("detect-point")


def figure4() -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="cl", observable="mss", t_max=10.0, t_steps=101, **_PAIR)
    panels = [
        (f"gamma={_fmt(g)},kbt={_fmt(k)}", replace(base, gamma=(g,), kbt=(k,)))
        for k in (5.0, 10.0)
        for g in (0.1, 0.2)
    ]
    panels += [(f"mb,gamma={_fmt(g)},kbt=8", replace(base, gamma=(g,), kbt=(8.0,))) for g in (0.1, 0.2)]
    return panels


def figure5() -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="cl", observable="detect1", stats=("be", "fd"), d=1.0,
                     t_max=10.0, t_steps=101, **_PAIR)
    return [
        (f"gamma={_fmt(g)},kbt={_fmt(k)}", replace(base, gamma=(g,), kbt=(k,)))
        for g in (0.1, 0.2)
        for k in (5.0, 7.0, 10.0, 15.0)
    ]


def figure6() -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="cl", observable="detect1", stats=("be", "fd"), d=1.0,
                     times=(1.5, 5.0), **_PAIR)
    gammas = tuple(float(g) for g in np.round(np.linspace(0.01, 1.0, 100), 10))
    kbts = tuple(float(k) for k in np.round(np.linspace(0.0, 20.0, 101), 10))
    return [
        ("vs-gamma,kbt=3", replace(base, gamma=gammas, kbt=(3.0,))),
        ("vs-kbt,gamma=0.1", replace(base, gamma=(0.1,), kbt=kbts)),
    ]


def figure7() -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="ck", observable="sp-density", times=(5.0,),
                     x_min=-20.0, x_max=20.0, x_steps=801, **_SLITS)
    return [
        (f"sigmabar0={_fmt(sb)},gamma={_fmt(g)}", replace(base, sigmabar0=sb, gamma=(g,)))
        for sb in (0.1, 0.8)
        for g in (0.0, 0.1, 0.2)
    ]


def figure8() -> list[tuple[str, RunConfig]]:
    base = RunConfig(framework="ck", observable="joint-fixed-moving", times=(2.0, 5.0, 10.0),
                     x_min=-20.0, x_max=20.0, x_steps=801, sigmabar0=0.7, **_SLITS)
    return _gamma_panels(base, (0.0, 0.1, 0.2))


FIGURES = {
    1: figure1,
    2: figure2,
    3: figure3,
    4: figure4,
    5: figure5,
    6: figure6,
    7: figure7,
    8: figure8,
}


def preset(number: int) -> list[tuple[str, RunConfig]]:
    if number not in FIGURES:
        raise KeyError(f"no preset for figure {number}; choose from 1-8")
    return FIGURES[number]()
