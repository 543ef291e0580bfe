"""Run configuration and the table engine behind the CLI."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import pairs, slits
from .ck import Environment, GaussianPacket
from .errors import DissipairError

FRAMEWORKS = ("ck", "cl")
OBSERVABLES = ("mss", "detect1", "detect2", "detect-point", "sp-density", "sp-current", "joint-fixed-moving")
STATS = ("mb", "be", "fd")
CK_ONLY = {"detect2", "detect-point", "sp-current", "joint-fixed-moving"}
SPATIAL = {"sp-density", "sp-current", "joint-fixed-moving"}
_PREFIX = {"mss": "mss", "sp-density": "rho", "sp-current": "j", "joint-fixed-moving": "joint"}


class ConfigError(ValueError):
    """Inconsistent or invalid run configuration."""


class RunFailure(Exception):
    """A numerical error, tagged with where it happened."""

    def __init__(self, where: str, cause: DissipairError):
        super().__init__(f"{where}: {type(cause).__name__}: {cause}")
        self.cause = cause


@dataclass(frozen=True)
class RunConfig:
    framework: str = "ck"
    observable: str = "mss"
    stats: tuple = STATS
    hbar: float = 1.0
    m: float = 1.0
    gamma: tuple = (0.0,)
    kbt: tuple = (0.0,)
    x0: float = 0.0
    sigma0: float = 1.0
    sigmabar0: float = 0.9
    p0: float = 3.0
    pbar0: float = 3.0
    d: float = 1.0
    detector_offset: float = 1.0
    slit_x: float | None = None
    slit_width: float = 1.0
    t0: float = 1.0
    t_min: float = 0.0
    t_max: float = 20.0
    t_steps: int = 21
    times: tuple | None = None
    x_min: float = -20.0
    x_max: float = 20.0
    x_steps: int = 401
    normalize: str = "none"

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls().updated(**data)

    def updated(self, **changes) -> "RunConfig":
        clean = {}
        for key, value in changes.items():
            if value is None and key not in ("times", "slit_x"):
                continue
            if key in ("gamma", "kbt", "times", "stats") and value is not None:
                value = tuple(value) if isinstance(value, (list, tuple)) else (value,)
            clean[key] = value
        return replace(self, **clean)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("gamma", "kbt", "times", "stats"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out

    def validate(self) -> "RunConfig":
        if self.framework not in FRAMEWORKS:
            raise ConfigError(f"framework must be one of {FRAMEWORKS}, got {self.framework!r}")
        if self.observable not in OBSERVABLES:
            raise ConfigError(f"observable must be one of {OBSERVABLES}, got {self.observable!r}")
        if not self.stats or any(s not in STATS for s in self.stats):
            raise ConfigError(f"stats must be a non-empty subset of {STATS}, got {self.stats!r}")
        if self.framework == "cl" and self.observable in CK_ONLY:
            raise ConfigError(f"observable {self.observable} needs the ck framework")
        if self.observable == "joint-fixed-moving" and self.slit_x is None:
            raise ConfigError("joint-fixed-moving needs a slit geometry (--slit-x)")
        if self.slit_x is not None:
            if self.framework != "ck":
                raise ConfigError("the two-slit geometry exists only in the ck framework")
            if self.observable not in SPATIAL:
                raise ConfigError("with slits, choose sp-density, sp-current or joint-fixed-moving")
            if self.x0 != 0 or self.p0 != 0 or self.pbar0 != 0:
                raise ConfigError("the slit source needs x0 = p0 = pbar0 = 0")
            if min(self.time_grid()) < self.t0:
                raise ConfigError(f"slit observables need t >= t0 = {self.t0}")
        if self.observable in {"detect1", "detect2"} and not self.d > 0:
            raise ConfigError("detector half-width d must be positive")
        if self.normalize not in ("none", "max"):
            raise ConfigError("normalize must be 'none' or 'max'")
        if self.t_steps < 1 or self.x_steps < 1:
            raise ConfigError("grid step counts must be positive")
        if min(self.time_grid()) < 0:
            raise ConfigError("times must be non-negative")
        try:
            for g in self.gamma:
                for k in self.kbt:
                    Environment(self.hbar, self.m, g, k)
            self.packets()
            if self.slit_x is not None:
                slits.SlitConfig(self.slit_x, self.slit_width, self.t0)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def packets(self) -> tuple[GaussianPacket, GaussianPacket]:
        return (
            GaussianPacket(self.x0, self.p0, self.sigma0),
            GaussianPacket(self.x0, self.pbar0, self.sigmabar0),
        )

    def time_grid(self) -> np.ndarray:
        if self.times is not None:
            return np.asarray(self.times, dtype=float)
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def x_grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.x_steps)

    def columns(self) -> list[str]:
        head = ["panel", "gamma", "kbt", "t"]
        if self.observable in SPATIAL:
            head.append("x")
        if self.observable in _PREFIX:
            return head + [f"{_PREFIX[self.observable]}_{s}" for s in self.stats]
        cols = head + [f"p_{s}" for s in self.stats]
        if "be" in self.stats and "fd" in self.stats:
            cols.append("delta_p")
        return cols

    def kernel(self, gamma: float, kbt: float):
        env = Environment(self.hbar, self.m, gamma, kbt)
        a, b = self.packets()
        if self.slit_x is not None:
            return slits.slit_kernel(a, b, slits.SlitConfig(self.slit_x, self.slit_width, self.t0), env)
        if self.framework == "cl":
            return pairs.cl_kernel(a, b, env)
        return pairs.ck_kernel(a, b, env)


def _evaluate(cfg: RunConfig, kernel, t: float, xs):
    obs = cfg.observable
    out = {}
    for s in cfg.stats:
        if obs == "mss":
            out[s] = pairs.mss(s, kernel, t)
        elif obs == "detect1":
            out[s] = pairs.detection_ratio_single(s, kernel, t, cfg.d)
        elif obs == "detect2":
            out[s] = pairs.detection_ratio_double(s, kernel, t, cfg.detector_offset, cfg.d)
        elif obs == "detect-point":
            out[s] = pairs.detection_ratio_point(s, kernel, t, cfg.detector_offset)
        elif obs == "sp-density":
            out[s] = pairs.sp_density(s, kernel, xs, t)
        elif obs == "sp-current":
            out[s] = pairs.sp_current(s, kernel, xs, t)
        else:
            out[s] = pairs.joint_density(s, kernel, 0.0, xs, t)
    return out


def _block(task):
    label, cfg, gamma, kbt, t = task
    where = f"{cfg.observable} [{label}] at gamma={gamma:g}, kbt={kbt:g}, t={t:g}"
    try:
        kernel = cfg.kernel(gamma, kbt)
        xs = cfg.x_grid() if cfg.observable in SPATIAL else None
        vals = _evaluate(cfg, kernel, float(t), xs)
    except DissipairError as exc:
        raise RunFailure(where, exc) from exc
    rows = []
    if xs is None:
        row = [label, gamma, kbt, float(t)] + [float(vals[s]) for s in cfg.stats]
        if "be" in cfg.stats and "fd" in cfg.stats and cfg.observable not in _PREFIX:
            row.append(float(vals["be"] - vals["fd"]))
        rows.append(row)
        return rows
    if cfg.normalize == "max":
        for s in cfg.stats:
            peak = float(np.max(np.abs(vals[s])))
            if peak > 0:
                vals[s] = vals[s] / peak
    for i, x in enumerate(xs):
        rows.append([label, gamma, kbt, float(t), float(x)] + [float(vals[s][i]) for s in cfg.stats])
    return rows


def run_panels(panels: list[tuple[str, RunConfig]], threads: int = 1) -> tuple[list[str], list[list]]:
    """Evaluate every panel; rows come back in panel, gamma, kBT, time order."""
    if not panels:
        raise ConfigError("nothing to run")
    for _, cfg in panels:
        cfg.validate()
    columns = panels[0][1].columns()
    if any(cfg.columns() != columns for _, cfg in panels):
        raise ConfigError("panels disagree on the output columns")
    tasks = [
        (label, cfg, float(g), float(k), float(t))
        for label, cfg in panels
        for g in cfg.gamma
        for k in cfg.kbt
        for t in cfg.time_grid()
    ]
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(_block, tasks))
    else:
        blocks = [_block(task) for task in tasks]
    return columns, [row for block in blocks for row in block]


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return "%.17g" % v
