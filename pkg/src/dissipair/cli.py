"""Command-line front end.

``dissipair run`` evaluates one observable over a grid of times (and
positions), ``dissipair figure N`` reproduces the dataset of a figure
preset.  Output is CSV preceded by a ``#``-prefixed JSON line holding
the resolved configuration.  Exit codes: 0 success, 2 configuration
error, 3 numerical error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .errors import UnsupportedGeometry
from .presets import preset
from .runconfig import ConfigError, RunConfig, RunFailure, format_value, run_panels

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# flag name -> RunConfig field
_OVERRIDES = {
    "framework": "framework",
    "observable": "observable",
    "stats": "stats",
    "gamma": "gamma",
    "kbt": "kbt",
    "sigma0": "sigma0",
    "sigmabar0": "sigmabar0",
    "p0": "p0",
    "pbar0": "pbar0",
    "x0": "x0",
    "d": "d",
    "detector_offset": "detector_offset",
    "slit_x": "slit_x",
    "slit_width": "slit_width",
    "t0": "t0",
    "t_min": "t_min",
    "t_max": "t_max",
    "t_steps": "t_steps",
    "times": "times",
    "x_min": "x_min",
    "x_max": "x_max",
    "x_steps": "x_steps",
    "normalize": "normalize",
}


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _stats(text: str) -> list[str]:
    return [v.strip().lower() for v in text.split(",") if v.strip()]


def _add_overrides(p: argparse.ArgumentParser):
    g = p.add_argument_group("model")
    g.add_argument("--framework", choices=["ck", "cl"])
    g.add_argument("--observable")
    g.add_argument("--stats", type=_stats, help="comma list of mb,be,fd")
    g.add_argument("--gamma", type=_floats, help="relaxation constant(s), comma list")
    g.add_argument("--kbt", type=_floats, help="temperature energy (CL), comma list")
    g.add_argument("--sigma0", type=float)
    g.add_argument("--sigmabar0", type=float)
    g.add_argument("--p0", type=float)
    g.add_argument("--pbar0", type=float)
    g.add_argument("--x0", type=float)
    d = p.add_argument_group("detectors and slits")
    d.add_argument("--d", type=float, help="detector half-width")
    d.add_argument("--detector-offset", dest="detector_offset", type=float, help="detector position D")
    d.add_argument("--slit-x", dest="slit_x", type=float, help="slit half-separation X")
    d.add_argument("--slit-width", dest="slit_width", type=float)
    d.add_argument("--t0", type=float, help="arrival time at the slits")
    gr = p.add_argument_group("grids")
    gr.add_argument("--t-min", dest="t_min", type=float)
    gr.add_argument("--t-max", dest="t_max", type=float)
    gr.add_argument("--t-steps", dest="t_steps", type=int)
    gr.add_argument("--times", type=_floats, help="explicit times, comma list")
    gr.add_argument("--x-min", dest="x_min", type=float)
    gr.add_argument("--x-max", dest="x_max", type=float)
    gr.add_argument("--x-steps", dest="x_steps", type=int)
    o = p.add_argument_group("output")
    o.add_argument("--normalize", choices=["none", "max"], help="scale spatial columns to unit peak")
    o.add_argument("--out", help="output path (default stdout)")
    o.add_argument("--threads", type=int, help="worker threads (default DISSIPAIR_THREADS or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dissipair", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate one configuration")
    run.add_argument("--config", help="JSON file with RunConfig fields")
    _add_overrides(run)
    fig = sub.add_parser("figure", help="reproduce a figure preset")
    fig.add_argument("number", type=int, choices=range(1, 9), metavar="N")
    _add_overrides(fig)
    return parser


def _overrides(args) -> dict:
    return {field: getattr(args, flag) for flag, field in _OVERRIDES.items() if getattr(args, flag, None) is not None}


def _thread_count(args) -> int:
    if args.threads is not None:
        n = args.threads
    elif os.environ.get("DISSIPAIR_THREADS"):
        try:
            n = int(os.environ["DISSIPAIR_THREADS"])
        except ValueError:
            raise ConfigError("DISSIPAIR_THREADS must be an integer") from None
    else:
        n = os.cpu_count() or 1
    if n < 1:
        raise ConfigError("thread count must be at least 1")
    return n


def _panels(args) -> tuple[list, dict]:
    changes = _overrides(args)
    if args.command == "figure":
        panels = [(label, cfg.updated(**changes)) for label, cfg in preset(args.number)]
        header = {"figure": args.number}
    else:
        base = RunConfig()
        if args.config:
            try:
                with open(args.config) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from None
            if not isinstance(data, dict):
                raise ConfigError("config file must hold a JSON object")
            base = RunConfig.from_mapping(data)
        panels = [("run", base.updated(**changes))]
        header = {"command": "run"}
    header["panels"] = [{"panel": label, **cfg.to_dict()} for label, cfg in panels]
    return panels, header


def render(columns, rows, header) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        panels, header = _panels(args)
        columns, rows = run_panels(panels, threads=_thread_count(args))
    except (ConfigError, UnsupportedGeometry, TypeError) as exc:
        print(f"dissipair: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RunFailure as exc:
        print(f"dissipair: numerical error in {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    text = render(columns, rows, header)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
