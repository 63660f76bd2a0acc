"""Command-line front end.

Subcommands::

    abwire params    print beta, gamma, epsilon and the coupling
    abwire channels  absorbed interval and the orders of nearby channels
    abwire smatrix   S_m and phase shifts for a range of channels
    abwire scan      angular scan written as a comma separated table
    abwire figure    the two small-angle scans of figure a or b

Every option can also come from ``--config FILE``.  The file holds
``key = value`` lines, or it is a table written by ``scan``, whose header
carries the full configuration.  Flags given on the command line win.

Exit codes: 0 success, 2 configuration error, 3 computation error,
4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from . import __version__
from .amplitude import ACCELERATIONS, SumSpec
from .errors import AbwireError, DomainError
from .params import (
    ChannelKind,
    FiniteAbsorbing,
    PhysicalInputs,
    Reflecting,
    ScatterParams,
    ThinAbsorbing,
    channel_bounds,
    derive_params,
    order_nu,
)
from .smatrix import s_matrix
from .xsection import ROW_FIELDS, angular_scan

EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_IO = 4

WIRES = ("thin-absorbing", "finite-absorbing", "reflecting")

# option name -> (type, default); these are the keys of config files and headers
OPTIONS = {
    "beta": (float, None),
    "gamma": (float, None),
    "coupling-mode": (str, "exact"),
    "gamma-tilde": (float, None),
    "alpha": (float, None),
    "B": (float, None),
    "M0": (float, None),
    "kappa": (float, None),
    "rho0": (float, None),
    "E-field": (float, None),
    "wire": (str, "thin-absorbing"),
    "a": (float, None),
    "p": (float, 1.0),
    "phi-min": (float, 0.01),
    "phi-max": (float, math.pi),
    "n-points": (int, 100),
    "grid": (str, "linear"),
    "tol": (float, 1e-8),
    "accel": (str, "plana"),
    "m-cap": (int, 10 ** 7),
    "m-min": (int, None),
    "m-max": (int, None),
}
# options that change no number in the output
RUN_ONLY = ("output", "plot", "workers", "which", "output-dir")


class ConfigError(Exception):
    pass


def _dest(name: str) -> str:
    return name.replace("-", "_")


def _normalize_key(key: str) -> str:
    key = key.strip().lstrip("-")
    for name in list(OPTIONS) + list(RUN_ONLY):
        if key in (name, _dest(name)):
            return name
    if key == "E_field_at_surface":
        return "E-field"
    raise ConfigError(f"unknown configuration key {key!r}")


def parse_header(line: str) -> dict:
    """Key/value pairs from the metadata comment of a table header."""
    if "#" not in line:
        raise ConfigError("table header carries no metadata comment")
    out = {}
    for token in line.split("#", 1)[1].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise ConfigError(f"malformed metadata token {token!r}")
        if key in ("abwire", "mode"):
            continue
        out[_normalize_key(key)] = value
    return out


def read_config(path: str) -> dict:
    """Read ``key = value`` lines, or the header of a table written by ``scan``."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if lines and lines[0].startswith(ROW_FIELDS[0] + ","):
        return parse_header(lines[0])
    out = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{n}: expected key = value")
        out[_normalize_key(key)] = value.strip()
    return out


def _convert(name: str, value):
    kind = OPTIONS[name][0]
    if value is None or value == "None":
        return None
    try:
        return kind(value)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {value!r}") from None


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, the config file and explicit flags (in that order)."""
    cfg = {name: default for name, (_, default) in OPTIONS.items()}
    if getattr(args, "config", None):
        try:
            from_file = read_config(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        for key, value in from_file.items():
            if key in OPTIONS:
                cfg[key] = _convert(key, value)
    for name in OPTIONS:
        value = getattr(args, _dest(name), None)
        if value is not None:
            cfg[name] = value
    return cfg


def build_params(cfg: dict) -> tuple[ScatterParams, Optional[PhysicalInputs]]:
    physical = [cfg[k] for k in ("alpha", "B", "M0")]
    if any(v is not None for v in physical):
        if any(v is None for v in physical):
            raise ConfigError("physical input mode needs alpha, B and M0")
        if cfg["beta"] is not None or cfg["gamma"] is not None:
            raise ConfigError("give either beta/gamma or physical inputs, not both")
        phys = PhysicalInputs(alpha=cfg["alpha"], B=cfg["B"], M0=cfg["M0"], kappa=cfg["kappa"],
                              rho0=cfg["rho0"], E_field_at_surface=cfg["E-field"])
        return derive_params(phys), phys
    if cfg["coupling-mode"] == "decoupled":
        if cfg["beta"] is None or cfg["gamma-tilde"] is None:
            raise ConfigError("decoupled mode needs beta and gamma-tilde")
        return ScatterParams.decoupled(cfg["beta"], cfg["gamma-tilde"]), None
    if cfg["beta"] is None or cfg["gamma"] is None:
        raise ConfigError("give beta and gamma (or alpha, B, M0 and kappa)")
    return ScatterParams(beta=cfg["beta"], gamma=cfg["gamma"],
                         coupling_mode=cfg["coupling-mode"]), None


def build_wire(cfg: dict):
    wire = cfg["wire"]
    if wire not in WIRES:
        raise ConfigError(f"wire must be one of {WIRES}")
    if wire == "thin-absorbing":
        return ThinAbsorbing()
    if cfg["a"] is None:
        raise ConfigError(f"wire {wire} needs the scaled radius a")
    return FiniteAbsorbing(cfg["a"]) if wire == "finite-absorbing" else Reflecting(cfg["a"])


def build_grid(cfg: dict) -> np.ndarray:
    lo, hi, n = cfg["phi-min"], cfg["phi-max"], cfg["n-points"]
    if not 0 < lo < hi <= math.pi:
        raise ConfigError("need 0 < phi-min < phi-max <= pi")
    if n < 2:
        raise ConfigError("n-points must be at least 2")
    if cfg["grid"] == "linear":
        return np.linspace(lo, hi, n)
    if cfg["grid"] == "log":
        return np.geomspace(lo, hi, n)
    raise ConfigError("grid must be linear or log")


def build_spec(cfg: dict) -> SumSpec:
    return SumSpec(tol=cfg["tol"], m_cap=cfg["m-cap"], accel=cfg["accel"])


def header_line(cfg: dict) -> str:
    meta = [f"abwire={__version__}", "mode=scan"]
    for name in OPTIONS:
        value = cfg[name]
        if value is not None and name not in ("m-min", "m-max"):
            meta.append(f"{name}={value!r}" if isinstance(value, float) else f"{name}={value}")
    return ",".join(ROW_FIELDS) + " # " + " ".join(meta)


def format_table(scan, cfg: dict) -> str:
    lines = [header_line(cfg)]
    for row in scan.rows:
        lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"


def print_params(params: ScatterParams, phys: Optional[PhysicalInputs], stream) -> None:
    if phys is not None:
        print(f"beta = {params.beta:.12g}", file=stream)
        print(f"gamma = {params.gamma:.12g}", file=stream)
        print(f"epsilon = {params.epsilon:.12g}", file=stream)
    else:
        print(f"beta = {params.beta:.12g}", file=stream)
        print(f"gamma = {params.gamma:.12g}", file=stream)
    print(f"coupling_mode = {params.coupling_mode}", file=stream)
    print(f"coupling = {params.coupling_sq:.12g}", file=stream)


def cmd_params(cfg, args) -> int:
    params, phys = build_params(cfg)
    print_params(params, phys, sys.stdout)
    return 0


def cmd_channels(cfg, args) -> int:
    params, _ = build_params(cfg)
    wire = build_wire(cfg)
    bounds = channel_bounds(params, wire)
    print(f"m_minus = {bounds.m_minus}")
    print(f"m_plus = {bounds.m_plus}")
    print(f"absorbed_count = {bounds.absorbed_count}")
    lo = cfg["m-min"] if cfg["m-min"] is not None else bounds.lo - 3
    hi = cfg["m-max"] if cfg["m-max"] is not None else bounds.hi + 3
    print("m,nu_sq,kind,absorbed")
    for m in range(lo, hi + 1):
        o = order_nu(m, params)
        print(f"{m},{o.nu_sq:.12g},{o.kind.value},{int(bool(bounds.contains(m)))}")
    return 0


def cmd_smatrix(cfg, args) -> int:
    params, _ = build_params(cfg)
    wire = build_wire(cfg)
    bounds = channel_bounds(params, wire)
    lo = cfg["m-min"] if cfg["m-min"] is not None else bounds.lo - 5
    hi = cfg["m-max"] if cfg["m-max"] is not None else bounds.hi + 5
    print("m,kind,re_s,im_s,abs_s,delta")
    for m in range(lo, hi + 1):
        e = s_matrix(m, params, wire)
        delta = "" if e.delta is None else f"{e.delta:.12g}"
        print(f"{m},{e.channel_kind.value},{e.s.real:.12g},{e.s.imag:.12g},{abs(e.s):.12g},{delta}")
    return 0


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_scan(cfg, args) -> int:
    params, phys = build_params(cfg)
    if phys is not None:
        print_params(params, phys, sys.stderr)
    wire = build_wire(cfg)
    grid = build_grid(cfg)
    spec = build_spec(cfg)
    if args.plot and not args.output:
        raise ConfigError("--plot needs --output")
    scan = angular_scan(params, wire, cfg["p"], grid, spec, workers=args.workers)
    text = format_table(scan, cfg)
    if args.output:
        _write(args.output, text)
        if args.plot:
            base = os.path.splitext(args.output)[0]
            plot_curves([(f"beta={params.beta:g}", scan.grid, scan.column("y"), 1.2)],
                        base + ".svg", title=f"gamma={params.gamma:g}")
    else:
        sys.stdout.write(text)
    return 0


FIGURE_GAMMA = {"a": 5.1, "b": 50.1}
FIGURE_BETAS = (0.0, 0.5)


def local_extrema(y: np.ndarray) -> np.ndarray:
    """Indices of strict interior local maxima and minima of a sampled curve."""
    d = np.diff(y)
    return np.nonzero(d[:-1] * d[1:] < 0)[0] + 1


def threshold_angle(grid: np.ndarray, y_field: np.ndarray, y_free: np.ndarray) -> float:
    """Largest grid angle below which ``y_field > y_free`` holds throughout (0 if never)."""
    bad = np.nonzero(y_field <= y_free)[0]
    if bad.size == 0:
        return float(grid[-1])
    return float(grid[bad[0] - 1]) if bad[0] > 0 else 0.0


def figure_scans(which: str, n_points: int = 600, phi_min: float = 0.01, phi_max: float = 1.5,
                 tol: float = 1e-8, workers: int = 1):
    if which not in FIGURE_GAMMA:
        raise ConfigError("figure must be a or b")
    gamma = FIGURE_GAMMA[which]
    grid = np.linspace(phi_min, phi_max, n_points)
    spec = SumSpec(tol=tol)
    return {beta: angular_scan(ScatterParams(beta, gamma), ThinAbsorbing(), 1.0, grid, spec,
                               workers=workers)
            for beta in FIGURE_BETAS}


def figure_summary(which: str, scans: dict) -> dict:
    free, field = scans[0.0], scans[0.5]
    grid = free.grid
    ext_free = local_extrema(free.column("y"))
    ext_field = local_extrema(field.column("y"))
    return {
        "figure": which,
        "gamma": FIGURE_GAMMA[which],
        "phi_star": threshold_angle(grid, field.column("y"), free.column("y")),
        "grid_spacing": float(grid[1] - grid[0]),
        "extrema_beta0": [float(grid[i]) for i in ext_free],
        "extrema_beta0.5": [float(grid[i]) for i in ext_field],
        "abwire": __version__,
    }


def plot_curves(curves, path: str, title: str = "") -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, x, y, width in curves:
        ax.semilogy(x, y, color="k", lw=width, label=label)
    ax.set_xlabel("phi (rad)")
    ax.set_ylabel("y = 2 pi p |f|^2")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def cmd_figure(cfg, args) -> int:
    outdir = args.output_dir or "."
    os.makedirs(outdir, exist_ok=True)
    scans = figure_scans(args.which, n_points=args.n_points or 600, tol=cfg["tol"],
                         workers=args.workers)
    for beta, scan in scans.items():
        run = dict(cfg, beta=beta, gamma=FIGURE_GAMMA[args.which], p=1.0, wire="thin-absorbing",
                   **{"phi-min": float(scan.grid[0]), "phi-max": float(scan.grid[-1]),
                      "n-points": scan.grid.size, "grid": "linear", "accel": "plana"})
        _write(os.path.join(outdir, f"figure_{args.which}_beta{beta:g}.csv"), format_table(scan, run))
    summary = figure_summary(args.which, scans)
    _write(os.path.join(outdir, f"figure_{args.which}_summary.json"),
           json.dumps(summary, indent=2) + "\n")
    if args.plot:
        curves = [("beta=0", scans[0.0].grid, scans[0.0].column("y"), 0.8),
                  ("beta=1/2", scans[0.5].grid, scans[0.5].column("y"), 2.2)]
        plot_curves(curves, os.path.join(outdir, f"figure_{args.which}.svg"),
                    title=f"gamma={FIGURE_GAMMA[args.which]:g}")
    print(f"phi_star = {summary['phi_star']:.12g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file or a previous scan table")
    for name, (kind, default) in OPTIONS.items():
        kw = {"type": kind, "default": None}
        if name == "wire":
            kw["choices"] = WIRES
        elif name == "coupling-mode":
            kw["choices"] = ("exact", "decoupled")
        elif name == "grid":
            kw["choices"] = ("linear", "log")
        elif name == "accel":
            kw["choices"] = ACCELERATIONS
        common.add_argument(f"--{name}", dest=_dest(name),
                            help=f"default: {default}" if default is not None else None, **kw)
    common.add_argument("--workers", type=int, default=1, help="threads for the angle chunks")

    parser = argparse.ArgumentParser(prog="abwire", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"abwire {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("params", parents=[common], help="print the dimensionless parameters")
    sub.add_parser("channels", parents=[common], help="absorbed channel interval")
    sub.add_parser("smatrix", parents=[common], help="phase functions per channel")
    scan = sub.add_parser("scan", parents=[common], help="angular scan table")
    scan.add_argument("--output", "-o", help="table path (default: stdout)")
    scan.add_argument("--plot", action="store_true", help="write an SVG next to the table")
    fig = sub.add_parser("figure", parents=[common], help="figure a or b scans")
    fig.add_argument("which", choices=("a", "b"))
    fig.add_argument("--output-dir", default=".")
    fig.add_argument("--plot", action="store_true")
    return parser


COMMANDS = {
    "params": cmd_params,
    "channels": cmd_channels,
    "smatrix": cmd_smatrix,
    "scan": cmd_scan,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        if args.mode != "figure":
            build_params(cfg)
        return COMMANDS[args.mode](cfg, args)
    except (ConfigError, DomainError) as exc:
        print(f"abwire: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AbwireError as exc:
        print(f"abwire: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"abwire: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
