"""Command-line surface for the toolkit.

Subcommands: eigen, atlas {beta-star|curve|region|beta-T|speed},
modified-flow, bifurcate, damping.  Results are written as CSV (default)
or JSON with deterministic %.17g formatting, so identical invocations are
byte-identical; --plot additionally writes a minimal SVG next to --out.

Exit codes: 0 success, 2 validation error, 3 solver non-convergence,
4 bracket failure.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, atlas, bifurcation, damping, modified_flow
from .cache import CurveCache
from .errors import BracketFailureError, NoConvergenceError, ValidationError
from .rayleigh_kuo import (
    DEFAULT_EPS_SCHEDULE,
    RayleighKuoSpec,
    lambda_1_singular,
    lambda_n_regular,
    scaled_couette,
)
from .svgplot import table_to_svg
from .tables import CurveTable

_BUILTIN_TOLS = {
    "beta-star": 1e-5,
    "beta-T": 1e-5,
    "speed": 1e-5,
    "region": 1e-4,
    "level-set": 1e-4,
}


@dataclass
class RunConfig:
    resolution: int = 256
    eps_schedule: tuple = DEFAULT_EPS_SCHEDULE
    tolerances: dict = field(default_factory=dict)
    cache_dir: str | None = None
    output_format: str = "csv"
    plot: bool = False
    out: str | None = None
    jobs: int = 1

    def tol(self, name: str) -> float:
        if name in self.tolerances:
            return self.tolerances[name]
        if "default" in self.tolerances:
            return self.tolerances["default"]
        return _BUILTIN_TOLS[name]

    def cache(self):
        return CurveCache(self.cache_dir) if self.cache_dir else None


def _parse_config_file(path: str) -> dict:
    values = {}
    known = {"resolution", "tol", "format", "cache_dir", "plot", "eps_schedule", "jobs", "out"}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        base = key.split(".", 1)[0]
        if base not in known:
            raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = val
    return values


def _config_from(args) -> RunConfig:
    cfg = RunConfig()
    config_path = getattr(args, "config", None)
    raw = _parse_config_file(config_path) if config_path else {}
    if "resolution" in raw:
        cfg.resolution = int(raw["resolution"])
    if "format" in raw:
        cfg.output_format = raw["format"]
    if "cache_dir" in raw:
        cfg.cache_dir = raw["cache_dir"]
    if "plot" in raw:
        cfg.plot = raw["plot"].lower() in ("1", "true", "yes")
    if "jobs" in raw:
        cfg.jobs = int(raw["jobs"])
    if "out" in raw:
        cfg.out = raw["out"]
    if "eps_schedule" in raw:
        cfg.eps_schedule = tuple(float(v) for v in raw["eps_schedule"].split(","))
    for key, val in raw.items():
        if key == "tol":
            cfg.tolerances["default"] = float(val)
        elif key.startswith("tol."):
            cfg.tolerances[key[4:]] = float(val)
    # flags override config (SUPPRESS defaults: attribute absent unless given)
    if getattr(args, "resolution", None) is not None:
        cfg.resolution = args.resolution
    if getattr(args, "format", None) is not None:
        cfg.output_format = args.format
    if getattr(args, "cache_dir", None) is not None:
        cfg.cache_dir = args.cache_dir
    if getattr(args, "plot", False):
        cfg.plot = True
    if getattr(args, "out", None) is not None:
        cfg.out = args.out
    if getattr(args, "jobs", None) is not None:
        cfg.jobs = args.jobs
    if getattr(args, "tol", None) is not None:
        cfg.tolerances["default"] = args.tol
    if cfg.output_format not in ("csv", "json"):
        raise ValidationError(f"unknown output format {cfg.output_format!r}")
    if cfg.resolution < 64:
        raise ValidationError(f"resolution must be >= 64, got {cfg.resolution}")
    for name, value in cfg.tolerances.items():
        if value <= 0:
            raise ValidationError(f"tolerance {name} must be positive, got {value}")
    return cfg


def _emit(table: CurveTable, cfg: RunConfig) -> None:
    text = table.to_csv() if cfg.output_format == "csv" else table.to_json()
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    if cfg.plot:
        if not cfg.out:
            raise ValidationError("--plot requires --out to name the SVG file")
        svg_path = Path(cfg.out).with_suffix(".svg")
        svg_path.write_text(table_to_svg(table), encoding="utf-8", newline="\n")


def _parse_floats(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def cmd_eigen(args, cfg: RunConfig) -> CurveTable:
    beta, c, n = args.beta, args.c, args.n
    table = CurveTable(
        name="eigen",
        columns=["beta", "c", "n", "lambda", "error_estimate", "resolution"],
        metadata={"version": __version__},
    )
    if c in (-1.0, 1.0):
        if n != 1:
            raise ValidationError("endpoint speeds support the principal eigenvalue only (n=1)")
        side = "left" if c == -1.0 else "right"
        pair = lambda_1_singular(beta, side, cfg.eps_schedule, cfg.resolution)
        table.metadata["eps_schedule"] = list(cfg.eps_schedule)
    else:
        spec = RayleighKuoSpec.for_couette(beta, c)
        pair = lambda_n_regular(spec, n, cfg.resolution)
    table.add_row(beta, c, n, pair.value, pair.error_estimate, cfg.resolution)
    return table


def cmd_atlas(args, cfg: RunConfig) -> CurveTable:
    cache = cfg.cache()
    common = dict(resolution=cfg.resolution, eps_schedule=cfg.eps_schedule, cache=cache)
    if args.atlas_cmd == "beta-star":
        tol = cfg.tol("beta-star")
        bstar = atlas.find_beta_star(tol=tol, **common)
        residual, err = atlas.lambda1_wall(bstar, **common)
        table = CurveTable(
            name="atlas-beta-star",
            columns=["beta_star", "lambda_residual", "error_estimate"],
            metadata={"tol": tol, "resolution": cfg.resolution},
        )
        table.add_row(bstar, residual, err)
    elif args.atlas_cmd == "curve":
        lo = args.beta_min
        if lo is None:
            lo = atlas.find_beta_star(tol=cfg.tol("beta-star"), **common)
        betas = np.linspace(lo, args.beta_max, args.steps)
        if cfg.jobs > 1:
            with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(lambda b: atlas.alpha_beta(b, **common), betas))
        else:
            results = [atlas.alpha_beta(b, **common) for b in betas]
        table = CurveTable(
            name="alpha-beta-curve",
            columns=["beta", "alpha_beta", "error_estimate"],
            metadata={"resolution": cfg.resolution, "eps_schedule": list(cfg.eps_schedule)},
        )
        for b, (alpha, err) in zip(betas, results):
            table.add_row(float(b), alpha, max(err, 1e-16))
    elif args.atlas_cmd == "region":
        verdict = atlas.classify(args.alpha, args.beta, tol=cfg.tol("region"), **common)
        if verdict.alpha_beta is not None:
            curve_err = atlas.alpha_beta(args.beta, **common)[1]
        else:
            curve_err = 0.0
        table = CurveTable(
            name="atlas-region",
            columns=["alpha", "beta", "label", "beta_star", "alpha_beta", "tolerance",
                     "error_estimate"],
            metadata={"resolution": cfg.resolution},
        )
        table.add_row(
            args.alpha,
            args.beta,
            verdict.label,
            verdict.beta_star,
            verdict.alpha_beta if verdict.alpha_beta is not None else float("nan"),
            verdict.tolerance,
            curve_err,
        )
    elif args.atlas_cmd == "beta-T":
        tol = cfg.tol("beta-T")
        bt = atlas.beta_T(args.period, tol=tol, **common)
        lam, err = atlas.lambda1_wall(bt, **common)
        table = CurveTable(
            name="atlas-beta-T",
            columns=["period", "beta_T", "lambda_at_beta_T", "target", "error_estimate"],
            metadata={"tol": tol, "resolution": cfg.resolution},
        )
        table.add_row(args.period, bt, lam, -4 * np.pi**2 / args.period**2, err)
    else:  # speed
        tol = cfg.tol("speed")
        c0 = atlas.speed_for_eigenvalue(args.beta, args.lambda0, tol=tol, **common)
        lam, err = atlas.lambda1_regular(args.beta, c0, resolution=cfg.resolution, cache=cache)
        table = CurveTable(
            name="atlas-speed",
            columns=["beta", "lambda0", "c0", "lambda_at_c0", "error_estimate"],
            metadata={"tol": tol, "resolution": cfg.resolution},
        )
        table.add_row(args.beta, args.lambda0, c0, lam, err)
    if cache is not None:
        print(f"cache: {cache.hits} hits, {cache.misses} misses", file=sys.stderr)
    return table


def cmd_modified_flow(args, cfg: RunConfig) -> CurveTable:
    b0 = modified_flow.b0()
    if args.emit == "profile":
        params = modified_flow.ModifiedFlowParams(args.beta, args.gamma, args.a)
        prof = modified_flow.profile(params)
        ys = np.linspace(-1.0, 1.0, args.samples)
        # analytic evaluations; the error budget is the cutoff-table
        # interpolation bound
        eval_err = 1e-11
        table = CurveTable(
            name="modified-flow-profile",
            columns=["y", "u", "du", "d2u", "error_estimate"],
            metadata={"beta": args.beta, "gamma": args.gamma, "a": args.a},
        )
        for y in ys:
            table.add_row(
                float(y), float(prof.u(y)), float(prof.du(y)), float(prof.d2u(y)), eval_err
            )
        return table
    if args.emit == "sweep":
        if not args.gamma_sweep:
            raise ValidationError("--emit sweep requires --gamma-sweep g1,g2,...")
        gammas = _parse_floats(args.gamma_sweep)
        bound = 3.0 + 1.5 * b0 * args.a
        table = CurveTable(
            name="modified-flow-gamma-sweep",
            columns=["gamma", "lambda_1", "error_estimate", "asymptote_bound"],
            metadata={"beta": args.beta, "a": args.a, "b0": b0},
        )
        for g in gammas:
            params = modified_flow.ModifiedFlowParams(args.beta, g, args.a)
            pair = modified_flow.lambda_n_modified(params, 1)
            table.add_row(g, pair.value, pair.error_estimate, bound)
        return table
    params = modified_flow.ModifiedFlowParams(args.beta, args.gamma, args.a)
    table = CurveTable(
        name="modified-flow-eigenvalues",
        columns=["n", "lambda_n", "error_estimate"],
        metadata={
            "beta": args.beta,
            "gamma": args.gamma,
            "a": args.a,
            "b0": b0,
            "asymptote_bound": 3.0 + 1.5 * b0 * args.a,
        },
    )
    for n in range(1, args.n_max + 1):
        pair = modified_flow.lambda_n_modified(params, n)
        table.add_row(n, pair.value, pair.error_estimate)
    return table


def cmd_bifurcate(args, cfg: RunConfig) -> CurveTable:
    kappas = _parse_floats(args.kappas)
    resolution = cfg.resolution
    if args.base == "modified":
        params = modified_flow.ModifiedFlowParams(args.beta, args.gamma, args.a)
        prof = modified_flow.profile(params)
        c = 0.0
        resolution = max(resolution, modified_flow.suggested_resolution(args.gamma))
    else:
        prof = scaled_couette(args.scale)
        if args.c is None:
            raise ValidationError("--base scaled-couette requires --c (the wave speed)")
        c = args.c
    rows = []
    control_rows = []
    floors = []
    alpha0 = lambda1 = None
    phi_fake = None
    for kappa in kappas:
        wave = bifurcation.construct(prof, args.beta, c, kappa, resolution=resolution)
        alpha0, lambda1 = wave.alpha0, wave.lambda1
        rows.append((kappa, bifurcation.residual_norm(wave, args.beta)))
        # discretization floor of the order-kappa cancellation
        floors.append(abs(kappa) * wave.grid.h**2 * abs(lambda1))
        if args.control:
            if phi_fake is None:
                y = wave.grid.nodes
                phi_fake = np.sin(np.pi * (y + 1) / 2) + 0.3 * np.sin(np.pi * (y + 1))
                phi_fake /= np.linalg.norm(phi_fake)
            ctrl = bifurcation.construct(
                prof, args.beta, c, kappa, resolution=resolution, phi_override=phi_fake
            )
            control_rows.append(bifurcation.residual_norm(ctrl, args.beta))
    columns = (
        ["kappa", "residual"]
        + (["control_residual"] if args.control else [])
        + ["error_estimate"]
    )
    table = CurveTable(
        name="bifurcation-residual-ladder",
        columns=columns,
        metadata={
            "base": prof.label,
            "beta": args.beta,
            "c": c,
            "alpha0": alpha0,
            "lambda1": lambda1,
            "slope": bifurcation.residual_slope(rows),
            "resolution": resolution,
        },
    )
    if args.control:
        table.metadata["control_slope"] = bifurcation.residual_slope(
            list(zip(kappas, control_rows))
        )
        for (kappa, r), rc, fl in zip(rows, control_rows, floors):
            table.add_row(kappa, r, rc, fl)
    else:
        for (kappa, r), fl in zip(rows, floors):
            table.add_row(kappa, r, fl)
    return table


def cmd_damping(args, cfg: RunConfig) -> CurveTable:
    ens = damping.ModeEnsemble.from_profile(args.profile)
    samples = _parse_floats(args.samples) if args.samples else None
    return damping.run_damping_experiment(ens, args.beta, args.t_end, dt=args.dt, sample_times=samples)


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subparser defaults from clobbering flags given before
    # the subcommand name
    sup = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=sup, help="flat key=value config file")
    common.add_argument("--out", default=sup, help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=sup, help="output format")
    common.add_argument("--plot", action="store_true", default=sup,
                        help="also write an SVG next to --out")
    common.add_argument("--cache-dir", default=sup, help="directory for the on-disk curve cache")
    common.add_argument("--resolution", type=int, default=sup, help="base grid resolution (>= 64)")
    common.add_argument("--tol", type=float, default=sup, help="default tolerance for root finding")
    common.add_argument("--jobs", type=int, default=sup, help="worker threads for parameter sweeps")

    parser = argparse.ArgumentParser(
        prog="betaplane",
        description="Rayleigh-Kuo spectra, traveling-wave phase diagram, and damping probes "
        "for Couette-type shear flows with Coriolis forcing",
    )
    parser.add_argument("--version", action="version", version=f"betaplane {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", parents=[common], help="one Rayleigh-Kuo eigenvalue for Couette flow")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("atlas", parents=[common], help="phase-diagram computations")
    asub = p.add_subparsers(dest="atlas_cmd", required=True)
    sp = asub.add_parser("beta-star", parents=[common])
    sp.set_defaults(func=cmd_atlas, atlas_cmd="beta-star")
    sp = asub.add_parser("curve", parents=[common])
    sp.add_argument("--beta-min", type=float, default=None, help="default: beta_star")
    sp.add_argument("--beta-max", type=float, required=True)
    sp.add_argument("--steps", type=int, default=9)
    sp.set_defaults(func=cmd_atlas, atlas_cmd="curve")
    sp = asub.add_parser("region", parents=[common])
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.set_defaults(func=cmd_atlas, atlas_cmd="region")
    sp = asub.add_parser("beta-T", parents=[common])
    sp.add_argument("--period", type=float, required=True)
    sp.set_defaults(func=cmd_atlas, atlas_cmd="beta-T")
    sp = asub.add_parser("speed", parents=[common])
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--lambda0", type=float, required=True)
    sp.set_defaults(func=cmd_atlas, atlas_cmd="speed")

    p = sub.add_parser("modified-flow", parents=[common], help="modified shear-flow eigenvalues")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--emit", choices=("eigen", "profile", "sweep"), default="eigen")
    p.add_argument("--samples", type=int, default=33, help="profile sample count for --emit profile")
    p.add_argument("--gamma-sweep", help="comma-separated gammas for --emit sweep")
    p.set_defaults(func=cmd_modified_flow)

    p = sub.add_parser("bifurcate", parents=[common], help="first-order wave residual ladder")
    p.add_argument("--base", choices=("modified", "scaled-couette"), default="modified")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.02)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=0.9, help="a for the scaled Couette base")
    p.add_argument("--c", type=float, default=None, help="wave speed (scaled Couette base)")
    p.add_argument("--kappas", default="1e-2,5e-3,2.5e-3,1.25e-3")
    p.add_argument("--control", action="store_true", help="also run the non-eigenfunction control")
    p.set_defaults(func=cmd_bifurcate)

    p = sub.add_parser("damping", parents=[common], help="linearized decay experiment")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-2)
    p.add_argument("--profile", choices=("gaussian", "bump"), default="gaussian")
    p.add_argument("--samples", help="comma-separated sample times")
    p.set_defaults(func=cmd_damping)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        table = args.func(args, cfg)
        _emit(table, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BracketFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
