"""Command-line interface.

Subcommands: verify, family, solve, integrate, project.  Reports are
`key: value` lines, tables are comma-separated with a header row, and
every float is printed with 17 significant digits so values round-trip.

Exit codes: 0 ok, 1 numerical failure, 2 argument or file parse error,
3 singular pair, 4 --releq on a file that is not a central
configuration, 5 projection mode incompatible with the file's sigma.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .errors import (
    ConfigFileError,
    CurvedNBodyError,
    DegenerateConfig,
    GaugeDegenerate,
    NoMassSolution,
    ProjectionPole,
    RegionInvalid,
    SingularPair,
)
from .manifold import poincare_ball, stereographic
from .dynamics import (
    Configuration,
    PhaseState,
    integrate,
    relative_equilibrium_velocities,
)
from .ccstat import (
    CC_TOL,
    LAM_TOL,
    cc_residual,
    classify_dimension,
    common_phi,
    fit_lambda,
    necessary_sums,
)
from .catalog import family_q, lambda_closed_form, ngon_family
from .solver import SolveOptions, canonical_gauge, find_cc, special_curve

DEDUP_TOL = 1e-6

FAMILY_HEADER = ["c", "theta", "m", "lambda1", "lambda2", "lambda", "residual", "note"]


def _fmt(x):
    return format(float(x), ".17g")


def _emit(path, lines):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(path, header, rows, footer=None):
    lines = [",".join(header)] + [",".join(row) for row in rows]
    if footer:
        lines.append(footer)
    _emit(path, lines)


def load_config_file(path):
    """Parse a JSON configuration file into (Configuration, velocities | None)."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigFileError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigFileError(f"{path}: top level must be a JSON object")
    allowed = {"sigma", "masses", "positions", "velocities"}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigFileError(f"{path}: unknown field(s): {', '.join(unknown)}")
    missing = sorted({"sigma", "masses", "positions"} - set(data))
    if missing:
        raise ConfigFileError(f"{path}: missing field(s): {', '.join(missing)}")
    try:
        sigma = int(data["sigma"])
        masses = np.asarray(data["masses"], dtype=float)
        positions = np.asarray(data["positions"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigFileError(f"{path}: {exc}") from None
    try:
        config = Configuration(sigma, masses, positions)
    except SingularPair:
        raise
    except ValueError as exc:
        raise ConfigFileError(f"{path}: {exc}") from None
    velocities = None
    if data.get("velocities") is not None:
        try:
            velocities = np.asarray(data["velocities"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ConfigFileError(f"{path}: velocities: {exc}") from None
        if velocities.shape != config.positions.shape:
            raise ConfigFileError(
                f"{path}: velocities shape {velocities.shape} does not match positions"
            )
    return config, velocities


def write_config_file(path, config, velocities=None):
    payload = {
        "sigma": config.sigma,
        "masses": config.masses.tolist(),
        "positions": config.positions.tolist(),
    }
    if velocities is not None:
        payload["velocities"] = np.asarray(velocities, dtype=float).tolist()
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def cmd_verify(args):
    config, _ = load_config_file(args.file)
    degenerate = None
    if args.lam == "fit":
        lam, degenerate = fit_lambda(config, return_degenerate=True)
        source = "fit"
    else:
        try:
            lam = float(args.lam)
        except ValueError:
            raise ConfigFileError(f"--lambda must be a real number or 'fit', got {args.lam!r}") from None
        source = "given"
    report = cc_residual(config, lam, lam_tol=args.lambda_tol, cc_tol=args.tol)
    lines = [
        f"file: {args.file}",
        f"sigma: {config.sigma:+d}",
        f"bodies: {config.n}",
        f"lambda_source: {source}",
        f"lambda: {_fmt(lam)}",
    ]
    if degenerate is not None:
        lines.append(f"lambda_degenerate: {'true' if degenerate else 'false'}")
    lines.append(f"residual_inf: {_fmt(report.residual_inf)}")
    lines.append("residual_per_body: " + ",".join(_fmt(v) for v in report.residual_per_body))
    lines.append(f"special: {'true' if report.is_special else 'false'}")
    try:
        lines.append(f"dim: {classify_dimension(config)}")
    except DegenerateConfig:
        lines.append("dim: degenerate")
    phi = common_phi(config)
    lines.append(f"common_phi: {_fmt(phi) if phi is not None else 'none'}")
    sums = necessary_sums(config)
    lines.append(
        "necessary_sums: "
        + ",".join(_fmt(v) if ok else "undefined" for v, ok in zip(sums.values, sums.defined))
    )
    print("\n".join(lines))
    return 0 if report.residual_inf < args.tol else 1


def _family_row(c, theta, n):
    """One table row plus the built configuration (None when marked invalid)."""
    try:
        if n == 3:
            config = family_q(c, theta)
            split = lambda_closed_form(c, theta)
            lam1, lam2, lam = _fmt(split.lam1), _fmt(split.lam2), _fmt(split.lam)
        else:
            config = ngon_family(n, c, theta)
            lam1 = lam2 = ""
            lam = _fmt(fit_lambda(config))
    except RegionInvalid:
        return [_fmt(c), _fmt(theta), "", "", "", "", "", "region_invalid"], None
    except NoMassSolution:
        return [_fmt(c), _fmt(theta), "", "", "", "", "", "no_mass_solution"], None
    except ValueError as exc:
        raise ConfigFileError(f"bad family parameters: {exc}") from None
    residual = cc_residual(config, fit_lambda(config)).residual_inf
    row = [_fmt(c), _fmt(theta), _fmt(config.masses[0]), lam1, lam2, lam, _fmt(residual), "ok"]
    return row, config


def cmd_family(args):
    if args.special_curve:
        count = args.grid if args.grid else 9
        points = special_curve(np.linspace(-0.9, -0.1, count))
        rows = []
        for p in points:
            if p.found:
                rows.append([_fmt(p.c), _fmt(p.theta), _fmt(p.lam), _fmt(p.max_force), "ok"])
            else:
                rows.append([_fmt(p.c), "", "", "", p.note])
        _emit_table(args.out, ["c", "theta", "lambda", "max_force", "note"], rows)
        if args.plot:
            from . import plotting

            plotting.plot_special_curve([p.c for p in points], [p.theta for p in points], args.plot)
        return 0
    if args.grid:
        cs = np.linspace(-0.9, -0.1, args.grid)
        thetas = np.linspace(0.05 * math.pi, 0.45 * math.pi, args.grid)
        pairs = [(c, t) for c in cs for t in thetas]
        pairs += [(-c, math.pi - t) for c, t in pairs]
        rows = [_family_row(c, t, args.n)[0] for c, t in pairs]
        _emit_table(args.out, FAMILY_HEADER, rows)
        return 0
    if args.c is None or args.theta is None:
        raise ConfigFileError("point mode needs --c and --theta (or use --grid / --special-curve)")
    row, config = _family_row(args.c, args.theta, args.n)
    _emit_table(None, FAMILY_HEADER, [row])
    if args.out and config is not None:
        write_config_file(args.out, config)
    return 0


def cmd_solve(args):
    master = np.random.default_rng(args.seed)
    outcomes = []
    for _ in range(args.trials):
        opts = SolveOptions(
            seed=int(master.integers(2**31)),
            max_iter=args.max_iter,
            residual_tol=args.residual_tol,
        )
        outcomes.append(find_cc(args.sigma, args.masses, None, opts))
    converged = [o for o in outcomes if o.converged]
    classes = []
    for o in converged:
        for cls in classes:
            if np.max(np.abs(cls[0].fingerprint - o.fingerprint)) < DEDUP_TOL:
                cls.append(o)
                break
        else:
            classes.append([o])
    print(f"trials: {args.trials}")
    print(f"converged: {len(converged)}")
    print(f"classes: {len(classes)}")
    header = ["class", "lambda", "dim", "residual", "multiplicity", "coplanar"]
    rows = []
    reps = []
    for k, cls in enumerate(classes):
        o = cls[0]
        try:
            reps.append(canonical_gauge(o.config))
        except GaugeDegenerate:
            reps.append(o.config)
        dim = str(o.report.dim_class) if o.report.dim_class is not None else "degenerate"
        rows.append(
            [
                str(k),
                _fmt(o.report.lam),
                dim,
                _fmt(o.report.residual_inf),
                str(len(cls)),
                "yes" if o.report.common_phi is not None else "no",
            ]
        )
    _emit_table(None, header, rows)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for k, rep in enumerate(reps):
            write_config_file(os.path.join(args.out, f"class_{k:02d}.json"), rep)
        _emit_table(os.path.join(args.out, "summary.csv"), header, rows)
    return 0


def cmd_integrate(args):
    config, velocities = load_config_file(args.file)
    if args.releq is not None:
        lam = fit_lambda(config)
        report = cc_residual(config, lam)
        if report.residual_inf >= args.tol:
            print(
                f"error: --releq needs a central configuration at tolerance {args.tol:g}"
                f" (residual {report.residual_inf:.3e})",
                file=sys.stderr,
            )
            return 4
        velocities = relative_equilibrium_velocities(config, lam, args.releq)
    if velocities is None:
        raise ConfigFileError(f"{args.file} carries no velocities; add them or pass --releq")
    try:
        state = PhaseState(config, velocities)
    except ValueError as exc:
        raise ConfigFileError(f"{args.file}: {exc}") from None
    traj = integrate(state, args.dt, args.t_end)

    n = config.n
    iu = np.triu_indices(n, 1)
    d0 = config.distance_matrix()[iu]
    header = (
        ["t"]
        + [f"{axis}{i}" for i in range(n) for axis in ("x", "y", "z", "w")]
        + [f"v{axis}{i}" for i in range(n) for axis in ("x", "y", "z", "w")]
        + ["E", "Jxy", "Jzw", "max_dist_drift"]
    )
    rows = []
    drifts = np.zeros(len(traj))
    for k in range(len(traj)):
        if n >= 2:
            dk = Configuration(config.sigma, config.masses, traj.positions[k], validate=False).distance_matrix()[iu]
            drifts[k] = np.abs(dk - d0).max()
        rows.append(
            [_fmt(traj.times[k])]
            + [_fmt(v) for v in traj.positions[k].ravel()]
            + [_fmt(v) for v in traj.velocities[k].ravel()]
            + [_fmt(traj.energy[k]), _fmt(traj.momentum_xy[k]), _fmt(traj.momentum_zw[k]), _fmt(drifts[k])]
        )
    footer = f"# aborted: {traj.abort_reason}" if traj.aborted else None
    _emit_table(args.out, header, rows, footer=footer)
    if args.plot:
        from . import plotting

        plotting.plot_trajectory(traj.times, traj.energy, traj.momentum_xy, traj.momentum_zw, drifts, args.plot)
    return 0


def cmd_project(args):
    config, _ = load_config_file(args.file)
    want = 1 if args.mode == "stereographic" else -1
    if config.sigma != want:
        print(
            f"error: mode {args.mode} applies to sigma {want:+d}, file has sigma {config.sigma:+d}",
            file=sys.stderr,
        )
        return 5
    last = "wbar" if args.mode == "stereographic" else "zbar"
    rows, pts, flags, ms = [], [], [], []
    for i in range(config.n):
        try:
            if args.mode == "stereographic":
                p = stereographic(config.positions[i])
            else:
                p = poincare_ball(config.positions[i])
        except ProjectionPole:
            rows.append([str(i), _fmt(config.masses[i]), "", "", "", "", "pole"])
            continue
        inside = bool(float(p @ p) < 1.0)
        rows.append(
            [str(i), _fmt(config.masses[i]), _fmt(p[0]), _fmt(p[1]), _fmt(p[2]),
             "true" if inside else "false", "ok"]
        )
        pts.append(p)
        flags.append(inside)
        ms.append(float(config.masses[i]))
    _emit_table(args.out, ["index", "mass", "xbar", "ybar", last, "inside", "note"], rows)
    if args.plot:
        from . import plotting

        plotting.plot_projection(np.array(pts).reshape(-1, 3), flags, ms, args.mode, args.plot)
    return 0


def _mass_list(text):
    vals = [float(tok) for tok in text.split(",") if tok.strip()]
    if len(vals) < 2:
        raise ValueError("need at least two masses")
    if any(v <= 0.0 for v in vals):
        raise ValueError("masses must be positive")
    return np.array(vals)


def _spin(text):
    if text == "none":
        return None
    return float(text)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="curvedcc",
        description="Central configurations of the gravitational N-body problem on the unit sphere and hyperboloid.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a configuration file against the central equations")
    p.add_argument("file", help="JSON configuration file")
    p.add_argument("--lambda", dest="lam", default="fit", help="multiplier: a real number or 'fit' (default)")
    p.add_argument("--tol", type=float, default=CC_TOL, help="pass threshold on residual_inf")
    p.add_argument("--lambda-tol", type=float, default=LAM_TOL, help="|lambda| below this counts as special")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="two-plus-ring family members, grids, special curve")
    p.add_argument("--c", type=float, help="ring height in (-1, 1), nonzero")
    p.add_argument("--theta", type=float, help="polar-pair angle in (0, pi), not pi/2")
    p.add_argument("--n", type=int, default=3, help="ring size (default 3)")
    p.add_argument("--grid", type=int, metavar="N", help="N x N grid over both parameter rectangles")
    p.add_argument("--special-curve", action="store_true", help="trace the vanishing-multiplier curve")
    p.add_argument("--out", help="write the configuration file (point mode) or the table (grid/curve)")
    p.add_argument("--plot", help="render a figure (with --special-curve)")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("solve", help="random-start searches with dedup by distance fingerprint")
    p.add_argument("--sigma", type=int, choices=(1, -1), required=True)
    p.add_argument("--masses", type=_mass_list, required=True, help="comma-separated, e.g. 1,1,2")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--residual-tol", type=float, default=1e-10)
    p.add_argument("--out", help="directory for per-class configuration files and summary.csv")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("integrate", help="fixed-step integration with conservation logging")
    p.add_argument("file", help="JSON configuration file")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=10.0)
    p.add_argument("--releq", type=_spin, default=None, metavar="S",
                   help="spin s >= 0 for relative-equilibrium velocities, or 'none'")
    p.add_argument("--tol", type=float, default=CC_TOL, help="verification threshold used with --releq")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="render drift and conservation figures")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("project", help="stereographic or Poincare-ball coordinates")
    p.add_argument("file", help="JSON configuration file")
    p.add_argument("--mode", choices=("stereographic", "poincare"), required=True)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--plot", help="render a 3D scatter")
    p.set_defaults(func=cmd_project)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SingularPair as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CurvedNBodyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
