"""Command-line front end: ``jctrimer {solve,sweep,figure,validate}``.

Angles are given in radians. Exit codes: 0 success, 2 bad flags or
parameters, 3 solver failure, 4 failed validation check.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import load_config, options_from, params_from
from .errors import NoConvergence, SweepError, ValidationError

EXIT_OK, EXIT_FLAGS, EXIT_SOLVER, EXIT_VALIDATION = 0, 2, 3, 4

_VALUE_FLAGS = {"--g1-range", "--theta-range", "--theta", "--g1", "--j", "--omega0"}


def _parse_range(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse range {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("range needs n >= 1")
    return np.linspace(a, b, n)


def _join_negative_values(argv):
    # lets "--theta-range -3.1:3.1:101" through argparse
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega0", type=float, help="atomic frequency / omega_c (default 1000)")
    common.add_argument("--g1", type=float, help="dimensionless coupling (default 1.2)")
    common.add_argument("--j", type=float, help="hopping rate / omega_c (default 0.05)")
    common.add_argument("--theta", type=float, help="hopping phase in radians")
    common.add_argument("--seed", type=int, help="random seed for the multistart search")
    common.add_argument("--restarts", type=int, help="number of random starts")
    common.add_argument("--config", type=Path, help="key=value config file (flags win)")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--svg", action="store_true", help="also render an SVG plot")

    parser = argparse.ArgumentParser(prog="jctrimer", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="ground state at one parameter point")
    p_sweep = sub.add_parser("sweep", parents=[common], help="phase diagram over (g1, theta)")
    p_sweep.add_argument("--g1-range", type=_parse_range, help="a:b:n (default 0.8:1.3:200)")
    p_sweep.add_argument("--theta-range", type=_parse_range,
                         help="a:b:n in radians (default 200 points on (-pi, pi])")
    p_fig = sub.add_parser("figure", parents=[common], help="data for figures 2, 3 or 4")
    p_fig.add_argument("--fig", type=int, choices=(2, 3, 4), required=True)
    p_fig.add_argument("--g1-range", type=_parse_range)
    p_fig.add_argument("--theta-range", type=_parse_range)
    p_val = sub.add_parser("validate", parents=[common], help="run the oracle checks")
    p_val.add_argument("--nmax", type=int, default=2, help="photon cutoff for ED checks")
    p_val.add_argument("--sector", type=int, default=1, help="N_tot sector for the spectrum check")
    return parser


def _setup(args):
    values = load_config(args.config) if args.config else {}
    params = params_from(values, omega0=args.omega0, g1=args.g1, j=args.j, theta=args.theta)
    opts = options_from(values, n_random=args.restarts, seed=args.seed)
    snapshot = {"omega0": params.omega0, "g1": params.g1, "j": params.j, "theta": params.theta,
                **{k: getattr(opts, k) for k in ("n_random", "max_iter", "tol_residual", "seed")}}
    return params, opts, snapshot


def cmd_solve(args, params, opts):
    from .io import write_csv
    from .meanfield.solver import solve
    from .observables import evaluate

    sol = solve(params, opts)
    obs = evaluate(sol.amplitudes, params)
    a = sol.amplitudes.array
    scaled = a / math.sqrt(params.eta)
    out = args.out
    files = [
        write_csv(out / "solution.csv",
                  ["site", "alpha_re", "alpha_im", "alpha_scaled_re", "alpha_scaled_im"],
                  [(n + 1, a[n].real, a[n].imag, scaled[n].real, scaled[n].imag) for n in range(3)]),
        write_csv(out / "summary.csv",
                  ["phase", "E_g", "eps_1", "eps_2", "eps_3", "current_scaled",
                   "chirality_scaled", "residual"],
                  [(sol.phase.value, sol.ground_energy, *sol.spectrum.eps, obs.current,
                    obs.chirality, sol.residual)]),
    ]
    print(f"phase={sol.phase.value} E_g={sol.ground_energy:.10g} "
          f"current_scaled={obs.current:.6g} chirality_scaled={obs.chirality:.6g}")
    return files


SWEEP_HEADER = ["theta", "g1", "phase", "e_g", "eps_min", "current_scaled", "chirality_scaled",
                "alpha1_re", "alpha1_im", "alpha2_re", "alpha2_im", "alpha3_re", "alpha3_im",
                "failed"]


def sweep_rows(grid):
    for i, theta in enumerate(grid.theta_axis):
        for k, g1 in enumerate(grid.g1_axis):
            a = grid.alpha[i, k]
            yield (theta, g1, grid.phase[i, k], grid.ground_energy[i, k], grid.eps_min[i, k],
                   grid.current[i, k], grid.chirality[i, k],
                   a[0].real, a[0].imag, a[1].real, a[1].imag, a[2].real, a[2].imag,
                   bool(grid.failed[i, k]))


def cmd_sweep(args, params, opts):
    from .io import phase_heatmap_svg, write_csv
    from .phase_diagram import default_theta_axis, sweep

    g1_axis = args.g1_range if args.g1_range is not None else np.linspace(0.8, 1.3, 200)
    theta_axis = args.theta_range if args.theta_range is not None else default_theta_axis(200)
    grid = sweep(params, g1_axis, np.unique([float(t) for t in theta_axis]), opts)
    files = [write_csv(args.out / "phase_diagram.csv", SWEEP_HEADER, sweep_rows(grid))]
    if args.svg:
        files.append(phase_heatmap_svg(args.out / "phase_diagram.svg", grid))
    print(f"phases found: {sorted(grid.phases_present())}; failed cells: {int(grid.failed.sum())}")
    return files


def cmd_figure(args, params, opts):
    from .io import line_plot_svg, write_table
    from .phase_diagram import figure_data

    theta_axis = args.theta_range
    if theta_axis is None and args.theta is not None and args.fig in (2, 3):
        theta_axis = [params.theta]
    table = figure_data(args.fig, params, g1_axis=args.g1_range, theta_axis=theta_axis, opts=opts)
    files = [write_table(args.out / f"fig{args.fig}.csv", table)]
    if args.svg:
        if args.fig == 4:
            curves = {"current / eta": table["current_scaled"],
                      "chirality / eta^2": table["chirality_scaled"]}
            files.append(line_plot_svg(args.out / "fig4.svg", table["theta"], curves, "theta", ""))
        else:
            key = "eps_min_nonzero" if args.fig == 2 else "alpha1_scaled_re"
            branch = table.get("branch", np.ones(len(table["theta"])))
            curves = {}
            for th in np.unique(table["theta"]):
                for b in np.unique(branch):
                    m = (table["theta"] == th) & (branch == b)
                    tag = "" if args.fig == 2 else f" branch {b:+d}"
                    curves[f"theta={th / np.pi:.2f} pi{tag}"] = table[key][m]
            x = table["g1"][(table["theta"] == table["theta"][0]) & (branch == branch[0])]
            files.append(line_plot_svg(args.out / f"fig{args.fig}.svg", x, curves, "g1", key))
    return files


def cmd_validate(args, params, opts):
    from .io import write_csv
    from .validation import run_checks

    checks = run_checks(params, opts, n_max=args.nmax, sector=args.sector)
    files = [write_csv(args.out / "validation.csv", ["check", "value", "tolerance", "passed"],
                       [(c.name, c.value, c.tolerance, c.passed) for c in checks])]
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} (tol {c.tolerance:.1e})")
    args._validation_failed = not all(c.passed for c in checks)
    return files


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "figure": cmd_figure, "validate": cmd_validate}


def main(argv=None) -> int:
    from .io import write_manifest

    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        params, opts, snapshot = _setup(args)
        args.out.mkdir(parents=True, exist_ok=True)
        files = COMMANDS[args.command](args, params, opts)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (NoConvergence, SweepError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    manifest = args.out / "manifest.json"
    write_manifest(manifest, argv=["jctrimer", *argv], config=snapshot, seed=opts.seed,
                   version=__version__, wall_time=time.perf_counter() - start,
                   outputs=[*files, manifest])
    if getattr(args, "_validation_failed", False):
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
