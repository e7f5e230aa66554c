"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .conditions import IC_KINDS, InitialCondition
from .csvio import atomic_write_text, write_field_csv
from .errors import DomainError, RelHeatError
from .figures import FIGURES, build_bundle
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .solve import METHODS, solve_field, supported
from .solver_r import SeriesTruncation
from .spectral import SpectralGrid

__all__ = ["main", "dimensionless", "parse_grid", "SPEED_OF_LIGHT"]

SPEED_OF_LIGHT = 299792458.0  # m/s, exact

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dimensionless(xi, tau, m0, lam):
    """Map a length (m) and a time (s) to ``x = m0 c xi / lambda``, ``t = m0 c^2 tau / lambda``."""
    if not m0 > 0 or not lam > 0:
        raise DomainError("m0 and lambda must be positive")
    c = SPEED_OF_LIGHT
    return m0 * c * xi / lam, m0 * c * c * tau / lam


def parse_grid(text):
    """``'min:max:count'`` -> uniform grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like min:max:count")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc
    if not lo < hi:
        raise argparse.ArgumentTypeError("grid needs min < max")
    if n < 2:
        raise argparse.ArgumentTypeError("grid needs count >= 2")
    return np.linspace(lo, hi, n)


def _times(text):
    try:
        ts = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad time list {text!r}") from exc
    if not ts or any(not (t >= 0 and math.isfinite(t)) for t in ts):
        raise argparse.ArgumentTypeError("times must be finite and >= 0")
    return ts


def _add_ic(p, kinds=IC_KINDS[:-1]):
    p.add_argument("--ic", required=True, choices=kinds, help="initial profile")
    p.add_argument("--r", type=int, default=2, help="power r of the hermite profile (default 2)")


def _add_tolerances(p):
    d = DEFAULT_CONFIG
    g = p.add_argument_group("quadrature")
    g.add_argument("--nodes", type=int, default=d.gauss_nodes, help=f"subordination nodes (default {d.gauss_nodes})")
    g.add_argument("--rel-tol", type=float, default=d.adaptive_rel_tol, help=f"default {d.adaptive_rel_tol:g}")
    g.add_argument("--abs-tol", type=float, default=d.adaptive_abs_tol, help=f"default {d.adaptive_abs_tol:g}")
    g.add_argument(
        "--max-subdivisions", type=int, default=d.max_subdivisions, help=f"default {d.max_subdivisions}"
    )
    g.add_argument("--scheme", choices=("logtrap", "laguerre"), default=d.scheme)


def build_parser():
    parser = _Parser(prog="relheat", description="Relativistic heat equation solver.")
    parser.add_argument("--version", action="version", version=f"relheat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="write psi(x, t) to CSV")
    _add_ic(p)
    p.add_argument("--regime", choices=("R", "NR", "both"), default="R")
    p.add_argument("--t", type=_times, required=True, help="comma-separated times")
    p.add_argument("--grid", type=parse_grid, default=parse_grid("-5:5:401"), help="min:max:count")
    p.add_argument("--method", choices=METHODS, default="closed")
    p.add_argument("--out", default=".", help="output directory, or a .csv path for a single curve")
    p.add_argument("--spectral-points", type=int, default=SpectralGrid.n_points)
    p.add_argument("--spectral-half-width", type=float, default=SpectralGrid.half_width)
    p.add_argument("--series-terms", type=int, default=SeriesTruncation.n_max)
    _add_tolerances(p)

    p = sub.add_parser("figure", help="regenerate a figure bundle")
    p.add_argument("name", choices=sorted(FIGURES) + ["all"])
    p.add_argument("--out", default="figures")
    p.add_argument("--points", type=int, default=None, help="grid points per curve (default 401, or 421 for fig2 and fig5)")
    p.add_argument("--no-png", action="store_true", help="skip the matplotlib rendering")
    _add_tolerances(p)

    p = sub.add_parser("moments", help="second and fourth moments, kurtosis")
    _add_ic(p)
    p.add_argument("--t", type=_times, required=True)
    p.add_argument("--regime", choices=("R", "NR", "both"), default="both")
    p.add_argument("--source", choices=("analytic", "grid", "montecarlo"), default="analytic")
    p.add_argument("--grid", type=parse_grid, default=parse_grid("-30:30:6001"))
    p.add_argument("--n", type=int, default=10**6, help="Monte Carlo sample size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")
    _add_tolerances(p)

    p = sub.add_parser("sample", help="Monte Carlo positions of the relativistic process")
    p.add_argument("--ic", required=True, choices=("gaussian", "levy"))
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="CSV path")

    p = sub.add_parser("dimensionless", help="convert (meters, seconds) to (x, t)")
    p.add_argument("--xi", type=float, required=True, help="length in m")
    p.add_argument("--tau", type=float, required=True, help="time in s")
    p.add_argument("--m0", type=float, required=True, help="rest mass in kg")
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="action scale in J s")
    return parser


def _config(args):
    try:
        return QuadratureConfig(
            gauss_nodes=args.nodes,
            adaptive_rel_tol=args.rel_tol,
            adaptive_abs_tol=args.abs_tol,
            max_subdivisions=args.max_subdivisions,
            scheme=args.scheme,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _make_ic(args):
    if args.ic == "hermite":
        if args.r < 1:
            raise UsageError("--r must be >= 1")
        return InitialCondition.hermite(args.r)
    return getattr(InitialCondition, args.ic)()


def _regimes(choice):
    return ("R", "NR") if choice == "both" else (choice,)


def _tolerance_meta(cfg):
    return (
        f"nodes={cfg.gauss_nodes} rel={cfg.adaptive_rel_tol:g} abs={cfg.adaptive_abs_tol:g} "
        f"max_subdivisions={cfg.max_subdivisions} scheme={cfg.scheme}"
    )


def run_solve(args):
    cfg = _config(args)
    ic = _make_ic(args)
    regimes = _regimes(args.regime)
    for regime in regimes:
        reason = supported(ic.kind, args.method, regime)
        if reason:
            raise UsageError(reason)
    try:
        grid = SpectralGrid(args.spectral_points, args.spectral_half_width)
        trunc = SeriesTruncation(args.series_terms)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    jobs = [(regime, t) for regime in regimes for t in args.t]
    out = Path(args.out)
    single = out.suffix == ".csv"
    if single and len(jobs) > 1:
        raise UsageError("a .csv --out path needs a single regime and time")
    written = []
    for regime, t in jobs:
        fld = solve_field(ic, args.grid, t, regime, args.method, cfg, grid, trunc)
        name = f"{ic.label.replace('(r=', '').replace(')', '')}_{regime}_t{t:g}_{args.method}.csv"
        path = out if single else out / name
        write_field_csv(path, fld, {"tolerances": _tolerance_meta(cfg)})
        written.append(path)
    for path in written:
        print(path)


def run_figure(args):
    cfg = _config(args)
    names = sorted(FIGURES) if args.name == "all" else [args.name]
    for name in names:
        print(build_bundle(name, args.out, cfg, png=not args.no_png, n_points=args.points))


def run_moments(args):
    from .solve import solve_field as _solve
    from .stats_mc import analytic_moments, grid_moments, sample_r_process

    cfg = _config(args)
    ic = _make_ic(args)
    regimes = _regimes(args.regime)
    if args.source == "montecarlo":
        if ic.kind not in ("gaussian", "levy"):
            raise UsageError("Monte Carlo moments need --ic gaussian or levy")
        if regimes != ("R",):
            raise UsageError("Monte Carlo samples the relativistic process; use --regime R")
    if args.source == "analytic" and ic.kind not in ("gaussian", "hermite"):
        raise UsageError(f"moments of the {ic.kind} profile diverge")
    rows = ["t,regime,m2,m4,kurtosis,source,stderr_m2,stderr_m4"]
    for t in args.t:
        for regime in regimes:
            se = ("", "")
            if args.source == "analytic":
                rep = analytic_moments(ic, t, regime)
                m2, m4 = rep.m2, rep.m4
            elif args.source == "grid":
                fld = _solve(ic, args.grid, t, regime, "closed", cfg)
                m2, m4 = grid_moments(fld, 1), grid_moments(fld, 2)
            else:
                if not t > 0:
                    raise UsageError("Monte Carlo needs t > 0")
                rep = sample_r_process(ic, t, args.n, args.seed).report()
                m2, m4 = rep.m2, rep.m4
                se = (f"{rep.stderr[0]:.17g}", f"{rep.stderr[1]:.17g}")
            kurt = m4 / m2**2 - 3.0
            rows.append(f"{t:.17g},{regime},{m2:.17g},{m4:.17g},{kurt:.17g},{args.source},{se[0]},{se[1]}")
    text = "\n".join([f"# ic: {ic.label}", f"# version: relheat {__version__}"] + rows) + "\n"
    if args.out:
        atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def run_sample(args):
    from .stats_mc import sample_r_process

    if not args.t > 0:
        raise UsageError("--t must be positive")
    if args.n < 1:
        raise UsageError("--n must be positive")
    if not 0 <= args.seed < 2**64:
        raise UsageError("--seed must lie in [0, 2^64)")
    batch = sample_r_process(_make_ic(args), args.t, args.n, args.seed)
    m2, s2 = batch.moment(2)
    m4, s4 = batch.moment(4)
    head = [
        f"# ic: {batch.ic.label}",
        f"# t: {batch.t:.17g}",
        f"# n: {batch.n_samples}",
        f"# seed: {batch.seed}",
        f"# m2: {m2:.17g} +- {s2:.3g}",
        f"# m4: {m4:.17g} +- {s4:.3g}",
        f"# version: relheat {__version__}",
        "x",
    ]
    body = "\n".join(f"{v:.17g}" for v in batch.positions)
    atomic_write_text(args.out, "\n".join(head) + "\n" + body + "\n")
    print(f"m2 = {m2:.6g} +- {s2:.2g}, m4 = {m4:.6g} +- {s4:.2g}")


def run_dimensionless(args):
    x, t = dimensionless(args.xi, args.tau, args.m0, args.lam)
    print("x,t")
    print(f"{x:.17g},{t:.17g}")


_COMMANDS = {
    "solve": run_solve,
    "figure": run_figure,
    "moments": run_moments,
    "sample": run_sample,
    "dimensionless": run_dimensionless,
}


def _join_grid_values(argv):
    # "--grid -5:5:401" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--grid":
            out.append("--grid=" + next(it, ""))
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_grid_values(argv))
    try:
        args.r = getattr(args, "r", None)
        _COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"relheat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RelHeatError, ArithmeticError) as exc:
        print(f"relheat: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
