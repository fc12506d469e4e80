"""Command-line front end: reproducible verification runs with CSV or JSON output.

Every report starts with a provenance header (package version, seed and the
full configuration).  Exit status is 0 on success, 1 when a checked bound
fails and 2 on input errors.
"""
import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from . import envelope as env
from . import numerics, operators, wigner
from . import quasimorphism as qm
from . import symplectic as sp

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad user input; reported with exit status 2."""


class Report:
    """Columns, rows and trailing summary of a run; floats keep their type."""

    def __init__(self, columns, rows=(), summary=None, digits=None, status=EXIT_OK):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.summary = dict(summary or {})
        self.digits = digits
        self.status = status


def _fmt(x, digits):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (complex, np.complexfloating)):
        return repr(complex(x))
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0  # drop the sign of -0.0
        if digits is not None and math.isfinite(x):
            return format(x, f".{digits}g")
        return repr(x)
    if x is None:
        return ""
    return str(x)


def _jsonable(x, digits):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return repr(x)
        return float(format(x, f".{digits}g")) if digits is not None else x
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _config(args):
    skip = {"func", "matrix"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    if getattr(args, "matrix", None):
        cfg["matrix"] = list(args.matrix)
    return cfg


def emit(report, args, stream):
    cfg = _config(args)
    if args.format == "json":
        doc = {
            "provenance": {"package": "sp2harmonic", "version": __version__,
                           "seed": args.seed, "config": cfg},
            "columns": report.columns,
            "rows": [{c: _jsonable(v, report.digits) for c, v in zip(report.columns, r)}
                     for r in report.rows],
            "summary": {k: _jsonable(v, report.digits) for k, v in report.summary.items()},
            "status": report.status,
        }
        stream.write(json.dumps(doc, indent=1, sort_keys=False) + "\n")
        return
    stream.write(f"# sp2harmonic {__version__}\n")
    stream.write(f"# seed={args.seed}\n")
    stream.write("# config=" + json.dumps(cfg, sort_keys=True) + "\n")
    stream.write(",".join(report.columns) + "\n")
    for r in report.rows:
        stream.write(",".join(_fmt(v, report.digits) for v in r) + "\n")
    for k, v in report.summary.items():
        stream.write(f"{k}={_fmt(v, report.digits)}\n")


# subcommands

def cmd_cpl(args):
    lmax = 10.0 if args.lmax is None else args.lmax
    table = wigner.cpl_table(lmax, method=args.method)
    rows = [[ell, p + 0.0, c] for ell, p, c in table.rows()]
    return Report(["ell", "p", "c"], rows, digits=15)


def cmd_bounds_cpl(args):
    lmax = 100.0 if args.lmax is None else args.lmax
    check = 2 * lmax if args.check_lmax is None else args.check_lmax
    if check < lmax:
        raise InputError("--check-lmax must be >= --lmax")
    table = wigner.cpl_table(check)
    ratios = wigner.cpl_envelope_ratios(table)
    two_fit = wigner.twice(lmax, "lmax")
    fitted = float(ratios[: two_fit + 1].max())
    beyond = float(ratios[two_fit + 1:].max()) if len(ratios) > two_fit + 1 else 0.0
    excess = beyond / fitted - 1.0
    rows = [[k / 2, float(v)] for k, v in enumerate(ratios)]
    ok = excess <= args.slack
    return Report(["ell", "max_ratio"], rows,
                  {"fitted_constant": fitted, "max_ratio_beyond": beyond,
                   "excess": excess, "slack": args.slack, "pass": ok},
                  digits=15, status=EXIT_OK if ok else EXIT_VIOLATION)


def _lower_bound(kind, t1, t2):
    if kind == "T":
        return abs(math.cos(2 * t1))
    return abs(np.exp(1j * t1) - np.exp(1j * t2)) / math.sqrt(2)


def cmd_schatten(args):
    q = args.q
    tol = args.tol
    kwargs = {}
    if tol is not None:
        kwargs["rel_tol"] = tol
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        try:
            if args.kind == "S":
                if args.lmax is not None:
                    kwargs["lmax"] = args.lmax
                res = operators.schatten_S(q, args.theta1, args.theta2, **kwargs)
            else:
                if args.lmax is not None:
                    kwargs["nmax"] = int(args.lmax)
                res = operators.schatten_T(q, args.theta1, **kwargs)
            reached = True
        except operators.TruncationError as exc:
            res, reached = exc.partial, False
    row = [res.q, res.theta1, res.theta2, res.value, res.tail, res.lmax]
    summary = {"upper": res.upper, "certified": res.certified}
    status = EXIT_OK
    if math.isinf(q):
        bound = _lower_bound(args.kind, res.theta1, res.theta2)
        summary["lower_bound"] = bound
        if res.value < bound - 1e-8:
            status = EXIT_VIOLATION
    if not reached:
        summary["error"] = "unreachable tolerance: tail target not met at truncation cap"
        if not args.allow_partial:
            status = EXIT_INPUT
    return Report(["q", "theta1", "theta2", "value", "tail", "lmax"], [row], summary,
                  digits=15, status=status)


def _holder_grid(kind, points, dmin, dmax):
    if kind == "T":
        return list(np.linspace(math.pi / 6, math.pi / 3, points))
    return [(0.0, float(d)) for d in np.geomspace(dmin, dmax, points)]


def cmd_holder_fit(args):
    rows, uncertified = [], 0
    kwargs = {} if args.tol is None else {"rel_tol": args.tol}
    grid = _holder_grid(args.kind, args.points, args.dmin, args.dmax)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for q in args.q:
            fit = operators.holder_fit(args.kind, q, grid, threads=args.threads, **kwargs)
            ratios = [pt.ratio for pt in fit.table]
            rows.append([fit.q, fit.exponent_expected, fit.max_ratio])
            uncertified += sum(not pt.certified for pt in fit.table)
            spread = max(ratios) / min(ratios)
            if args.max_spread is not None and spread >= args.max_spread:
                return Report(["q", "exponent", "max_ratio"], rows,
                              {"uncertified_points": uncertified,
                               "spread_failed_q": fit.q, "spread": spread},
                              digits=15, status=EXIT_VIOLATION)
    return Report(["q", "exponent", "max_ratio"], rows,
                  {"uncertified_points": uncertified}, digits=15)


def _parse_matrix(values):
    if len(values) != 16:
        raise InputError(f"malformed matrix input: expected 16 reals, got {len(values)}")
    try:
        g = np.array([float(x) for x in values]).reshape(4, 4)
    except ValueError as exc:
        raise InputError(f"malformed matrix input: {exc}") from None
    if not np.all(np.isfinite(g)):
        raise InputError("malformed matrix input: non-finite entry")
    return g


def cmd_kak(args):
    if args.random:
        g = sp.random_symplectic(np.random.default_rng(args.seed))
    elif args.matrix:
        g = _parse_matrix(args.matrix)
    else:
        raise InputError("kak needs 16 matrix entries or --random")
    try:
        res = sp.kak(g, tol=1e-8 if args.tol is None else args.tol)
    except ValueError as exc:
        raise InputError(f"malformed matrix input: {exc}") from None
    resid = float(np.max(np.abs(res.reconstruct() - g)))
    cols = ["beta", "gamma"]
    row = [res.beta, res.gamma]
    for name, k in (("k1", res.k1.u), ("k2", res.k2.u)):
        for i in range(2):
            for j in range(2):
                cols.append(f"{name}_{i + 1}{j + 1}")
                row.append(complex(k[i, j]))
    cols.append("residual")
    row.append(resid)
    ok = resid < 1e-8 * max(1.0, float(np.abs(g).max()))
    return Report(cols, [row], status=EXIT_OK if ok else EXIT_VIOLATION)


def cmd_quasi(args):
    rng = np.random.default_rng(args.seed)
    if (args.defect_sweep is None) == (args.eta_sweep is None):
        raise InputError("quasi needs exactly one of --defect-sweep or --eta-sweep")
    if args.defect_sweep is not None:
        if args.defect_sweep < 1:
            raise InputError("--defect-sweep must be positive")
        rows = []
        for _ in range(args.defect_sweep):
            x, y = qm.random_cover(rng), qm.random_cover(rng)
            pxy, px, py = qm.phi(qm.cover_mul(x, y)), qm.phi(x), qm.phi(y)
            rows.append([pxy, px, py, pxy - px - py])
        worst = max(abs(r[3]) for r in rows)
        ok = worst < math.pi / 2
        return Report(["phi_xy", "phi_x", "phi_y", "defect"], rows,
                      {"max_defect": worst, "bound": math.pi / 2, "margin": math.pi / 2 - worst},
                      status=EXIT_OK if ok else EXIT_VIOLATION)
    if args.eta_sweep < 1:
        raise InputError("--eta-sweep must be positive")
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", qm.BranchCutWarning)
        for _ in range(args.eta_sweep):
            g1, g2 = sp.random_symplectic(rng, 2.0), sp.random_symplectic(rng, 2.0)
            rows.append([qm.eta(g1, g2, warn=False)])
    worst = max(abs(r[0]) for r in rows)
    ok = worst < math.pi - qm.NEAR_CUT
    return Report(["eta"], rows,
                  {"max_abs_eta": worst, "bound": math.pi, "margin": math.pi - worst},
                  status=EXIT_OK if ok else EXIT_VIOLATION)


def _env_params(args):
    s1, s2 = args.s1, args.s2
    if args.p is not None or args.q is not None:
        if args.p is None or args.q is None:
            raise InputError("--p and --q must be given together")
        s1, s2 = env.holder_exponents(args.p, args.q)
    if s1 is None or s2 is None:
        raise InputError("envelope needs --s1 and --s2 (or --p and --q)")
    s = args.s
    if s is None:
        s = 0.5 * env.s_minus(s1, s2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return env.EnvelopeParams(s1, s2, s, args.kappa)


def cmd_envelope(args):
    params = _env_params(args)
    c = env.decay_rate(params)
    summary = {"s1": params.s1, "s2": params.s2, "s": params.s,
               "s_minus": params.s_minus, "P": env.p_poly(params), "rate": c}
    if args.sweep:
        betas = np.linspace(0.0, args.beta_max, args.steps + 1)
        rows = []
        for b in betas:
            for gmm in np.linspace(0.0, b, args.steps + 1) if b > 0 else [0.0]:
                rows.append([float(b), float(gmm), env.epsilon(params, b, gmm)])
        ok = all(r[2] <= math.exp(-c * r[0]) * (1 + 1e-12) for r in rows)
        summary["decay_bound_holds"] = ok
        return Report(["beta", "gamma", "epsilon"], rows, summary,
                      status=EXIT_OK if ok else EXIT_VIOLATION)
    if args.beta is None:
        raise InputError("envelope needs --beta (and --gamma) or --sweep")
    gamma = 0.0 if args.gamma is None else args.gamma
    eps = env.epsilon(params, args.beta, gamma)
    if args.phi:
        eps *= math.exp(params.kappa * abs(args.phi))
    ok = eps <= math.exp(-c * args.beta + params.kappa * abs(args.phi or 0.0)) * (1 + 1e-12)
    return Report(["beta", "gamma", "epsilon"], [[args.beta, gamma, eps]], summary,
                  status=EXIT_OK if ok else EXIT_VIOLATION)


def cmd_ridge(args):
    grid, vals = numerics.gaussian_ridge_grid(args.extent, args.step)
    half = grid <= 0.5 * args.extent + 1e-12
    small = float(vals[np.ix_(half, half)].max())
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    large = float(vals[i, j])
    change = abs(large / small - 1.0)
    ok = change <= args.slack
    return Report(["extent", "sup"], [[0.5 * args.extent, small], [float(args.extent), large]],
                  {"argmax_u": float(grid[i]), "argmax_v": float(grid[j]),
                   "relative_change": change, "pass": ok},
                  status=EXIT_OK if ok else EXIT_VIOLATION)


# argument parsing

def _half_integer(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if val < 0 or not float(2 * val).is_integer():
        raise argparse.ArgumentTypeError(f"lmax must be a nonnegative half-integer: {text!r}")
    return val


def _positive(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return val


def _seed(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer: {text!r}") from None
    if val < 0:
        raise argparse.ArgumentTypeError("seed must be an unsigned integer")
    return val


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $SP2HARMONIC_THREADS or 1)")
    common.add_argument("--lmax", type=_half_integer, default=None)
    common.add_argument("--tol", type=_positive, default=None)

    parser = _Parser(prog="sp2harmonic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("cpl", parents=[common], help="table of c_p^l")
    p.add_argument("--method", default="recurrence",
                   choices=("recurrence", "integral", "group", "closed_form"))
    p.set_defaults(func=cmd_cpl)

    p = sub.add_parser("bounds-cpl", parents=[common],
                       help="fit the c_p^l envelope constant and check it further out")
    p.add_argument("--check-lmax", type=_half_integer, default=None)
    p.add_argument("--slack", type=float, default=0.05)
    p.set_defaults(func=cmd_bounds_cpl)

    p = sub.add_parser("schatten", parents=[common], help="one Schatten norm")
    p.add_argument("--kind", choices=("S", "T"), default="S")
    p.add_argument("--q", "--p", dest="q", type=float, required=True)
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, default=math.pi / 4)
    p.add_argument("--allow-partial", action="store_true",
                   help="exit 0 even when the tail target is not met")
    p.set_defaults(func=cmd_schatten)

    p = sub.add_parser("holder-fit", parents=[common], help="fit Hoelder constants")
    p.add_argument("--kind", choices=("S", "T"), default="S")
    p.add_argument("--q", "--p", dest="q", type=float, nargs="+", required=True)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--dmin", type=float, default=1e-3)
    p.add_argument("--dmax", type=float, default=math.pi / 2)
    p.add_argument("--max-spread", type=float, default=None,
                   help="fail when max/min ratio reaches this value")
    p.set_defaults(func=cmd_holder_fit)

    p = sub.add_parser("kak", parents=[common], help="KAK decomposition of a 4x4 matrix")
    p.add_argument("matrix", nargs="*", help="16 reals, row-major")
    p.add_argument("--random", action="store_true")
    p.set_defaults(func=cmd_kak)

    p = sub.add_parser("quasi", parents=[common], help="quasi-morphism sweeps")
    p.add_argument("--defect-sweep", type=int, default=None)
    p.add_argument("--eta-sweep", type=int, default=None)
    p.set_defaults(func=cmd_quasi)

    p = sub.add_parser("envelope", parents=[common], help="decay envelope eps")
    p.add_argument("--s1", type=float)
    p.add_argument("--s2", type=float)
    p.add_argument("--p", type=float, help="Schatten exponent giving s1")
    p.add_argument("--q", type=float, help="Schatten exponent giving s2")
    p.add_argument("--s", type=float, default=None, help="rate (default s_minus/2)")
    p.add_argument("--kappa", type=float, default=0.0)
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--phi", type=float, default=None, help="value of Phi on the cover")
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--beta-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("ridge", parents=[common], help="Gaussian ridge constant sweep")
    p.add_argument("--extent", type=float, default=50.0)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--slack", type=float, default=0.05)
    p.set_defaults(func=cmd_ridge)
    return parser


def run(argv=None, stdout=None):
    """Parse ``argv``, dispatch and write the report; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = operators.default_threads()
    elif args.threads < 1:
        print("sp2harmonic: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = args.func(args)
    except (InputError, ValueError) as exc:
        print(f"sp2harmonic: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output == "-":
        emit(report, args, stdout)
    else:
        with open(args.output, "w", newline="") as fh:
            emit(report, args, fh)
    if report.status == EXIT_VIOLATION:
        print("sp2harmonic: bound violated", file=sys.stderr)
    elif report.status == EXIT_INPUT and "error" in report.summary:
        print(f"sp2harmonic: error: {report.summary['error']}", file=sys.stderr)
    return report.status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
