"""Command-line entry point: ``dantzig <solve|uup|corrsim|bench|gen> ...``.

Exit codes: 0 success, 1 usage/configuration error, 2 data error,
3 solver failure.
"""
import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .collinearity import SimConfig, simulate_max_abs_correlation
from .errors import (ConfigError, DantzigError, InfeasibleProblem,
                     SolverError)
from .estimators import (DantzigOptions, LambdaMode, RegressionProblem, basis_pursuit,
                         dantzig_selector, gauss_dantzig, lasso_cd)
from .linalg import column_standardize
from .lp import SolverOptions
from .rip import (max_canonical_correlation_sampled, restricted_isometry_exact,
                  restricted_isometry_sampled)
from .risk import SyntheticSpec, compare_bias, generate_synthetic, run_risk_sweep
from .rng import GENERATOR_NAME, default_threads

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SOLVER = 0, 1, 2, 3
RUN_CONFIG_SCHEMA = "dantzig.runconfig/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


@dataclass
class RunConfig:
    """Validated parameter record for one subcommand invocation."""

    command: str
    params: dict
    schema: str = RUN_CONFIG_SCHEMA
    paths: list = field(default_factory=list)

    def __post_init__(self):
        if self.schema != RUN_CONFIG_SCHEMA:
            raise ConfigError(f"unrecognized config schema {self.schema!r}")
        for key in self.paths:
            value = self.params.get(key)
            if value is not None and not Path(value).exists():
                raise FileNotFoundError(f"{key}: {value} does not exist")
        for key, value in self.params.items():
            if isinstance(value, float) and not math.isfinite(value):
                raise ConfigError(f"{key} must be finite")

    def echo(self):
        return {"schema": self.schema, "command": self.command, **self.params}


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return v


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_spec_args(p):
    p.add_argument("--n", type=_positive_int, default=72)
    p.add_argument("--p", type=_positive_int, default=256)
    p.add_argument("--s", type=int, default=8, help="number of nonzero coefficients")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=5.0, help="signal size in units of sigma")
    p.add_argument("--design", choices=["gaussian", "equicorrelated"], default="gaussian")
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--signs", choices=["positive", "random"], default="positive")
    p.add_argument("--seed", type=_seed, required=True)


def build_parser():
    parser = _Parser(prog="dantzig", description="Sparse recovery toolkit for p >> n regression.")
    parser.add_argument("--threads", type=_positive_int, default=None,
                        help="worker threads (default: machine parallelism)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("solve", help="fit an estimator to X.csv / y.csv")
    s.add_argument("--method", choices=["dantzig", "basis-pursuit", "gauss-dantzig", "lasso"],
                   required=True)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.add_argument("--sigma", type=float, default=None)
    s.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="regularization factor multiplying sigma (default sqrt(2 log p))")
    s.add_argument("--lambda-mode", choices=[m.value for m in LambdaMode if m is not LambdaMode.CUSTOM],
                   default=LambdaMode.SQRT_2LOG_P.value)
    s.add_argument("--no-standardize", action="store_true")
    s.add_argument("--support-threshold", type=float, default=1e-4)
    s.add_argument("--max-iter", type=_positive_int, default=100)
    s.add_argument("--out", required=True)

    u = sub.add_parser("uup", help="restricted isometry constants and canonical correlations")
    u.add_argument("--x", required=True)
    u.add_argument("--s", type=_positive_int, required=True)
    u.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    u.add_argument("--budget", type=_positive_int, default=10 ** 6)
    u.add_argument("--trials", type=_positive_int, default=1000)
    u.add_argument("--cca", type=_positive_int, nargs=2, metavar=("SIZE_A", "SIZE_B"), default=None)
    u.add_argument("--cca-trials", type=_positive_int, default=1000)
    u.add_argument("--seed", type=_seed, default=None)
    u.add_argument("--no-standardize", action="store_true")
    u.add_argument("--out", required=True)

    c = sub.add_parser("corrsim", help="max absolute correlation of independent Gaussian predictors")
    c.add_argument("--n", type=_positive_int, required=True)
    c.add_argument("--p", type=_positive_int, required=True)
    c.add_argument("--reps", type=_positive_int, required=True)
    c.add_argument("--seed", type=_seed, required=True)
    c.add_argument("--bins", type=_positive_int, default=50)
    c.add_argument("--out", required=True, help="samples CSV; histogram and JSON are written alongside")
    c.add_argument("--hist-out", default=None)

    b = sub.add_parser("bench", help="risk sweep or Dantzig vs Gauss-Dantzig bias comparison")
    b.add_argument("--mode", choices=["sweep", "bias"], default="sweep")
    _add_spec_args(b)
    b.add_argument("--grid", type=_float_list, default=[1.0, 2.0, 3.0, 4.0],
                   help="comma-separated lambda factors")
    b.add_argument("--methods", default="ds,gd,lasso", help="comma-separated: ds, gd, lasso, bp")
    b.add_argument("--reps", type=_positive_int, default=20)
    b.add_argument("--out", required=True, help="output prefix (writes PREFIX.json and PREFIX.csv)")

    g = sub.add_parser("gen", help="write a synthetic problem to CSV files")
    _add_spec_args(g)
    g.add_argument("--out-dir", required=True)
    return parser


_OUTPUT_KEYS = ("out", "out_dir", "hist_out")


def _params(args):
    """Parameters echoed into reports; thread count and output directories
    are excluded so that reruns anywhere produce identical files."""
    out = {}
    for k, v in vars(args).items():
        if k in ("command", "threads"):
            continue
        if k in _OUTPUT_KEYS and v is not None:
            v = Path(v).name
        out[k] = v
    return out


def _solve(args, threads):
    cfg = RunConfig("solve", _params(args), paths=["x", "y"])
    X = io.read_matrix_csv(args.x)
    y = io.read_vector_csv(args.y)
    standardize = not args.no_standardize
    solver = SolverOptions(max_iterations=args.max_iter)
    method = args.method
    if method == "basis-pursuit":
        Xs = column_standardize(X) if standardize else X
        est = basis_pursuit(Xs, y, solver, support_threshold=args.support_threshold)
        bound = None
    else:
        if args.sigma is None:
            raise ConfigError(f"--sigma is required for method {method}")
        prob = RegressionProblem(X, y, args.sigma, standardize=standardize)
        if args.lam is not None:
            opts = DantzigOptions.custom(args.lam, support_threshold=args.support_threshold,
                                         solver=solver, allow_unstandardized=True)
        else:
            opts = DantzigOptions(lambda_mode=args.lambda_mode, support_threshold=args.support_threshold,
                                  solver=solver, allow_unstandardized=True)
        factor = opts.resolve(prob.n, prob.p)
        bound = factor * prob.sigma
        if method == "dantzig":
            est = dantzig_selector(prob, opts)
        elif method == "gauss-dantzig":
            est = gauss_dantzig(prob, opts)
        else:
            est = lasso_cd(prob, bound)
            est.lambda_used = factor
        Xs = prob.X
    corr = float(np.max(np.abs(Xs.T @ est.residual)))
    result = {
        "method": est.method,
        "lambda_used": est.lambda_used,
        "bound": bound,
        "beta": est.beta,
        "support": est.support,
        "l1_norm": est.l1_norm,
        "residual_norm": float(np.linalg.norm(est.residual)),
        "feasibility": {"max_abs_correlation": corr,
                        "excess": None if bound is None else corr - bound,
                        "equality_residual": float(np.max(np.abs(est.residual)))},
        "standardized": standardize,
        "solver": est.lp_stats,
        "warnings": est.warnings,
    }
    io.write_report_json(io.make_report("solve", result, cfg.echo()), args.out)
    print(f"{est.method}: |support| = {len(est.support)}, l1 = {est.l1_norm:.6g} -> {args.out}")


def _uup(args, threads):
    cfg = RunConfig("uup", _params(args), paths=["x"])
    X = io.read_matrix_csv(args.x)
    if not args.no_standardize:
        X = column_standardize(X)
    if (args.mode == "sampled" or args.cca) and args.seed is None:
        raise ConfigError("--seed is required for sampled modes")
    result = {}
    if args.mode == "exact":
        rep = restricted_isometry_exact(X, args.s, budget=args.budget)
    else:
        rep = restricted_isometry_sampled(X, args.s, args.trials, args.seed)
    result["rip"] = rep.to_dict()
    if args.cca:
        gc = max_canonical_correlation_sampled(X, args.cca[0], args.cca[1], args.cca_trials, args.seed)
        result["canonical_correlation"] = gc.to_dict()
    io.write_report_json(io.make_report("uup", result, cfg.echo(), args.seed), args.out)
    print(f"delta_{rep.S} = {rep.delta:.6g} ({rep.mode.value}, {rep.subsets_checked} subsets) -> {args.out}")


def _corrsim(args, threads):
    cfg = RunConfig("corrsim", _params(args))
    sim = SimConfig(n=args.n, p=args.p, reps=args.reps, seed=args.seed, bins=args.bins)
    dist = simulate_max_abs_correlation(sim, threads=threads)
    out = Path(args.out)
    hist_out = Path(args.hist_out) if args.hist_out else out.with_name(out.stem + "_hist.csv")
    io.write_rows_csv([{"rep": i, "max_abs_corr": v} for i, v in enumerate(dist.samples)],
                      out, ["rep", "max_abs_corr"])
    e, cnt = dist.bin_edges, dist.counts
    io.write_rows_csv([{"bin": k, "left": e[k], "right": e[k + 1], "count": int(cnt[k])}
                       for k in range(len(cnt))], hist_out, ["bin", "left", "right", "count"])
    result = dist.to_dict()
    result["files"] = {"samples": out.name, "histogram": hist_out.name}
    io.write_report_json(io.make_report("corrsim", result, cfg.echo(), args.seed),
                         out.with_suffix(".json"))
    print(f"n={args.n} p={args.p} reps={args.reps} seed={args.seed}: "
          f"median max|corr| = {dist.summary['median']:.4f} -> {out}")


def _spec_from(args):
    return SyntheticSpec(n=args.n, p=args.p, S=args.s, sigma=args.sigma, amplitude=args.amplitude,
                         design=args.design, rho=args.rho, signs=args.signs)


def _bench(args, threads):
    cfg = RunConfig("bench", _params(args))
    spec = _spec_from(args)
    prefix = Path(args.out)
    if args.mode == "sweep":
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        rep = run_risk_sweep(spec, args.grid, methods, reps=args.reps, seed=args.seed, threads=threads)
        cols = ["method", "lambda_factor", "lambda", "canonical", "risk", "risk_se",
                "ideal_risk", "ratio", "empirical_argmin", "reps", "seed"]
        io.write_rows_csv(rep.rows, prefix.with_suffix(".csv"), cols)
        result = rep.to_dict()
        summary = ", ".join(f"{r['method']}@{r['lambda_factor']:.3g}={r['risk']:.4g}"
                            for r in rep.rows if r["empirical_argmin"])
        print(f"sweep argmin cells: {summary}")
    else:
        rep = compare_bias(spec, reps=args.reps, seed=args.seed, threads=threads)
        io.write_rows_csv([{"rep": i, "ds_error": a, "gd_error": b}
                           for i, (a, b) in enumerate(zip(rep.ds_errors, rep.gd_errors))],
                          prefix.with_suffix(".csv"), ["rep", "ds_error", "gd_error"])
        result = rep.to_dict()
        print(f"mean l2 error: DS {rep.ds_mean_error:.4f}, Gauss-Dantzig {rep.gd_mean_error:.4f}; "
              f"DS signed bias {rep.ds_signed_bias:.4f}")
    io.write_report_json(io.make_report("bench", result, cfg.echo(), args.seed),
                         prefix.with_suffix(".json"))


def _gen(args, threads):
    cfg = RunConfig("gen", _params(args))
    spec = _spec_from(args)
    prob, beta = generate_synthetic(spec, args.seed)
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    io.write_matrix_csv(prob.X, d / "X.csv")
    io.write_vector_csv(prob.y, d / "y.csv", "y")
    io.write_vector_csv(beta, d / "beta.csv", "beta")
    result = {"spec": asdict(spec), "files": ["X.csv", "y.csv", "beta.csv"],
              "support": np.flatnonzero(beta), "generator": GENERATOR_NAME}
    io.write_report_json(io.make_report("gen", result, cfg.echo(), args.seed), d / "meta.json")
    print(f"wrote {prob.n}x{prob.p} problem (seed {args.seed}) to {d}")


_COMMANDS = {"solve": _solve, "uup": _uup, "corrsim": _corrsim, "bench": _bench, "gen": _gen}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr, end="")
        return EXIT_USAGE
    except SystemExit as exc:        # --help
        return int(exc.code or 0)
    threads = args.threads or default_threads()
    try:
        _COMMANDS[args.command](args, threads)
    except ConfigError as exc:
        print(f"dantzig {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleProblem as exc:
        print(f"dantzig {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SolverError as exc:
        print(f"dantzig {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DantzigError, OSError, ValueError) as exc:
        print(f"dantzig {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
