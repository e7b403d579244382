"""Command-line interface: selftest, kernel evaluation/profiles, fitting, and
the sweep/phase/mz experiment protocols, all emitting versioned CSV."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import csvio, cubature_mz, experiments, selftest
from .lq_solver import LqProblem, objective, solve_prox_grad, solve_ridge
from .needlet_kernel import NeedletKernel, ball_metric

_SUBCOMMANDS = ("selftest", "kernel-eval", "kernel-profile", "fit", "sweep-lambda", "phase", "mz-check")
_BOOLEAN_FLAGS = ("noiseless_test", "compare_rmse", "clamp_predictions")


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_kernel(text: str) -> experiments.KernelChoice:
    """Parse 'needlet:8', 'gaussian:0.1', or 'laplacian:10'."""
    kind, _, param = text.partition(":")
    defaults = {"needlet": 8.0, "gaussian": 0.1, "laplacian": 10.0}
    if kind not in defaults:
        raise argparse.ArgumentTypeError(f"unknown kernel {kind!r}")
    return experiments.KernelChoice(kind, float(param) if param else defaults[kind])


def _load_config(path: str) -> dict:
    """Plain-text key=value file; '#' starts a comment, keys use - or _."""
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {raw!r} is not key=value")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _read_samples_csv(path: str, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Read columns x_1..x_d, y from a CSV with optional '#' comment lines."""
    header = None
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            rows.append([float(tok) for tok in line.split(",")])
    if header is None or not rows:
        raise ValueError(f"no data rows found in {path}")
    want = [f"x_{j}" for j in range(1, d + 1)] + ["y"]
    try:
        cols = [header.index(name) for name in want]
    except ValueError as exc:
        raise ValueError(f"expected columns {want}, found {header}") from exc
    data = np.asarray(rows, dtype=float)
    return data[:, cols[:-1]], data[:, cols[-1]]


def _cmd_selftest(args) -> int:
    return 0 if selftest.run_all(verbose=True) else 1


def _cmd_kernel_eval(args) -> int:
    kernel = NeedletKernel(args.d, args.n)
    x = np.asarray(_parse_float_list(args.x))
    y = np.asarray(_parse_float_list(args.y))
    print(csvio.format_cell(kernel.eval(x, y)))
    return 0


def _cmd_kernel_profile(args) -> int:
    kernel = NeedletKernel(args.d, args.n)
    rng = np.random.default_rng(args.seed)
    rows = []
    for _ in range(args.pairs):
        x = cubature_mz.sample_uniform_ball(rng, 1, args.d)[0]
        y = cubature_mz.sample_uniform_ball(rng, 1, args.d)[0]
        rows.append(
            {
                "rho": ball_metric(x, y),
                "abs_kernel": abs(kernel.eval(x, y)),
                "normalized_profile": kernel.localization_profile(x, y, args.l),
            }
        )
    rows.sort(key=lambda r: r["rho"])
    csvio.write_rows(args.out, ["rho", "abs_kernel", "normalized_profile"], rows)
    return 0


def _cmd_fit(args) -> int:
    points, targets = _read_samples_csv(args.data, args.d)
    kernel = NeedletKernel(args.d, args.n)
    M = args.clamp if args.clamp is not None else max(1.0, float(np.max(np.abs(targets))))
    problem = LqProblem(points=points, targets=targets, kernel=kernel, lam=args.lam, q=args.q, M=M)
    fit = solve_ridge(problem) if args.q == 2.0 else solve_prox_grad(problem, max_iter=args.max_iter)
    rows = [{"index": i, "coeff": float(c)} for i, c in enumerate(fit.coeffs)]
    csvio.write_rows(args.out, ["index", "coeff"], rows)
    summary = (
        f"objective={csvio.format_cell(objective(problem, fit.coeffs))} "
        f"nnz={experiments.sparsity_count(fit)} iterations={fit.iterations} "
        f"converged={int(fit.converged)}"
    )
    print(summary, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return 0


def _cmd_sweep_lambda(args) -> int:
    spec = experiments.DatasetSpec(
        target=args.target,
        d=args.d,
        m_train=args.m_train,
        m_test=args.m_test,
        noise_var=args.noise_var,
        seed=args.seed,
    )
    data = experiments.gen_data(spec, noiseless_test=args.noiseless_test)
    lambdas = np.logspace(np.log10(args.lambda_min), np.log10(args.lambda_max), args.lambda_count)
    rows = experiments.sweep_lambda(
        data,
        args.kernel,
        args.q_list,
        lambdas,
        clamp_M=args.clamp,
        solver_opts={"max_iter": args.max_iter},
    )
    csvio.write_rows(args.out, ["kernel", "q", "lambda", "test_rmse", "nnz", "iterations", "converged"], rows)
    return 0


def _cmd_phase(args) -> int:
    eps_values = tuple(np.logspace(np.log10(args.eps_min), np.log10(args.eps_max), args.eps_count))
    config = experiments.PhaseConfig(
        d=args.d,
        n=args.n,
        q=args.q,
        m_values=tuple(args.m_values),
        eps_values=eps_values,
        repeats=args.repeats,
        seed=args.seed,
        m_test=args.m_test,
        noise_var=args.noise_var,
        compare_rmse=args.compare_rmse,
        clamp=args.clamp_predictions,
    )
    grid = experiments.phase_transition(config)
    rows = [
        {"m": int(m), "eps": float(eps), "success_fraction": float(grid.success[mi, ei])}
        for mi, m in enumerate(grid.m_values)
        for ei, eps in enumerate(grid.eps_values)
    ]
    csvio.write_rows(args.out, ["m", "eps", "success_fraction"], rows)
    if args.band_out:
        band_rows = [
            {
                "m": int(m),
                "eps_low": float(grid.band[mi, 0]),
                "eps_high": float(grid.band[mi, 1]),
                "width": float(grid.band[mi, 1] - grid.band[mi, 0]),
            }
            for mi, m in enumerate(grid.m_values)
        ]
        csvio.write_rows(args.band_out, ["m", "eps_low", "eps_high", "width"], band_rows)
    return 0


def _cmd_mz_check(args) -> int:
    rows = cubature_mz.mz_check(args.d, args.n, args.m, args.p, args.trials, args.seed)
    csvio.write_rows(args.out, ["trial", "min_ratio", "max_ratio", "residual", "weight_norm"], rows)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="needlet-lq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="CSV output path ('-' or omitted: stdout)")
        p.add_argument("--threads", type=int, default=1, help="worker threads (cells are seeded per-index; execution is serial)")

    p = sub.add_parser("selftest", help="run all module invariant suites")
    common(p)
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("kernel-eval", help="print one kernel value")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", required=True, help="comma-separated coordinates")
    p.add_argument("--y", required=True, help="comma-separated coordinates")
    p.set_defaults(func=_cmd_kernel_eval)

    p = sub.add_parser("kernel-profile", help="CSV of localization profile over random pairs")
    common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--pairs", type=int, default=200)
    p.set_defaults(func=_cmd_kernel_profile)

    p = sub.add_parser("fit", help="fit l^q coefficients to CSV samples")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--data", required=True, help="CSV with columns x_1..x_d, y")
    p.add_argument("--clamp", type=float, default=None, help="projection bound M")
    p.add_argument("--max-iter", type=int, default=20000)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("sweep-lambda", help="test-error table over a (q, lambda) grid")
    common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--target", default="sinc-1d")
    p.add_argument("--m-train", type=int, default=256)
    p.add_argument("--m-test", type=int, default=256)
    p.add_argument("--noise-var", type=float, default=0.1)
    p.add_argument("--noiseless-test", action="store_true")
    p.add_argument("--kernel", type=_parse_kernel, default=experiments.KernelChoice("needlet", 8))
    p.add_argument("--q-list", type=_parse_float_list, default=[0.5, 2.0 / 3.0, 1.0, 2.0])
    p.add_argument("--lambda-min", type=float, default=1e-8)
    p.add_argument("--lambda-max", type=float, default=1.0)
    p.add_argument("--lambda-count", type=int, default=20)
    p.add_argument("--clamp", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=20000)
    p.set_defaults(func=_cmd_sweep_lambda)

    p = sub.add_parser("phase", help="success-fraction grid with lambda = eps/m")
    common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--m-values", type=_parse_int_list, default=list(range(10, 101, 10)))
    p.add_argument("--eps-min", type=float, default=1e-3)
    p.add_argument("--eps-max", type=float, default=1.0)
    p.add_argument("--eps-count", type=int, default=20)
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--m-test", type=int, default=256)
    p.add_argument("--noise-var", type=float, default=0.0)
    p.add_argument("--compare-rmse", action="store_true", help="success = rmse < eps instead of rmse^2 < eps")
    p.add_argument("--clamp-predictions", action="store_true")
    p.add_argument("--band-out", default=None, help="also write per-m band CSV here")
    p.set_defaults(func=_cmd_phase)

    p = sub.add_parser("mz-check", help="discrete vs continuous weighted norms on random nodes")
    common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=1000)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=_cmd_mz_check)

    return parser


def _inject_config(argv: list[str]) -> list[str]:
    """Turn --config key=value pairs into option tokens placed right after the
    subcommand, so explicit command-line flags (which come later) win."""
    config_path = None
    cleaned = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise SystemExit("--config needs a file path")
            config_path = argv[i + 1]
            i += 2
            continue
        if tok.startswith("--config="):
            config_path = tok.split("=", 1)[1]
            i += 1
            continue
        cleaned.append(tok)
        i += 1
    if config_path is None:
        return cleaned
    overrides = _load_config(config_path)
    pos = next((j for j, t in enumerate(cleaned) if t in _SUBCOMMANDS), None)
    if pos is None:
        raise SystemExit("--config requires a subcommand")
    inject: list[str] = []
    for key, raw in overrides.items():
        flag = "--" + key.replace("_", "-")
        if key in _BOOLEAN_FLAGS:
            if raw.lower() in ("1", "true", "yes", "on"):
                inject.append(flag)
        else:
            inject.extend([flag, raw])
    return cleaned[: pos + 1] + inject + cleaned[pos + 1 :]


def main(argv=None) -> int:
    argv = list(argv) if argv is not None else sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(_inject_config(argv))
    if args.threads < 1:
        raise SystemExit("--threads must be >= 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
