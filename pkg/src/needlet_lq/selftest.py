"""Fast invariant suites for every module, runnable from the CLI.

Each check returns (name, passed, detail); the CLI prints one line per check
and exits nonzero when any fails. Sizes are trimmed so the whole battery runs
in seconds; the pytest suite covers the full-size variants.
"""

from __future__ import annotations

import math

import numpy as np

from . import cubature_mz, experiments, lq_solver, quadrature, special_functions
from .needlet_kernel import NeedletKernel, ReproducingKernel, eta_eval

__all__ = ["run_all"]


def _series_gegenbauer(mu: float, kmax: int, t: float) -> np.ndarray:
    """Taylor coefficients of (1 - 2tz + z^2)^(-mu) up to order kmax."""
    coeffs = np.zeros(kmax + 1)
    # expand sum_j (mu)_j u^j / j! with u = z (2t - z)
    for j in range(kmax + 1):
        base = special_functions.pochhammer(mu, j) / math.factorial(j)
        for i in range(j + 1):
            k = j + i
            if k <= kmax:
                coeffs[k] += base * math.comb(j, i) * (2.0 * t) ** (j - i) * (-1.0) ** i
    return coeffs


def _check_orthonormality() -> tuple[str, bool, str]:
    worst = 0.0
    for d in (1, 2, 3):
        rule = quadrature.gauss_jacobi_rule(10, (d - 1) / 2.0)
        table = special_functions.u_table(d, 8, rule.nodes)
        gram = (table * rule.weights) @ table.T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(9)))))
    return "orthonormality d in {1,2,3}, degrees <= 8", worst <= 1e-9, f"max deviation {worst:.2e}"


def _check_series_agreement() -> tuple[str, bool, str]:
    rng = np.random.default_rng(0)
    worst = 0.0
    for mu in (0.5, 1.0, 1.5):
        for t in rng.uniform(-1, 1, 10):
            series = _series_gegenbauer(mu, 6, float(t))
            recur = special_functions.gegenbauer_table(mu, 6, np.array(t))
            worst = max(worst, float(np.max(np.abs(series - recur) / (1.0 + np.abs(series)))))
    return "recurrence matches generating-function series", worst <= 1e-10, f"max rel dev {worst:.2e}"


def _check_zonal_sum_identity() -> tuple[str, bool, str]:
    # the constant carries the slice volume vol(B^{d-1})
    rng = np.random.default_rng(1)
    d = 3
    vol = quadrature.ball_volume(d - 1)
    worst = 0.0
    for k in range(5):
        vk = special_functions.v_coeff(k, d)
        u1 = special_functions.u_eval(k, d, 1.0)
        for t in rng.uniform(-1, 1, 8):
            lhs = sum(special_functions.addition_kernel_eval(j, d, float(t)) for j in range(k, -1, -2))
            rhs = vol * vk**2 / u1 * special_functions.u_eval(k, d, float(t))
            worst = max(worst, abs(lhs - rhs))
    return "zonal kernel telescoping sum (d=3)", worst <= 1e-9, f"max abs dev {worst:.2e}"


def _check_quadrature_moments() -> tuple[str, bool, str]:
    s2 = quadrature.sphere_rule(2, 8)
    s3 = quadrature.sphere_rule(3, 4)
    b2 = quadrature.ball_rule(2, 4)
    checks = [
        abs(float(np.sum(s2.weights)) - 2 * math.pi),
        abs(float(s2.weights @ s2.nodes[:, 0] ** 2) - math.pi),
        abs(float(s3.weights @ s3.nodes[:, 2] ** 2) - 4 * math.pi / 3),
        abs(float(np.sum(b2.weights)) - math.pi),
        abs(float(b2.weights @ b2.nodes[:, 0] ** 2) - math.pi / 4),
    ]
    worst = max(checks)
    return "sphere/ball moments", worst <= 1e-10, f"max abs dev {worst:.2e}"


def _check_lift_agreement() -> tuple[str, bool, str]:
    rng = np.random.default_rng(2)
    worst = 0.0
    for d in (1, 2):
        direct = quadrature.ball_rule(d, 6)
        lifted = quadrature.lift_ball_rule_from_sphere(d, 6)
        exps = cubature_mz.ball_basis_exponents(6, d)
        for _ in range(10):
            c = rng.standard_normal(len(exps))
            va = float((c @ cubature_mz.eval_monomials(exps, direct.nodes)) @ direct.weights)
            vb = float((c @ cubature_mz.eval_monomials(exps, lifted.nodes)) @ lifted.weights)
            worst = max(worst, abs(va - vb) / (1.0 + abs(va)))
    return "ball rule vs sphere lift", worst <= 1e-9, f"max rel dev {worst:.2e}"


def _check_projection_identities() -> tuple[str, bool, str]:
    rng = np.random.default_rng(3)
    d, worst = 2, 0.0
    vol = quadrature.ball_volume(d - 1)
    for k in range(1, 7):
        ball = quadrature.ball_rule(d, 2 * k)
        u1 = special_functions.u_eval(k, d, 1.0)
        for _ in range(3):
            xi = cubature_mz.sample_uniform_sphere(rng, 1, d)[0]
            eta = cubature_mz.sample_uniform_sphere(rng, 1, d)[0]
            ua = special_functions.u_table(d, k, np.clip(ball.nodes @ xi, -1, 1))[k]
            ub = special_functions.u_table(d, k, np.clip(ball.nodes @ eta, -1, 1))[k]
            lhs = float(ball.weights @ (ua * ub))
            rhs = vol * special_functions.u_eval(k, d, float(xi @ eta)) / u1
            worst = max(worst, abs(lhs - rhs))
    return "ball product integral identity (d=2)", worst <= 1e-8, f"max abs dev {worst:.2e}"


def _check_cutoff() -> tuple[str, bool, str]:
    ok = eta_eval(0.5) == 1.0 and eta_eval(2.3) == 0.0 and abs(eta_eval(1.5) - 0.5) < 1e-15
    # exp(-1/s) underflows within ~0.03 of the endpoints, so strict decrease
    # is only observable on the interior of the transition
    ts = np.linspace(1.05, 1.95, 200)
    vals = np.array([eta_eval(float(t)) for t in ts])
    ok = ok and bool(np.all(np.diff(vals) < 0)) and bool(np.all((vals >= 0) & (vals <= 1)))
    wide = np.array([eta_eval(float(t)) for t in np.linspace(0.0, 2.5, 400)])
    ok = ok and bool(np.all(np.diff(wide) <= 0.0))
    return "admissible cutoff shape", ok, "plateau/support/decrease verified"


def _check_reproducing() -> tuple[str, bool, str]:
    rng = np.random.default_rng(4)
    worst = 0.0
    for d, n in ((1, 4), (2, 4)):
        kern = NeedletKernel(d, n)
        ball = quadrature.ball_rule(d, 3 * n)
        exps = cubature_mz.ball_basis_exponents(n, d)
        for _ in range(5):
            c = rng.standard_normal(len(exps))
            x = cubature_mz.sample_uniform_ball(rng, 1, d)[0]
            val = kern.apply(lambda pts: c @ cubature_mz.eval_monomials(exps, pts), x, ball)
            exact = float(c @ cubature_mz.eval_monomials(exps, x[None, :]))
            sup = float(np.max(np.abs(c @ cubature_mz.eval_monomials(exps, ball.nodes))))
            worst = max(worst, abs(val - exact) / (1.0 + sup))
    return "polynomial reproduction through the kernel operator", worst <= 1e-7, f"max scaled dev {worst:.2e}"


def _check_gram_psd() -> tuple[str, bool, str]:
    rng = np.random.default_rng(5)
    worst = 0.0
    for d in (1, 2):
        kern = NeedletKernel(d, 8)
        for _ in range(5):
            pts = cubature_mz.sample_uniform_ball(rng, 15, d)
            g = kern.gram(pts)
            lam_min = float(np.linalg.eigvalsh(g)[0])
            worst = min(worst, lam_min / float(np.max(np.diagonal(g))))
    return "gram positive semidefiniteness", worst >= -1e-8, f"worst scaled min eigenvalue {worst:.2e}"


def _check_mode_support() -> tuple[str, bool, str]:
    kern = NeedletKernel(2, 4)
    head = np.allclose(kern.coeffs[: kern.n + 1], kern.constants.v[: kern.n + 1] ** 2)
    tail = np.all(kern.coeffs[2 * kern.n :] == 0.0)
    trunc = ReproducingKernel(2, 4)
    return "mode coefficient support", bool(head and tail and len(trunc.coeffs) == 5), "head/tail as constructed"


def _check_prox() -> tuple[str, bool, str]:
    rng = np.random.default_rng(6)
    grid = np.arange(-10.0, 10.0001, 1e-3)
    worst = 0.0
    for q in (0.5, 1.0, 1.5, 2.0, 4.0):
        for _ in range(40):
            a = float(rng.uniform(-5, 5))
            tau = float(rng.uniform(0, 3))
            u = lq_solver.prox_lq(a, tau, q)
            vals = 0.5 * (grid - a) ** 2 + tau * np.abs(grid) ** q
            worst = max(worst, 0.5 * (u - a) ** 2 + tau * abs(u) ** q - float(vals.min()))
    return "prox beats dense grid", worst <= 1e-10, f"worst gap {worst:.2e}"


def _check_solvers() -> tuple[str, bool, str]:
    rng = np.random.default_rng(7)
    kern = NeedletKernel(1, 4)
    pts = rng.uniform(-1, 1, (12, 1))
    y = np.sin(2.0 * pts[:, 0]) + 0.1 * rng.standard_normal(12)
    problem = lq_solver.LqProblem(points=pts, targets=y, kernel=kern, lam=0.5, q=2.0, M=2.0)
    ridge = lq_solver.solve_ridge(problem)
    pg = lq_solver.solve_prox_grad(problem, max_iter=50000, tol=1e-11, obj_rtol=1e-13)
    agree = float(np.max(np.abs(ridge.coeffs - pg.coeffs))) <= 1e-6 * (1 + float(np.max(np.abs(ridge.coeffs))))
    descent = bool(np.all(np.diff(pg.objective_trace) <= 1e-12))
    bound = lq_solver.coefficient_bound_check(pg, problem) and lq_solver.coefficient_bound_check(ridge, problem)
    return "ridge agreement, descent, coefficient bound", agree and descent and bound, (
        f"agree={agree} descent={descent} bound={bound}"
    )


def _check_cubature_exactness() -> tuple[str, bool, str]:
    rng = np.random.default_rng(8)
    witness = cubature_mz.min_norm_weights(cubature_mz.sample_uniform_ball(rng, 200, 2), 4, 2)
    return "random-node exactness weights", witness.max_residual <= 1e-8, f"residual {witness.max_residual:.2e}"


def _check_mz_concentration() -> tuple[str, bool, str]:
    rows = cubature_mz.mz_check(2, 4, 5000, 2.0, trials=4, seed=9)
    lo = min(r["min_ratio"] for r in rows)
    hi = max(r["max_ratio"] for r in rows)
    return "sampled norm ratios near 1", 0.5 <= lo <= hi <= 1.5, f"bracket [{lo:.3f}, {hi:.3f}]"


def _check_dataset_determinism() -> tuple[str, bool, str]:
    spec = experiments.DatasetSpec(target="sinc-1d", d=1, m_train=16, m_test=8, noise_var=0.1, seed=11)
    a, b = experiments.gen_data(spec), experiments.gen_data(spec)
    same = all(
        np.array_equal(getattr(a, f), getattr(b, f)) for f in ("x_train", "y_train", "x_test", "y_test")
    )
    return "dataset generation is deterministic", same, "identical draws for identical spec"


def _check_clamping_never_hurts() -> tuple[str, bool, str]:
    kern = NeedletKernel(1, 4)
    spec = experiments.DatasetSpec(target="sinc-1d", d=1, m_train=24, m_test=64, noise_var=0.1, seed=13)
    data = experiments.gen_data(spec, noiseless_test=True)
    bound = max(1.0, float(np.max(np.abs(data.y_train))))
    problem = lq_solver.LqProblem(points=data.x_train, targets=data.y_train, kernel=kern, lam=1e-6, q=2.0, M=bound)
    fit = lq_solver.solve_ridge(problem)
    raw = experiments.test_error(fit, problem, data.x_test, data.y_test, clamp=False)
    clamped = experiments.test_error(fit, problem, data.x_test, data.y_test, clamp=True)
    return "clamping never increases test error", clamped <= raw + 1e-12, f"raw {raw:.4g} clamped {clamped:.4g}"


_CHECKS = [
    _check_orthonormality,
    _check_series_agreement,
    _check_zonal_sum_identity,
    _check_quadrature_moments,
    _check_lift_agreement,
    _check_projection_identities,
    _check_cutoff,
    _check_reproducing,
    _check_gram_psd,
    _check_mode_support,
    _check_prox,
    _check_solvers,
    _check_cubature_exactness,
    _check_mz_concentration,
    _check_dataset_determinism,
    _check_clamping_never_hurts,
]


def run_all(verbose: bool = True) -> bool:
    """Run every check; print one PASS/FAIL line per check when verbose."""
    all_ok = True
    for check in _CHECKS:
        name, ok, detail = check()
        all_ok = all_ok and ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
