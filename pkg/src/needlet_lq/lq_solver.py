"""Coefficient-based l^q regularization over sample-anchored kernel expansions.

A problem couples m sample points, targets, a kernel, and (lambda, q, M).
The fitted function is f = sum_i a_i K(x_i, .), with coefficients minimizing

    (1/m) sum_j (f(x_j) - y_j)^2 + lambda sum_i |a_i|^q .

q = 2 has a closed form; every q > 0 is handled by proximal gradient descent
from a zero start, whose per-step scalar subproblems are solved exactly
(closed forms for q in {1, 2}, safeguarded bisection otherwise). Zero
initialization plus monotone descent make lambda * sum |a_i|^q <= mean(y^2)
a postcondition of every fit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

__all__ = [
    "LqProblem",
    "FitResult",
    "objective",
    "prox_lq",
    "solve_ridge",
    "solve_prox_grad",
    "ridge_coefficients_path",
    "project_M",
    "predict",
    "coefficient_bound_check",
]

_BISECT_ITERS = 80


def project_M(value, M: float):
    """Clamp to [-M, M]: M above, -M below, identity inside."""
    if M <= 0:
        raise ValueError(f"projection bound must be positive, got {M}")
    return np.clip(value, -M, M) if np.ndim(value) else float(np.clip(value, -M, M))


def _prox_array(a: np.ndarray, tau: float, q: float) -> np.ndarray:
    if tau == 0.0:
        return a.copy()
    if q == 1.0:
        return np.sign(a) * np.maximum(np.abs(a) - tau, 0.0)
    if q == 2.0:
        return a / (1.0 + 2.0 * tau)
    mag = np.abs(a)
    sgn = np.sign(a)
    if q > 1.0:
        # unique root of u + q tau u^{q-1} = |a| on [0, |a|]
        lo = np.zeros_like(mag)
        hi = mag.copy()
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            below = mid + q * tau * mid ** (q - 1.0) < mag
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return sgn * 0.5 * (lo + hi)
    # 0 < q < 1: either 0 or the larger stationary point, whichever wins
    u_floor = (q * (1.0 - q) * tau) ** (1.0 / (2.0 - q))
    g_floor = u_floor + q * tau * u_floor ** (q - 1.0)
    out = np.zeros_like(mag)
    active = mag > g_floor
    if np.any(active):
        am = mag[active]
        lo = np.full_like(am, u_floor)
        hi = am.copy()
        for _ in range(_BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            below = mid + q * tau * mid ** (q - 1.0) < am
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        u = 0.5 * (lo + hi)
        # keep the nonzero point only where it strictly beats zero; ties to 0
        wins = 0.5 * (u - am) ** 2 + tau * u**q < 0.5 * am**2
        out[active] = np.where(wins, u, 0.0)
    return sgn * out


def prox_lq(a, tau: float, q: float):
    """Global minimizer of u -> (u - a)^2 / 2 + tau |u|^q, elementwise.

    Soft thresholding at q = 1, linear shrinkage at q = 2, safeguarded scalar
    root-finding otherwise; for 0 < q < 1 the zero/nonzero comparison breaks
    ties toward 0.
    """
    if tau < 0:
        raise ValueError(f"prox weight must be nonnegative, got {tau}")
    if q <= 0:
        raise ValueError(f"penalty order must be positive, got {q}")
    arr = np.asarray(a, dtype=float)
    out = _prox_array(np.atleast_1d(arr), float(tau), float(q))
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


@dataclass
class LqProblem:
    """Sample points, targets, kernel, and the (lambda, q, M) triple.

    The Gram matrix over the sample points is computed eagerly (or injected,
    when many problems share one point set) and reused by all solvers;
    instances are treated as immutable afterwards.
    """

    points: np.ndarray
    targets: np.ndarray
    kernel: object
    lam: float
    q: float
    M: float
    gram: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.targets = np.asarray(self.targets, dtype=float).ravel()
        if len(self.targets) != len(self.points) or len(self.targets) < 1:
            raise ValueError(
                f"need matching nonempty samples, got {len(self.points)} points and {len(self.targets)} targets"
            )
        if self.lam <= 0:
            raise ValueError(f"regularization parameter must be positive, got {self.lam}")
        if self.q <= 0:
            raise ValueError(f"penalty order must be positive, got {self.q}")
        if self.M <= 0:
            raise ValueError(f"target bound must be positive, got {self.M}")
        worst = float(np.max(np.abs(self.targets)))
        if worst > self.M:
            warnings.warn(
                f"targets exceed the stated bound (max |y| = {worst:.6g} > M = {self.M:.6g}); clipping M upward",
                stacklevel=2,
            )
            self.M = worst
        if self.gram is None:
            self.gram = np.asarray(self.kernel.gram(self.points), dtype=float)
        elif self.gram.shape != (self.m, self.m):
            raise ValueError(f"injected Gram has shape {self.gram.shape}, expected {(self.m, self.m)}")

    @property
    def m(self) -> int:
        return len(self.targets)


@dataclass(frozen=True)
class FitResult:
    """Solver output: coefficients plus convergence diagnostics."""

    coeffs: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    converged: bool
    solver_id: str


def objective(problem: LqProblem, coeffs) -> float:
    """Empirical squared loss plus lambda * sum |a_i|^q."""
    a = np.asarray(coeffs, dtype=float)
    if a.shape != (problem.m,):
        raise ValueError(f"expected {problem.m} coefficients, got shape {a.shape}")
    r = problem.gram @ a - problem.targets
    return float(r @ r) / problem.m + problem.lam * float(np.sum(np.abs(a) ** problem.q))


def _power_iteration_sym(H: np.ndarray, rtol: float = 1e-10, max_iter: int = 10000) -> float:
    """Largest eigenvalue of a symmetric PSD matrix, deterministic start."""
    m = H.shape[0]
    v = 1.0 + 1e-3 * np.arange(m)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = H @ v
        lam_new = float(v @ w)
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        if abs(lam_new - lam) <= rtol * max(abs(lam_new), 1e-300):
            return lam_new
        lam = lam_new
    return lam


def solve_ridge(problem: LqProblem) -> FitResult:
    """Closed-form q = 2 solution of (G^T G + m lambda I) a = G^T y."""
    if problem.q != 2:
        raise ValueError(f"closed-form ridge requires q = 2, got q = {problem.q}")
    G = problem.gram
    m = problem.m
    H = G.T @ G
    rhs = G.T @ problem.targets
    shift = m * problem.lam
    top = _power_iteration_sym(H)
    cond_estimate = (top + shift) / shift
    if cond_estimate > 1.0 / np.finfo(float).eps:
        warnings.warn(
            f"ridge system nearly singular (condition estimate {cond_estimate:.3g}); "
            "with m*lambda > 0 this signals a kernel bug",
            stacklevel=2,
        )
    a = scipy.linalg.solve(H + shift * np.eye(m), rhs, assume_a="pos")
    trace = np.array([objective(problem, np.zeros(m)), objective(problem, a)])
    return FitResult(coeffs=a, objective_trace=trace, iterations=0, converged=True, solver_id="ridge-closed-form")


def ridge_coefficients_path(G: np.ndarray, y: np.ndarray, lambdas) -> np.ndarray:
    """q = 2 coefficient vectors for a whole lambda grid via one eigendecomposition.

    Returns an array of shape (len(lambdas), m); row j solves
    (G^T G + m lambda_j I) a = G^T y exactly.
    """
    m = len(y)
    H = G.T @ G
    evals, V = np.linalg.eigh(H)
    evals = np.clip(evals, 0.0, None)
    b = V.T @ (G.T @ y)
    lambdas = np.asarray(lambdas, dtype=float)
    return (V @ (b[:, None] / (evals[:, None] + m * lambdas[None, :]))).T


def solve_prox_grad(
    problem: LqProblem,
    max_iter: int = 20000,
    tol: float = 1e-8,
    obj_rtol: float = 1e-10,
    step: float | None = None,
    init: np.ndarray | None = None,
    backtracking: bool = False,
) -> FitResult:
    """Proximal gradient descent on the l^q objective from a zero start.

    By default the step is 1 over the Lipschitz constant (2/m) sigma_max(G)^2
    of the smooth part (power iteration, with a one-in-a-million inflation so
    the descent guarantee survives the eigenvalue estimate's tolerance);
    backtracking halves a unit step until the quadratic majorization holds.
    Stops when both the coefficient change and the relative objective change
    stagnate; non-convergence is reported via converged=False. For q >= 1 the
    limit is a global minimizer; for 0 < q < 1 a stationary point with
    objective at most the zero vector's.
    """
    G = problem.gram
    y = problem.targets
    m = problem.m
    lam, q = problem.lam, problem.q
    if step is None and not backtracking:
        top = _power_iteration_sym(G.T @ G)
        lip = (2.0 / m) * top * (1.0 + 1e-6)
        step = 1.0 / lip if lip > 0 else 1.0
    elif step is None:
        step = 1.0
    a = np.zeros(m) if init is None else np.asarray(init, dtype=float).copy()
    r = G @ a - y
    smooth = float(r @ r) / m
    obj = smooth + lam * float(np.sum(np.abs(a) ** q))
    trace = [obj]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        grad = (2.0 / m) * (G.T @ r)
        while True:
            a_new = _prox_array(a - step * grad, step * lam, q)
            r_new = G @ a_new - y
            smooth_new = float(r_new @ r_new) / m
            if not backtracking:
                break
            delta = a_new - a
            bound = smooth + float(grad @ delta) + float(delta @ delta) / (2.0 * step)
            if smooth_new <= bound + 1e-15 * max(1.0, abs(bound)):
                break
            step *= 0.5
        obj_new = smooth_new + lam * float(np.sum(np.abs(a_new) ** q))
        trace.append(obj_new)
        coeff_still = float(np.max(np.abs(a_new - a))) < tol
        obj_still = abs(obj_new - obj) <= obj_rtol * max(1.0, abs(obj))
        a, r, smooth, obj = a_new, r_new, smooth_new, obj_new
        if coeff_still and obj_still:
            converged = True
            break
    return FitResult(
        coeffs=a,
        objective_trace=np.asarray(trace),
        iterations=iterations,
        converged=converged,
        solver_id="prox-grad",
    )


def predict(fit: FitResult, problem: LqProblem, x, clamp: bool = False):
    """Evaluate sum_i a_i K(x_i, x), optionally clamped to [-M, M].

    x may be a single point (scalar for d = 1, length-d sequence otherwise)
    or a batch of points; single points come back as floats.
    """
    X = np.asarray(x, dtype=float)
    d = problem.points.shape[1]
    if X.ndim == 0:
        X = X.reshape(1, 1)
        single = True
    elif X.ndim == 1:
        single = d > 1 or X.shape == (1,)
        X = X.reshape(-1, 1) if d == 1 else X.reshape(1, -1)
    else:
        single = False
    vals = fit.coeffs @ problem.kernel.pairwise(problem.points, X)
    if clamp:
        vals = np.clip(vals, -problem.M, problem.M)
    return float(vals[0]) if single else vals


def coefficient_bound_check(fit: FitResult, problem: LqProblem) -> bool:
    """Whether lambda sum |a_i|^q <= mean(y^2), the zero-start descent bound."""
    penalty = problem.lam * float(np.sum(np.abs(fit.coeffs) ** problem.q))
    return penalty <= float(np.mean(problem.targets**2)) + 1e-10
