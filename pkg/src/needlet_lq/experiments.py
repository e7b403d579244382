"""Data generation and the three experiment protocols.

Covers the Sinc regression data model (uniform inputs, Gaussian target
noise), baseline Gaussian/Laplacian kernels, lambda-sweep test-error tables,
the (m, epsilon) phase-transition grid with lambda = epsilon/m, and the
empirical accuracy-confidence curve derived from it. Every cell of every
protocol derives its own generator from (base seed, cell indices), so results
are independent of execution order and reruns are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import isotonic_regression

from .lq_solver import (
    LqProblem,
    predict,
    ridge_coefficients_path,
    solve_prox_grad,
    solve_ridge,
)
from .needlet_kernel import NeedletKernel

__all__ = [
    "DatasetSpec",
    "Dataset",
    "KernelChoice",
    "GaussianKernel",
    "LaplacianKernel",
    "PhaseConfig",
    "PhaseGrid",
    "gen_data",
    "test_error",
    "sparsity_count",
    "sweep_lambda",
    "phase_transition",
    "accuracy_confidence_curve",
    "learning_curve",
    "cell_rng",
]

_TARGETS = {"sinc-1d": 1, "sinc-2d": 2}


def _sinc(x: np.ndarray) -> np.ndarray:
    # sin(x)/x with the limit value 1 at 0 (np.sinc is the normalized variant)
    return np.sinc(x / math.pi)


def _target_values(target: str, X: np.ndarray) -> np.ndarray:
    if target == "sinc-1d":
        return _sinc(X[:, 0])
    if target == "sinc-2d":
        return _sinc(X[:, 0]) * _sinc(X[:, 1])
    raise ValueError(f"unknown target {target!r}")


@dataclass(frozen=True)
class DatasetSpec:
    """Recipe for one train/test draw; identical spec + seed => identical bytes."""

    target: str = "sinc-1d"
    d: int = 1
    m_train: int = 256
    m_test: int = 256
    noise_var: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.target not in _TARGETS:
            raise ValueError(f"unknown target {self.target!r}; choose from {sorted(_TARGETS)}")
        if _TARGETS[self.target] != self.d:
            raise ValueError(f"target {self.target!r} needs d = {_TARGETS[self.target]}, got d = {self.d}")
        if self.m_train < 1:
            raise ValueError(f"need at least one training sample, got {self.m_train}")
        if self.noise_var < 0:
            raise ValueError(f"noise variance must be nonnegative, got {self.noise_var}")


@dataclass(frozen=True)
class Dataset:
    x_train: np.ndarray
    y_train: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray
    d: int


def _sample_inputs(rng: np.random.Generator, m: int, d: int) -> np.ndarray:
    """Uniform inputs on the kernel's domain: [-1,1] for d=1, the disk for d=2."""
    if d == 1:
        return rng.uniform(-1.0, 1.0, (m, 1))
    theta = rng.uniform(0.0, 2.0 * math.pi, m)
    r = np.sqrt(rng.uniform(0.0, 1.0, m))
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_data(spec: DatasetSpec, noiseless_test: bool = False) -> Dataset:
    """Draw a dataset: uniform inputs, target values plus N(0, noise_var) noise.

    Test targets are noisy by default (they are drawn the same way as the
    training set); noiseless_test drops the test noise without changing any
    other draw, for norm-estimation use.
    """
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    sigma = math.sqrt(spec.noise_var)
    x_train = _sample_inputs(rng, spec.m_train, spec.d)
    y_train = _target_values(spec.target, x_train) + sigma * rng.standard_normal(spec.m_train)
    x_test = _sample_inputs(rng, spec.m_test, spec.d)
    test_noise = sigma * rng.standard_normal(spec.m_test)
    y_test = _target_values(spec.target, x_test)
    if not noiseless_test:
        y_test = y_test + test_noise
    return Dataset(x_train=x_train, y_train=y_train, x_test=x_test, y_test=y_test, d=spec.d)


def _as_points(points, d: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1) if d == 1 else pts.reshape(1, -1)
    if pts.shape[1] != d:
        raise ValueError(f"expected points of dimension {d}, got shape {pts.shape}")
    return pts


@dataclass(frozen=True)
class GaussianKernel:
    """exp(-||x - y||^2 / width)."""

    d: int
    width: float = 0.1

    def pairwise(self, X, Y) -> np.ndarray:
        X = _as_points(X, self.d)
        Y = _as_points(Y, self.d)
        sq = np.maximum(
            np.sum(X * X, axis=1)[:, None] + np.sum(Y * Y, axis=1)[None, :] - 2.0 * (X @ Y.T), 0.0
        )
        return np.exp(-sq / self.width)

    def gram(self, points) -> np.ndarray:
        g = self.pairwise(points, points)
        return 0.5 * (g + g.T)


@dataclass(frozen=True)
class LaplacianKernel:
    """exp(-||x - y|| / scale)."""

    d: int
    scale: float = 10.0

    def pairwise(self, X, Y) -> np.ndarray:
        X = _as_points(X, self.d)
        Y = _as_points(Y, self.d)
        sq = np.maximum(
            np.sum(X * X, axis=1)[:, None] + np.sum(Y * Y, axis=1)[None, :] - 2.0 * (X @ Y.T), 0.0
        )
        return np.exp(-np.sqrt(sq) / self.scale)

    def gram(self, points) -> np.ndarray:
        g = self.pairwise(points, points)
        return 0.5 * (g + g.T)


@dataclass(frozen=True)
class KernelChoice:
    """needlet(n) | gaussian(width) | laplacian(scale)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in ("needlet", "gaussian", "laplacian"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.param <= 0:
            raise ValueError(f"kernel parameter must be positive, got {self.param}")

    def build(self, d: int):
        if self.kind == "needlet":
            return NeedletKernel(d, int(self.param))
        if self.kind == "gaussian":
            return GaussianKernel(d, self.param)
        return LaplacianKernel(d, self.param)

    def label(self) -> str:
        param = int(self.param) if self.kind == "needlet" else self.param
        return f"{self.kind}({param})"


def test_error(fit, problem: LqProblem, x_test, y_test, clamp: bool = False) -> float:
    """Root mean square prediction error over a test set."""
    y_test = np.asarray(y_test, dtype=float).ravel()
    if len(y_test) == 0:
        raise ValueError("test set must be nonempty")
    preds = np.atleast_1d(predict(fit, problem, x_test, clamp=clamp))
    return float(np.sqrt(np.mean((preds - y_test) ** 2)))


def sparsity_count(fit, tol: float = 1e-6) -> int:
    """Number of coefficients with magnitude above tol."""
    if tol <= 0:
        raise ValueError(f"sparsity tolerance must be positive, got {tol}")
    return int(np.sum(np.abs(fit.coeffs) > tol))


def _fit_problem(problem: LqProblem, solver_opts: dict | None):
    if problem.q == 2.0:
        return solve_ridge(problem)
    return solve_prox_grad(problem, **(solver_opts or {}))


def sweep_lambda(
    data: Dataset,
    kernel: KernelChoice,
    q_list,
    lambda_grid,
    clamp_M: float | None = None,
    solver_opts: dict | None = None,
) -> list[dict]:
    """Test-error table over a (q, lambda) grid, one shared Gram per kernel.

    Rows: kernel, q, lambda, test_rmse, nnz, iterations, converged. Per-cell
    solver failures are recorded in-row (converged = 0) and the sweep goes on.
    """
    q_list = list(q_list)
    lambda_grid = list(lambda_grid)
    if not q_list or not lambda_grid:
        raise ValueError("q_list and lambda_grid must be nonempty")
    built = kernel.build(data.d)
    gram = built.gram(data.x_train)
    M = clamp_M if clamp_M is not None else float(np.max(np.abs(data.y_train)))
    clamp = clamp_M is not None
    rows = []
    for q in q_list:
        for lam in lambda_grid:
            problem = LqProblem(
                points=data.x_train,
                targets=data.y_train,
                kernel=built,
                lam=float(lam),
                q=float(q),
                M=M,
                gram=gram,
            )
            fit = _fit_problem(problem, solver_opts)
            rows.append(
                {
                    "kernel": kernel.label(),
                    "q": float(q),
                    "lambda": float(lam),
                    "test_rmse": test_error(fit, problem, data.x_test, data.y_test, clamp=clamp),
                    "nnz": sparsity_count(fit),
                    "iterations": fit.iterations,
                    "converged": fit.converged,
                }
            )
    return rows


def cell_rng(base_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one grid cell; order of execution is irrelevant."""
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=tuple(key)))


def _default_eps_grid() -> tuple[float, ...]:
    return tuple(np.logspace(-3.0, 0.0, 20))


@dataclass(frozen=True)
class PhaseConfig:
    """Phase-transition protocol: fit with lambda = eps/m, score against eps."""

    d: int = 1
    n: int = 8
    q: float = 2.0
    m_values: tuple = tuple(range(10, 101, 10))
    eps_values: tuple = field(default_factory=_default_eps_grid)
    repeats: int = 20
    seed: int = 0
    m_test: int = 256
    noise_var: float = 0.0
    target: str = "sinc-1d"
    compare_rmse: bool = False
    clamp: bool = False
    solver_opts: dict | None = None


@dataclass(frozen=True)
class PhaseGrid:
    """Success fractions over the (m, eps) grid plus the 0.1/0.9 band per m."""

    m_values: np.ndarray
    eps_values: np.ndarray
    repeats: int
    success: np.ndarray
    band: np.ndarray

    def band_widths(self) -> np.ndarray:
        return self.band[:, 1] - self.band[:, 0]


def _isotone_increasing(values: np.ndarray) -> np.ndarray:
    return np.asarray(isotonic_regression(np.asarray(values, dtype=float)).x)


def _crossing(eps: np.ndarray, smoothed: np.ndarray, level: float) -> float:
    """Epsilon where the isotone success curve reaches level (log-interpolated)."""
    if smoothed[0] >= level:
        return float(eps[0])
    above = smoothed >= level
    if not np.any(above):
        return float("nan")
    i = int(np.argmax(above))
    s0, s1 = smoothed[i - 1], smoothed[i]
    t = (level - s0) / (s1 - s0)
    return float(eps[i - 1] * (eps[i] / eps[i - 1]) ** t)


def phase_transition(config: PhaseConfig) -> PhaseGrid:
    """Success-fraction grid per the fixed protocol lambda = eps/m.

    Success in a cell means the test RMSE beats the tolerance: by default
    delta^2 < eps (squared-norm scale); compare_rmse switches to delta < eps.
    The band per m interpolates where the isotone-smoothed success fraction
    crosses 0.1 and 0.9; a transition completed below the grid minimum gives
    both crossings at the smallest eps (zero width).
    """
    kernel = NeedletKernel(config.d, config.n)
    m_values = np.asarray(config.m_values, dtype=int)
    eps_values = np.asarray(config.eps_values, dtype=float)
    if len(m_values) == 0 or len(eps_values) == 0 or config.repeats < 1:
        raise ValueError("phase grid must have m values, eps values, and repeats >= 1")
    success = np.zeros((len(m_values), len(eps_values)))
    for mi, m in enumerate(m_values):
        for ei, eps in enumerate(eps_values):
            hits = 0
            for rep in range(config.repeats):
                seed = int(cell_rng(config.seed, mi, ei, rep).integers(0, 2**63 - 1))
                spec = DatasetSpec(
                    target=config.target,
                    d=config.d,
                    m_train=int(m),
                    m_test=config.m_test,
                    noise_var=config.noise_var,
                    seed=seed,
                )
                data = gen_data(spec)
                problem = LqProblem(
                    points=data.x_train,
                    targets=data.y_train,
                    kernel=kernel,
                    lam=float(eps) / float(m),
                    q=config.q,
                    M=max(1.0, float(np.max(np.abs(data.y_train)))),
                )
                fit = _fit_problem(problem, config.solver_opts)
                delta = test_error(fit, problem, data.x_test, data.y_test, clamp=config.clamp)
                score = delta if config.compare_rmse else delta**2
                hits += score < eps
            success[mi, ei] = hits / config.repeats
    band = np.empty((len(m_values), 2))
    for mi in range(len(m_values)):
        smoothed = _isotone_increasing(success[mi])
        band[mi, 0] = _crossing(eps_values, smoothed, 0.1)
        band[mi, 1] = _crossing(eps_values, smoothed, 0.9)
    return PhaseGrid(
        m_values=m_values,
        eps_values=eps_values,
        repeats=config.repeats,
        success=success,
        band=band,
    )


def accuracy_confidence_curve(grid: PhaseGrid) -> list[dict]:
    """Empirical failure probabilities 1 - success, one row per (m, eps) cell."""
    rows = []
    for mi, m in enumerate(grid.m_values):
        for ei, eps in enumerate(grid.eps_values):
            rows.append(
                {
                    "m": int(m),
                    "eps": float(eps),
                    "failure_probability": float(1.0 - grid.success[mi, ei]),
                }
            )
    return rows


def learning_curve(
    m_values=(32, 64, 128, 256, 512),
    n: int = 8,
    trials: int = 20,
    lambda_grid=None,
    noise_var: float = 0.1,
    m_test: int = 512,
    seed: int = 0,
    clamp_M: float = 1.0,
) -> list[dict]:
    """Median best-over-lambda test RMSE per training size (q = 2, d = 1 Sinc).

    Test targets are noiseless so the RMSE estimates the distance to the
    regression function; predictions are clamped to [-clamp_M, clamp_M].
    """
    if lambda_grid is None:
        lambda_grid = np.logspace(-8.0, 0.0, 20)
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    kernel = NeedletKernel(1, n)
    rows = []
    for mi, m in enumerate(m_values):
        best = []
        for trial in range(trials):
            data_seed = int(cell_rng(seed, mi, trial).integers(0, 2**63 - 1))
            spec = DatasetSpec(
                target="sinc-1d", d=1, m_train=int(m), m_test=m_test, noise_var=noise_var, seed=data_seed
            )
            data = gen_data(spec, noiseless_test=True)
            gram = kernel.gram(data.x_train)
            coeff_rows = ridge_coefficients_path(gram, data.y_train, lambda_grid)
            cross = kernel.pairwise(data.x_train, data.x_test)
            preds = np.clip(coeff_rows @ cross, -clamp_M, clamp_M)
            rmse = np.sqrt(np.mean((preds - data.y_test[None, :]) ** 2, axis=1))
            best.append(float(rmse.min()))
        rows.append({"m": int(m), "median_rmse": float(np.median(best)), "trials": trials})
    return rows
