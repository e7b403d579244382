"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from needlet_lq.cubature_mz import ball_basis_exponents, eval_monomials


def random_ball_polynomial(rng: np.random.Generator, degree: int, d: int):
    """Random polynomial of total degree <= degree with standard-normal coefficients.

    Returns (eval_fn, coeffs, exponents); eval_fn maps an (m, d) array to (m,).
    """
    exps = ball_basis_exponents(degree, d)
    coeffs = rng.standard_normal(len(exps))

    def evaluate(X):
        return coeffs @ eval_monomials(exps, X)

    return evaluate, coeffs, exps


def uniform_ball(rng: np.random.Generator, m: int, d: int) -> np.ndarray:
    x = rng.standard_normal((m, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.uniform(0.0, 1.0, m)[:, None] ** (1.0 / d)
