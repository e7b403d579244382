"""Random-node cubature weights and Marcinkiewicz-Zygmund certifications.

Given i.i.d. nodes, the minimum Euclidean-norm solution of the polynomial
exactness system provides integration weights whose residuals and p-norms we
track; the companion check compares discrete weighted p-norms of random
polynomials on random sphere nodes against their continuous counterparts.
Both are empirical probes of high-probability statements, so everything is
trial-structured with deterministic per-trial seeding.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .quadrature import ball_rule, weighted_sphere_rule
from .special_functions import sphere_surface_area

__all__ = [
    "CubatureWitness",
    "ball_basis_exponents",
    "sphere_basis_exponents",
    "eval_monomials",
    "ball_moments",
    "min_norm_weights",
    "min_norm_sphere_weights",
    "weight_growth_report",
    "mz_check",
    "sample_uniform_ball",
    "sample_uniform_sphere",
]

_RANK_RCOND = 1e-10


@dataclass(frozen=True)
class CubatureWitness:
    """Exactness weights at given nodes, with residual and norm diagnostics."""

    points: np.ndarray
    degree: int
    d: int
    weights: np.ndarray
    max_residual: float
    weight_p_norms: dict


def ball_basis_exponents(n: int, d: int) -> list[tuple[int, ...]]:
    """Monomial exponents spanning polynomials of total degree <= n on R^d."""
    exps = [e for e in product(range(n + 1), repeat=d) if sum(e) <= n]
    return sorted(exps, key=lambda e: (sum(e), e))


def sphere_basis_exponents(n: int, dim_sphere: int) -> list[tuple[int, ...]]:
    """A basis of polynomials of degree <= n restricted to S^dim_sphere.

    Restricted monomials are dependent (the squared last coordinate can be
    eliminated), so exponents keep the last coordinate's power at most 1;
    the resulting family is linearly independent on the sphere.
    """
    exps = [
        g + (e,)
        for e in (0, 1)
        for g in product(range(n + 1), repeat=dim_sphere)
        if sum(g) + e <= n
    ]
    return sorted(exps, key=lambda e: (sum(e), e))


def eval_monomials(exps, X: np.ndarray) -> np.ndarray:
    """Matrix of monomial values, one row per exponent, one column per point."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.ones((len(exps), len(X)))
    for j, e in enumerate(exps):
        for k, ek in enumerate(e):
            if ek:
                out[j] *= X[:, k] ** ek
    return out


def ball_moments(n: int, d: int) -> np.ndarray:
    """Integrals over B^d of the graded monomial basis, by an exact product rule."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    rule = ball_rule(d, n)
    basis = eval_monomials(ball_basis_exponents(n, d), rule.nodes)
    return basis @ rule.weights


def _min_norm_solve(basis_at_nodes: np.ndarray, moments: np.ndarray, what: str):
    n_basis = basis_at_nodes.shape[0]
    weights, _, rank, _ = np.linalg.lstsq(basis_at_nodes, moments, rcond=_RANK_RCOND)
    if rank < n_basis:
        raise ValueError(
            f"degenerate {what} node set: numerical rank {rank} < basis dimension {n_basis} "
            f"(rcond {_RANK_RCOND})"
        )
    residual = float(np.max(np.abs(basis_at_nodes @ weights - moments)))
    return weights, residual


def _p_norm_map(weights: np.ndarray, p_norms) -> dict:
    return {float(p): float(np.sum(np.abs(weights) ** p)) for p in p_norms}


def min_norm_weights(points, n: int, d: int, p_norms=(1.0, 2.0)) -> CubatureWitness:
    """Minimum Euclidean-norm weights making m nodes integrate P_n over B^d.

    Requires at least dim P_n nodes in general position; rank deficiency is
    reported with the numerical rank rather than silently patched.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    exps = ball_basis_exponents(n, d)
    if len(points) < len(exps):
        raise ValueError(f"need at least dim P_n = {len(exps)} nodes, got {len(points)}")
    basis = eval_monomials(exps, points)
    weights, residual = _min_norm_solve(basis, ball_moments(n, d), "ball")
    return CubatureWitness(
        points=points,
        degree=n,
        d=d,
        weights=weights,
        max_residual=residual,
        weight_p_norms=_p_norm_map(weights, p_norms),
    )


def min_norm_sphere_weights(nodes, n: int, dim_sphere: int, p_norms=(1.0, 2.0)) -> CubatureWitness:
    """Minimum-norm weights for the |last coordinate|-weighted integral on S^dim.

    The exactness targets are int_{S^dim} B_j(a) |a_last| domega(a) over the
    restricted-monomial basis; dropping the last node coordinate and halving
    the weights turns a witness into ball-exactness weights one dimension
    down.
    """
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    exps = sphere_basis_exponents(n, dim_sphere)
    if len(nodes) < len(exps):
        raise ValueError(f"need at least {len(exps)} nodes, got {len(nodes)}")
    rule = weighted_sphere_rule(dim_sphere, n)
    moments = eval_monomials(exps, rule.nodes) @ rule.weights
    basis = eval_monomials(exps, nodes)
    weights, residual = _min_norm_solve(basis, moments, "sphere")
    return CubatureWitness(
        points=nodes,
        degree=n,
        d=dim_sphere,
        weights=weights,
        max_residual=residual,
        weight_p_norms=_p_norm_map(weights, p_norms),
    )


def sample_uniform_ball(rng: np.random.Generator, m: int, d: int) -> np.ndarray:
    """m i.i.d. points uniform on the unit ball B^d."""
    x = rng.standard_normal((m, d))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * rng.uniform(0.0, 1.0, m)[:, None] ** (1.0 / d)


def sample_uniform_sphere(rng: np.random.Generator, m: int, d_ambient: int) -> np.ndarray:
    """m i.i.d. points uniform on the unit sphere in R^{d_ambient}."""
    x = rng.standard_normal((m, d_ambient))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _trial_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def weight_growth_report(
    d: int,
    n: int,
    p: float,
    m_list,
    trials: int,
    seed: int,
    sampler=sample_uniform_ball,
) -> list[dict]:
    """Median weight p-norms of min-norm witnesses across node counts.

    One row per m: (m, p, median_norm, m^{1-p}, trials_used, infeasible).
    Infeasible trials (degenerate node sets) are skipped and counted.
    """
    rows = []
    for im, m in enumerate(m_list):
        norms = []
        infeasible = 0
        for trial in range(trials):
            rng = _trial_rng(seed, im, trial)
            nodes = sampler(rng, int(m), d)
            try:
                witness = min_norm_weights(nodes, n, d, p_norms=(p,))
            except ValueError:
                infeasible += 1
                continue
            norms.append(witness.weight_p_norms[float(p)])
        rows.append(
            {
                "m": int(m),
                "p": float(p),
                "median_norm": float(np.median(norms)) if norms else float("nan"),
                "m_pow": float(m) ** (1.0 - p),
                "trials_used": len(norms),
                "infeasible": infeasible,
            }
        )
    return rows


def _weighted_norm_rule_degree(n: int, p: float) -> int:
    if p > 0 and float(p).is_integer() and int(p) % 2 == 0:
        return int(p) * n
    # |Q|^p is not a polynomial for odd/fractional p; integrate at high order
    return 4 * n + 32


def mz_check(
    d: int,
    n: int,
    m: int,
    p: float,
    trials: int,
    seed: int,
    n_polys: int = 8,
) -> list[dict]:
    """Discrete-vs-continuous weighted p-norm ratios on random sphere nodes.

    For each trial: draw m uniform nodes on S^d, draw random degree-n
    polynomials, and compute (1/m) sum |Q(a_i)|^p w(a_i) divided by the
    expectation of |Q|^p w under the sampling distribution (for the uniform
    distribution, the weighted quadrature integral over surface area). Rows
    carry the per-trial min/max ratio plus the exactness residual and weight
    p-norm of the min-norm witness on the same nodes; two-sided brackets
    around 1 certify the sampling inequality empirically.
    """
    if m < 1:
        raise ValueError(f"need at least one node, got {m}")
    exps = sphere_basis_exponents(n, d)
    norm_rule = weighted_sphere_rule(d, _weighted_norm_rule_degree(n, p))
    basis_at_rule = eval_monomials(exps, norm_rule.nodes)
    omega = sphere_surface_area(d + 1)
    rows = []
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        nodes = sample_uniform_sphere(rng, m, d + 1)
        w_nodes = np.abs(nodes[:, -1])
        basis_at_nodes = eval_monomials(exps, nodes)
        coeffs = rng.standard_normal((n_polys, len(exps)))
        discrete = np.mean(np.abs(coeffs @ basis_at_nodes) ** p * w_nodes, axis=1)
        continuous = (np.abs(coeffs @ basis_at_rule) ** p) @ norm_rule.weights / omega
        ratios = discrete / continuous
        if m >= len(exps):
            try:
                witness = min_norm_sphere_weights(nodes, n, d, p_norms=(p,))
                residual = witness.max_residual
                weight_norm = witness.weight_p_norms[float(p)]
            except ValueError:
                residual = float("nan")
                weight_norm = float("nan")
        else:
            residual = float("nan")
            weight_norm = float("nan")
        rows.append(
            {
                "trial": trial,
                "min_ratio": float(ratios.min()),
                "max_ratio": float(ratios.max()),
                "residual": residual,
                "weight_norm": weight_norm,
            }
        )
    return rows
