"""Constructive quadrature exact for polynomials on [-1,1], spheres, and balls.

Rules are plain immutable containers of nodes and weights. Sphere rules are
product constructions (equally spaced angles for the circle, Gauss-Jacobi
polar factors above), ball rules cross a radial Gauss factor with a sphere
rule, and the sphere-to-ball lift realizes the classical identity
2 * integral_{B^d} f dx = sum_i a_i f(x_i) with nodes projected down from the
sphere one dimension up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .special_functions import sphere_surface_area

__all__ = [
    "Rule1D",
    "SphereRule",
    "BallRule",
    "gauss_jacobi_rule",
    "sphere_rule",
    "ball_rule",
    "weighted_sphere_rule",
    "lift_ball_rule_from_sphere",
    "integrate",
    "ball_volume",
]


@dataclass(frozen=True)
class Rule1D:
    """Nodes/weights for integrals against (1-t^2)^alpha on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponent: float
    exact_degree: int


@dataclass(frozen=True)
class SphereRule:
    """Nodes on S^{d-1} (unit vectors in R^d) with positive weights."""

    d: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int


@dataclass(frozen=True)
class BallRule:
    """Nodes in the closed unit ball B^d with weights."""

    d: int
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int


def gauss_jacobi_rule(npoints: int, alpha: float) -> Rule1D:
    """Gauss rule with npoints nodes for the weight (1-t^2)^alpha on [-1, 1].

    Exact for polynomials of degree up to 2*npoints - 1.
    """
    if npoints < 1:
        raise ValueError(f"need at least one node, got {npoints}")
    if alpha <= -1:
        raise ValueError(f"weight exponent must exceed -1, got {alpha}")
    nodes, weights = roots_jacobi(npoints, alpha, alpha)
    order = np.argsort(nodes)
    return Rule1D(
        nodes=np.ascontiguousarray(nodes[order]),
        weights=np.ascontiguousarray(weights[order]),
        weight_exponent=alpha,
        exact_degree=2 * npoints - 1,
    )


def _gauss_jacobi_points_for_degree(degree: int) -> int:
    return degree // 2 + 1


def _cross_polar(t: np.ndarray, tw: np.ndarray, inner: SphereRule) -> tuple[np.ndarray, np.ndarray]:
    """Pair polar nodes t with inner sphere nodes xi as (sqrt(1-t^2) xi, t)."""
    ni = len(inner.nodes)
    s = np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    nodes = np.column_stack(
        [np.repeat(s, ni)[:, None] * np.tile(inner.nodes, (len(t), 1)), np.repeat(t, ni)]
    )
    weights = (tw[:, None] * inner.weights[None, :]).ravel()
    return nodes, weights


@lru_cache(maxsize=None)
def _sphere_rule_cached(d: int, degree: int) -> SphereRule:
    if d == 1:
        nodes = np.array([[-1.0], [1.0]])
        weights = np.array([1.0, 1.0])
        return SphereRule(d=1, nodes=nodes, weights=weights, exact_degree=max(degree, 0))
    if d == 2:
        L = max(degree + 1, 1)
        angles = 2.0 * math.pi * np.arange(L) / L
        nodes = np.column_stack([np.cos(angles), np.sin(angles)])
        weights = np.full(L, 2.0 * math.pi / L)
        return SphereRule(d=2, nodes=nodes, weights=weights, exact_degree=degree)
    polar = gauss_jacobi_rule(_gauss_jacobi_points_for_degree(degree), (d - 3) / 2.0)
    inner = _sphere_rule_cached(d - 1, degree)
    nodes, weights = _cross_polar(polar.nodes, polar.weights, inner)
    return SphereRule(d=d, nodes=nodes, weights=weights, exact_degree=degree)


def sphere_rule(d: int, degree: int) -> SphereRule:
    """Positive cubature on S^{d-1} exact for polynomials of total degree <= degree."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    return _sphere_rule_cached(d, degree)


def _radial_rule(d: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes r_i in (0,1) and weights exact for int_0^1 r^{d-1} g(r) dr, deg g <= degree."""
    npoints = _gauss_jacobi_points_for_degree(degree + d - 1)
    base = gauss_jacobi_rule(npoints, 0.0)
    r = 0.5 * (base.nodes + 1.0)
    w = 0.5 * base.weights * r ** (d - 1)
    return r, w


@lru_cache(maxsize=None)
def _ball_rule_cached(d: int, degree: int) -> BallRule:
    r, rw = _radial_rule(d, degree)
    sphere = sphere_rule(d, degree)
    nodes = (r[:, None, None] * sphere.nodes[None, :, :]).reshape(-1, d)
    weights = (rw[:, None] * sphere.weights[None, :]).ravel()
    return BallRule(d=d, nodes=nodes, weights=weights, exact_degree=degree)


def ball_rule(d: int, degree: int) -> BallRule:
    """Product cubature on B^d exact for polynomials of total degree <= degree."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    return _ball_rule_cached(d, degree)


def _abs_t_jacobi_rule(gamma: float, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric rule for the weight |t| (1-t^2)^gamma on [-1, 1], exact to degree.

    Folding u = t^2 turns the even part into a Jacobi (gamma, 0) integral on
    [0, 1]; odd monomials vanish by the symmetric node layout.
    """
    inner_degree = degree // 2
    npoints = _gauss_jacobi_points_for_degree(inner_degree)
    s, w = roots_jacobi(npoints, gamma, 0.0)
    u = 0.5 * (s + 1.0)
    wu = w * 0.5 ** (gamma + 1.0)
    t = np.sqrt(u)
    nodes = np.concatenate([-t[::-1], t])
    weights = 0.5 * np.concatenate([wu[::-1], wu])
    return nodes, weights


@lru_cache(maxsize=None)
def _weighted_sphere_rule_cached(dim_sphere: int, degree: int) -> SphereRule:
    d_ambient = dim_sphere + 1
    t, tw = _abs_t_jacobi_rule((d_ambient - 3) / 2.0, degree)
    inner = sphere_rule(d_ambient - 1, degree)
    nodes, weights = _cross_polar(t, tw, inner)
    return SphereRule(d=d_ambient, nodes=nodes, weights=weights, exact_degree=degree)


def weighted_sphere_rule(dim_sphere: int, degree: int) -> SphereRule:
    """Cubature for int_{S^dim} f(a) |a_last| domega(a), exact to the given degree.

    dim_sphere is the intrinsic dimension: nodes are unit vectors in
    R^{dim_sphere+1} and the weight is the magnitude of the last coordinate.
    """
    if dim_sphere < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {dim_sphere}")
    if degree < 0:
        raise ValueError(f"degree must be nonnegative, got {degree}")
    return _weighted_sphere_rule_cached(dim_sphere, degree)


def lift_ball_rule_from_sphere(d: int, degree: int) -> BallRule:
    """Ball rule obtained by dropping the last coordinate of a weighted sphere rule.

    A rule for int_{S^d} f |a_{d+1}| domega = sum a_i f(alpha_i) yields
    2 int_{B^d} f dx = sum a_i f(x_i) with x_i the first d components, so the
    returned weights are a_i / 2.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    sphere = weighted_sphere_rule(d, degree)
    return BallRule(d=d, nodes=np.ascontiguousarray(sphere.nodes[:, :d]), weights=0.5 * sphere.weights, exact_degree=degree)


def ball_volume(d: int) -> float:
    """Volume of the unit ball B^d (1 for d = 0, the point)."""
    if d == 0:
        return 1.0
    return sphere_surface_area(d) / d


def integrate(rule, f) -> float:
    """Apply a rule to f: sum_i w_i f(node_i).

    f may be vectorized over a stack of nodes or accept single points;
    non-finite values are rejected with the offending node named.
    """
    nodes = rule.nodes
    try:
        values = np.asarray(f(nodes), dtype=float)
        if values.shape != (len(rule.weights),):
            raise ValueError
    except Exception:
        values = np.array([float(f(x)) for x in nodes])
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"integrand not finite at node {i}: {nodes[i]!r}")
    return float(np.dot(rule.weights, values))
