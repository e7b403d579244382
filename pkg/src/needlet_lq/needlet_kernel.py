"""The localized polynomial kernel on the unit ball and its truncated variant.

Both kernels have the form

    K(x, y) = sum_k c_k  integral_{S^{d-1}} U_k(x . xi) U_k(y . xi) domega(xi)

with nonnegative mode coefficients c_k. The needlet kernel weights mode k by
eta(k/n) v_k^2 for a smooth cutoff eta (1 on [0,1], 0 from 2 on), which keeps
the reproducing property on polynomials of degree <= n while localizing the
kernel in space. The hard-truncated variant (c_k = v_k^2 for k <= n) is the
reproducing kernel of the degree-n polynomial space under the L2(B^d) inner
product. Sphere integrals are replaced by an exact cubature rule, so kernel
values carry no quadrature error.
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import BallRule, SphereRule, sphere_rule
from .special_functions import BasisConstants, u_table

__all__ = [
    "AdmissibleCutoff",
    "eta_eval",
    "ball_metric",
    "NeedletKernel",
    "ReproducingKernel",
]

_BALL_TOL = 1e-12


def eta_eval(t: float) -> float:
    """Smooth cutoff: 1 on [0,1], 0 on [2,inf), strictly decreasing between.

    The transition is the classic smooth partition r(2-t)/(r(2-t)+r(t-1))
    with r(s) = exp(-1/s) for s > 0, which is infinitely differentiable and
    symmetric about t = 3/2.
    """
    if t < 0:
        raise ValueError(f"cutoff argument must be nonnegative, got {t}")
    if t <= 1.0:
        return 1.0
    if t >= 2.0:
        return 0.0
    up = math.exp(-1.0 / (2.0 - t))
    down = math.exp(-1.0 / (t - 1.0))
    return up / (up + down)


class AdmissibleCutoff:
    """Callable admissible cutoff with transition interval [1, 2]."""

    def __call__(self, t: float) -> float:
        return eta_eval(t)

    def __repr__(self) -> str:
        return "AdmissibleCutoff()"


def ball_metric(x, y) -> float:
    """Distance arccos(x.y + sqrt(1-|x|^2) sqrt(1-|y|^2)) between ball points.

    This is the geodesic distance of the canonical lifts of x and y to the
    upper hemisphere one dimension up.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    sx = math.sqrt(max(1.0 - float(x @ x), 0.0))
    sy = math.sqrt(max(1.0 - float(y @ y), 0.0))
    c = float(x @ y) + sx * sy
    return math.acos(min(1.0, max(-1.0, c)))


class _ZonalModeKernel:
    """Shared machinery: mode coefficients applied to sphere-averaged products."""

    def __init__(self, d: int, n: int, coeffs: np.ndarray, sphere: SphereRule):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if n < 1:
            raise ValueError(f"degree parameter must be >= 1, got {n}")
        self.d = d
        self.n = n
        self.coeffs = coeffs
        self.sphere = sphere
        nonzero = np.nonzero(coeffs)[0]
        self._kmax = int(nonzero[-1]) if len(nonzero) else 0

    def _as_points(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if self.d == 1 else pts.reshape(1, -1)
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise ValueError(f"expected points of dimension {self.d}, got shape {pts.shape}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms > 1.0 + _BALL_TOL):
            worst = float(norms.max())
            raise ValueError(f"point with norm {worst} lies outside the closed unit ball")
        return pts

    def _mode_values(self, pts: np.ndarray) -> np.ndarray:
        """U_k(x . xi) for k = 0.._kmax, all points x, all sphere nodes xi."""
        dots = np.clip(pts @ self.sphere.nodes.T, -1.0, 1.0)
        return u_table(self.d, self._kmax, dots)

    def pairwise(self, X, Y) -> np.ndarray:
        """Kernel matrix K[i, j] = K(X[i], Y[j])."""
        X = self._as_points(X)
        Y = self._as_points(Y)
        ux = self._mode_values(X) * self.sphere.weights
        uy = self._mode_values(Y)
        out = np.zeros((len(X), len(Y)))
        for k in range(self._kmax + 1):
            c = self.coeffs[k]
            if c != 0.0:
                out += c * (ux[k] @ uy[k].T)
        return out

    def eval(self, x, y) -> float:
        """Kernel value at a single pair of ball points."""
        x = self._as_points(x)
        y = self._as_points(y)
        return float(self.pairwise(x, y)[0, 0])

    def gram(self, points) -> np.ndarray:
        """Symmetric Gram matrix over a point set."""
        pts = self._as_points(points)
        g = self.pairwise(pts, pts)
        return 0.5 * (g + g.T)

    def apply(self, f, x, ball: BallRule) -> float:
        """Integral operator (K f)(x) by ball quadrature of y -> K(x, y) f(y)."""
        x = self._as_points(x)
        kernel_vals = self.pairwise(x, ball.nodes)[0]
        try:
            fvals = np.asarray(f(ball.nodes), dtype=float)
            if fvals.shape != (len(ball.weights),):
                raise ValueError
        except Exception:
            fvals = np.array([float(f(y)) for y in ball.nodes])
        bad = ~np.isfinite(fvals)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(f"integrand not finite at node {i}: {ball.nodes[i]!r}")
        return float(np.dot(ball.weights, kernel_vals * fvals))


class NeedletKernel(_ZonalModeKernel):
    """Smooth-cutoff polynomial kernel with mode weights eta(k/n) v_k^2.

    Modes k <= n carry the full weight v_k^2, modes k >= 2n vanish, so
    kernel sections are polynomials of degree at most 2n - 1. The cached
    sphere rule has exactness degree 4n, which makes every kernel value
    quadrature-error-free.
    """

    def __init__(self, d: int, n: int, cutoff=None):
        self.cutoff = cutoff if cutoff is not None else AdmissibleCutoff()
        self.constants = BasisConstants.build(d, 2 * n)
        coeffs = np.array([self.cutoff(k / n) * self.constants.v[k] ** 2 for k in range(2 * n + 1)])
        if np.any(coeffs < 0):
            raise ValueError("cutoff produced negative mode coefficients")
        super().__init__(d, n, coeffs, sphere_rule(d, 4 * n))

    def localization_profile(self, x, y, l: int) -> float:
        """|K(x, y)| rescaled by the decay envelope, for bounding its constant.

        Returns |K(x,y)| (sqrt(1-|x|^2)+1/n)(sqrt(1-|y|^2)+1/n)(1+n rho)^l / n^d
        with rho the ball metric; finite sups of this quantity certify the
        kernel's spatial localization empirically.
        """
        if l < 1:
            raise ValueError(f"decay order must be >= 1, got {l}")
        xv = np.asarray(x, dtype=float).ravel()
        yv = np.asarray(y, dtype=float).ravel()
        rho = ball_metric(xv, yv)
        value = abs(self.eval(xv, yv))
        edge_x = math.sqrt(max(1.0 - float(xv @ xv), 0.0)) + 1.0 / self.n
        edge_y = math.sqrt(max(1.0 - float(yv @ yv), 0.0)) + 1.0 / self.n
        return value * edge_x * edge_y * (1.0 + self.n * rho) ** l / self.n ** self.d


class ReproducingKernel(_ZonalModeKernel):
    """Hard-truncated kernel: the reproducing kernel of degree-n polynomials.

    Identical structure to the needlet kernel with the cutoff replaced by the
    indicator of [0, 1]: c_k = v_k^2 for k <= n and 0 beyond.
    """

    def __init__(self, d: int, n: int):
        self.constants = BasisConstants.build(d, n)
        coeffs = self.constants.v**2
        super().__init__(d, n, coeffs, sphere_rule(d, 4 * n))
