"""Gegenbauer polynomials, their normalizations, and derived constants.

Everything here is pure and immutable: evaluation by three-term recurrence,
L2 normalization weights computed in log-Gamma space, and the per-degree
constants (v_k, U_k(1), surface areas, addition-formula kernels) consumed by
the kernel and quadrature modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BasisConstants",
    "pochhammer",
    "gegenbauer_eval",
    "gegenbauer_table",
    "gegenbauer_norm",
    "u_eval",
    "u_table",
    "v_coeff",
    "sphere_surface_area",
    "addition_kernel_eval",
]

_T_CLAMP = 1e-12


def pochhammer(a: float, k: int) -> float:
    """Rising factorial a(a+1)...(a+k-1), with the empty product equal to 1."""
    if k < 0:
        raise ValueError(f"pochhammer order must be nonnegative, got {k}")
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def _clamp_argument(t):
    """Clip arguments to [-1, 1], rejecting anything beyond the tolerance."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + _T_CLAMP):
        worst = float(np.max(np.abs(t)))
        raise ValueError(f"argument magnitude {worst} exceeds 1 beyond clamp tolerance {_T_CLAMP}")
    return np.clip(t, -1.0, 1.0)


def gegenbauer_table(mu: float, kmax: int, t) -> np.ndarray:
    """All Gegenbauer values G_0..G_kmax at t, stacked along axis 0.

    Uses the three-term recurrence
        k G_k = 2(k + mu - 1) t G_{k-1} - (k + 2 mu - 2) G_{k-2}
    seeded with G_0 = 1 and G_1 = 2 mu t.
    """
    if mu <= 0:
        raise ValueError(f"Gegenbauer index mu must be positive, got {mu}")
    if kmax < 0:
        raise ValueError(f"max degree must be nonnegative, got {kmax}")
    t = _clamp_argument(t)
    table = np.empty((kmax + 1,) + t.shape, dtype=float)
    table[0] = 1.0
    if kmax >= 1:
        table[1] = 2.0 * mu * t
    for k in range(2, kmax + 1):
        table[k] = (2.0 * (k + mu - 1.0) * t * table[k - 1] - (k + 2.0 * mu - 2.0) * table[k - 2]) / k
    return table


def gegenbauer_eval(mu: float, k: int, t: float) -> float:
    """Gegenbauer polynomial G_k^mu(t) for |t| <= 1 (clamped)."""
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return float(gegenbauer_table(mu, k, np.asarray(t, dtype=float))[k])


def _log_gegenbauer_norm(k: int, mu: float) -> float:
    # h_{k,mu} = sqrt(pi) (2mu)_k Gamma(mu+1/2) / ((k+mu) k! Gamma(mu))
    return (
        0.5 * math.log(math.pi)
        + math.lgamma(2.0 * mu + k)
        - math.lgamma(2.0 * mu)
        + math.lgamma(mu + 0.5)
        - math.log(k + mu)
        - math.lgamma(k + 1.0)
        - math.lgamma(mu)
    )


def gegenbauer_norm(k: int, mu: float) -> float:
    """Squared L2 norm of G_k^mu against the weight (1-t^2)^(mu-1/2).

    Computed from the closed form in log space; overflow is reported rather
    than silently saturated.
    """
    if mu <= 0:
        raise ValueError(f"Gegenbauer index mu must be positive, got {mu}")
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    log_h = _log_gegenbauer_norm(k, mu)
    if log_h > math.log(np.finfo(float).max):
        raise OverflowError(f"norm h_{{{k},{mu}}} overflows double precision (log value {log_h:.3g})")
    return math.exp(log_h)


def u_table(d: int, kmax: int, t) -> np.ndarray:
    """Orthonormal polynomials U_0..U_kmax for dimension d, stacked along axis 0.

    U_k = h_{k,d/2}^{-1/2} G_k^{d/2}; the family is orthonormal on [-1, 1]
    against the weight (1-t^2)^((d-1)/2).
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    mu = d / 2.0
    table = gegenbauer_table(mu, kmax, t)
    scale = np.exp([-0.5 * _log_gegenbauer_norm(k, mu) for k in range(kmax + 1)])
    return table * scale.reshape((kmax + 1,) + (1,) * (table.ndim - 1))


def u_eval(k: int, d: int, t: float) -> float:
    """Orthonormal polynomial U_k(t) for dimension d."""
    return float(u_table(d, k, np.asarray(t, dtype=float))[k])


def v_coeff(k: int, d: int) -> float:
    """The constant v_k = ((k+1)_{d-1} / (2 (2 pi)^{d-1}))^{1/2}."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    return math.sqrt(pochhammer(k + 1.0, d - 1) / (2.0 * (2.0 * math.pi) ** (d - 1)))


def sphere_surface_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def addition_kernel_eval(k: int, d: int, t: float) -> float:
    """Zonal addition-formula kernel (2k+d-2) / ((d-2) Omega_{d-1}) G_k^{(d-2)/2}(t).

    Only defined for d >= 3; the prefactor divides by d-2 and degenerates at
    d = 2.
    """
    if d < 3:
        raise ValueError(f"addition kernel requires d >= 3 (prefactor divides by d-2), got d={d}")
    if k < 0:
        raise ValueError(f"degree must be nonnegative, got {k}")
    prefactor = (2.0 * k + d - 2.0) / ((d - 2.0) * sphere_surface_area(d))
    return prefactor * gegenbauer_eval((d - 2.0) / 2.0, k, t)


@dataclass(frozen=True)
class BasisConstants:
    """Per-degree constants for a fixed ambient dimension.

    h[k] is the squared norm of G_k^{d/2}, v[k] the sphere-to-ball coupling
    constant, and u_at_one[k] = U_k(1). All entries are strictly positive.
    """

    d: int
    max_degree: int
    h: np.ndarray
    v: np.ndarray
    u_at_one: np.ndarray

    @classmethod
    def build(cls, d: int, max_degree: int) -> "BasisConstants":
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if max_degree < 0:
            raise ValueError(f"max degree must be nonnegative, got {max_degree}")
        mu = d / 2.0
        ks = range(max_degree + 1)
        h = np.array([gegenbauer_norm(k, mu) for k in ks])
        v = np.array([v_coeff(k, d) for k in ks])
        # U_k(1) = h^{-1/2} G_k(1) with G_k(1) = (2 mu)_k / k!, in log space
        log_g1 = np.array([math.lgamma(2 * mu + k) - math.lgamma(2 * mu) - math.lgamma(k + 1) for k in ks])
        u1 = np.exp(log_g1 - 0.5 * np.array([_log_gegenbauer_norm(k, mu) for k in ks]))
        consts = cls(d=d, max_degree=max_degree, h=h, v=v, u_at_one=u1)
        if not (np.all(h > 0) and np.all(v > 0) and np.all(u1 > 0)):
            raise ValueError("basis constants must be strictly positive")
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(v)) and np.all(np.isfinite(u1))):
            raise OverflowError(f"basis constants overflow for d={d}, max_degree={max_degree}")
        return consts
