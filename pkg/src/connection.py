"""
Levi-Civita connection, Lie brackets and Riemann curvature by finite differences

Sign convention: R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z and the lowered tensor
R(X,Y,Z,W) = g(R(X,Y)Z, W). The round sphere has positive sectional curvature
K(U,V) = R(U,V,V,U) / (|U|²|V|² − g(U,V)²).
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np

from .constants import PLANE_TOL
from .errors import DegeneratePlane
from .geometry import (
    CURVATURE_SCHEME,
    FIRST_DERIVATIVE,
    DiffScheme,
    DomainBox,
    MetricField,
    PointLike,
    VectorField,
    as_coords,
    check_stencil,
    directional_derivative,
    partials,
)

logger = logging.getLogger(__name__)

VectorLike = Union[VectorField, np.ndarray]


@dataclass(frozen=True, eq=False)
class ChristoffelSample:
    """Christoffel symbols gamma[k, i, j] = Γ^k_ij at a point"""

    point: np.ndarray
    gamma: np.ndarray

    def torsion_defect(self) -> float:
        return float(np.max(np.abs(self.gamma - np.swapaxes(self.gamma, 1, 2)), initial=0.0))

    def apply(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Γ(X, Y)^k = Γ^k_ij X^i Y^j"""
        return np.einsum("kij,i,j->k", self.gamma, X, Y)


@dataclass(frozen=True, eq=False)
class CurvatureSample:
    """Riemann tensor at a point

    up[i, j, k, l] is the l-th component of R(∂_i, ∂_j)∂_k and
    lowered[i, j, k, l] = g(R(∂_i, ∂_j)∂_k, ∂_l).
    """

    point: np.ndarray
    up: np.ndarray
    lowered: np.ndarray

    def apply(self, X: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
        """R(X, Y)Z"""
        return np.einsum("ijkl,i,j,k->l", self.up, X, Y, Z)

    def lowered_value(self, X: np.ndarray, Y: np.ndarray, Z: np.ndarray, W: np.ndarray) -> float:
        """g(R(X, Y)Z, W)"""
        return float(np.einsum("ijkl,i,j,k,l->", self.lowered, X, Y, Z, W))

    def symmetry_defects(self) -> Dict[str, float]:
        """Antisymmetry, pair symmetry and first Bianchi residuals"""
        R = self.lowered
        bianchi = R + np.einsum("ijkl->jkil", R) + np.einsum("ijkl->kijl", R)
        return {
            "antisymmetry-ij": float(np.max(np.abs(R + np.swapaxes(R, 0, 1)))),
            "antisymmetry-kl": float(np.max(np.abs(R + np.swapaxes(R, 2, 3)))),
            "pair-symmetry": float(np.max(np.abs(R - np.einsum("ijkl->klij", R)))),
            "bianchi": float(np.max(np.abs(bianchi))),
        }


def christoffel_array(g: MetricField, x: np.ndarray, s: DiffScheme = FIRST_DERIVATIVE,
                      domain: Optional[DomainBox] = None) -> np.ndarray:
    """Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij) as an array [k, i, j]"""
    G = g(x)
    dg = partials(g, x, s, domain)  # dg[a, b, c] = ∂_a g_bc
    term = np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
    return 0.5 * np.einsum("kl,lij->kij", np.linalg.inv(G), term)


def christoffel(g: MetricField, p: PointLike, s: DiffScheme = FIRST_DERIVATIVE,
                domain: Optional[DomainBox] = None) -> ChristoffelSample:
    """Christoffel symbols of the Levi-Civita connection at p"""
    x = as_coords(p)
    return ChristoffelSample(np.array(x), christoffel_array(g, x, s, domain))


def _vector_function(X: VectorLike):
    if callable(X):
        return X
    value = np.asarray(X, dtype=float)
    return lambda y: value


def covariant_derivative(g: MetricField, X: VectorLike, Y: VectorLike, p: PointLike,
                         s: DiffScheme = FIRST_DERIVATIVE, domain: Optional[DomainBox] = None,
                         gamma: Optional[np.ndarray] = None) -> np.ndarray:
    """(∇_X Y)^k = X^i ∂_i Y^k + Γ^k_ij X^i Y^j"""
    x = as_coords(p)
    X_at = np.asarray(_vector_function(X)(x), dtype=float)
    Y_fn = _vector_function(Y)
    if gamma is None:
        gamma = christoffel_array(g, x, s, domain)
    derivative = directional_derivative(Y_fn, x, X_at, s, domain)
    return derivative + np.einsum("kij,i,j->k", gamma, X_at, np.asarray(Y_fn(x), dtype=float))


def lie_bracket(X: VectorLike, Y: VectorLike, p: PointLike, s: DiffScheme = FIRST_DERIVATIVE,
                domain: Optional[DomainBox] = None) -> np.ndarray:
    """[X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k"""
    x = as_coords(p)
    X_fn, Y_fn = _vector_function(X), _vector_function(Y)
    X_at = np.asarray(X_fn(x), dtype=float)
    Y_at = np.asarray(Y_fn(x), dtype=float)
    return directional_derivative(Y_fn, x, X_at, s, domain) - directional_derivative(X_fn, x, Y_at, s, domain)


def riemann_tensor(g: MetricField, p: PointLike, outer: DiffScheme = CURVATURE_SCHEME,
                   inner: DiffScheme = FIRST_DERIVATIVE, domain: Optional[DomainBox] = None) -> CurvatureSample:
    """Full curvature tensor from nested central differences"""
    x = as_coords(p)
    check_stencil(x, outer.reach + inner.reach, domain)
    gamma = christoffel_array(g, x, inner, domain)
    dgamma = partials(lambda y: christoffel_array(g, y, inner), x, outer)  # [a, l, j, k] = ∂_a Γ^l_jk
    up = (
        np.einsum("iljk->ijkl", dgamma)
        - np.einsum("jlik->ijkl", dgamma)
        + np.einsum("lim,mjk->ijkl", gamma, gamma)
        - np.einsum("ljm,mik->ijkl", gamma, gamma)
    )
    lowered = np.einsum("ijkm,ml->ijkl", up, g(x))
    logger.debug("curvature at %s: max |R| = %.3e", np.round(x, 4).tolist(), float(np.max(np.abs(lowered))))
    return CurvatureSample(np.array(x), up, lowered)


def riemann(g: MetricField, p: PointLike, X: np.ndarray, Y: np.ndarray, Z: np.ndarray,
            domain: Optional[DomainBox] = None) -> np.ndarray:
    """R(X, Y)Z for constant-extended vectors"""
    return riemann_tensor(g, p, domain=domain).apply(
        np.asarray(X, dtype=float), np.asarray(Y, dtype=float), np.asarray(Z, dtype=float)
    )


def sectional_from_sample(sample: CurvatureSample, G: np.ndarray, U: np.ndarray, V: np.ndarray) -> float:
    """Sectional curvature of span{U, V} from a precomputed tensor"""
    gram = float(U @ G @ U) * float(V @ G @ V) - float(U @ G @ V) ** 2
    if gram <= PLANE_TOL * max(float(U @ G @ U) * float(V @ G @ V), 1.0):
        raise DegeneratePlane("vectors do not span a 2-plane")
    return sample.lowered_value(U, V, V, U) / gram


def sectional_curvature(g: MetricField, p: PointLike, U: np.ndarray, V: np.ndarray,
                        domain: Optional[DomainBox] = None) -> float:
    """K(U ∧ V) = R(U,V,V,U) / (|U|²|V|² − g(U,V)²)"""
    x = as_coords(p)
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    return sectional_from_sample(riemann_tensor(g, x, domain=domain), g(x), U, V)


def tensor_covariant_derivative(center: np.ndarray, plus: np.ndarray, minus: np.ndarray, step: float,
                                gamma: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """(∇_Z T) for a (1,2)-tensor T[k, a, b] sampled at x and x ± step·Z"""
    derivative = (plus - minus) / (2.0 * step)
    connection = np.einsum("kzm,z->km", gamma, Z)
    return (
        derivative
        + np.einsum("km,mab->kab", connection, center)
        - np.einsum("ma,kmb->kab", connection, center)
        - np.einsum("mb,kam->kab", connection, center)
    )
