"""
Coordinate-chart numerics: points, fields, differentiation and linear algebra
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from .constants import (
    CURVATURE_ORDER,
    CURVATURE_STEP,
    DEFAULT_DOMAIN_HALF_WIDTH,
    FIRST_DERIVATIVE_ORDER,
    FIRST_DERIVATIVE_STEP,
    GRAM_SCHMIDT_TOL,
    METRIC_EIGEN_TOL,
    RANK_ATOL,
    RANK_RTOL,
)
from .errors import (
    NonPositiveDefinite,
    PointOutOfDomain,
    RankDeficient,
    ShapeMismatch,
    StencilOutOfDomain,
)

logger = logging.getLogger(__name__)

ArrayFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DomainBox:
    """Axis-aligned chart domain"""

    lows: Tuple[float, ...]
    highs: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lows) != len(self.highs):
            raise ShapeMismatch("domain bounds have different lengths")
        for lo, hi in zip(self.lows, self.highs):
            if not lo < hi:
                raise ShapeMismatch(f"empty domain interval [{lo}, {hi}]")

    @classmethod
    def cube(cls, dimension: int, half_width: float = DEFAULT_DOMAIN_HALF_WIDTH) -> "DomainBox":
        """Symmetric box [-w, w]^n"""
        return cls(tuple([-half_width] * dimension), tuple([half_width] * dimension))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "DomainBox":
        """Build from [[lo, hi], ...]"""
        for pair in pairs:
            if len(pair) != 2:
                raise ShapeMismatch("domain entries must be [low, high] pairs")
        return cls(tuple(float(p[0]) for p in pairs), tuple(float(p[1]) for p in pairs))

    @property
    def dimension(self) -> int:
        return len(self.lows)

    def contains(self, x: np.ndarray, margin: float = 0.0) -> bool:
        """Check that x lies at least margin inside every face"""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            return False
        lows = np.asarray(self.lows) + margin
        highs = np.asarray(self.highs) - margin
        return bool(np.all(x >= lows) and np.all(x <= highs))

    def shrink(self, fraction: float) -> "DomainBox":
        """Box pulled inward by fraction of each side"""
        lows, highs = [], []
        for lo, hi in zip(self.lows, self.highs):
            pad = fraction * (hi - lo)
            lows.append(lo + pad)
            highs.append(hi - pad)
        return DomainBox(tuple(lows), tuple(highs))

    def as_pairs(self) -> List[List[float]]:
        return [[lo, hi] for lo, hi in zip(self.lows, self.highs)]


@dataclass(frozen=True, eq=False)
class Point:
    """Chart coordinates owned by a model"""

    coords: np.ndarray
    model_id: str = ""

    def __post_init__(self):
        arr = np.array(self.coords, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def dimension(self) -> int:
        return int(self.coords.shape[0])


PointLike = Union[Point, np.ndarray, Sequence[float]]


def as_coords(p: PointLike) -> np.ndarray:
    """Coordinates of a point or array-like"""
    if isinstance(p, Point):
        return p.coords
    return np.asarray(p, dtype=float)


class Field(ABC):
    """Base class for evaluable fields on a chart"""

    def __init__(self, evaluator: Callable[[np.ndarray], object], dimension: int, name: str = ""):
        self.evaluator = evaluator
        self.dimension = dimension
        self.name = name

    @property
    @abstractmethod
    def shape(self) -> Tuple[int, ...]:
        """Shape of one evaluation"""

    def __call__(self, p: PointLike) -> np.ndarray:
        value = np.asarray(self.evaluator(as_coords(p)), dtype=float)
        if value.shape != self.shape:
            raise ShapeMismatch(f"field {self.name or type(self).__name__} returned shape {value.shape}, expected {self.shape}")
        return value


class ScalarField(Field):
    """Real-valued function on the chart"""

    @property
    def shape(self) -> Tuple[int, ...]:
        return ()

    def __call__(self, p: PointLike) -> float:
        return float(super().__call__(p))


class VectorField(Field):
    """Tangent vector field in coordinate components"""

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.dimension,)

    @classmethod
    def constant(cls, vector: Sequence[float], name: str = "") -> "VectorField":
        """Coordinate-constant extension of a vector"""
        value = np.array(vector, dtype=float)
        value.setflags(write=False)
        return cls(lambda x: value, value.shape[0], name)


class OneFormField(Field):
    """Covector field in coordinate components"""

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.dimension,)


class EndomorphismField(Field):
    """(1,1)-tensor field; column j is the image of the j-th coordinate vector"""

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.dimension, self.dimension)


class MetricField(EndomorphismField):
    """Symmetric metric tensor field"""

    def __call__(self, p: PointLike) -> np.ndarray:
        value = super().__call__(p)
        return 0.5 * (value + value.T)

    @classmethod
    def euclidean(cls, dimension: int) -> "MetricField":
        identity = np.eye(dimension)
        identity.setflags(write=False)
        return cls(lambda x: identity, dimension, "euclidean")


@dataclass(frozen=True)
class DiffScheme:
    """Central-difference stencil"""

    step: float = FIRST_DERIVATIVE_STEP
    order: int = FIRST_DERIVATIVE_ORDER

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.order not in (2, 4):
            raise ValueError(f"order must be 2 or 4, got {self.order}")

    @property
    def reach(self) -> float:
        """Largest offset used by the stencil"""
        return self.step if self.order == 2 else 2.0 * self.step

    def derivative(self, fn: ArrayFunction, x: np.ndarray, direction: np.ndarray) -> np.ndarray:
        """Derivative of fn at x along direction"""
        h = self.step
        if self.order == 2:
            return (np.asarray(fn(x + h * direction)) - np.asarray(fn(x - h * direction))) / (2.0 * h)
        f_p2 = np.asarray(fn(x + 2.0 * h * direction))
        f_p1 = np.asarray(fn(x + h * direction))
        f_m1 = np.asarray(fn(x - h * direction))
        f_m2 = np.asarray(fn(x - 2.0 * h * direction))
        return (-f_p2 + 8.0 * f_p1 - 8.0 * f_m1 + f_m2) / (12.0 * h)


FIRST_DERIVATIVE = DiffScheme()
CURVATURE_SCHEME = DiffScheme(CURVATURE_STEP, CURVATURE_ORDER)


def check_stencil(x: np.ndarray, reach: float, domain: Optional[DomainBox]) -> None:
    """Raise when a stencil of the given reach leaves the domain"""
    if domain is not None and not domain.contains(x, margin=reach):
        raise StencilOutOfDomain(f"stencil of reach {reach:g} at {np.round(x, 6).tolist()} leaves the domain")


def directional_derivative(fn: ArrayFunction, x: np.ndarray, direction: np.ndarray,
                           scheme: DiffScheme = FIRST_DERIVATIVE,
                           domain: Optional[DomainBox] = None) -> np.ndarray:
    """Central difference of fn at x along an arbitrary direction"""
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    check_stencil(x, scheme.reach * float(np.max(np.abs(direction), initial=0.0)), domain)
    return scheme.derivative(fn, x, direction)


def partials(fn: ArrayFunction, x: np.ndarray, scheme: DiffScheme = FIRST_DERIVATIVE,
             domain: Optional[DomainBox] = None) -> np.ndarray:
    """All coordinate partials stacked along a new leading axis"""
    x = np.asarray(x, dtype=float)
    check_stencil(x, scheme.reach, domain)
    basis = np.eye(x.shape[0])
    return np.stack([scheme.derivative(fn, x, basis[i]) for i in range(x.shape[0])])


def numeric_partial(f: ScalarField, p: PointLike, axis: int, s: DiffScheme = FIRST_DERIVATIVE,
                    domain: Optional[DomainBox] = None) -> float:
    """Central-difference estimate of df/dx_axis (axis counted from 0)"""
    x = as_coords(p)
    direction = np.zeros_like(x)
    direction[axis] = 1.0
    return float(directional_derivative(f, x, direction, s, domain))


def metric_eval(g: MetricField, p: PointLike, domain: Optional[DomainBox] = None) -> np.ndarray:
    """Evaluate a metric and check positive-definiteness"""
    x = as_coords(p)
    if domain is not None and not domain.contains(x):
        raise PointOutOfDomain(f"point {x.tolist()} outside the chart domain")
    matrix = g(x)
    eigenvalues = np.linalg.eigvalsh(matrix)
    if eigenvalues[0] <= METRIC_EIGEN_TOL:
        raise NonPositiveDefinite(f"metric eigenvalue {eigenvalues[0]:g} at {x.tolist()}")
    return matrix


def inner(G: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    return float(u @ G @ v)


def norm(G: np.ndarray, u: np.ndarray) -> float:
    return float(np.sqrt(max(u @ G @ u, 0.0)))


def numerical_rank(M: np.ndarray, tol: float = RANK_RTOL) -> int:
    """Count singular values above tol times the largest"""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    singular = linalg.svd(M, compute_uv=False)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.sum(singular > tol * singular[0]))


def nullspace(M: np.ndarray, tol: float = RANK_RTOL) -> List[np.ndarray]:
    """Orthonormal (Euclidean) basis of the kernel of M"""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    columns = M.shape[1]
    if M.size == 0:
        return [row for row in np.eye(columns)]
    _, singular, vh = linalg.svd(M, full_matrices=True)
    if singular.size == 0 or singular[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(singular > tol * singular[0]))
    return [vh[i].copy() for i in range(rank, columns)]


def orthonormalize(G: np.ndarray, vectors: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Modified Gram-Schmidt under the inner product G, with one reorthogonalization pass"""
    basis: List[np.ndarray] = []
    for index, vector in enumerate(vectors):
        w = np.array(vector, dtype=float)
        original = norm(G, w)
        if original == 0.0:
            raise RankDeficient(f"vector {index} is zero")
        for _ in range(2):
            for u in basis:
                w = w - inner(G, u, w) * u
        length = norm(G, w)
        if length <= GRAM_SCHMIDT_TOL * original:
            raise RankDeficient(f"vector {index} depends on the previous ones")
        basis.append(w / length)
    return basis


def gram_schmidt(g: MetricField, p: PointLike, vs: Sequence[np.ndarray],
                 domain: Optional[DomainBox] = None) -> List[np.ndarray]:
    """g-orthonormal basis with the same span as vs"""
    return orthonormalize(metric_eval(g, p, domain), vs)


def orthonormal_span(G: np.ndarray, vectors: Sequence[np.ndarray], tol: float = RANK_RTOL) -> List[np.ndarray]:
    """g-orthonormal basis of the span of possibly dependent vectors"""
    if len(vectors) == 0:
        return []
    W = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    factor = linalg.cholesky(G, lower=True)
    _, singular, vh = linalg.svd(factor.T @ W, full_matrices=False)
    if singular.size == 0 or singular[0] <= RANK_ATOL:
        return []
    rank = int(np.sum(singular > max(tol * singular[0], RANK_ATOL)))
    return [W @ vh[i] / singular[i] for i in range(rank)]


def complement_basis(G: np.ndarray, basis: Sequence[np.ndarray]) -> List[np.ndarray]:
    """g-orthonormal basis of the g-orthogonal complement of span(basis)"""
    n = G.shape[0]
    if len(basis) == 0:
        return orthonormalize(G, list(np.eye(n)))
    B = np.column_stack([np.asarray(b, dtype=float) for b in basis])
    if numerical_rank(B) < B.shape[1]:
        raise RankDeficient("complement requested for a dependent basis")
    kernel = nullspace(B.T @ G)
    if not kernel:
        return []
    return orthonormalize(G, kernel)


def orthogonal_complement(g: MetricField, p: PointLike, basis: Sequence[np.ndarray],
                          domain: Optional[DomainBox] = None) -> List[np.ndarray]:
    """g-orthogonal complement of span(basis) at p"""
    return complement_basis(metric_eval(g, p, domain), basis)


def relative_complement(G: np.ndarray, ambient: Sequence[np.ndarray], vectors: Sequence[np.ndarray]) -> List[np.ndarray]:
    """g-orthonormal basis of the part of span(ambient) orthogonal to every vector given"""
    if len(ambient) == 0:
        return []
    A = np.column_stack([np.asarray(a, dtype=float) for a in ambient])
    if len(vectors) == 0:
        return orthonormal_span(G, list(A.T))
    W = np.column_stack([np.asarray(v, dtype=float) for v in vectors])
    coefficients = nullspace(W.T @ G @ A)
    if not coefficients:
        return []
    return orthonormalize(G, [A @ c for c in coefficients])


def projector(G: np.ndarray, basis: Sequence[np.ndarray]) -> np.ndarray:
    """g-orthogonal projector onto the span of a g-orthonormal basis"""
    n = G.shape[0]
    P = np.zeros((n, n))
    for b in basis:
        P += np.outer(b, b @ G)
    return P


class ManifoldModel:
    """Coordinate chart with a metric and a domain box"""

    def __init__(self, name: str, dimension: int, metric: MetricField, domain: Optional[DomainBox] = None):
        if metric.dimension != dimension:
            raise ShapeMismatch(f"metric of dimension {metric.dimension} on a {dimension}-dimensional model")
        self.name = name
        self.dimension = dimension
        self.metric = metric
        self.domain = domain if domain is not None else DomainBox.cube(dimension)
        if self.domain.dimension != dimension:
            raise ShapeMismatch(f"domain of dimension {self.domain.dimension} on a {dimension}-dimensional model")

    def point(self, coords: Sequence[float]) -> Point:
        """Validated point of this model"""
        x = np.asarray(coords, dtype=float)
        if x.shape != (self.dimension,):
            raise ShapeMismatch(f"point of length {x.shape} on a {self.dimension}-dimensional model")
        self.check_point(x)
        return Point(x, self.name)

    def check_point(self, x: np.ndarray) -> None:
        if not self.domain.contains(x):
            raise PointOutOfDomain(f"point {np.asarray(x).tolist()} outside {self.name}")

    def check_stencil(self, x: np.ndarray, reach: float) -> None:
        check_stencil(x, reach, self.domain)

    def metric_at(self, p: PointLike) -> np.ndarray:
        return metric_eval(self.metric, p, self.domain)


@dataclass(frozen=True)
class DefectReport:
    """Maximum defect per named check with its tolerance"""

    defects: Dict[str, float]
    tolerances: Dict[str, float]
    samples: int
    resampled: int = 0
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def verdicts(self) -> Dict[str, bool]:
        return {name: bool(value <= self.tolerances[name]) for name, value in self.defects.items()}

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def failures(self) -> Dict[str, float]:
        return {name: value for name, value in self.defects.items() if not self.verdicts[name]}
