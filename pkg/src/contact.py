"""
Almost contact metric structures, cosymplectic checks and space-form curvature
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from .connection import christoffel_array, covariant_derivative, lie_bracket, riemann_tensor
from .constants import SUBSPACE_TOL, TOLERANCES
from .errors import NotOrthogonalToXi, NotUnit, PointOutOfDomain, ShapeMismatch, StructureInvalid
from .geometry import (
    FIRST_DERIVATIVE,
    DefectReport,
    DiffScheme,
    EndomorphismField,
    ManifoldModel,
    MetricField,
    OneFormField,
    PointLike,
    VectorField,
    as_coords,
    directional_derivative,
    metric_eval,
    partials,
)
from .sampling import make_rng, random_smooth_field, random_vector, sample_point

logger = logging.getLogger(__name__)

ALGEBRAIC_CHECKS = ("phi-square", "phi-xi", "eta-phi", "eta-xi", "metric-compatibility", "eta-metric")
VALIDATION_SAMPLES = 8


class StructureReport(DefectReport):
    """Per-check maximum defects of a structure over sampled points"""


@dataclass(frozen=True, eq=False)
class StructureValues:
    """Metric, φ, ξ and η evaluated at one point"""

    G: np.ndarray
    Phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray


def standard_phi_matrix(n: int) -> np.ndarray:
    """φ of R^(2n+1) in the ordering (x1..xn, y1..yn, z): φ∂x_i = −∂y_i, φ∂y_i = ∂x_i"""
    matrix = np.zeros((2 * n + 1, 2 * n + 1))
    matrix[:n, n:2 * n] = np.eye(n)
    matrix[n:2 * n, :n] = -np.eye(n)
    return matrix


class AlmostContactStructure:
    """Almost contact metric structure (φ, ξ, η, g) over a manifold model"""

    def __init__(self, model: ManifoldModel, phi: EndomorphismField, xi: VectorField, eta: OneFormField,
                 validate: bool = True, seed: int = 0):
        if model.dimension % 2 != 1:
            raise StructureInvalid(f"almost contact structures need odd dimension, got {model.dimension}")
        for name, tensor in (("phi", phi), ("xi", xi), ("eta", eta)):
            if tensor.dimension != model.dimension:
                raise ShapeMismatch(f"{name} has dimension {tensor.dimension}, model has {model.dimension}")
        self.model = model
        self.phi = phi
        self.xi = xi
        self.eta = eta

        if validate:
            report = check_almost_contact(self, VALIDATION_SAMPLES, seed)
            if not report.passed:
                details = ", ".join(f"{k}={v:.3e}" for k, v in report.failures().items())
                raise StructureInvalid(f"structure on {model.name} violates the axioms: {details}")

    @property
    def g(self) -> MetricField:
        return self.model.metric

    @property
    def dimension(self) -> int:
        return self.model.dimension

    def at(self, p: PointLike) -> StructureValues:
        """Evaluate every tensor of the structure at p"""
        x = as_coords(p)
        return StructureValues(self.g(x), self.phi(x), self.xi(x), self.eta(x))


def _algebraic_defects(values: StructureValues, X: np.ndarray, Y: np.ndarray) -> Dict[str, float]:
    G, Phi, xi, eta = values.G, values.Phi, values.xi, values.eta
    PX, PY = Phi @ X, Phi @ Y
    return {
        "phi-square": float(np.linalg.norm(Phi @ PX + X - (eta @ X) * xi)),
        "phi-xi": float(np.linalg.norm(Phi @ xi)),
        "eta-phi": abs(float(eta @ PX)),
        "eta-xi": abs(float(eta @ xi) - 1.0),
        "metric-compatibility": abs(float(PX @ G @ PY) - float(X @ G @ Y) + float(eta @ X) * float(eta @ Y)),
        "eta-metric": abs(float(eta @ X) - float(X @ G @ xi)),
    }


def _sample_structure_points(S: AlmostContactStructure, samples: int, rng: np.random.Generator):
    """Admissible points and the number of redraws"""
    resampled = 0
    points = []
    while len(points) < samples:
        x = sample_point(S.model.domain, rng)
        try:
            metric_eval(S.g, x, S.model.domain)
        except PointOutOfDomain:
            resampled += 1
            continue
        points.append(x)
    return points, resampled


def _max_report(per_point: Callable[[np.ndarray], Dict[str, float]], names, points, resampled: int) -> StructureReport:
    defects = {name: 0.0 for name in names}
    for x in points:
        for name, value in per_point(x).items():
            defects[name] = max(defects[name], value)
    return StructureReport(defects, {name: TOLERANCES[name] for name in names}, len(points), resampled)


def check_almost_contact(S: AlmostContactStructure, samples: int, seed: int) -> StructureReport:
    """Max defects of the structure axioms and metric compatibility"""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = make_rng(seed)
    points, resampled = _sample_structure_points(S, samples, rng)

    def per_point(x):
        X = random_vector(rng, S.dimension)
        Y = random_vector(rng, S.dimension)
        return _algebraic_defects(S.at(x), X, Y)

    report = _max_report(per_point, ALGEBRAIC_CHECKS, points, resampled)
    logger.debug("almost contact defects on %s: %s", S.model.name, report.defects)
    return report


def fundamental_two_form(S: AlmostContactStructure, p: PointLike, X: np.ndarray, Y: np.ndarray) -> float:
    """Φ(X, Y) = g(X, φY)"""
    values = S.at(p)
    return float(np.asarray(X) @ values.G @ values.Phi @ np.asarray(Y))


def check_closed(S: AlmostContactStructure, samples: int, seed: int = 0,
                 scheme: DiffScheme = FIRST_DERIVATIVE) -> StructureReport:
    """Coefficients of dΦ and dη by finite differences"""
    rng = make_rng(seed)
    points, resampled = _sample_structure_points(S, samples, rng)
    domain = S.model.domain

    def two_form(y):
        return S.g(y) @ S.phi(y)

    def per_point(x):
        d_form = partials(two_form, x, scheme, domain)  # [i, j, k] = ∂_i Φ_jk
        d_phi = d_form + np.einsum("jki->ijk", d_form) + np.einsum("kij->ijk", d_form)
        d_eta_raw = partials(S.eta, x, scheme, domain)  # [i, j] = ∂_i η_j
        return {
            "d-Phi": float(np.max(np.abs(d_phi))),
            "d-eta": float(np.max(np.abs(d_eta_raw - d_eta_raw.T))),
        }

    return _max_report(per_point, ("d-Phi", "d-eta"), points, resampled)


def _as_function(X):
    if callable(X):
        return X
    value = np.asarray(X, dtype=float)
    return lambda y: value


def nijenhuis_defect(S: AlmostContactStructure, p: PointLike, X, Y,
                     scheme: DiffScheme = FIRST_DERIVATIVE) -> np.ndarray:
    """[φ,φ](X,Y) + 2dη(X,Y)ξ"""
    x = as_coords(p)
    domain = S.model.domain
    X_fn, Y_fn = _as_function(X), _as_function(Y)

    def phi_X(y):
        return S.phi(y) @ X_fn(y)

    def phi_Y(y):
        return S.phi(y) @ Y_fn(y)

    def bracket(A, B):
        return lie_bracket(A, B, x, scheme, domain)

    Phi = S.phi(x)
    torsion = (
        Phi @ (Phi @ bracket(X_fn, Y_fn))
        + bracket(phi_X, phi_Y)
        - Phi @ bracket(phi_X, Y_fn)
        - Phi @ bracket(X_fn, phi_Y)
    )
    X_at, Y_at = np.asarray(X_fn(x)), np.asarray(Y_fn(x))
    x_eta_y = float(directional_derivative(lambda y: S.eta(y) @ Y_fn(y), x, X_at, scheme, domain))
    y_eta_x = float(directional_derivative(lambda y: S.eta(y) @ X_fn(y), x, Y_at, scheme, domain))
    d_eta = 0.5 * (x_eta_y - y_eta_x - float(S.eta(x) @ bracket(X_fn, Y_fn)))
    return torsion + 2.0 * d_eta * S.xi(x)


def check_normal(S: AlmostContactStructure, samples: int, seed: int = 0) -> StructureReport:
    """Max Nijenhuis defect over coordinate field pairs"""
    rng = make_rng(seed)
    points, resampled = _sample_structure_points(S, samples, rng)
    basis = np.eye(S.dimension)

    def per_point(x):
        worst = 0.0
        for i in range(S.dimension):
            for j in range(i + 1, S.dimension):
                worst = max(worst, float(np.linalg.norm(nijenhuis_defect(S, x, basis[i], basis[j]))))
        return {"nijenhuis": worst}

    return _max_report(per_point, ("nijenhuis",), points, resampled)


def check_cosymplectic(S: AlmostContactStructure, samples: int, seed: int = 0) -> StructureReport:
    """Max of |(∇_E φ)G| and |∇_E ξ| for random smooth E, G"""
    rng = make_rng(seed)
    points, resampled = _sample_structure_points(S, samples, rng)
    domain = S.model.domain

    def per_point(x):
        E = random_smooth_field(rng, S.dimension)
        G_field = random_smooth_field(rng, S.dimension)
        gamma = christoffel_array(S.g, x, domain=domain)
        phi_G = VectorField(lambda y: S.phi(y) @ G_field(y), S.dimension)
        nabla_phi = (
            covariant_derivative(S.g, E, phi_G, x, domain=domain, gamma=gamma)
            - S.phi(x) @ covariant_derivative(S.g, E, G_field, x, domain=domain, gamma=gamma)
        )
        nabla_xi = covariant_derivative(S.g, E, S.xi, x, domain=domain, gamma=gamma)
        return {"nabla-phi": float(np.linalg.norm(nabla_phi)), "nabla-xi": float(np.linalg.norm(nabla_xi))}

    return _max_report(per_point, ("nabla-phi", "nabla-xi"), points, resampled)


def phi_sectional(S: AlmostContactStructure, p: PointLike, E: np.ndarray, curvature=None) -> float:
    """H(E) = g(R(E, φE)φE, E) for a unit E orthogonal to ξ"""
    x = as_coords(p)
    E = np.asarray(E, dtype=float)
    values = S.at(x)
    length = float(E @ values.G @ E)
    if abs(length - 1.0) > SUBSPACE_TOL:
        raise NotUnit(f"|E|^2 = {length:.12g}")
    if abs(float(values.eta @ E)) > SUBSPACE_TOL:
        raise NotOrthogonalToXi(f"eta(E) = {float(values.eta @ E):.3e}")
    if curvature is None:
        curvature = riemann_tensor(S.g, x, domain=S.model.domain)
    phi_E = values.Phi @ E
    return curvature.lowered_value(E, phi_E, phi_E, E)


def space_form_curvature(c: float, S: AlmostContactStructure, p: PointLike,
                         X: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Closed-form curvature R(X,Y)Z of a cosymplectic space form of constant φ-sectional curvature c"""
    values = S.at(p)
    G, Phi, xi, eta = values.G, values.Phi, values.xi, values.eta
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))

    def g(u, v):
        return float(u @ G @ v)

    PX, PY, PZ = Phi @ X, Phi @ Y, Phi @ Z
    result = (
        g(Y, Z) * X
        - g(X, Z) * Y
        + float(eta @ X) * float(eta @ Z) * Y
        - float(eta @ Y) * float(eta @ Z) * X
        + g(X, Z) * float(eta @ Y) * xi
        - g(Y, Z) * float(eta @ X) * xi
        + g(PY, Z) * PX
        - g(PX, Z) * PY
        - 2.0 * g(PX, Y) * PZ
    )
    return 0.25 * c * result


def standard_structure(n: int, domain=None, validate: bool = True) -> AlmostContactStructure:
    """Flat cosymplectic R^(2n+1) with η = dz"""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    dimension = 2 * n + 1
    model = ManifoldModel(f"r{dimension}-cosymplectic", dimension, MetricField.euclidean(dimension), domain)
    matrix = standard_phi_matrix(n)
    matrix.setflags(write=False)
    unit = np.zeros(dimension)
    unit[-1] = 1.0
    unit.setflags(write=False)
    return AlmostContactStructure(
        model,
        EndomorphismField(lambda x: matrix, dimension, "phi"),
        VectorField(lambda x: unit, dimension, "xi"),
        OneFormField(lambda x: unit, dimension, "eta"),
        validate=validate,
    )
