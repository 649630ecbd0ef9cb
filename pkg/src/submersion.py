"""
Riemannian submersion mechanics: splits, O'Neill tensors, fibre and map curvature
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .connection import (
    CurvatureSample,
    christoffel_array,
    lie_bracket,
    riemann_tensor,
    sectional_from_sample,
    tensor_covariant_derivative,
)
from .constants import (
    CURVATURE_STEP,
    FIBRE_CHART_RADIUS,
    NEWTON_MAX_ITERATIONS,
    NEWTON_RESIDUAL_TOL,
    NEWTON_STEP_TOL,
    TOLERANCES,
)
from .contact import AlmostContactStructure, StructureValues
from .errors import DegeneratePlane, RankDeficient, ShapeMismatch
from .geometry import (
    FIRST_DERIVATIVE,
    DefectReport,
    DiffScheme,
    DomainBox,
    ManifoldModel,
    MetricField,
    PointLike,
    as_coords,
    check_stencil,
    complement_basis,
    metric_eval,
    nullspace,
    numerical_rank,
    orthonormalize,
    partials,
    projector,
)
from .sampling import make_rng, random_vector, sample_points

logger = logging.getLogger(__name__)

MapFunction = Callable[[np.ndarray], np.ndarray]


class SubmersionMap:
    """Smooth map between two models, with the source structure attached when there is one"""

    def __init__(self, source: Union[AlmostContactStructure, ManifoldModel], target: ManifoldModel,
                 mapping: MapFunction, jacobian: Optional[MapFunction] = None, name: str = "",
                 scheme: DiffScheme = FIRST_DERIVATIVE):
        if isinstance(source, AlmostContactStructure):
            self.structure: Optional[AlmostContactStructure] = source
            self.model = source.model
        else:
            self.structure = None
            self.model = source
        if target.dimension > self.model.dimension:
            raise ShapeMismatch(f"target dimension {target.dimension} exceeds source dimension {self.model.dimension}")
        self.target = target
        self.mapping = mapping
        self.analytic_jacobian = jacobian
        self.name = name or self.model.name
        self.scheme = scheme
        self._frames = lru_cache(maxsize=4096)(self._build_frame)
        self._locals = lru_cache(maxsize=1024)(self._build_local)

    @property
    def source_dimension(self) -> int:
        return self.model.dimension

    @property
    def target_dimension(self) -> int:
        return self.target.dimension

    def __call__(self, p: PointLike) -> np.ndarray:
        value = np.asarray(self.mapping(as_coords(p)), dtype=float)
        if value.shape != (self.target_dimension,):
            raise ShapeMismatch(f"map returned shape {value.shape}, expected ({self.target_dimension},)")
        return value

    def jacobian_at(self, x: np.ndarray) -> np.ndarray:
        """Jacobian matrix, analytic when available"""
        if self.analytic_jacobian is not None:
            J = np.asarray(self.analytic_jacobian(x), dtype=float)
        else:
            J = partials(self, x, self.scheme).T
        if J.shape != (self.target_dimension, self.source_dimension):
            raise ShapeMismatch(f"jacobian has shape {J.shape}")
        return J

    def frame_at(self, p: PointLike) -> "PointFrame":
        """Point data without derivatives (cached)"""
        return self._frames(np.ascontiguousarray(as_coords(p), dtype=float).tobytes())

    def local(self, p: PointLike) -> "LocalGeometry":
        """Point data with connection and projector derivatives (cached)"""
        return self._locals(np.ascontiguousarray(as_coords(p), dtype=float).tobytes())

    def _build_frame(self, key: bytes) -> "PointFrame":
        x = np.frombuffer(key, dtype=float).copy()
        G = metric_eval(self.model.metric, x, self.model.domain)
        J = self.jacobian_at(x)
        if numerical_rank(J) < self.target_dimension:
            raise RankDeficient(f"differential of {self.name} is not surjective at {np.round(x, 6).tolist()}")
        values = self.structure.at(x) if self.structure is not None else None
        return PointFrame(x, G, J, values)

    def _build_local(self, key: bytes) -> "LocalGeometry":
        frame = self._frames(key)
        x = frame.x
        domain = self.model.domain
        check_stencil(x, self.scheme.reach, domain)
        gamma = christoffel_array(self.model.metric, x, self.scheme, domain)
        dH = partials(self._neighbour_projector, x, self.scheme)
        return LocalGeometry(frame, gamma, dH)

    def _neighbour_projector(self, y: np.ndarray) -> np.ndarray:
        J = self.jacobian_at(y)
        if numerical_rank(J) < self.target_dimension:
            raise RankDeficient(f"differential of {self.name} drops rank near {np.round(y, 6).tolist()}")
        try:
            return horizontal_projector(self.model.metric(y), J)
        except np.linalg.LinAlgError as error:
            raise RankDeficient(f"projector of {self.name} is singular near {np.round(y, 6).tolist()}: {error}") from error


def horizontal_projector(G: np.ndarray, J: np.ndarray) -> np.ndarray:
    """ℋ = G⁻¹Jᵀ(JG⁻¹Jᵀ)⁻¹J"""
    return horizontal_lift_matrix(G, J) @ J


def horizontal_lift_matrix(G: np.ndarray, J: np.ndarray) -> np.ndarray:
    """L = G⁻¹Jᵀ(JG⁻¹Jᵀ)⁻¹, so that L·F_*X is the horizontal lift"""
    gradient = np.linalg.solve(G, J.T)
    return gradient @ np.linalg.inv(J @ gradient)


class PointFrame:
    """Metric, Jacobian, projectors and structure tensors at one point"""

    def __init__(self, x: np.ndarray, G: np.ndarray, J: np.ndarray, values: Optional[StructureValues]):
        self.x = x
        self.G = G
        self.J = J
        self.values = values
        self.lift = horizontal_lift_matrix(G, J)
        self.H = self.lift @ J
        self.V = np.eye(x.shape[0]) - self.H

    @property
    def Phi(self) -> np.ndarray:
        return self.values.Phi

    @property
    def xi(self) -> np.ndarray:
        return self.values.xi

    @property
    def eta(self) -> np.ndarray:
        return self.values.eta

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(u @ self.G @ v)

    def norm(self, u: np.ndarray) -> float:
        return float(np.sqrt(max(float(u @ self.G @ u), 0.0)))


class LocalGeometry:
    """Connection data at a point; T and A as full coordinate arrays T[k, a, b]"""

    def __init__(self, frame: PointFrame, gamma: np.ndarray, dH: np.ndarray):
        self.frame = frame
        self.gamma = gamma
        self.dH = dH  # dH[i] = ∂_i ℋ

    @property
    def x(self) -> np.ndarray:
        return self.frame.x

    def connection(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Γ(X, Y)"""
        return np.einsum("kij,i,j->k", self.gamma, X, Y)

    @cached_property
    def T(self) -> np.ndarray:
        Vp, Hp = self.frame.V, self.frame.H
        derivative = np.einsum("ia,irb->rab", Vp, self.dH)
        vertical_vertical = np.einsum("rij,ia,jb->rab", self.gamma, Vp, Vp)
        vertical_horizontal = np.einsum("rij,ia,jb->rab", self.gamma, Vp, Hp)
        return (np.einsum("kr,rab->kab", Hp, -derivative + vertical_vertical)
                + np.einsum("kr,rab->kab", Vp, derivative + vertical_horizontal))

    @cached_property
    def A(self) -> np.ndarray:
        Vp, Hp = self.frame.V, self.frame.H
        derivative = np.einsum("ia,irb->rab", Hp, self.dH)
        horizontal_horizontal = np.einsum("rij,ia,jb->rab", self.gamma, Hp, Hp)
        horizontal_vertical = np.einsum("rij,ia,jb->rab", self.gamma, Hp, Vp)
        return (np.einsum("kr,rab->kab", Vp, derivative + horizontal_horizontal)
                + np.einsum("kr,rab->kab", Hp, -derivative + horizontal_vertical))

    def T_value(self, E: np.ndarray, G: np.ndarray) -> np.ndarray:
        return np.einsum("kab,a,b->k", self.T, E, G)

    def A_value(self, E: np.ndarray, G: np.ndarray) -> np.ndarray:
        return np.einsum("kab,a,b->k", self.A, E, G)


@dataclass(frozen=True, eq=False)
class VerticalHorizontalSplit:
    """Orthonormal vertical and horizontal bases with their projectors"""

    point: np.ndarray
    G: np.ndarray
    vertical: List[np.ndarray]
    horizontal: List[np.ndarray]
    V: np.ndarray
    H: np.ndarray

    def invariant_defects(self) -> float:
        """Largest violation of the projector identities"""
        n = self.G.shape[0]
        defects = [
            np.max(np.abs(self.V + self.H - np.eye(n))),
            np.max(np.abs(self.V @ self.V - self.V)),
            np.max(np.abs(self.H @ self.H - self.H)),
            np.max(np.abs(self.G @ self.V - (self.G @ self.V).T)),
            np.max(np.abs(self.G @ self.H - (self.G @ self.H).T)),
        ]
        defects.extend(float(np.max(np.abs(self.V @ v - v))) for v in self.vertical)
        defects.extend(float(np.max(np.abs(self.H @ h - h))) for h in self.horizontal)
        return float(max(defects))


@dataclass(frozen=True, eq=False)
class ONeillSample:
    """T and A on every pair of split basis vectors"""

    point: np.ndarray
    vertical: List[np.ndarray]
    horizontal: List[np.ndarray]
    T: Dict[Tuple[int, int], np.ndarray]
    A: Dict[Tuple[int, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class FibreSample:
    """Intrinsic and extrinsic data of the fibre through a point"""

    point: np.ndarray
    vertical: List[np.ndarray]
    induced_metric: np.ndarray
    sectional_gauss: Dict[Tuple[int, int], float]
    sectional_intrinsic: Dict[Tuple[int, int], float]
    scalar_gauss: float
    scalar_intrinsic: float
    mean_curvature: np.ndarray
    intrinsic_curvature: CurvatureSample


class IdentityReport(DefectReport):
    """Residuals of the O'Neill identities over sampled points"""


class AxiomReport(DefectReport):
    """Rank and horizontal isometry defects over sampled points"""


def differential(F: SubmersionMap, p: PointLike) -> np.ndarray:
    """Jacobian at p; raises when the rank drops"""
    return F.frame_at(p).J


def split(F: SubmersionMap, p: PointLike) -> VerticalHorizontalSplit:
    """Kernel of the differential and its g-orthogonal complement"""
    frame = F.frame_at(p)
    vertical = orthonormalize(frame.G, nullspace(frame.J))
    horizontal = complement_basis(frame.G, vertical)
    return VerticalHorizontalSplit(
        frame.x, frame.G, vertical, horizontal, projector(frame.G, vertical), projector(frame.G, horizontal)
    )


def check_axioms(F: SubmersionMap, samples: int, seed: int) -> AxiomReport:
    """Rank, horizontal isometry and projector identities at sampled points"""
    rng = make_rng(seed)
    rank_failures = 0
    isometry = 0.0
    projectors = 0.0
    for x in sample_points(F.model.domain, samples, rng):
        try:
            parts = split(F, x)
        except RankDeficient:
            rank_failures += 1
            continue
        frame = F.frame_at(x)
        GN = F.target.metric(F(x))
        for a, X in enumerate(parts.horizontal):
            for Y in parts.horizontal[a:]:
                image = float((frame.J @ X) @ GN @ (frame.J @ Y))
                isometry = max(isometry, abs(image - frame.inner(X, Y)))
        projectors = max(projectors, parts.invariant_defects(), float(np.max(np.abs(parts.H - frame.H))))
    names = ("rank", "isometry", "projectors")
    defects = {"rank": float(rank_failures), "isometry": isometry, "projectors": projectors}
    logger.debug("axioms of %s: %s", F.name, defects)
    return AxiomReport(defects, {name: TOLERANCES[name] for name in names}, samples)


def oneill_T(F: SubmersionMap, p: PointLike, E: np.ndarray, G: np.ndarray) -> np.ndarray:
    """T_E G = ℋ∇_{𝒱E}𝒱G + 𝒱∇_{𝒱E}ℋG"""
    return F.local(p).T_value(np.asarray(E, dtype=float), np.asarray(G, dtype=float))


def oneill_A(F: SubmersionMap, p: PointLike, E: np.ndarray, G: np.ndarray) -> np.ndarray:
    """A_E G = 𝒱∇_{ℋE}ℋG + ℋ∇_{ℋE}𝒱G"""
    return F.local(p).A_value(np.asarray(E, dtype=float), np.asarray(G, dtype=float))


def oneill_sample(F: SubmersionMap, p: PointLike) -> ONeillSample:
    """Both tensors on all pairs of the split bases"""
    parts = split(F, p)
    local = F.local(p)
    basis = parts.vertical + parts.horizontal
    T = {(a, b): local.T_value(E, G) for a, E in enumerate(basis) for b, G in enumerate(basis)}
    A = {(a, b): local.A_value(E, G) for a, E in enumerate(basis) for b, G in enumerate(basis)}
    return ONeillSample(parts.point, parts.vertical, parts.horizontal, T, A)


def basic_lift(F: SubmersionMap, y: np.ndarray, target_vector: np.ndarray) -> np.ndarray:
    """Horizontal vector at y projecting to the given target components"""
    return F.frame_at(y).lift @ np.asarray(target_vector, dtype=float)


def mean_curvature(F: SubmersionMap, p: PointLike) -> np.ndarray:
    """H = (1/dim ker) Σ T_{U_j} U_j"""
    parts = split(F, p)
    local = F.local(p)
    if not parts.vertical:
        return np.zeros(F.source_dimension)
    total = sum(local.T_value(U, U) for U in parts.vertical)
    return total / len(parts.vertical)


def umbilicity_defect(F: SubmersionMap, p: PointLike) -> float:
    """max |T_U W − g(U, W)H| over vertical basis pairs"""
    parts = split(F, p)
    local = F.local(p)
    H = mean_curvature(F, p)
    worst = 0.0
    for U in parts.vertical:
        for W in parts.vertical:
            worst = max(worst, float(np.linalg.norm(local.T_value(U, W) - local.frame.inner(U, W) * H)))
    return worst


class FibreChart:
    """Local parameterization s ↦ p + V s + H t(s) of the fibre through p"""

    def __init__(self, F: SubmersionMap, p: PointLike):
        self.F = F
        self.base = np.array(as_coords(p), dtype=float)
        parts = split(F, self.base)
        self.vertical = np.column_stack(parts.vertical)
        self.horizontal = np.column_stack(parts.horizontal)
        self.level = F(self.base)
        self.dimension = self.vertical.shape[1]
        self.domain = DomainBox.cube(self.dimension, FIBRE_CHART_RADIUS)

    def embed(self, s: np.ndarray) -> np.ndarray:
        """Point of the fibre with chart coordinates s (Newton on F(x) = q)"""
        start = self.base + self.vertical @ np.asarray(s, dtype=float)
        t = np.zeros(self.horizontal.shape[1])
        previous = np.inf
        for _ in range(NEWTON_MAX_ITERATIONS):
            y = start + self.horizontal @ t
            residual = self.F(y) - self.level
            step = np.linalg.solve(self.F.jacobian_at(y) @ self.horizontal, residual)
            t = t - step
            size = float(np.linalg.norm(step))
            if size <= NEWTON_STEP_TOL * (1.0 + float(np.linalg.norm(t))) or size >= previous:
                break
            previous = size
        y = start + self.horizontal @ t
        if float(np.linalg.norm(self.F(y) - self.level)) > NEWTON_RESIDUAL_TOL:
            raise RankDeficient(f"fibre chart at {np.round(self.base, 6).tolist()} did not converge")
        return y

    def tangents(self, s: np.ndarray) -> np.ndarray:
        """Columns ∂ι/∂s_a = V_a − H (J H)⁻¹ J V_a"""
        y = self.embed(s)
        J = self.F.jacobian_at(y)
        return self.vertical - self.horizontal @ np.linalg.solve(J @ self.horizontal, J @ self.vertical)

    def induced_metric_at(self, s: np.ndarray) -> np.ndarray:
        y = self.embed(s)
        J = self.F.jacobian_at(y)
        tangents = self.vertical - self.horizontal @ np.linalg.solve(J @ self.horizontal, J @ self.vertical)
        return tangents.T @ self.F.model.metric(y) @ tangents

    def metric(self) -> MetricField:
        return MetricField(self.induced_metric_at, self.dimension, "fibre")


def fibre_curvature(F: SubmersionMap, p: PointLike, ambient: Optional[CurvatureSample] = None) -> FibreSample:
    """Fibre sectional curvatures by the Gauss equation and intrinsically"""
    x = as_coords(p)
    chart = FibreChart(F, x)
    k = chart.dimension
    if k < 2:
        raise DegeneratePlane(f"fibres of {F.name} have dimension {k}")
    local = F.local(x)
    vertical = [chart.vertical[:, a] for a in range(k)]
    if ambient is None:
        ambient = riemann_tensor(F.model.metric, x, domain=F.model.domain)
    fibre_metric = chart.metric()
    origin = np.zeros(k)
    induced = fibre_metric(origin)
    intrinsic = riemann_tensor(fibre_metric, origin, domain=chart.domain)
    basis = np.eye(k)

    gauss: Dict[Tuple[int, int], float] = {}
    direct: Dict[Tuple[int, int], float] = {}
    for a in range(k):
        for b in range(a + 1, k):
            U, V = vertical[a], vertical[b]
            T_UV = local.T_value(U, V)
            ambient_K = sectional_from_sample(ambient, local.frame.G, U, V)
            gauss[(a, b)] = (ambient_K - local.frame.inner(T_UV, T_UV)
                             + local.frame.inner(local.T_value(U, U), local.T_value(V, V)))
            direct[(a, b)] = sectional_from_sample(intrinsic, induced, basis[a], basis[b])
    H = sum(local.T_value(U, U) for U in vertical) / k
    logger.debug("fibre curvature at %s: gauss %s intrinsic %s", np.round(x, 4).tolist(), gauss, direct)
    return FibreSample(x, vertical, induced, gauss, direct, float(sum(gauss.values())),
                       float(sum(direct.values())), H, intrinsic)


def second_fundamental_form_map(F: SubmersionMap, p: PointLike, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """(∇F_*)(X, Y) = ∂_X(J)Y + Γᴺ(JX, JY) − J Γᴹ(X, Y)"""
    x = as_coords(p)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    local = F.local(x)
    J = local.frame.J
    dJ = partials(F.jacobian_at, x, F.scheme, F.model.domain)
    y = F(x)
    target_gamma = christoffel_array(F.target.metric, y, F.scheme, F.target.domain)
    JX, JY = J @ X, J @ Y
    return (np.einsum("i,iab,b->a", X, dJ, Y)
            + np.einsum("kij,i,j->k", target_gamma, JX, JY)
            - J @ local.connection(X, Y))


def tension_field(F: SubmersionMap, p: PointLike, frame: Optional[Sequence[np.ndarray]] = None) -> np.ndarray:
    """Trace of ∇F_* over a g-orthonormal frame (the split frame by default)"""
    x = as_coords(p)
    if frame is None:
        parts = split(F, x)
        frame = parts.vertical + parts.horizontal
    return sum(second_fundamental_form_map(F, x, e, e) for e in frame)


def covariant_tensor_derivatives(F: SubmersionMap, x: np.ndarray, direction: np.ndarray,
                                 step: float = CURVATURE_STEP) -> Tuple[np.ndarray, np.ndarray]:
    """(∇_Z T, ∇_Z A) as [k, a, b] arrays"""
    local = F.local(x)
    plus = F.local(x + step * direction)
    minus = F.local(x - step * direction)
    nabla_T = tensor_covariant_derivative(local.T, plus.T, minus.T, step, local.gamma, direction)
    nabla_A = tensor_covariant_derivative(local.A, plus.A, minus.A, step, local.gamma, direction)
    return nabla_T, nabla_A


def _pair_form_defects(F: SubmersionMap, x: np.ndarray, parts: VerticalHorizontalSplit) -> Dict[str, float]:
    local = F.local(x)
    J = local.frame.J
    defects = {"vertical-pair-form": 0.0, "mixed-pair-form": 0.0, "horizontal-pair-form": 0.0}
    for U in parts.vertical:
        for V in parts.vertical:
            value = second_fundamental_form_map(F, x, U, V) + J @ local.T_value(U, V)
            defects["vertical-pair-form"] = max(defects["vertical-pair-form"], float(np.linalg.norm(value)))
        for X in parts.horizontal:
            value = second_fundamental_form_map(F, x, X, U) + J @ local.A_value(X, U)
            defects["mixed-pair-form"] = max(defects["mixed-pair-form"], float(np.linalg.norm(value)))
    for X in parts.horizontal:
        for Y in parts.horizontal:
            value = second_fundamental_form_map(F, x, X, Y)
            defects["horizontal-pair-form"] = max(defects["horizontal-pair-form"], float(np.linalg.norm(value)))
    return defects


def _bracket_defect(F: SubmersionMap, x: np.ndarray, parts: VerticalHorizontalSplit) -> float:
    """max |A_X Y − ½𝒱[X̃, Ỹ]| over basic lifts of horizontal basis pairs"""
    local = F.local(x)
    worst = 0.0
    for a, X in enumerate(parts.horizontal):
        for Y in parts.horizontal[a + 1:]:
            X_star, Y_star = local.frame.J @ X, local.frame.J @ Y
            bracket = lie_bracket(lambda y: basic_lift(F, y, X_star), lambda y: basic_lift(F, y, Y_star),
                                  x, F.scheme, F.model.domain)
            value = local.A_value(X, Y) - 0.5 * local.frame.V @ bracket
            worst = max(worst, float(np.linalg.norm(value)))
    return worst


def verify_curvature_identities(F: SubmersionMap, samples: int, seed: int, fibre_sign: float = 1.0) -> IdentityReport:
    """Residuals of the O'Neill identities at sampled points

    fibre_sign multiplies the intrinsic curvature term of the vertical Gauss equation; any value
    other than 1 turns that check into a deliberately broken variant.
    """
    rng = make_rng(seed)
    names = ["T-vertical-restriction", "A-horizontal-restriction", "T-symmetry", "A-alternation", "A-bracket",
             "skew-adjoint-T", "skew-adjoint-A", "mixed-curvature", "vertical-pair-form", "mixed-pair-form",
             "horizontal-pair-form"]
    defects = {name: 0.0 for name in names}
    n = F.source_dimension
    for x in sample_points(F.model.domain, samples, rng):
        parts = split(F, x)
        local = F.local(x)
        frame = local.frame
        g = frame.inner

        D, E, G = (random_vector(rng, n) for _ in range(3))
        restriction_T = local.T_value(D, E) - local.T_value(frame.V @ D, E)
        restriction_A = local.A_value(D, E) - local.A_value(frame.H @ D, E)
        defects["T-vertical-restriction"] = max(defects["T-vertical-restriction"], float(np.linalg.norm(restriction_T)))
        defects["A-horizontal-restriction"] = max(defects["A-horizontal-restriction"], float(np.linalg.norm(restriction_A)))
        skew_T = g(local.T_value(D, E), G) + g(local.T_value(D, G), E)
        skew_A = g(local.A_value(D, E), G) + g(local.A_value(D, G), E)
        defects["skew-adjoint-T"] = max(defects["skew-adjoint-T"], abs(skew_T))
        defects["skew-adjoint-A"] = max(defects["skew-adjoint-A"], abs(skew_A))

        for U in parts.vertical:
            for W in parts.vertical:
                defects["T-symmetry"] = max(defects["T-symmetry"], float(np.linalg.norm(local.T_value(U, W) - local.T_value(W, U))))
        for X in parts.horizontal:
            for Y in parts.horizontal:
                alternation = local.A_value(X, Y) + local.A_value(Y, X)
                defects["A-alternation"] = max(defects["A-alternation"], float(np.linalg.norm(alternation)))
        defects["A-bracket"] = max(defects["A-bracket"], _bracket_defect(F, x, parts))

        for name, value in _pair_form_defects(F, x, parts).items():
            defects[name] = max(defects[name], value)

        ambient = riemann_tensor(F.model.metric, x, domain=F.model.domain)

        horizontal_derivatives = {a: covariant_tensor_derivatives(F, x, X) for a, X in enumerate(parts.horizontal)}
        vertical_derivatives = {b: covariant_tensor_derivatives(F, x, V) for b, V in enumerate(parts.vertical)}
        for a, X in enumerate(parts.horizontal):
            nabla_T = horizontal_derivatives[a][0]
            for Y in parts.horizontal:
                for b, V in enumerate(parts.vertical):
                    nabla_A = vertical_derivatives[b][1]
                    for W in parts.vertical:
                        lhs = ambient.lowered_value(Y, W, V, X)
                        rhs = (g(np.einsum("kab,a,b->k", nabla_T, V, W), Y)
                               + g(np.einsum("kab,a,b->k", nabla_A, X, Y), W)
                               - g(local.T_value(V, X), local.T_value(W, Y))
                               + g(local.A_value(X, V), local.A_value(Y, W)))
                        defects["mixed-curvature"] = max(defects["mixed-curvature"], abs(lhs - rhs))

        if len(parts.vertical) >= 2:
            fibre = fibre_curvature(F, x, ambient)
            k = len(fibre.vertical)
            defects["fibre-sectional"] = max(defects.get("fibre-sectional", 0.0), max(
                abs(fibre.sectional_gauss[key] - fibre.sectional_intrinsic[key]) for key in fibre.sectional_gauss))
            defects["fibre-metric"] = max(defects.get("fibre-metric", 0.0),
                                          float(np.max(np.abs(fibre.induced_metric - np.eye(k)))))
            worst = defects.get("vertical-gauss", 0.0)
            vectors = fibre.vertical
            basis = np.eye(k)
            for s in range(k):
                for w in range(k):
                    for v in range(k):
                        for u in range(k):
                            S_, W_, V_, U_ = vectors[s], vectors[w], vectors[v], vectors[u]
                            lhs = ambient.lowered_value(S_, W_, V_, U_)
                            intrinsic = fibre.intrinsic_curvature.lowered_value(basis[s], basis[w], basis[v], basis[u])
                            rhs = (fibre_sign * intrinsic
                                   + g(local.T_value(U_, W_), local.T_value(V_, S_))
                                   - g(local.T_value(V_, W_), local.T_value(U_, S_)))
                            worst = max(worst, abs(lhs - rhs))
            defects["vertical-gauss"] = worst

    tolerances = {name: TOLERANCES[name] for name in defects}
    logger.info("identities of %s over %d points: %s", F.name, samples, defects)
    return IdentityReport(defects, tolerances, samples)


def harmonic_verdict(F: SubmersionMap, p: PointLike) -> bool:
    return float(np.linalg.norm(tension_field(F, p))) <= TOLERANCES["harmonic"]
