"""
Slant submersions: ψ/ω/B/C decompositions, slant angle, adapted frames and criteria
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .connection import covariant_derivative
from .constants import (
    ANGLE_TOL,
    DIVISION_GUARD,
    SUBSPACE_TOL,
    TOLERANCES,
    VERDICT_ANTI_INVARIANT,
    VERDICT_INVARIANT,
    VERDICT_NOT_SLANT,
    VERDICT_PROPER,
    XI_EXCLUSION_TOL,
    XI_HORIZONTAL,
    XI_OBLIQUE,
    XI_VERTICAL,
)
from .errors import (
    DimensionMismatch,
    NotHorizontal,
    NotProperSlant,
    NotSlant,
    NotVertical,
    StructureInvalid,
    WrongXiPosition,
    XiDirection,
    ZeroPhi,
)
from .geometry import DefectReport, PointLike, as_coords, orthonormal_span, relative_complement
from .sampling import make_rng, random_vector, sample_points
from .submersion import PointFrame, SubmersionMap, second_fundamental_form_map, split, tension_field

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SlantDecomposition:
    """φU = ψU + ωU for a vertical U"""

    point: np.ndarray
    vector: np.ndarray
    psi: np.ndarray
    omega: np.ndarray


@dataclass(frozen=True, eq=False)
class HorizontalDecomposition:
    """φX = BX + CX for a horizontal X"""

    point: np.ndarray
    vector: np.ndarray
    b: np.ndarray
    c: np.ndarray


@dataclass(frozen=True, eq=False)
class SlantOperators:
    """ψ, ω, B and C as coordinate matrices acting on the whole tangent space"""

    frame: PointFrame
    psi: np.ndarray
    omega: np.ndarray
    b: np.ndarray
    c: np.ndarray


@dataclass(frozen=True)
class SlantReport:
    """Sampled slant angles with the resulting verdict"""

    xi_position: str
    angles: Tuple[float, ...]
    theta_mean: float
    max_deviation: float
    verdict: str
    samples: int
    directions: int
    tolerance: float = ANGLE_TOL

    @property
    def is_slant(self) -> bool:
        return self.verdict != VERDICT_NOT_SLANT

    @property
    def is_proper(self) -> bool:
        return self.verdict == VERDICT_PROPER

    @property
    def cos_squared(self) -> float:
        """λ = cos²θ"""
        return math.cos(self.theta_mean) ** 2

    @property
    def sin_squared(self) -> float:
        return math.sin(self.theta_mean) ** 2


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """Orthonormal frame built from e_i, sec θ ψe_i, csc θ ωe_i, the μ (or D) part and ξ"""

    point: np.ndarray
    vertical: List[np.ndarray]
    horizontal: List[np.ndarray]
    vertical_labels: List[str]
    horizontal_labels: List[str]
    theta: float
    xi_position: str
    pairs: int

    def gram_defect(self, G: np.ndarray) -> float:
        vectors = np.column_stack(self.vertical + self.horizontal)
        gram = vectors.T @ G @ vectors
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


@dataclass(frozen=True, eq=False)
class MuReport:
    """Complement of ω(ker F_*) in the horizontal space (μ, or D when ξ is horizontal)"""

    point: np.ndarray
    basis: List[np.ndarray]
    omega_basis: List[np.ndarray]
    dimension: int
    expected_dimension: Optional[int]
    invariance_defect: float
    xi_position: str

    @property
    def dimension_matches(self) -> bool:
        return self.expected_dimension is None or self.dimension == self.expected_dimension


@dataclass(frozen=True, eq=False)
class OmegaParallelSample:
    """Both sides of the (∇_U ω)V and (∇_U ψ)V identities"""

    omega_lhs: np.ndarray
    omega_rhs: np.ndarray
    psi_lhs: np.ndarray
    psi_rhs: np.ndarray

    @property
    def omega_residual(self) -> float:
        return float(np.linalg.norm(self.omega_lhs - self.omega_rhs))

    @property
    def psi_residual(self) -> float:
        return float(np.linalg.norm(self.psi_lhs - self.psi_rhs))


@dataclass(frozen=True)
class CriteriaSample:
    """Totally geodesic criteria: both sides of each equality and the direct defects"""

    horizontal_criterion: float
    vertical_criterion: float
    map_criterion: float
    criterion_identity: float
    horizontal_foliation_defect: float
    vertical_foliation_defect: float
    map_defect: float
    extras: Dict[str, float] = field(default_factory=dict)


class SlantIdentityReport(DefectReport):
    """Residuals of the slant identities over sampled points"""


def _structured_frame(F: SubmersionMap, p: PointLike) -> PointFrame:
    if F.structure is None:
        raise StructureInvalid(f"{F.name} has no almost contact structure attached")
    return F.frame_at(p)


def slant_operators(F: SubmersionMap, p: PointLike) -> SlantOperators:
    frame = _structured_frame(F, p)
    Phi, V, H = frame.Phi, frame.V, frame.H
    return SlantOperators(frame, V @ Phi @ V, H @ Phi @ V, V @ Phi @ H, H @ Phi @ H)


def _is_vertical(frame: PointFrame, U: np.ndarray) -> bool:
    return frame.norm(frame.H @ U) <= SUBSPACE_TOL * max(frame.norm(U), 1.0)


def _is_horizontal(frame: PointFrame, X: np.ndarray) -> bool:
    return frame.norm(frame.V @ X) <= SUBSPACE_TOL * max(frame.norm(X), 1.0)


def decompose_vertical(F: SubmersionMap, p: PointLike, U: np.ndarray) -> SlantDecomposition:
    """Vertical and horizontal parts of φU"""
    frame = _structured_frame(F, p)
    U = np.asarray(U, dtype=float)
    if not _is_vertical(frame, U):
        raise NotVertical(f"|HU| = {frame.norm(frame.H @ U):.3e}")
    image = frame.Phi @ U
    return SlantDecomposition(frame.x, U, frame.V @ image, frame.H @ image)


def decompose_horizontal(F: SubmersionMap, p: PointLike, X: np.ndarray) -> HorizontalDecomposition:
    """Vertical and horizontal parts of φX"""
    frame = _structured_frame(F, p)
    X = np.asarray(X, dtype=float)
    if not _is_horizontal(frame, X):
        raise NotHorizontal(f"|VX| = {frame.norm(frame.V @ X):.3e}")
    image = frame.Phi @ X
    return HorizontalDecomposition(frame.x, X, frame.V @ image, frame.H @ image)


def slant_angle(F: SubmersionMap, p: PointLike, U: np.ndarray) -> float:
    """Angle between φU and the vertical space, in [0, π/2]"""
    parts = decompose_vertical(F, p, U)
    frame = F.frame_at(p)
    U = parts.vector
    length = frame.norm(U)
    if frame.norm(U - float(frame.eta @ U) * frame.xi) < XI_EXCLUSION_TOL * length:
        raise XiDirection("direction is parallel to xi")
    if frame.norm(parts.psi + parts.omega) <= DIVISION_GUARD * max(length, 1.0):
        raise ZeroPhi("phi annihilates the direction")
    return math.atan2(frame.norm(parts.omega), frame.norm(parts.psi))


def xi_position(F: SubmersionMap, p: PointLike) -> str:
    """Whether ξ is vertical, horizontal or neither at p"""
    frame = _structured_frame(F, p)
    if frame.norm(frame.H @ frame.xi) <= SUBSPACE_TOL:
        return XI_VERTICAL
    if frame.norm(frame.V @ frame.xi) <= SUBSPACE_TOL:
        return XI_HORIZONTAL
    return XI_OBLIQUE


def vertical_basis_without_xi(F: SubmersionMap, p: PointLike) -> List[np.ndarray]:
    """Orthonormal basis of the vertical space with the ξ-line removed when ξ is vertical"""
    parts = split(F, p)
    frame = F.frame_at(p)
    if xi_position(F, p) == XI_VERTICAL:
        return relative_complement(frame.G, parts.vertical, [frame.xi])
    return parts.vertical


def admissible_direction(F: SubmersionMap, p: PointLike, rng: np.random.Generator) -> np.ndarray:
    """Random unit vertical vector orthogonal to ξ when ξ is vertical"""
    basis = vertical_basis_without_xi(F, p)
    if not basis:
        raise NotSlant("no vertical direction besides xi")
    U = np.column_stack(basis) @ rng.standard_normal(len(basis))
    return U / F.frame_at(p).norm(U)


def _verdict(theta: float, deviation: float, tolerance: float) -> str:
    if deviation > tolerance:
        return VERDICT_NOT_SLANT
    if theta <= tolerance:
        return VERDICT_INVARIANT
    if abs(theta - math.pi / 2.0) <= tolerance:
        return VERDICT_ANTI_INVARIANT
    return VERDICT_PROPER


def slant_constancy(F: SubmersionMap, samples: int, directions: int, seed: int,
                    tolerance: float = ANGLE_TOL) -> SlantReport:
    """Slant angle over sampled points and admissible directions"""
    if samples < 1 or directions < 1:
        raise ValueError("samples and directions must be at least 1")
    rng = make_rng(seed)
    angles: List[float] = []
    positions = set()
    for x in sample_points(F.model.domain, samples, rng):
        positions.add(xi_position(F, x))
        for _ in range(directions):
            angles.append(slant_angle(F, x, admissible_direction(F, x, rng)))
    theta = float(np.mean(angles))
    deviation = float(np.max(np.abs(np.asarray(angles) - theta)))
    position = positions.pop() if len(positions) == 1 else XI_OBLIQUE
    verdict = _verdict(theta, deviation, tolerance)
    logger.info("slant angle of %s: %.12f (deviation %.3e, %s, xi %s)", F.name, theta, deviation, verdict, position)
    return SlantReport(position, tuple(angles), theta, deviation, verdict, samples, directions, tolerance)


def require_slant(report: SlantReport) -> None:
    if not report.is_slant:
        raise NotSlant(f"angle varies by {report.max_deviation:.3e}")


def require_proper(report: SlantReport) -> None:
    if not report.is_proper:
        raise NotProperSlant(f"verdict is {report.verdict}")


def _random_vertical(frame: PointFrame, rng: np.random.Generator) -> np.ndarray:
    return frame.V @ random_vector(rng, frame.x.shape[0])


def _random_horizontal(frame: PointFrame, rng: np.random.Generator) -> np.ndarray:
    return frame.H @ random_vector(rng, frame.x.shape[0])


def reassembly_defect(F: SubmersionMap, p: PointLike, E: np.ndarray) -> float:
    """|φE − (ψ𝒱E + ω𝒱E + BℋE + CℋE)|"""
    ops = slant_operators(F, p)
    E = np.asarray(E, dtype=float)
    return float(np.linalg.norm(ops.frame.Phi @ E - (ops.psi + ops.omega + ops.b + ops.c) @ E))


def antisymmetry_defects(F: SubmersionMap, p: PointLike, U: np.ndarray, V: np.ndarray, Y: np.ndarray) -> float:
    """g(ψU, V) + g(U, ψV) and g(ωU, Y) + g(U, BY)"""
    ops = slant_operators(F, p)
    g = ops.frame.inner
    return max(abs(g(ops.psi @ U, V) + g(U, ops.psi @ V)), abs(g(ops.omega @ U, Y) + g(U, ops.b @ Y)))


def phi_square_identities(F: SubmersionMap, p: PointLike, U: np.ndarray, X: np.ndarray) -> Dict[str, float]:
    """Residuals of the four φ² identities split by type plus φξ = 0 in split form"""
    ops = slant_operators(F, p)
    frame = ops.frame
    psi, omega, b, c = ops.psi, ops.omega, ops.b, ops.c
    xi_v, xi_h = frame.V @ frame.xi, frame.H @ frame.xi
    eta_U, eta_X = float(frame.eta @ U), float(frame.eta @ X)
    return {
        "psi-psi": float(np.linalg.norm(psi @ psi @ U + b @ omega @ U + U - eta_U * xi_v)),
        "omega-psi": float(np.linalg.norm(omega @ psi @ U + c @ omega @ U - eta_U * xi_h)),
        "omega-b": float(np.linalg.norm(omega @ b @ X + c @ c @ X + X - eta_X * xi_h)),
        "psi-b": float(np.linalg.norm(psi @ b @ X + b @ c @ X - eta_X * xi_v)),
        "phi-xi": float(np.linalg.norm(psi @ xi_v + b @ xi_h) + np.linalg.norm(omega @ xi_v + c @ xi_h)),
    }


def check_psi_square(F: SubmersionMap, p: PointLike, report: SlantReport, U: np.ndarray) -> float:
    """|ψ²U + cos²θ (U − η(U)ξ)| for a vertical U"""
    require_slant(report)
    ops = slant_operators(F, p)
    frame = ops.frame
    U = np.asarray(U, dtype=float)
    target = U - float(frame.eta @ U) * frame.xi
    return float(np.linalg.norm(ops.psi @ ops.psi @ U + report.cos_squared * target))


def check_norm_relations(F: SubmersionMap, p: PointLike, report: SlantReport, U: np.ndarray, V: np.ndarray) -> float:
    """Largest residual of g(ψU,ψV) = cos²θ(...) and g(ωU,ωV) = sin²θ(...)"""
    require_slant(report)
    ops = slant_operators(F, p)
    frame = ops.frame
    g = frame.inner
    reduced = g(U, V) - float(frame.eta @ U) * float(frame.eta @ V)
    return max(
        abs(g(ops.psi @ U, ops.psi @ V) - report.cos_squared * reduced),
        abs(g(ops.omega @ U, ops.omega @ V) - report.sin_squared * reduced),
    )


def adapted_frame(F: SubmersionMap, p: PointLike, report: SlantReport) -> AdaptedFrame:
    """Frame {e_i, sec θ ψe_i, (ξ)} ∪ {csc θ ωe_i, μ or D, (ξ)}"""
    require_proper(report)
    x = as_coords(p)
    position = xi_position(F, x)
    if position == XI_OBLIQUE:
        raise WrongXiPosition("xi is neither vertical nor horizontal")
    ops = slant_operators(F, x)
    frame = ops.frame
    G = frame.G
    m = (F.source_dimension - 1) // 2
    n = F.target_dimension
    remaining = vertical_basis_without_xi(F, x)
    if len(remaining) % 2:
        raise DimensionMismatch(f"vertical space without xi has odd dimension {len(remaining)}")
    k = len(remaining) // 2
    if position == XI_VERTICAL and n != 2 * (m - k):
        raise DimensionMismatch(f"dim ker = {2 * k + 1} needs target dimension {2 * (m - k)}, got {n}")
    if position == XI_HORIZONTAL and n != 2 * (m - k) + 1:
        raise DimensionMismatch(f"dim ker = {2 * k} needs target dimension {2 * (m - k) + 1}, got {n}")

    sec = 1.0 / math.cos(report.theta_mean)
    csc = 1.0 / math.sin(report.theta_mean)
    vertical: List[np.ndarray] = []
    vertical_labels: List[str] = []
    horizontal: List[np.ndarray] = []
    horizontal_labels: List[str] = []
    for i in range(1, k + 1):
        e = remaining[0]
        partner = sec * (ops.psi @ e)
        vertical += [e, partner]
        vertical_labels += [f"e{i}", f"sec(theta) psi e{i}"]
        horizontal += [csc * (ops.omega @ e), csc * (ops.omega @ partner)]
        horizontal_labels += [f"csc(theta) omega e{i}", f"csc(theta) omega sec(theta) psi e{i}"]
        remaining = relative_complement(G, remaining, vertical)
    if position == XI_VERTICAL:
        vertical.append(frame.xi)
        vertical_labels.append("xi")

    mu = mu_distribution(F, x, report)
    for index, vector in enumerate(mu.basis, start=1):
        horizontal.append(vector)
        horizontal_labels.append(f"mu{index}" if position == XI_VERTICAL else f"D{index}")
    if position == XI_HORIZONTAL:
        horizontal.append(frame.xi)
        horizontal_labels.append("xi")
    if len(horizontal) != n:
        raise DimensionMismatch(f"horizontal frame has {len(horizontal)} vectors, target dimension is {n}")
    return AdaptedFrame(x, vertical, horizontal, vertical_labels, horizontal_labels, report.theta_mean, position, k)


def mu_distribution(F: SubmersionMap, p: PointLike, report: SlantReport) -> MuReport:
    """Orthogonal complement of ω(ker F_*) (and ξ) in the horizontal space"""
    require_slant(report)
    x = as_coords(p)
    parts = split(F, x)
    ops = slant_operators(F, x)
    frame = ops.frame
    omega_basis = orthonormal_span(frame.G, [ops.omega @ U for U in parts.vertical])
    position = xi_position(F, x)
    excluded = omega_basis + ([frame.xi] if position == XI_HORIZONTAL else [])
    basis = relative_complement(frame.G, parts.horizontal, excluded)

    m = (F.source_dimension - 1) // 2
    n = F.target_dimension
    expected: Optional[int] = None
    if report.is_proper:
        expected = 2 * (n - m) if position == XI_VERTICAL else 2 * (n - m - 1)

    defect = 0.0
    if basis:
        P = np.zeros_like(frame.G)
        for b in basis:
            P += np.outer(b, b @ frame.G)
        for b in basis:
            image = frame.Phi @ b
            defect = max(defect, frame.norm(image - P @ image))
    return MuReport(x, basis, omega_basis, len(basis), expected, defect, position)


def _projected_field(F: SubmersionMap, chain):
    """Vector field y ↦ chain(frame at y)"""
    return lambda y: chain(F.frame_at(y))


def _nabla(F: SubmersionMap, x: np.ndarray, direction: np.ndarray, fn) -> np.ndarray:
    return covariant_derivative(F.model.metric, direction, fn, x, F.scheme, F.model.domain,
                                gamma=F.local(x).gamma)


def omega_parallel_defect(F: SubmersionMap, p: PointLike, U: np.ndarray, V: np.ndarray) -> OmegaParallelSample:
    """(∇_U ω)V against C T_U V − T_U ψV, and (∇_U ψ)V against B T_U V − T_U ωV"""
    x = as_coords(p)
    U = np.asarray(U, dtype=float)
    V0 = np.asarray(V, dtype=float)
    ops = slant_operators(F, x)
    local = F.local(x)
    frame = ops.frame

    V_field = _projected_field(F, lambda fr: fr.V @ V0)
    psi_V = _projected_field(F, lambda fr: fr.V @ fr.Phi @ fr.V @ V0)
    omega_V = _projected_field(F, lambda fr: fr.H @ fr.Phi @ fr.V @ V0)
    fibre_derivative = frame.V @ _nabla(F, x, U, V_field)
    V_at = frame.V @ V0
    T_UV = local.T_value(U, V_at)

    omega_lhs = frame.H @ _nabla(F, x, U, omega_V) - ops.omega @ fibre_derivative
    omega_rhs = ops.c @ T_UV - local.T_value(U, ops.psi @ V_at)
    psi_lhs = frame.V @ _nabla(F, x, U, psi_V) - ops.psi @ fibre_derivative
    psi_rhs = ops.b @ T_UV - local.T_value(U, ops.omega @ V_at)
    return OmegaParallelSample(omega_lhs, omega_rhs, psi_lhs, psi_rhs)


def psi_tensor_defect(F: SubmersionMap, p: PointLike, report: SlantReport, U: np.ndarray) -> float:
    """|T_{ψU}ψU + cos²θ T_U U|; vanishes when ω is parallel"""
    ops = slant_operators(F, p)
    local = F.local(p)
    psi_U = ops.psi @ U
    return float(np.linalg.norm(local.T_value(psi_U, psi_U) + report.cos_squared * local.T_value(U, U)))


def check_nabla_Q(F: SubmersionMap, p: PointLike, U: np.ndarray, V: np.ndarray, report: SlantReport) -> np.ndarray:
    """(∇_U Q)V = 𝒱∇_U(QV) − Q∇̂_U V with Q = ψ²"""
    require_slant(report)
    x = as_coords(p)
    U = np.asarray(U, dtype=float)
    V0 = np.asarray(V, dtype=float)
    ops = slant_operators(F, x)
    frame = ops.frame

    def q_of(fr: PointFrame) -> np.ndarray:
        psi = fr.V @ fr.Phi @ fr.V
        return psi @ psi

    V_field = _projected_field(F, lambda fr: fr.V @ V0)
    QV_field = _projected_field(F, lambda fr: q_of(fr) @ fr.V @ V0)
    Q = ops.psi @ ops.psi
    return frame.V @ _nabla(F, x, U, QV_field) - Q @ (frame.V @ _nabla(F, x, U, V_field))


def connection_xi_defects(F: SubmersionMap, p: PointLike, U: np.ndarray, X: np.ndarray, V: np.ndarray) -> float:
    """|T_U ξ|, |A_X ξ| and, when ξ is horizontal, |η(∇_U V)|"""
    x = as_coords(p)
    frame = _structured_frame(F, x)
    local = F.local(x)
    worst = max(float(np.linalg.norm(local.T_value(U, frame.xi))), float(np.linalg.norm(local.A_value(X, frame.xi))))
    if xi_position(F, x) == XI_HORIZONTAL:
        V0 = np.asarray(V, dtype=float)
        derivative = _nabla(F, x, U, _projected_field(F, lambda fr: fr.V @ V0))
        worst = max(worst, abs(float(frame.eta @ derivative)))
    return worst


def totally_geodesic_criteria(F: SubmersionMap, p: PointLike, report: SlantReport) -> CriteriaSample:
    """Both sides of the foliation and map criteria next to the direct defects they characterize"""
    require_slant(report)
    x = as_coords(p)
    if xi_position(F, x) == XI_OBLIQUE:
        raise WrongXiPosition("xi is neither vertical nor horizontal")
    parts = split(F, x)
    ops = slant_operators(F, x)
    local = F.local(x)
    frame = ops.frame
    g = frame.inner
    sin2 = report.sin_squared
    horizontal_gap = vertical_gap = mixed_gap = identity = 0.0

    for X in parts.horizontal:
        for Y in parts.horizontal:
            Y_field = _projected_field(F, lambda fr, Y=Y: fr.H @ Y)
            CY_field = _projected_field(F, lambda fr, Y=Y: fr.H @ fr.Phi @ fr.H @ Y)
            nabla_Y = frame.H @ _nabla(F, x, X, Y_field)
            nabla_CY = frame.H @ _nabla(F, x, X, CY_field)
            BY = ops.b @ Y
            for U in parts.vertical:
                lhs = g(nabla_Y, ops.omega @ ops.psi @ U)
                rhs = g(local.A_value(X, BY), ops.omega @ U) + g(nabla_CY, ops.omega @ U)
                horizontal_gap = max(horizontal_gap, abs(lhs - rhs))
                identity = max(identity, abs((rhs - lhs) - sin2 * g(local.A_value(X, Y), U)))

    for V in parts.vertical:
        omega_psi_V = _projected_field(F, lambda fr, V=V: fr.H @ fr.Phi @ fr.V @ fr.Phi @ fr.V @ V)
        omega_V = _projected_field(F, lambda fr, V=V: fr.H @ fr.Phi @ fr.V @ V)
        for U in parts.vertical:
            nabla_opv = frame.H @ _nabla(F, x, U, omega_psi_V)
            nabla_ov = frame.H @ _nabla(F, x, U, omega_V)
            for X in parts.horizontal:
                lhs = g(nabla_opv, X)
                rhs = g(local.T_value(U, ops.omega @ V), ops.b @ X) + g(nabla_ov, ops.c @ X)
                vertical_gap = max(vertical_gap, abs(lhs - rhs))
                identity = max(identity, abs((rhs - lhs) - sin2 * g(local.T_value(U, V), X)))
        for Z in parts.horizontal:
            nabla_opv = frame.H @ _nabla(F, x, Z, omega_psi_V)
            nabla_ov = frame.H @ _nabla(F, x, Z, omega_V)
            for X in parts.horizontal:
                lhs = g(nabla_opv, X)
                rhs = g(local.A_value(Z, ops.omega @ V), ops.b @ X) + g(nabla_ov, ops.c @ X)
                mixed_gap = max(mixed_gap, abs(lhs - rhs))
                identity = max(identity, abs((lhs - rhs) + sin2 * g(local.A_value(Z, V), X)))

    A_defect = max((float(np.linalg.norm(local.A_value(X, Y))) for X in parts.horizontal for Y in parts.horizontal),
                   default=0.0)
    T_defect = max((float(np.linalg.norm(local.T_value(U, V))) for U in parts.vertical for V in parts.vertical),
                   default=0.0)
    basis = parts.vertical + parts.horizontal
    map_defect = max(float(np.linalg.norm(second_fundamental_form_map(F, x, E1, E2))) for E1 in basis for E2 in basis)
    return CriteriaSample(horizontal_gap, vertical_gap, max(vertical_gap, mixed_gap), identity,
                          A_defect, T_defect, map_defect, {"mixed-criterion": mixed_gap})


def harmonic_representation_defect(F: SubmersionMap, p: PointLike) -> float:
    """|τ + Σ F_*(T_{e_i}e_i)| over an orthonormal vertical frame"""
    x = as_coords(p)
    parts = split(F, x)
    local = F.local(x)
    total = sum((local.frame.J @ local.T_value(U, U) for U in parts.vertical), np.zeros(F.target_dimension))
    return float(np.linalg.norm(tension_field(F, x) + total))


def verify_slant_identities(F: SubmersionMap, report: SlantReport, samples: int, seed: int) -> SlantIdentityReport:
    """Pointwise slant identities at sampled points"""
    require_slant(report)
    rng = make_rng(seed)
    names = ["reassembly", "antisymmetry", "phi-square-split", "psi-square", "norm-relations", "omega-identity",
             "psi-identity", "nabla-Q", "connection-xi"]
    defects = {name: 0.0 for name in names}
    psi_tensor = omega_parallel = 0.0
    n = F.source_dimension
    for x in sample_points(F.model.domain, samples, rng):
        frame = _structured_frame(F, x)
        U, V = _random_vertical(frame, rng), _random_vertical(frame, rng)
        X, Y = _random_horizontal(frame, rng), _random_horizontal(frame, rng)
        defects["reassembly"] = max(defects["reassembly"], reassembly_defect(F, x, random_vector(rng, n)))
        defects["antisymmetry"] = max(defects["antisymmetry"], antisymmetry_defects(F, x, U, V, Y))
        defects["phi-square-split"] = max(defects["phi-square-split"], max(phi_square_identities(F, x, U, X).values()))
        defects["psi-square"] = max(defects["psi-square"], check_psi_square(F, x, report, U))
        defects["norm-relations"] = max(defects["norm-relations"], check_norm_relations(F, x, report, U, V))
        parallel = omega_parallel_defect(F, x, U, V)
        defects["omega-identity"] = max(defects["omega-identity"], parallel.omega_residual)
        defects["psi-identity"] = max(defects["psi-identity"], parallel.psi_residual)
        omega_parallel = max(omega_parallel, float(np.linalg.norm(parallel.omega_lhs)))
        defects["nabla-Q"] = max(defects["nabla-Q"], float(np.linalg.norm(check_nabla_Q(F, x, U, V, report))))
        defects["connection-xi"] = max(defects["connection-xi"], connection_xi_defects(F, x, U, X, V))
        basis = vertical_basis_without_xi(F, x)
        if basis:
            psi_tensor = max(psi_tensor, psi_tensor_defect(F, x, report, basis[0]))
    details = {"omega-parallel-norm": omega_parallel, "psi-tensor": psi_tensor}
    logger.info("slant identities on %s: %s", F.name, defects)
    return SlantIdentityReport(defects, {name: TOLERANCES[name] for name in names}, samples, details=details)
