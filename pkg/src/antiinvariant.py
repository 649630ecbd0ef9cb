"""
Anti-invariant submersions with horizontal space φ(ker F_*) ⊕ {ξ}
"""

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .connection import riemann_tensor
from .constants import SUBSPACE_TOL, TOLERANCES, XI_HORIZONTAL
from .contact import phi_sectional
from .errors import NotAntiInvariant
from .geometry import DefectReport, PointLike, as_coords
from .sampling import make_rng, random_vector, sample_points
from .slant import xi_position
from .submersion import SubmersionMap, covariant_tensor_derivatives, split

logger = logging.getLogger(__name__)

CONSISTENT_FLAT = "c = 0 consistent"
CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"


class AntiInvariantReport(DefectReport):
    """Residuals of the anti-invariant identities plus the space form consistency statement"""

    @property
    def consistency(self) -> str:
        return self.details.get("consistency", "")


@dataclass(frozen=True)
class PhiSectionalSample:
    """Curvature identity value next to the directly computed φ-sectional curvature"""

    from_tensor: float
    direct: float

    @property
    def gap(self) -> float:
        return abs(self.from_tensor - self.direct)


def check_anti_invariant(F: SubmersionMap, p: PointLike) -> None:
    """Raise unless ξ is horizontal and the horizontal space is φ(ker F_*) ⊕ {ξ}"""
    x = as_coords(p)
    if F.structure is None:
        raise NotAntiInvariant(f"{F.name} has no almost contact structure attached")
    if xi_position(F, x) != XI_HORIZONTAL:
        raise NotAntiInvariant("xi is not horizontal")
    parts = split(F, x)
    frame = F.frame_at(x)
    for U in parts.vertical:
        leak = frame.norm(frame.V @ frame.Phi @ U)
        if leak > SUBSPACE_TOL:
            raise NotAntiInvariant(f"phi maps a vertical vector {leak:.3e} away from the horizontal space")
    if len(parts.horizontal) != len(parts.vertical) + 1:
        raise NotAntiInvariant(
            f"horizontal dimension {len(parts.horizontal)} differs from dim ker + 1 = {len(parts.vertical) + 1}"
        )


def vertical_phi_sectional_sample(F: SubmersionMap, p: PointLike, V: np.ndarray) -> PhiSectionalSample:
    """g((∇_{φV}T)(V,V), φV) − |T_V V|² against H(V) for a unit vertical V"""
    x = as_coords(p)
    local = F.local(x)
    frame = local.frame
    phi_V = frame.Phi @ V
    nabla_T, _ = covariant_tensor_derivatives(F, x, phi_V)
    T_VV = local.T_value(V, V)
    value = frame.inner(np.einsum("kab,a,b->k", nabla_T, V, V), phi_V) - frame.inner(T_VV, T_VV)
    return PhiSectionalSample(value, phi_sectional(F.structure, x, V))


def horizontal_phi_sectional_sample(F: SubmersionMap, p: PointLike, X: np.ndarray) -> PhiSectionalSample:
    """g((∇_X T)(φX,φX), X) − |T_{φX}X|² against H(X) for a unit horizontal X ⊥ ξ"""
    x = as_coords(p)
    local = F.local(x)
    frame = local.frame
    phi_X = frame.Phi @ X
    nabla_T, _ = covariant_tensor_derivatives(F, x, X)
    T_value = local.T_value(phi_X, X)
    value = frame.inner(np.einsum("kab,a,b->k", nabla_T, phi_X, phi_X), X) - frame.inner(T_value, T_value)
    return PhiSectionalSample(value, phi_sectional(F.structure, x, X))


def space_form_consistency(c: float, fibre_T_norm: float) -> str:
    """Space forms with c ≠ 0 admit no such submersion with totally geodesic fibres"""
    if c == 0.0:
        return CONSISTENT_FLAT
    if fibre_T_norm > TOLERANCES["A-norm"]:
        return CONSISTENT
    return INCONSISTENT


def anti_invariant_checks(F: SubmersionMap, samples: int, seed: int, c: float = 0.0) -> AntiInvariantReport:
    """Identities of the anti-invariant case at sampled points"""
    rng = make_rng(seed)
    names = ["phi-commutation", "A-phi-symmetry", "A-norm", "anti-mixed-curvature", "vertical-phi-sectional", "horizontal-phi-sectional"]
    defects: Dict[str, float] = {name: 0.0 for name in names}
    fibre_T = 0.0
    n = F.source_dimension
    for x in sample_points(F.model.domain, samples, rng):
        check_anti_invariant(F, x)
        parts = split(F, x)
        local = F.local(x)
        frame = local.frame
        g = frame.inner
        Phi = frame.Phi

        E = random_vector(rng, n)
        U = frame.V @ random_vector(rng, n)
        X, Y = frame.H @ random_vector(rng, n), frame.H @ random_vector(rng, n)
        commutation = max(
            float(np.linalg.norm(local.T_value(U, Phi @ E) - Phi @ local.T_value(U, E))),
            float(np.linalg.norm(local.A_value(X, Phi @ E) - Phi @ local.A_value(X, E))),
        )
        defects["phi-commutation"] = max(defects["phi-commutation"], commutation)
        defects["A-phi-symmetry"] = max(defects["A-phi-symmetry"], float(np.linalg.norm(local.A_value(X, Phi @ Y) + local.A_value(Y, Phi @ X))))
        basis = parts.vertical + parts.horizontal
        a_norm = max(float(np.linalg.norm(local.A_value(H, B))) for H in parts.horizontal for B in basis)
        defects["A-norm"] = max(defects["A-norm"], a_norm)
        fibre_T = max(fibre_T, max(float(np.linalg.norm(local.T_value(U1, U2)))
                                   for U1 in parts.vertical for U2 in parts.vertical))

        ambient = riemann_tensor(F.model.metric, x, domain=F.model.domain)
        for H_vec in parts.horizontal:
            nabla_T, _ = covariant_tensor_derivatives(F, x, H_vec)
            for H2 in parts.horizontal:
                for V in parts.vertical:
                    for W in parts.vertical:
                        lhs = ambient.lowered_value(H2, W, V, H_vec)
                        rhs = (g(np.einsum("kab,a,b->k", nabla_T, V, W), H2)
                               - g(local.T_value(V, H_vec), local.T_value(W, H2)))
                        defects["anti-mixed-curvature"] = max(defects["anti-mixed-curvature"], abs(lhs - rhs))

        V = parts.vertical[0]
        defects["vertical-phi-sectional"] = max(defects["vertical-phi-sectional"], vertical_phi_sectional_sample(F, x, V).gap)
        defects["horizontal-phi-sectional"] = max(defects["horizontal-phi-sectional"], horizontal_phi_sectional_sample(F, x, frame.Phi @ V).gap)

    consistency = space_form_consistency(c, fibre_T)
    logger.info("anti-invariant checks on %s: %s (%s)", F.name, defects, consistency)
    return AntiInvariantReport(defects, {name: TOLERANCES[name] for name in names}, samples,
                               details={"consistency": consistency, "fibre-T-norm": fibre_T, "c": c})
