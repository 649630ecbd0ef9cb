"""
Mean curvature inequalities for fibres of five-dimensional slant submersions
"""

import logging
import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .connection import CurvatureSample, riemann_tensor, sectional_from_sample
from .constants import FLAG_TOL, TOLERANCES, XI_HORIZONTAL, XI_VERTICAL
from .contact import space_form_curvature
from .errors import WrongDimensions, XiNotHorizontal, XiNotVertical
from .geometry import DefectReport, PointLike, as_coords
from .sampling import make_rng, random_vector
from .slant import SlantReport, adapted_frame, require_proper, xi_position
from .submersion import SubmersionMap, fibre_curvature, mean_curvature

logger = logging.getLogger(__name__)

CASE_VERTICAL = "vertical"
CASE_HORIZONTAL = "horizontal"
COEFFICIENTS = {CASE_VERTICAL: 8.0 / 9.0, CASE_HORIZONTAL: 0.25}
SOURCE_DIMENSION = 5
TARGET_DIMENSIONS = {CASE_VERTICAL: 2, CASE_HORIZONTAL: 3}
SPACE_FORM_TRIPLES = 10

_COMPONENT = re.compile(r"^T([1-9])([1-9])\^([1-9])$")


@dataclass(frozen=True)
class TTable:
    """T-components T_ij^a keyed as "Tij^a", symmetric in i and j, missing entries zero"""

    values: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        normalized = {}
        for key, value in self.values.items():
            match = _COMPONENT.match(key)
            if match is None:
                raise ValueError(f"bad component name {key!r}, expected e.g. T11^4")
            i, j, a = sorted(match.group(1, 2)) + [match.group(3)]
            normalized[f"T{i}{j}^{a}"] = float(value)
        object.__setattr__(self, "values", normalized)

    def get(self, i: int, j: int, a: int) -> float:
        i, j = min(i, j), max(i, j)
        return self.values.get(f"T{i}{j}^{a}", 0.0)

    @classmethod
    def parse(cls, text: str) -> "TTable":
        """Read "T11^4=3,T22^4=1" """
        values = {}
        for item in filter(None, (part.strip() for part in text.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"component {item!r} has no value")
            values[key.strip()] = float(value)
        return cls(values)


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of a mean curvature inequality with the T-components behind them"""

    case: str
    mean_curvature_sq: float
    tau_hat: float
    c: float
    theta: float
    components: Dict[str, float]
    flags: Dict[str, bool]
    relations: Dict[str, float]
    point: Optional[Tuple[float, ...]] = None
    curvatures: Dict[str, float] = field(default_factory=dict)
    synthetic: bool = False

    @property
    def coefficient(self) -> float:
        return COEFFICIENTS[self.case]

    @property
    def curvature_term(self) -> float:
        """(c/4)(1 + 3cos²θ)"""
        return 0.25 * self.c * (1.0 + 3.0 * math.cos(self.theta) ** 2)

    @property
    def bound(self) -> float:
        return self.coefficient * (self.tau_hat - self.curvature_term)

    @property
    def slack(self) -> float:
        return self.mean_curvature_sq - self.bound

    @property
    def equality_consistent(self) -> Optional[bool]:
        """Flags true ⇒ equality; only asserted for the vertical case"""
        if self.case != CASE_VERTICAL:
            return None
        return not all(self.flags.values()) or self.slack <= TOLERANCES["inequality-slack"]

    def defects(self) -> Dict[str, float]:
        """Check name → defect for the report layer"""
        values = {"inequality-slack": max(0.0, -self.slack)}
        values.update(self.relations)
        return values


def _flag(value: float) -> bool:
    return abs(value) <= FLAG_TOL


def _vertical_flags(t: TTable) -> Dict[str, bool]:
    return {
        "T11^4 = 3 T22^4": _flag(t.get(1, 1, 4) - 3.0 * t.get(2, 2, 4)),
        "T12^4 = 0": _flag(t.get(1, 2, 4)),
        "T11^5 = 0": _flag(t.get(1, 1, 5)),
    }


def _horizontal_flags(t: TTable) -> Dict[str, bool]:
    return {
        "T11^4 = -T22^4": _flag(t.get(1, 1, 4) + t.get(2, 2, 4)),
        "T11^3 = 0": _flag(t.get(1, 1, 3)),
        "T12^3 = 0": _flag(t.get(1, 2, 3)),
        "T22^3 = 0": _flag(t.get(2, 2, 3)),
    }


def inequality_from_table(case: str, table: TTable, c: float = 0.0, theta: float = math.pi / 4) -> InequalityReport:
    """Inequality sides from hand-set T-components, no geometry involved"""
    curvature_term = 0.25 * c * (1.0 + 3.0 * math.cos(theta) ** 2)
    t = table.get
    if case == CASE_VERTICAL:
        sectional = t(1, 1, 4) * t(2, 2, 4) - t(1, 1, 5) ** 2 - t(1, 2, 4) ** 2 - t(2, 2, 4) ** 2
        mean_sq = (t(1, 1, 4) + t(2, 2, 4)) ** 2 / 9.0
        flags = _vertical_flags(table)
    elif case == CASE_HORIZONTAL:
        sectional = t(1, 1, 4) * t(2, 2, 4) - t(1, 1, 3) ** 2 - t(1, 2, 3) ** 2 - t(2, 2, 3) ** 2
        mean_sq = 0.25 * (t(1, 1, 4) + t(2, 2, 4)) ** 2
        flags = _horizontal_flags(table)
    else:
        raise ValueError(f"unknown inequality case {case!r}")
    return InequalityReport(case, mean_sq, sectional + curvature_term, c, theta, dict(table.values), flags, {},
                            synthetic=True)


def _check_preconditions(F: SubmersionMap, x: np.ndarray, case: str, report: SlantReport) -> None:
    if F.source_dimension != SOURCE_DIMENSION or F.target_dimension != TARGET_DIMENSIONS[case]:
        raise WrongDimensions(
            f"{case} inequality needs dimensions {SOURCE_DIMENSION} -> {TARGET_DIMENSIONS[case]}, "
            f"got {F.source_dimension} -> {F.target_dimension}"
        )
    position = xi_position(F, x)
    if case == CASE_VERTICAL and position != XI_VERTICAL:
        raise XiNotVertical(f"xi is {position}")
    if case == CASE_HORIZONTAL and position != XI_HORIZONTAL:
        raise XiNotHorizontal(f"xi is {position}")
    require_proper(report)


def _fibre_coordinates(vertical_chart: List[np.ndarray], G: np.ndarray, e: np.ndarray) -> np.ndarray:
    return np.array([float(v @ G @ e) for v in vertical_chart])


def _space_form_defect(F: SubmersionMap, x: np.ndarray, c: float, ambient: CurvatureSample) -> float:
    rng = make_rng(0)
    worst = 0.0
    for _ in range(SPACE_FORM_TRIPLES):
        X, Y, Z = (random_vector(rng, F.source_dimension) for _ in range(3))
        closed = space_form_curvature(c, F.structure, x, X, Y, Z)
        worst = max(worst, float(np.linalg.norm(ambient.apply(X, Y, Z) - closed)))
    return worst


def _geometric_report(F: SubmersionMap, p: PointLike, c: float, report: SlantReport, case: str) -> InequalityReport:
    x = as_coords(p)
    _check_preconditions(F, x, case, report)
    frame = adapted_frame(F, x, report)
    local = F.local(x)
    G = local.frame.G
    g = local.frame.inner
    ambient = riemann_tensor(F.model.metric, x, domain=F.model.domain)
    fibre = fibre_curvature(F, x, ambient)

    vertical = frame.vertical
    offset = len(vertical)
    components: Dict[str, float] = {}
    for i in range(2):
        for j in range(i, 2):
            value = local.T_value(vertical[i], vertical[j])
            for a, E in enumerate(frame.horizontal, start=offset + 1):
                components[f"T{i + 1}{j + 1}^{a}"] = g(value, E)
    table = TTable(components)

    gauss: Dict[Tuple[int, int], float] = {}
    intrinsic: Dict[Tuple[int, int], float] = {}
    basis = np.eye(len(fibre.vertical))
    for i in range(len(vertical)):
        for j in range(i + 1, len(vertical)):
            U, V = vertical[i], vertical[j]
            gauss[(i, j)] = (sectional_from_sample(ambient, G, U, V) - g(local.T_value(U, V), local.T_value(U, V))
                             + g(local.T_value(U, U), local.T_value(V, V)))
            cu = _fibre_coordinates(fibre.vertical, G, U)
            cv = _fibre_coordinates(fibre.vertical, G, V)
            intrinsic[(i, j)] = sectional_from_sample(fibre.intrinsic_curvature, basis, cu, cv)
    tau_hat = float(sum(gauss.values()))

    curvatures = {
        "K12-gauss": gauss[(0, 1)],
        "K12-intrinsic": intrinsic[(0, 1)],
        "tau-intrinsic": float(sum(intrinsic.values())),
        "route-gap": max(abs(gauss[key] - intrinsic[key]) for key in gauss),
        "space-form-defect": _space_form_defect(F, x, c, ambient),
    }
    if case == CASE_VERTICAL:
        flags = _vertical_flags(table)
        relations = {
            "relation": abs(table.get(2, 2, 4) - table.get(1, 2, 5)),
            "cross-curvature": max(abs(gauss[(0, 2)]), abs(gauss[(1, 2)])),
        }
    else:
        flags = _horizontal_flags(table)
        relations = {
            "relation": abs(table.get(2, 2, 3) - table.get(1, 2, 4)),
            "xi-row": max(abs(table.get(i, j, 5)) for i, j in ((1, 1), (1, 2), (2, 2))),
        }
    H = mean_curvature(F, x)
    result = InequalityReport(case, g(H, H), tau_hat, c, report.theta_mean, components, flags, relations,
                              tuple(float(v) for v in x), curvatures)
    logger.debug("%s inequality at %s: slack %.3e", case, np.round(x, 4).tolist(), result.slack)
    return result


def inequality_vertical(F: SubmersionMap, p: PointLike, c: float, report: SlantReport) -> InequalityReport:
    """‖H‖² ≥ (8/9)(τ̂ − (c/4)(1 + 3cos²θ)) for ξ vertical, dimensions 5 → 2"""
    return _geometric_report(F, p, c, report, CASE_VERTICAL)


def inequality_horizontal(F: SubmersionMap, p: PointLike, c: float, report: SlantReport) -> InequalityReport:
    """‖H‖² ≥ ¼(τ̂ − (c/4)(1 + 3cos²θ)) for ξ horizontal, dimensions 5 → 3"""
    return _geometric_report(F, p, c, report, CASE_HORIZONTAL)


class InequalitySummary(DefectReport):
    """Worst inequality defects over sampled points"""


def summarize(reports: List[InequalityReport]) -> InequalitySummary:
    defects: Dict[str, float] = {}
    for item in reports:
        for name, value in item.defects().items():
            defects[name] = max(defects.get(name, 0.0), value)
    return InequalitySummary(defects, {name: TOLERANCES[name] for name in defects}, len(reports))
