"""
Subcommands and the engine that runs them against a scenario
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from .connection import riemann_tensor
from .constants import (
    COMMAND_ANTI_INVARIANT,
    COMMAND_CHECK_STRUCTURE,
    COMMAND_CHECK_SUBMERSION,
    COMMAND_SLANT_ANGLE,
    COMMAND_TENSION,
    COMMAND_VERIFY_IDENTITIES,
    COMMAND_VERIFY_INEQUALITY,
    DEFAULT_DIRECTIONS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    SLANT_PROBE_SAMPLES,
    SLANT_PROBE_SEED,
    TOLERANCES,
)
from .contact import (
    AlmostContactStructure,
    check_almost_contact,
    check_closed,
    check_cosymplectic,
    check_normal,
    phi_sectional,
    space_form_curvature,
)
from .errors import GeometryError, UsageError
from .geometry import DefectReport, orthonormalize
from .inequalities import (
    CASE_HORIZONTAL,
    CASE_VERTICAL,
    TTable,
    inequality_from_table,
    inequality_horizontal,
    inequality_vertical,
    summarize,
)
from .antiinvariant import anti_invariant_checks
from .report import ReportDocument
from .sampling import make_rng, random_vector, sample_points
from .scenario import ScenarioSpec
from .slant import (
    SlantReport,
    adapted_frame,
    harmonic_representation_defect,
    mu_distribution,
    slant_constancy,
    totally_geodesic_criteria,
    verify_slant_identities,
    xi_position,
)
from .submersion import (
    SubmersionMap,
    check_axioms,
    fibre_curvature,
    mean_curvature,
    split,
    tension_field,
    umbilicity_defect,
    verify_curvature_identities,
)

logger = logging.getLogger(__name__)

# expected-block key -> result key
EXPECTED_RESULTS = {
    "theta": "theta_mean",
    "verdict": "verdict",
    "xi_position": "xi_position",
    "mu_dimension": "mu_dimension",
    "kernel_dimension": "kernel_dimension",
}


@dataclass(frozen=True)
class Settings:
    """Options of one invocation"""

    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    directions: int = DEFAULT_DIRECTIONS
    tolerance_scale: float = 1.0
    case: Optional[str] = None
    c: Optional[float] = None
    table: Optional[str] = None

    def tolerance(self, name: str) -> float:
        return TOLERANCES[name] * self.tolerance_scale

    @property
    def curvature(self) -> float:
        return 0.0 if self.c is None else self.c


class Command:
    """Base class for subcommands"""

    name = ""

    def __init__(self, engine: "CommandEngine"):
        self.engine = engine

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        """Add records and results to the document"""
        raise NotImplementedError

    def add_report(self, document: ReportDocument, report: DefectReport, settings: Settings) -> None:
        document.add_report(report, settings.tolerance_scale)

    def probe_slant(self, F: SubmersionMap, settings: Settings) -> SlantReport:
        """Slant verdict from a few fixed points, for commands that only need the angle"""
        return slant_constancy(F, SLANT_PROBE_SAMPLES, settings.directions, SLANT_PROBE_SEED,
                               settings.tolerance("slant-constancy"))

    def probe_points(self, F: SubmersionMap, settings: Settings) -> List[np.ndarray]:
        count = max(1, min(settings.samples, SLANT_PROBE_SAMPLES))
        return sample_points(F.model.domain, count, make_rng(settings.seed))


class CheckStructureCommand(Command):
    """Almost contact axioms, closedness, normality and parallelism; space form curvature when c is given"""

    name = COMMAND_CHECK_STRUCTURE

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        S = scenario.require_structure()
        for check in (check_almost_contact, check_closed, check_normal, check_cosymplectic):
            self.add_report(document, check(S, settings.samples, settings.seed), settings)
        if settings.c is not None:
            tensor, sectional = space_form_defects(S, settings.samples, settings.seed, settings.c)
            document.add_defect("space-form", tensor, settings.tolerance("space-form"))
            document.add_defect("phi-sectional", sectional, settings.tolerance("phi-sectional"))
        document.set_result("dimension", S.dimension)
        document.set_result("cosymplectic", document.passed)


class CheckSubmersionCommand(Command):
    """Rank, horizontal isometry and projector identities"""

    name = COMMAND_CHECK_SUBMERSION

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        F = scenario.require_submersion()
        self.add_report(document, check_axioms(F, settings.samples, settings.seed), settings)
        x = self.probe_points(F, settings)[0]
        parts = split(F, x)
        document.set_result("source_dimension", F.source_dimension)
        document.set_result("target_dimension", F.target_dimension)
        document.set_result("kernel_dimension", len(parts.vertical))
        if F.structure is not None:
            document.set_result("xi_position", xi_position(F, x))


class SlantAngleCommand(Command):
    """Slant angle constancy, μ and the adapted frame"""

    name = COMMAND_SLANT_ANGLE

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        F = scenario.require_submersion()
        report = slant_constancy(F, settings.samples, settings.directions, settings.seed,
                                 settings.tolerance("slant-constancy"))
        document.add_defect("slant-constancy", report.max_deviation, settings.tolerance("slant-constancy"))
        document.set_result("xi_position", report.xi_position)
        document.set_result("theta_mean", report.theta_mean)
        document.set_result("theta_degrees", math.degrees(report.theta_mean))
        document.set_result("max_deviation", report.max_deviation)
        document.set_result("verdict", report.verdict)
        document.set_result("directions", report.directions)
        if not report.is_proper:
            return

        points = self.probe_points(F, settings)
        invariance = 0.0
        dimension_gap = 0
        dimensions: List[int] = []
        for x in points:
            mu = mu_distribution(F, x, report)
            invariance = max(invariance, mu.invariance_defect)
            if mu.expected_dimension is not None:
                dimension_gap = max(dimension_gap, abs(mu.dimension - mu.expected_dimension))
            dimensions.append(mu.dimension)
        document.add_defect("mu-invariance", invariance, settings.tolerance("mu-invariance"))
        document.add_defect("mu-dimension", dimension_gap, settings.tolerance("mu-dimension"))
        document.add_defect("mu-constant-dimension", max(dimensions) - min(dimensions),
                            settings.tolerance("mu-constant-dimension"))
        document.set_result("mu_dimension", max(dimensions))
        frame_defect = max(adapted_frame(F, x, report).gram_defect(F.frame_at(x).G) for x in points)
        document.add_defect("adapted-frame", frame_defect, settings.tolerance("adapted-frame"))
        frame = adapted_frame(F, points[0], report)
        document.set_result("frame", {"vertical": frame.vertical_labels, "horizontal": frame.horizontal_labels})


class VerifyIdentitiesCommand(Command):
    """O'Neill identities, fibre geometry, and the slant identities when the map is slant"""

    name = COMMAND_VERIFY_IDENTITIES

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        F = scenario.require_submersion()
        self.add_report(document, verify_curvature_identities(F, settings.samples, settings.seed), settings)
        x = self.probe_points(F, settings)[0]
        fibre_results(F, x, document)
        if F.structure is None:
            return
        try:
            report = self.probe_slant(F, settings)
        except GeometryError as error:
            logger.info("slant identities skipped on %s: %s", F.name, error)
            document.set_result("slant", f"skipped ({error.code})")
            return
        document.set_result("slant", report.verdict)
        if not report.is_slant:
            return
        identities = verify_slant_identities(F, report, settings.samples, settings.seed)
        self.add_report(document, identities, settings)
        document.set_result("omega_parallel_norm", identities.details["omega-parallel-norm"])
        document.set_result("psi_tensor_defect", identities.details["psi-tensor"])

        points = self.probe_points(F, settings)
        criteria = [totally_geodesic_criteria(F, p, report) for p in points]
        document.add_defect("criterion-identity", max(item.criterion_identity for item in criteria),
                            settings.tolerance("criterion-identity"))
        document.set_result("criteria", {
            "horizontal-foliation": max(item.horizontal_criterion for item in criteria),
            "vertical-foliation": max(item.vertical_criterion for item in criteria),
            "map": max(item.map_criterion for item in criteria),
            "A-horizontal-norm": max(item.horizontal_foliation_defect for item in criteria),
            "T-vertical-norm": max(item.vertical_foliation_defect for item in criteria),
            "second-fundamental-form-norm": max(item.map_defect for item in criteria),
        })
        document.set_result("harmonic_representation", max(harmonic_representation_defect(F, p) for p in points))


class VerifyInequalityCommand(Command):
    """Mean curvature inequality of the fibres, or its algebra for a given T-table"""

    name = COMMAND_VERIFY_INEQUALITY

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        case = settings.case
        if case not in (CASE_VERTICAL, CASE_HORIZONTAL):
            raise UsageError("verify-inequality needs --case vertical or --case horizontal")
        if settings.table is not None:
            self.run_table(case, settings, document)
            return
        F = scenario.require_submersion()
        report = self.probe_slant(F, settings)
        check = inequality_vertical if case == CASE_VERTICAL else inequality_horizontal
        rng = make_rng(settings.seed)
        results = [check(F, x, settings.curvature, report) for x in sample_points(F.model.domain, settings.samples, rng)]
        self.add_report(document, summarize(results), settings)
        flags = {name: all(item.flags[name] for item in results) for name in results[0].flags}
        if case == CASE_VERTICAL:
            consistent = all(item.equality_consistent for item in results)
            document.add_defect("equality-consistency", 0.0 if consistent else 1.0,
                                settings.tolerance("equality-consistency"))
        document.set_result("case", case)
        document.set_result("c", settings.curvature)
        document.set_result("theta_mean", report.theta_mean)
        document.set_result("slack_min", min(item.slack for item in results))
        document.set_result("slack_max", max(item.slack for item in results))
        document.set_result("equality_flags", flags)
        document.set_result("route_gap", max(item.curvatures["route-gap"] for item in results))
        document.set_result("space_form_defect", max(item.curvatures["space-form-defect"] for item in results))

    def run_table(self, case: str, settings: Settings, document: ReportDocument) -> None:
        try:
            table = TTable.parse(settings.table)
        except ValueError as error:
            raise UsageError(f"--table: {error}") from error
        result = inequality_from_table(case, table, settings.curvature)
        for name, value in result.defects().items():
            document.add_defect(name, value, settings.tolerance(name))
        document.set_result("case", case)
        document.set_result("c", result.c)
        document.set_result("mean_curvature_sq", result.mean_curvature_sq)
        document.set_result("tau_hat", result.tau_hat)
        document.set_result("bound", result.bound)
        document.set_result("slack", result.slack)
        document.set_result("equality_flags", result.flags)


class TensionCommand(Command):
    """Tension field magnitude, frame independence and the harmonic verdict"""

    name = COMMAND_TENSION

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        F = scenario.require_submersion()
        rng = make_rng(settings.seed)
        norms: List[float] = []
        independence = 0.0
        for x in sample_points(F.model.domain, settings.samples, rng):
            tension = tension_field(F, x)
            G = F.frame_at(x).G
            rotated = orthonormalize(G, [random_vector(rng, F.source_dimension) for _ in range(F.source_dimension)])
            independence = max(independence, float(np.linalg.norm(tension - tension_field(F, x, rotated))))
            norms.append(float(np.linalg.norm(tension)))
        document.add_defect("tension-frame-independence", independence, settings.tolerance("tension-frame-independence"))
        document.set_result("tension_norm_max", max(norms))
        document.set_result("tension_norm_mean", float(np.mean(norms)))
        document.set_result("harmonic", max(norms) <= settings.tolerance("harmonic"))


class AntiInvariantCommand(Command):
    """Identities of anti-invariant submersions with ξ horizontal"""

    name = COMMAND_ANTI_INVARIANT

    def run(self, scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
        F = scenario.require_submersion()
        report = anti_invariant_checks(F, settings.samples, settings.seed, settings.curvature)
        self.add_report(document, report, settings)
        document.set_result("consistency", report.consistency)
        document.set_result("fibre_T_norm", report.details["fibre-T-norm"])


def space_form_defects(S: AlmostContactStructure, samples: int, seed: int, c: float):
    """Worst gaps to the closed-form space form tensor and to φ-sectional curvature c"""
    rng = make_rng(seed)
    worst_tensor = worst_sectional = 0.0
    for x in sample_points(S.model.domain, samples, rng):
        curvature = riemann_tensor(S.g, x, domain=S.model.domain)
        X, Y, Z = (random_vector(rng, S.dimension) for _ in range(3))
        closed = space_form_curvature(c, S, x, X, Y, Z)
        worst_tensor = max(worst_tensor, float(np.linalg.norm(curvature.apply(X, Y, Z) - closed)))
        values = S.at(x)
        E = X - float(values.eta @ X) * values.xi
        E = E / math.sqrt(float(E @ values.G @ E))
        worst_sectional = max(worst_sectional, abs(phi_sectional(S, x, E, curvature) - c))
    return worst_tensor, worst_sectional


def fibre_results(F: SubmersionMap, x: np.ndarray, document: ReportDocument) -> None:
    """Fibre curvature, mean curvature and umbilicity at one point"""
    H = mean_curvature(F, x)
    document.set_result("mean_curvature_norm", F.frame_at(x).norm(H))
    document.set_result("umbilicity_defect", umbilicity_defect(F, x))
    if len(split(F, x).vertical) < 2:
        return
    fibre = fibre_curvature(F, x)
    first = min(fibre.sectional_gauss)
    document.set_result("fibre_sectional_gauss", fibre.sectional_gauss[first])
    document.set_result("fibre_sectional_intrinsic", fibre.sectional_intrinsic[first])


class CommandEngine:
    """Dispatches a command name to its handler and collects the report"""

    def __init__(self):
        self.commands: Dict[str, Command] = {
            COMMAND_CHECK_STRUCTURE: CheckStructureCommand(self),
            COMMAND_CHECK_SUBMERSION: CheckSubmersionCommand(self),
            COMMAND_SLANT_ANGLE: SlantAngleCommand(self),
            COMMAND_VERIFY_IDENTITIES: VerifyIdentitiesCommand(self),
            COMMAND_VERIFY_INEQUALITY: VerifyInequalityCommand(self),
            COMMAND_TENSION: TensionCommand(self),
            COMMAND_ANTI_INVARIANT: AntiInvariantCommand(self),
        }

    def execute(self, command: str, scenario: ScenarioSpec, settings: Settings) -> ReportDocument:
        if command not in self.commands:
            raise UsageError(f"unknown command {command!r}")
        document = ReportDocument(scenario.name, command, settings.seed, settings.samples)
        logger.info("%s on %s (samples %d, seed %d)", command, scenario.name, settings.samples, settings.seed)
        try:
            self.commands[command].run(scenario, settings, document)
        except GeometryError as error:
            logger.warning("%s on %s stopped: %s", command, scenario.name, error)
            document.add_error(error.code, error)
            return document
        compare_expected(scenario, settings, document)
        return document


def compare_expected(scenario: ScenarioSpec, settings: Settings, document: ReportDocument) -> None:
    """expected-* records for every fixture value the command produced"""
    for key, expected in scenario.expected.items():
        result_key = EXPECTED_RESULTS[key]
        if result_key not in document.results:
            continue
        actual: Any = document.results[result_key]
        if isinstance(expected.value, float):
            gap = abs(float(actual) - expected.value)
            document.add_defect(f"expected-{key}", gap, settings.tolerance("expected"), expected.provenance)
        else:
            gap = 0.0 if actual == expected.value else 1.0
            document.add_defect(f"expected-{key}", gap, 0.0, expected.provenance)
