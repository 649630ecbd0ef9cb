import math
import os

import numpy as np
import pytest

from src.constants import (
    VERDICT_ANTI_INVARIANT,
    VERDICT_INVARIANT,
    VERDICT_NOT_SLANT,
    VERDICT_PROPER,
    XI_HORIZONTAL,
    XI_OBLIQUE,
    XI_VERTICAL,
)
from src.errors import NotHorizontal, NotProperSlant, NotSlant, NotVertical, WrongXiPosition, XiDirection
from src.scenario import load_scenario
from src.slant import (
    adapted_frame,
    decompose_horizontal,
    decompose_vertical,
    harmonic_representation_defect,
    mu_distribution,
    require_slant,
    slant_angle,
    slant_constancy,
    totally_geodesic_criteria,
    verify_slant_identities,
    xi_position,
)

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "scenarios")

X5 = np.array([0.1, -0.2, 0.3, 0.05, -0.1])
X7 = np.array([0.1, -0.2, 0.3, 0.05, -0.1, 0.2, 0.0])


def test_e3_decomposition(e3):
    U = np.array([1.0, 1.0, 0.0, 0.0, 0.0]) / math.sqrt(2.0)
    parts = decompose_vertical(e3.submersion, X5, U)
    np.testing.assert_allclose(parts.psi, [0.0, 0.0, -1.0 / math.sqrt(2.0), 0.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(parts.omega, [0.0, 0.0, 0.0, -1.0 / math.sqrt(2.0), 0.0], atol=1e-12)
    assert slant_angle(e3.submersion, X5, U) == pytest.approx(math.pi / 4)


def test_slant_angle_preconditions(e3):
    with pytest.raises(XiDirection):
        slant_angle(e3.submersion, X5, np.array([0.0, 0.0, 0.0, 0.0, 1.0]))
    with pytest.raises(NotVertical):
        decompose_vertical(e3.submersion, X5, np.array([0.0, 0.0, 0.0, 1.0, 0.0]))


@pytest.mark.parametrize("fixture, theta, verdict, position", [
    ("e3", math.pi / 4, VERDICT_PROPER, XI_VERTICAL),
    ("e4", 0.0, VERDICT_INVARIANT, XI_VERTICAL),
    ("hor", math.pi / 4, VERDICT_PROPER, XI_HORIZONTAL),
    ("anti", math.pi / 2, VERDICT_ANTI_INVARIANT, XI_HORIZONTAL),
    ("mixed", math.pi / 3, VERDICT_PROPER, XI_VERTICAL),
])
def test_slant_verdicts(request, fixture, theta, verdict, position):
    spec = request.getfixturevalue(fixture)
    report = slant_constancy(spec.submersion, 3, 4, 5)
    assert report.theta_mean == pytest.approx(theta, abs=1e-6)
    assert report.max_deviation < 1e-6
    assert report.verdict == verdict
    assert report.xi_position == position
    assert len(report.angles) == 12


@pytest.mark.parametrize("alpha, theta", [("pi/6", math.pi / 6), ("pi/4", math.pi / 4), ("pi/3", math.pi / 3)])
def test_mixed_angle_follows_its_parameter(alpha, theta):
    report = slant_constancy(load_scenario(f"mixed-r7({alpha})").submersion, 2, 3, 1)
    assert report.theta_mean == pytest.approx(theta, abs=1e-6)
    assert report.max_deviation < 1e-6
    assert report.verdict == VERDICT_PROPER


def test_map_that_is_not_slant():
    report = slant_constancy(load_scenario(os.path.join(SCENARIO_DIR, "nonslant-r7.json")).submersion, 3, 6, 2)
    assert report.verdict == VERDICT_NOT_SLANT
    with pytest.raises(NotSlant):
        require_slant(report)


def test_sphere_has_oblique_xi(sphere):
    x = np.array([1.0, 0.5, -0.5])
    assert xi_position(sphere.submersion, x) == XI_OBLIQUE


def test_mu_dimension(e3, mixed):
    report = slant_constancy(mixed.submersion, 2, 3, 0)
    mu = mu_distribution(mixed.submersion, X7, report)
    assert mu.dimension == 2
    assert mu.dimension_matches
    assert mu.invariance_defect < 1e-8
    report = slant_constancy(e3.submersion, 2, 3, 0)
    assert mu_distribution(e3.submersion, X5, report).dimension == 0


def test_adapted_frame_is_orthonormal(e3, hor, mixed):
    for spec, x in ((e3, X5), (hor, X5), (mixed, X7)):
        F = spec.submersion
        report = slant_constancy(F, 2, 3, 0)
        frame = adapted_frame(F, x, report)
        assert frame.gram_defect(F.frame_at(x).G) < 1e-8
        assert len(frame.vertical) + len(frame.horizontal) == F.source_dimension
        assert len(frame.horizontal) == F.target_dimension
    assert frame.vertical_labels[-1] == "xi"
    assert frame.horizontal_labels[-2:] == ["mu1", "mu2"]


def test_adapted_frame_needs_proper_slant(e4):
    report = slant_constancy(e4.submersion, 2, 3, 0)
    with pytest.raises(NotProperSlant):
        adapted_frame(e4.submersion, X5, report)


def test_slant_identities_on_e3(e3):
    F = e3.submersion
    report = verify_slant_identities(F, slant_constancy(F, 2, 3, 0), 2, 7)
    assert report.passed, report.failures()
    assert report.details["omega-parallel-norm"] < 1e-6


def test_totally_geodesic_criteria_on_a_linear_map(e3):
    F = e3.submersion
    sample = totally_geodesic_criteria(F, X5, slant_constancy(F, 2, 3, 0))
    assert sample.horizontal_foliation_defect < 1e-6
    assert sample.vertical_foliation_defect < 1e-6
    assert sample.map_defect < 1e-6
    assert sample.criterion_identity < 1e-6
    assert harmonic_representation_defect(F, X5) < 1e-6


def test_criteria_need_a_definite_xi_position(sphere):
    with pytest.raises(WrongXiPosition):
        totally_geodesic_criteria(sphere.submersion, np.array([1.0, 0.5, -0.5]),
                                  slant_constancy(sphere.submersion, 1, 1, 0))


def test_decompose_horizontal_on_e3(e3):
    F = e3.submersion
    X = np.array([1.0, -1.0, 0.0, 0.0, 0.0]) / math.sqrt(2.0)
    parts = decompose_horizontal(F, X5, X)
    Phi = e3.structure.at(X5).Phi
    np.testing.assert_allclose(parts.b + parts.c, Phi @ X, atol=1e-12)
    np.testing.assert_allclose(F.jacobian_at(X5) @ parts.b, np.zeros(2), atol=1e-10)
    assert float(parts.b @ parts.c) == pytest.approx(0.0, abs=1e-10)


def test_decompose_horizontal_rejects_vertical(e3):
    with pytest.raises(NotHorizontal):
        decompose_horizontal(e3.submersion, X5, np.array([0.0, 0.0, 1.0, 0.0, 0.0]))
