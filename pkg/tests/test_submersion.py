import math

import numpy as np
import pytest

from src.errors import RankDeficient
from src.geometry import ManifoldModel, MetricField
from src.scenario import build_scenario
from src.submersion import (
    SubmersionMap,
    basic_lift,
    check_axioms,
    fibre_curvature,
    harmonic_verdict,
    mean_curvature,
    oneill_sample,
    split,
    tension_field,
    umbilicity_defect,
    verify_curvature_identities,
)

SPHERE_POINT = np.array([1.0, 0.5, -0.5])
SPHERE_RADIUS = math.sqrt(1.5)


def test_e3_axioms(e3):
    report = check_axioms(e3.submersion, 3, 11)
    assert report.passed, report.failures()
    assert report.defects["rank"] == 0.0


def test_split_dimensions(e3, hor):
    x = np.array([0.1, 0.2, -0.3, 0.4, 0.0])
    parts = split(e3.submersion, x)
    assert (len(parts.vertical), len(parts.horizontal)) == (3, 2)
    assert parts.invariant_defects() < 1e-12
    parts = split(hor.submersion, x)
    assert (len(parts.vertical), len(parts.horizontal)) == (2, 3)


def test_rank_drop_is_reported():
    spec = build_scenario({"name": "fold", "dimension": 2, "map": ["x1^2"]})
    with pytest.raises(RankDeficient):
        split(spec.submersion, np.array([0.0, 0.3]))


def test_linear_map_has_vanishing_tensors(e4):
    sample = oneill_sample(e4.submersion, np.array([0.1, 0.2, -0.1, 0.3, 0.2]))
    for value in list(sample.T.values()) + list(sample.A.values()):
        assert np.linalg.norm(value) < 1e-6


def test_e3_identities(e3):
    report = verify_curvature_identities(e3.submersion, 2, 3)
    assert report.passed, report.failures()
    assert "fibre-sectional" in report.defects


def test_basic_lift_projects_to_target_vector():
    spec = build_scenario({"name": "kim-map", "dimension": 5, "metric": "euclidean", "map": ["x1", "x2"]})
    y = np.array([0.1, 0.0, 0.2, 0.3, -0.2])
    lift = basic_lift(spec.submersion, y, np.array([2.0, -1.0]))
    np.testing.assert_allclose(spec.submersion.jacobian_at(y) @ lift, [2.0, -1.0])


def test_sphere_fibres_are_umbilical(sphere):
    F = sphere.submersion
    H = mean_curvature(F, SPHERE_POINT)
    assert F.frame_at(SPHERE_POINT).norm(H) == pytest.approx(1.0 / SPHERE_RADIUS, abs=1e-5)
    assert umbilicity_defect(F, SPHERE_POINT) < 1e-5


def test_sphere_fibre_curvature(sphere):
    fibre = fibre_curvature(sphere.submersion, SPHERE_POINT)
    assert fibre.sectional_gauss[(0, 1)] == pytest.approx(1.0 / SPHERE_RADIUS ** 2, abs=1e-4)
    assert fibre.sectional_intrinsic[(0, 1)] == pytest.approx(1.0 / SPHERE_RADIUS ** 2, abs=1e-4)
    np.testing.assert_allclose(fibre.induced_metric, np.eye(2), atol=1e-8)


def test_sphere_tension(sphere):
    tau = tension_field(sphere.submersion, SPHERE_POINT)
    assert tau[0] == pytest.approx(2.0 / SPHERE_RADIUS, abs=1e-4)
    assert not harmonic_verdict(sphere.submersion, SPHERE_POINT)


def test_linear_maps_are_harmonic(e3):
    assert harmonic_verdict(e3.submersion, np.array([0.2, 0.1, 0.0, -0.3, 0.4]))


def _line_map(metric=None, jacobian=None):
    plane = ManifoldModel("plane", 2, metric or MetricField.euclidean(2))
    line = ManifoldModel("line", 1, MetricField.euclidean(1))
    return SubmersionMap(plane, line, lambda y: y[:1], jacobian or (lambda y: np.array([[1.0, 0.0]])), "line-map")


def test_rank_drop_next_to_the_point_is_a_geometry_error():
    F = _line_map(jacobian=lambda y: np.array([[1.0, 0.0]]) if y[0] < 0.1 + 1e-7 else np.zeros((1, 2)))
    with pytest.raises(RankDeficient):
        F.local(np.array([0.1, 0.0]))


def test_singular_metric_next_to_the_point_is_a_geometry_error():
    metric = MetricField(lambda y: np.eye(2) if y[1] < 1e-7 else np.zeros((2, 2)), 2, "collapsing")
    F = _line_map(metric=metric)
    with pytest.raises(RankDeficient):
        F.local(np.array([0.2, 0.0]))
