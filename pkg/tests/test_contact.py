import os

import numpy as np
import pytest

from src.commands import space_form_defects
from src.contact import (
    check_almost_contact,
    check_closed,
    check_cosymplectic,
    check_normal,
    fundamental_two_form,
    phi_sectional,
    space_form_curvature,
    standard_phi_matrix,
    standard_structure,
)
from src.errors import NotOrthogonalToXi, NotUnit
from src.scenario import load_scenario

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "scenarios")


def structure_checks(S, samples=3, seed=1):
    return [check(S, samples, seed) for check in (check_almost_contact, check_closed, check_normal, check_cosymplectic)]


def test_standard_phi_matrix():
    Phi = standard_phi_matrix(2)
    e = np.eye(5)
    np.testing.assert_array_equal(Phi @ e[0], -e[2])
    np.testing.assert_array_equal(Phi @ e[2], e[0])
    np.testing.assert_array_equal(Phi @ e[4], np.zeros(5))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_standard_structure_is_cosymplectic(n):
    for report in structure_checks(standard_structure(n)):
        assert report.passed, report.failures()


def test_kim_structure_is_cosymplectic(kim):
    for report in structure_checks(kim.structure):
        assert report.passed, report.failures()


def test_fundamental_two_form_is_skew(kim):
    x = np.array([0.1, -0.2, 0.3, 0.0, 0.4])
    X = np.array([1.0, 0.5, 0.0, -0.3, 0.2])
    Y = np.array([0.0, 1.0, 2.0, 0.1, -1.0])
    assert fundamental_two_form(kim.structure, x, X, Y) == pytest.approx(-fundamental_two_form(kim.structure, x, Y, X))


def test_twisted_structure_is_not_closed():
    S = load_scenario(os.path.join(SCENARIO_DIR, "twisted-r3.json")).structure
    assert check_almost_contact(S, 3, 1).passed
    assert check_closed(S, 3, 1).defects["d-eta"] == pytest.approx(1.0, abs=1e-6)
    assert "nabla-xi" in check_cosymplectic(S, 3, 1).failures()


def test_sasakian_structure_is_not_cosymplectic():
    S = load_scenario(os.path.join(SCENARIO_DIR, "sasakian-r3.json")).structure
    assert check_almost_contact(S, 3, 1).passed
    assert check_closed(S, 3, 1).defects["d-eta"] == pytest.approx(1.0, abs=1e-6)
    assert "nabla-xi" in check_cosymplectic(S, 3, 1).failures()


@pytest.mark.parametrize("c", [-1.0, -4.0])
def test_hyperbolic_line_is_a_space_form(c):
    spec = load_scenario(f"hyperbolic-line({c})")
    for report in structure_checks(spec.structure):
        assert report.passed, report.failures()
    tensor_gap, sectional_gap = space_form_defects(spec.structure, 3, 5, c)
    assert tensor_gap < 1e-4
    assert sectional_gap < 1e-4


def test_phi_sectional_on_hyperbolic_line():
    spec = load_scenario("hyperbolic-line(-1)")
    x = np.array([0.1, -0.2, 0.3])
    G = spec.model.metric(x)
    E = np.array([1.0, 0.0, 0.0]) / np.sqrt(G[0, 0])
    assert phi_sectional(spec.structure, x, E) == pytest.approx(-1.0, abs=1e-4)


def test_phi_sectional_preconditions():
    S = standard_structure(1)
    x = np.zeros(3)
    with pytest.raises(NotUnit):
        phi_sectional(S, x, np.array([2.0, 0.0, 0.0]))
    with pytest.raises(NotOrthogonalToXi):
        phi_sectional(S, x, np.array([0.0, 0.6, 0.8]))


def test_flat_space_form_curvature_vanishes():
    S = standard_structure(2)
    rng = np.random.default_rng(3)
    X, Y, Z = rng.standard_normal((3, 5))
    np.testing.assert_array_equal(space_form_curvature(0.0, S, np.zeros(5), X, Y, Z), np.zeros(5))
