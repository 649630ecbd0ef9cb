import math
import os

import numpy as np
import pytest

from src.catalog import ScenarioCatalog
from src.errors import SchemaError, ShapeMismatch, StructureInvalid, UnknownScenario
from src.scenario import build_scenario, load_scenario

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "scenarios")


def minimal(**overrides):
    document = {"name": "flat", "dimension": 3, "phi": "standard", "xi": "standard", "eta": "standard"}
    document.update(overrides)
    return document


def test_e3_builtin(e3):
    F = e3.require_submersion()
    assert e3.dimension == 5
    assert F.target_dimension == 2
    np.testing.assert_allclose(F(np.array([1.0, 2.0, 3.0, 4.0, 5.0])), [-1.0 / math.sqrt(2.0), 4.0])
    assert e3.expected["theta"].value == pytest.approx(math.pi / 4)
    assert e3.expected["verdict"].provenance == "derived:slant-decomposition"


def test_kim_metric_entries(kim):
    x = np.array([0.1, 0.2, 0.3, -0.1, 0.5])
    tau = math.sin(0.4)
    G = kim.model.metric(x)
    assert G[0, 0] == pytest.approx(1.0 + tau ** 2)
    assert G[0, 2] == pytest.approx(tau ** 2)
    assert G[4, 0] == pytest.approx(-tau)
    np.testing.assert_allclose(kim.structure.eta(x), [-tau, 0.0, -tau, 0.0, 1.0])


def test_metric_with_wrong_shape():
    rows = [["1", "0", "0", "0", "0"]] * 4
    with pytest.raises(ShapeMismatch):
        build_scenario({"name": "bad", "dimension": 5, "metric": rows})


def test_unknown_key():
    with pytest.raises(SchemaError):
        build_scenario(minimal(colour="red"))


def test_missing_name():
    with pytest.raises(SchemaError):
        build_scenario({"dimension": 3})


def test_partial_structure():
    with pytest.raises(SchemaError):
        build_scenario({"name": "partial", "dimension": 3, "phi": "standard"})


def test_invalid_structure_fails_eagerly():
    with pytest.raises(StructureInvalid):
        build_scenario(minimal(phi=[["0", "0", "0"]] * 3))


def test_expected_needs_provenance():
    document = minimal(map=["x1"], expected={"theta": {"value": 0.5}})
    with pytest.raises(SchemaError):
        build_scenario(document)


def test_constants_feed_expressions():
    document = minimal(constants={"a": "pi/6", "b": "2*a"}, map=["cos(b)*x1"])
    spec = build_scenario(document)
    assert spec.constants["b"] == pytest.approx(math.pi / 3)
    assert spec.submersion(np.array([1.0, 0.0, 0.0]))[0] == pytest.approx(0.5)


def test_map_component_count_must_match_target():
    with pytest.raises(ShapeMismatch):
        build_scenario(minimal(map=["x1", "x2"], target={"dimension": 1}))


def test_scenario_without_structure():
    spec = build_scenario({"name": "plain", "dimension": 2, "map": ["x1"]})
    assert spec.structure is None
    assert spec.submersion.structure is None
    with pytest.raises(SchemaError):
        spec.require_structure()


def test_builtin_parameter_parsed_by_expression_language():
    spec = load_scenario("mixed-r7(pi/6)")
    assert spec.name == "mixed-r7(pi/6)"
    assert spec.constants["alpha"] == pytest.approx(math.pi / 6)
    assert spec.expected["theta"].value == pytest.approx(math.pi / 6)


def test_r2n1_dimension():
    spec = load_scenario("r2n1-cosymplectic(3)")
    assert spec.dimension == 7
    assert spec.submersion is None


@pytest.mark.parametrize("reference", ["moon", "kim-r5(1)", "e3(1, 2)"])
def test_unknown_builtins(reference):
    with pytest.raises(UnknownScenario):
        load_scenario(reference)


def test_hyperbolic_line_needs_negative_c():
    with pytest.raises(SchemaError):
        load_scenario("hyperbolic-line(1)")


def test_every_builtin_loads():
    for name in ScenarioCatalog.names():
        spec = load_scenario(name)
        assert spec.structure is not None


def test_file_scenario_matches_builtin(e3):
    spec = load_scenario(os.path.join(SCENARIO_DIR, "e3.json"))
    x = np.array([0.2, -0.3, 0.1, 0.4, -0.5])
    np.testing.assert_allclose(spec.submersion(x), e3.submersion(x))
    np.testing.assert_allclose(spec.submersion.jacobian_at(x), e3.submersion.jacobian_at(x))
    assert spec.source.endswith("e3.json")


def test_missing_file():
    with pytest.raises(UnknownScenario):
        load_scenario("no-such-scenario.json")
