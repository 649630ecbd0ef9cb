import json
import math
import os

import pytest

from dev_headless_check import run_examples
from src.cli import main, run_command
from src.constants import EXIT_CHECK_FAILURE, EXIT_PASS, EXIT_USAGE

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "scenarios")
FAST = ["--samples", "2", "--directions", "3"]


def check_names(document):
    return [check.name for check in document.checks]


def test_slant_angle_on_e3():
    code, document = run_command(["slant-angle", "e3"] + FAST)
    assert code == EXIT_PASS
    assert document.results["theta_mean"] == pytest.approx(math.pi / 4, abs=1e-6)
    assert document.results["verdict"] == "proper-slant"
    assert document.results["mu_dimension"] == 0
    record = next(check for check in document.checks if check.name == "expected-theta")
    assert record.passed
    assert record.provenance == "derived:slant-decomposition"


def test_same_seed_gives_identical_json():
    first = run_command(["slant-angle", "mixed-r7", "--seed", "9"] + FAST)[1].to_json()
    second = run_command(["slant-angle", "mixed-r7", "--seed", "9"] + FAST)[1].to_json()
    assert first == second
    third = run_command(["slant-angle", "mixed-r7", "--seed", "10"] + FAST)[1].to_json()
    assert first != third


def test_invariant_map_has_no_proper_slant_inequality():
    code, document = run_command(["verify-inequality", "e4", "--case", "vertical"] + FAST)
    assert code == EXIT_CHECK_FAILURE
    assert document.checks[-1].error == "NotProperSlant"


@pytest.mark.parametrize("argv", [
    ["slant-angle"],
    ["slant-angle", "e3", "--samples", "0"],
    ["slant-angle", "e3", "--tolerance-scale", "-1"],
    ["verify-inequality", "e3"],
    ["verify-inequality", "e3", "--case", "diagonal"],
    ["verify-inequality", "e3", "--case", "vertical", "--table", "T11=1"],
    ["slant-angle", "moon"],
    ["check-submersion", "r2n1-cosymplectic(1)"],
    ["transmogrify", "e3"],
])
def test_usage_and_scenario_errors(argv):
    code, document = run_command(argv)
    assert code == EXIT_USAGE
    assert document is None


def test_table_mode():
    code, document = run_command(["verify-inequality", "e3", "--case", "vertical", "--table", "T11^4=3,T22^4=1"])
    assert code == EXIT_PASS
    assert document.results["slack"] == pytest.approx(0.0, abs=1e-12)
    assert all(document.results["equality_flags"].values())


def test_check_structure():
    code, document = run_command(["check-structure", "kim-r5"] + FAST)
    assert code == EXIT_PASS
    assert document.results["cosymplectic"] is True
    assert "nabla-phi" in check_names(document)


def test_check_structure_space_form():
    code, document = run_command(["check-structure", "hyperbolic-line(-1)", "--c", "-1"] + FAST)
    assert code == EXIT_PASS
    assert {"space-form", "phi-sectional"} <= set(check_names(document))


def test_broken_structure_fails():
    code, document = run_command(["check-structure", os.path.join(SCENARIO_DIR, "twisted-r3.json")] + FAST)
    assert code == EXIT_CHECK_FAILURE
    failed = {check.name for check in document.checks if not check.passed}
    assert "d-eta" in failed


def test_check_submersion_reports_kernel():
    code, document = run_command(["check-submersion", "hor"] + FAST)
    assert code == EXIT_PASS
    assert document.results["kernel_dimension"] == 2
    assert document.results["xi_position"] == "horizontal"
    assert "expected-kernel_dimension" in check_names(document)


def test_tension_of_a_linear_map():
    code, document = run_command(["tension", "e3"] + FAST)
    assert code == EXIT_PASS
    assert document.results["harmonic"] is True


def test_anti_invariant_command():
    code, document = run_command(["anti-invariant", "anti-invariant-r5"] + FAST)
    assert code == EXIT_PASS
    assert document.results["consistency"] == "c = 0 consistent"


def test_main_writes_json_file(tmp_path):
    out = tmp_path / "report.json"
    code = main(["slant-angle", "hor", "--format", "json", "--out", str(out)] + FAST)
    assert code == EXIT_PASS
    data = json.loads(out.read_text(encoding="utf-8"))
    assert list(data)[:6] == ["scenario", "command", "seed", "samples", "checks", "pass"]
    assert data["scenario"] == "hor"
    assert data["xi_position"] == "horizontal"


def test_main_prints_text(capsys):
    assert main(["check-submersion", "e3"] + FAST) == EXIT_PASS
    assert capsys.readouterr().out.endswith("result: PASS\n")


def test_main_usage_error(capsys):
    assert main(["slant-angle", "e3", "--samples", "x"]) == EXIT_USAGE
    assert capsys.readouterr().err


def test_headless_check_runs_the_examples(capsys):
    assert run_examples(samples=2) == EXIT_PASS
    assert "e4: exit 0, verdict invariant" in capsys.readouterr().out


def test_slant_angle_on_invariant_e4():
    code, document = run_command(["slant-angle", "e4"] + FAST)
    assert code == EXIT_PASS
    assert document.results["verdict"] == "invariant"
    assert "mu-invariance" not in check_names(document)
    assert "mu_dimension" not in document.results


def test_slant_angle_reports_constant_mu_dimension():
    code, document = run_command(["slant-angle", "mixed-r7", "--samples", "4", "--directions", "3"])
    assert code == EXIT_PASS
    assert "mu-constant-dimension" in check_names(document)
    assert document.results["mu_dimension"] == 2
