"""
Builtin scenario catalog
"""

import logging
import re
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import SchemaError, UnknownScenario
from .expression import compile_expression, parse_expression

logger = logging.getLogger(__name__)

_REFERENCE = re.compile(r"^\s*([a-z][a-z0-9-]*)\s*(?:\((.*)\))?\s*$")

TAU = "sin(x1+x3)"
HALF_ROOT = "1/sqrt(2)"
RADIUS = "sqrt(x1^2+x2^2+x3^2)"


def _zeros(count: int) -> List[str]:
    return ["0"] * count


def _unit_row(dimension: int, index: int, value: str = "1") -> List[str]:
    """Row with value at 1-based index"""
    row = _zeros(dimension)
    row[index - 1] = value
    return row


def _standard(document: Dict[str, Any]) -> Dict[str, Any]:
    document.update({"metric": "euclidean", "phi": "standard", "xi": "standard", "eta": "standard"})
    return document


def _expected(value: Any, provenance: str) -> Dict[str, Any]:
    return {"value": value, "provenance": provenance}


class ScenarioCatalog:
    """Builds the scenario document of each builtin"""

    @staticmethod
    def r2n1_cosymplectic(n: float = 2) -> Dict[str, Any]:
        """Flat R^(2n+1) with η = dz, coordinates ordered x1..xn, y1..yn, z"""
        if n != int(n) or n < 1:
            raise SchemaError(f"r2n1-cosymplectic needs a positive integer n, got {n:g}")
        dimension = 2 * int(n) + 1
        return _standard({"name": f"r{dimension}-cosymplectic", "dimension": dimension})

    @staticmethod
    def kim_r5() -> Dict[str, Any]:
        """R^5 with η = dz − τ(dx1 + dx3), τ = sin(x1 + x3), and g = Σ dx_i² + η ⊗ η"""
        t, t2 = TAU, f"{TAU}^2"
        return {
            "name": "kim-r5",
            "dimension": 5,
            "metric": [
                [f"1+{t2}", "0", t2, "0", f"-{t}"],
                ["0", "1", "0", "0", "0"],
                [t2, "0", f"1+{t2}", "0", f"-{t}"],
                ["0", "0", "0", "1", "0"],
                [f"-{t}", "0", f"-{t}", "0", "1"],
            ],
            "phi": [
                ["0", "-1", "0", "0", "0"],
                ["1", "0", "0", "0", "0"],
                ["0", "0", "0", "-1", "0"],
                ["0", "0", "1", "0", "0"],
                ["0", f"-{t}", "0", f"-{t}", "0"],
            ],
            "xi": _unit_row(5, 5),
            "eta": [f"-{t}", "0", f"-{t}", "0", "1"],
        }

    @staticmethod
    def e3() -> Dict[str, Any]:
        """(x1 − x2)/√2 and y2 on flat R^5; ξ vertical, θ = π/4"""
        return _standard({
            "name": "e3",
            "dimension": 5,
            "map": {
                "components": ["(x1-x2)/sqrt(2)", "x4"],
                "jacobian": [[HALF_ROOT, f"-{HALF_ROOT}", "0", "0", "0"], _unit_row(5, 4)],
            },
            "target": {"dimension": 2, "domain": [[-10, 10], [-10, 10]]},
            "expected": {
                "theta": _expected("pi/4", "derived:slant-decomposition"),
                "verdict": _expected("proper-slant", "derived:slant-decomposition"),
                "xi_position": _expected("vertical", "derived:kernel-projection"),
                "mu_dimension": _expected(0, "derived:dimension-count"),
                "kernel_dimension": _expected(3, "derived:kernel-projection"),
            },
        })

    @staticmethod
    def e4() -> Dict[str, Any]:
        """Difference map on the kim-r5 structure; kernel spanned by E1 + E3, E2 + E4 and ξ, invariant"""
        document = ScenarioCatalog.kim_r5()
        document.update({
            "name": "e4",
            "map": {
                "components": ["(x1-x3)/sqrt(2)", "(x2-x4)/sqrt(2)"],
                "jacobian": [
                    [HALF_ROOT, "0", f"-{HALF_ROOT}", "0", "0"],
                    ["0", HALF_ROOT, "0", f"-{HALF_ROOT}", "0"],
                ],
            },
            "target": {"dimension": 2, "domain": [[-10, 10], [-10, 10]]},
            "expected": {
                "theta": _expected(0, "derived:slant-decomposition"),
                "verdict": _expected("invariant", "derived:slant-decomposition"),
                "xi_position": _expected("vertical", "derived:kernel-projection"),
                "kernel_dimension": _expected(3, "derived:kernel-projection"),
            },
        })
        return document

    @staticmethod
    def hor() -> Dict[str, Any]:
        """(x1 − x2)/√2, y2 and z on flat R^5; ξ horizontal, θ = π/4"""
        return _standard({
            "name": "hor",
            "dimension": 5,
            "map": {
                "components": ["(x1-x2)/sqrt(2)", "x4", "x5"],
                "jacobian": [[HALF_ROOT, f"-{HALF_ROOT}", "0", "0", "0"], _unit_row(5, 4), _unit_row(5, 5)],
            },
            "target": {"dimension": 3, "domain": [[-10, 10], [-10, 10], [-10, 10]]},
            "expected": {
                "theta": _expected("pi/4", "derived:slant-decomposition"),
                "verdict": _expected("proper-slant", "derived:slant-decomposition"),
                "xi_position": _expected("horizontal", "derived:kernel-projection"),
                "mu_dimension": _expected(0, "derived:dimension-count"),
                "kernel_dimension": _expected(2, "derived:kernel-projection"),
            },
        })

    @staticmethod
    def mixed_r7(alpha: float = np.pi / 3) -> Dict[str, Any]:
        """Slant angle α on flat R^7 with a two-dimensional φ-invariant μ spanned by ∂x3 and ∂y3"""
        if not 0.0 < alpha < np.pi / 2:
            raise SchemaError(f"mixed-r7 needs 0 < alpha < pi/2, got {alpha:g}")
        return _standard({
            "name": "mixed-r7",
            "dimension": 7,
            "constants": {"alpha": alpha},
            "map": {
                "components": ["-sin(alpha)*x1+cos(alpha)*x2", "x5", "x3", "x6"],
                "jacobian": [
                    ["-sin(alpha)", "cos(alpha)", "0", "0", "0", "0", "0"],
                    _unit_row(7, 5),
                    _unit_row(7, 3),
                    _unit_row(7, 6),
                ],
            },
            "target": {"dimension": 4, "domain": [[-10, 10]] * 4},
            "expected": {
                "theta": _expected("alpha", "derived:slant-decomposition"),
                "verdict": _expected("proper-slant", "derived:slant-decomposition"),
                "xi_position": _expected("vertical", "derived:kernel-projection"),
                "mu_dimension": _expected(2, "derived:dimension-count"),
                "kernel_dimension": _expected(3, "derived:kernel-projection"),
            },
        })

    @staticmethod
    def anti_invariant_r5() -> Dict[str, Any]:
        """Projection of flat R^5 onto (x1, x2, z); φ maps the fibres into the horizontal space"""
        return _standard({
            "name": "anti-invariant-r5",
            "dimension": 5,
            "map": {
                "components": ["x1", "x2", "x5"],
                "jacobian": [_unit_row(5, 1), _unit_row(5, 2), _unit_row(5, 5)],
            },
            "target": {"dimension": 3, "domain": [[-10, 10], [-10, 10], [-10, 10]]},
            "expected": {
                "theta": _expected("pi/2", "derived:slant-decomposition"),
                "verdict": _expected("anti-invariant", "derived:slant-decomposition"),
                "xi_position": _expected("horizontal", "derived:kernel-projection"),
                "kernel_dimension": _expected(2, "derived:kernel-projection"),
            },
        })

    @staticmethod
    def sphere_radius() -> Dict[str, Any]:
        """Distance from the origin on flat R^3; round sphere fibres of radius r"""
        return _standard({
            "name": "sphere-radius",
            "dimension": 3,
            "domain": [[0.3, 2.5], [-1.5, 1.5], [-1.5, 1.5]],
            "map": {
                "components": [RADIUS],
                "jacobian": [[f"x1/{RADIUS}", f"x2/{RADIUS}", f"x3/{RADIUS}"]],
            },
            "target": {"dimension": 1, "domain": [[0.1, 5]]},
            "expected": {
                "kernel_dimension": _expected(2, "derived:kernel-projection"),
            },
        })

    @staticmethod
    def hyperbolic_line(c: float = -1.0) -> Dict[str, Any]:
        """Hyperbolic plane of curvature c times a line; cosymplectic with φ-sectional curvature c"""
        if not c < 0:
            raise SchemaError(f"hyperbolic-line needs c < 0, got {c:g}")
        factor = "(-4/c)/(1-x1^2-x2^2)^2"
        return {
            "name": "hyperbolic-line",
            "dimension": 3,
            "constants": {"c": c},
            "domain": [[-0.5, 0.5], [-0.5, 0.5], [-0.9, 0.9]],
            "metric": [[factor, "0", "0"], ["0", factor, "0"], ["0", "0", "1"]],
            "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
            "xi": ["0", "0", "1"],
            "eta": ["0", "0", "1"],
        }

    BUILTINS: Dict[str, Tuple[str, int]] = {
        "r2n1-cosymplectic": ("r2n1_cosymplectic", 1),
        "kim-r5": ("kim_r5", 0),
        "e3": ("e3", 0),
        "e4": ("e4", 0),
        "hor": ("hor", 0),
        "mixed-r7": ("mixed_r7", 1),
        "anti-invariant-r5": ("anti_invariant_r5", 0),
        "sphere-radius": ("sphere_radius", 0),
        "hyperbolic-line": ("hyperbolic_line", 1),
    }

    @classmethod
    def names(cls) -> List[str]:
        return list(cls.BUILTINS)

    @classmethod
    def document(cls, reference: str) -> Dict[str, Any]:
        """Document for a reference like "kim-r5" or "mixed-r7(pi/6)" """
        match = _REFERENCE.match(reference)
        if match is None or match.group(1) not in cls.BUILTINS:
            raise UnknownScenario(f"unknown scenario {reference!r}; builtins: {', '.join(cls.names())}")
        name, argument = match.group(1), match.group(2)
        method_name, arity = cls.BUILTINS[name]
        creator: Callable[..., Dict[str, Any]] = getattr(cls, method_name)
        arguments = _arguments(argument)
        if len(arguments) > arity:
            raise UnknownScenario(f"{name} takes {arity} parameter(s), got {len(arguments)}")
        document = creator(*arguments)
        if arguments:
            document["name"] = f"{name}({argument.strip()})"
        logger.debug("builtin %s -> %s", reference, document["name"])
        return document


def _arguments(text: Optional[str]) -> List[float]:
    """Comma-separated constant expressions"""
    if text is None or not text.strip():
        return []
    return [compile_expression(parse_expression(part), 0)(np.zeros(0)) for part in text.split(",")]
