"""
Scenario documents: schema validation and construction of the geometry they describe

A scenario is one JSON object. Expressions are strings in the language of expression.py;
plain numbers are accepted wherever an expression is.
"""

import json
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from .catalog import ScenarioCatalog
from .constants import (
    BUILTIN_METRIC,
    BUILTIN_STRUCTURE,
    DEFAULT_TARGET_HALF_WIDTH,
    EXPECTED_KEYS,
    MAP_KEYS,
    SCENARIO_KEYS,
    SCENARIO_SUFFIX,
    TARGET_KEYS,
)
from .contact import AlmostContactStructure, standard_phi_matrix
from .errors import SchemaError, ShapeMismatch, UnknownScenario
from .expression import BUILTIN_CONSTANTS, FUNCTIONS, compile_array, compile_expression, parse_expression
from .geometry import DomainBox, EndomorphismField, Field, ManifoldModel, MetricField, OneFormField, VectorField
from .submersion import SubmersionMap

logger = logging.getLogger(__name__)

_CONSTANT_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_VARIABLE_NAME = re.compile(r"^x[1-9]\d*$")


@dataclass(frozen=True)
class ExpectedValue:
    """Reference result from a fixture with the source it was taken from"""

    value: Any
    provenance: str


@dataclass(eq=False)
class ScenarioSpec:
    """A loaded scenario: its declared data plus the structure and map built from it"""

    name: str
    dimension: int
    domain: DomainBox
    constants: Dict[str, float]
    expected: Dict[str, ExpectedValue]
    model: ManifoldModel
    structure: Optional[AlmostContactStructure]
    submersion: Optional[SubmersionMap]
    expressions: List[str] = field(default_factory=list)
    source: str = "<memory>"

    def require_structure(self) -> AlmostContactStructure:
        if self.structure is None:
            raise SchemaError(f"scenario {self.name} declares no phi, xi and eta")
        return self.structure

    def require_submersion(self) -> SubmersionMap:
        if self.submersion is None:
            raise SchemaError(f"scenario {self.name} declares no map")
        return self.submersion


class _Builder:
    """Walks one document, validating as it goes and recording every expression string"""

    def __init__(self, document: Mapping[str, Any]):
        if not isinstance(document, Mapping):
            raise SchemaError("a scenario must be a JSON object")
        self.document = document
        self.expressions: List[str] = []
        self.constants: Dict[str, float] = {}

    def check_keys(self, mapping: Mapping[str, Any], allowed: Sequence[str], where: str) -> None:
        unknown = sorted(set(mapping) - set(allowed))
        if unknown:
            raise SchemaError(f"unknown key(s) {', '.join(unknown)} in {where}")

    def require(self, mapping: Mapping[str, Any], key: str, where: str) -> Any:
        if key not in mapping:
            raise SchemaError(f"missing key {key!r} in {where}")
        return mapping[key]

    def dimension(self, value: Any, where: str) -> int:
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise SchemaError(f"{where} must be a positive integer, got {value!r}")
        return value

    def entry(self, value: Any, where: str) -> str:
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise SchemaError(f"{where} must be an expression string or a number, got {value!r}")
        if isinstance(value, str):
            self.expressions.append(value)
            return value
        return repr(float(value))

    def number(self, value: Any, where: str) -> float:
        """Constant expression (no coordinates)"""
        text = self.entry(value, where)
        return compile_expression(parse_expression(text, self.constants), 0)(np.zeros(0))

    def read_constants(self, raw: Any) -> None:
        if raw is None:
            return
        if not isinstance(raw, Mapping):
            raise SchemaError("constants must be an object of name: value")
        for name, value in raw.items():
            if not _CONSTANT_NAME.match(name) or _VARIABLE_NAME.match(name):
                raise SchemaError(f"bad constant name {name!r}")
            if name in FUNCTIONS or name in BUILTIN_CONSTANTS:
                raise SchemaError(f"constant {name!r} shadows a builtin")
            self.constants[name] = self.number(value, f"constant {name}")

    def domain(self, raw: Any, dimension: int, where: str, half_width: Optional[float] = None) -> DomainBox:
        if raw is None:
            return DomainBox.cube(dimension) if half_width is None else DomainBox.cube(dimension, half_width)
        if not isinstance(raw, list) or len(raw) != dimension:
            raise ShapeMismatch(f"{where} needs {dimension} [low, high] pairs")
        pairs = []
        for index, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ShapeMismatch(f"{where} entry {index} is not a [low, high] pair")
            pairs.append([self.number(bound, f"{where} bound") for bound in pair])
        return DomainBox.from_pairs(pairs)

    def texts(self, raw: Any, shape: Sequence[int], where: str) -> List:
        """Nested list of expression strings with the given shape"""
        if not shape:
            return self.entry(raw, where)
        if not isinstance(raw, list) or len(raw) != shape[0]:
            found = len(raw) if isinstance(raw, list) else type(raw).__name__
            raise ShapeMismatch(f"{where} needs {shape[0]} entries along an axis, got {found}")
        return [self.texts(item, shape[1:], where) for item in raw]

    def compiled(self, raw: Any, shape: Sequence[int], dimension: int, where: str) -> Callable[[np.ndarray], np.ndarray]:
        return compile_array(self.texts(raw, shape, where), dimension, self.constants)

    def metric(self, raw: Any, dimension: int, where: str) -> MetricField:
        if raw is None or raw == BUILTIN_METRIC:
            return MetricField.euclidean(dimension)
        if isinstance(raw, str):
            raise SchemaError(f"unknown builtin metric {raw!r} in {where}")
        return MetricField(self.compiled(raw, (dimension, dimension), dimension, where), dimension, where)

    def structure_tensor(self, raw: Any, dimension: int, kind: str) -> Field:
        if raw == BUILTIN_STRUCTURE:
            if dimension % 2 != 1:
                raise SchemaError(f"the standard {kind} needs an odd dimension, got {dimension}")
            if kind == "phi":
                matrix = standard_phi_matrix(dimension // 2)
                return EndomorphismField(lambda x: matrix, dimension, "phi")
            unit = np.zeros(dimension)
            unit[-1] = 1.0
            cls = VectorField if kind == "xi" else OneFormField
            return cls(lambda x: unit, dimension, kind)
        if isinstance(raw, str):
            raise SchemaError(f"unknown builtin {kind} {raw!r}")
        if kind == "phi":
            return EndomorphismField(self.compiled(raw, (dimension, dimension), dimension, kind), dimension, kind)
        cls = VectorField if kind == "xi" else OneFormField
        return cls(self.compiled(raw, (dimension,), dimension, kind), dimension, kind)

    def structure(self, model: ManifoldModel) -> Optional[AlmostContactStructure]:
        present = [key for key in ("phi", "xi", "eta") if key in self.document]
        if not present:
            return None
        if len(present) != 3:
            missing = sorted({"phi", "xi", "eta"} - set(present))
            raise SchemaError(f"phi, xi and eta come together; missing {', '.join(missing)}")
        n = model.dimension
        return AlmostContactStructure(
            model,
            self.structure_tensor(self.document["phi"], n, "phi"),
            self.structure_tensor(self.document["xi"], n, "xi"),
            self.structure_tensor(self.document["eta"], n, "eta"),
        )

    def submersion(self, source: Union[AlmostContactStructure, ManifoldModel], name: str) -> Optional[SubmersionMap]:
        raw = self.document.get("map")
        if raw is None:
            if "target" in self.document:
                raise SchemaError("target given without a map")
            return None
        jacobian_raw = None
        if isinstance(raw, Mapping):
            self.check_keys(raw, MAP_KEYS, "map")
            components = self.require(raw, "components", "map")
            jacobian_raw = raw.get("jacobian")
        else:
            components = raw
        if not isinstance(components, list) or not components:
            raise SchemaError("map components must be a non-empty list")

        n = source.dimension
        target_raw = self.document.get("target", {})
        if not isinstance(target_raw, Mapping):
            raise SchemaError("target must be an object")
        self.check_keys(target_raw, TARGET_KEYS, "target")
        k = self.dimension(target_raw.get("dimension", len(components)), "target dimension")
        if k != len(components):
            raise ShapeMismatch(f"map has {len(components)} components, target dimension is {k}")
        target = ManifoldModel(
            f"{name}-target", k,
            self.metric(target_raw.get("metric"), k, "target metric"),
            self.domain(target_raw.get("domain"), k, "target domain", DEFAULT_TARGET_HALF_WIDTH),
        )
        mapping = self.compiled(components, (k,), n, "map")
        jacobian = None if jacobian_raw is None else self.compiled(jacobian_raw, (k, n), n, "map jacobian")
        return SubmersionMap(source, target, mapping, jacobian, name)

    def expected(self, raw: Any) -> Dict[str, ExpectedValue]:
        if raw is None:
            return {}
        if not isinstance(raw, Mapping):
            raise SchemaError("expected must be an object")
        self.check_keys(raw, EXPECTED_KEYS, "expected")
        results: Dict[str, ExpectedValue] = {}
        for key, item in raw.items():
            if not isinstance(item, Mapping):
                raise SchemaError(f"expected {key} must be an object with value and provenance")
            self.check_keys(item, ("value", "provenance"), f"expected {key}")
            value = self.require(item, "value", f"expected {key}")
            provenance = self.require(item, "provenance", f"expected {key}")
            if not isinstance(provenance, str) or not provenance:
                raise SchemaError(f"expected {key} needs a non-empty provenance string")
            if key == "theta":
                value = self.number(value, "expected theta")
            elif key.endswith("_dimension"):
                if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                    raise SchemaError(f"expected {key} must be a non-negative integer")
            elif not isinstance(value, str):
                raise SchemaError(f"expected {key} must be a string")
            results[key] = ExpectedValue(value, provenance)
        return results

    def build(self, source: str) -> ScenarioSpec:
        document = self.document
        self.check_keys(document, SCENARIO_KEYS, "scenario")
        name = self.require(document, "name", "scenario")
        if not isinstance(name, str) or not name:
            raise SchemaError("scenario name must be a non-empty string")
        dimension = self.dimension(self.require(document, "dimension", "scenario"), "dimension")
        self.read_constants(document.get("constants"))
        domain = self.domain(document.get("domain"), dimension, "domain")
        model = ManifoldModel(name, dimension, self.metric(document.get("metric"), dimension, "metric"), domain)
        structure = self.structure(model)
        submersion = self.submersion(structure if structure is not None else model, name)
        expected = self.expected(document.get("expected"))
        logger.info("loaded scenario %s from %s (dimension %d)", name, source, dimension)
        return ScenarioSpec(name, dimension, domain, dict(self.constants), expected, model, structure, submersion,
                            list(self.expressions), source)


def build_scenario(document: Mapping[str, Any], source: str = "<memory>") -> ScenarioSpec:
    """Validate a scenario document and build its geometry"""
    return _Builder(document).build(source)


def read_document(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as error:
        raise UnknownScenario(f"no scenario file {path}") from error
    except json.JSONDecodeError as error:
        raise SchemaError(f"{path}: {error}") from error


def load_scenario(reference: str) -> ScenarioSpec:
    """Scenario from a JSON file path or a builtin name such as kim-r5 or mixed-r7(pi/6)"""
    if reference.endswith(SCENARIO_SUFFIX) or os.path.isfile(reference):
        return build_scenario(read_document(reference), reference)
    return build_scenario(ScenarioCatalog.document(reference), f"builtin:{reference}")
