"""
Check records and report documents with deterministic JSON and text renderings
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import VerificationError
from .geometry import DefectReport

INDENT = "  "


@dataclass
class CheckRecord:
    """One named check: worst defect against its tolerance, or the error that stopped it"""

    name: str
    max_defect: Optional[float]
    tolerance: Optional[float]
    passed: bool
    error: Optional[str] = None
    message: Optional[str] = None
    provenance: Optional[str] = None

    @classmethod
    def from_defect(cls, name: str, value: float, tolerance: float, provenance: Optional[str] = None) -> "CheckRecord":
        value = float(value)
        passed = math.isfinite(value) and value <= tolerance
        return cls(name, value, float(tolerance), passed, provenance=provenance)

    @classmethod
    def from_error(cls, name: str, error: VerificationError) -> "CheckRecord":
        return cls(name, None, None, False, error.code, str(error))

    def as_dict(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "name": self.name,
            "max_defect": self.max_defect,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }
        if self.error is not None:
            record["error"] = self.error
            record["message"] = self.message
        if self.provenance is not None:
            record["provenance"] = self.provenance
        return record


class ReportDocument:
    """Records of one command run on one scenario"""

    def __init__(self, scenario: str, command: str, seed: int, samples: int):
        self.scenario = scenario
        self.command = command
        self.seed = seed
        self.samples = samples
        self.checks: List[CheckRecord] = []
        self.results: Dict[str, Any] = {}

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def add_defect(self, name: str, value: float, tolerance: float, provenance: Optional[str] = None) -> CheckRecord:
        return self.add(CheckRecord.from_defect(name, value, tolerance, provenance))

    def add_report(self, report: DefectReport, scale: float = 1.0, prefix: str = "") -> None:
        """One record per check of a defect report, tolerances multiplied by scale"""
        for name, value in report.defects.items():
            self.add_defect(prefix + name, value, report.tolerances[name] * scale)

    def add_error(self, name: str, error: VerificationError) -> CheckRecord:
        return self.add(CheckRecord.from_error(name, error))

    def set_result(self, key: str, value: Any) -> None:
        """Command-specific value merged into the top level of the document"""
        value = _plain(value)
        if isinstance(value, float) and not math.isfinite(value):
            self.add(CheckRecord(f"finite-{key}", None, None, False, "NonFinite", f"{key} is {value}"))
        self.results[key] = value

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def as_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "scenario": self.scenario,
            "command": self.command,
            "seed": self.seed,
            "samples": self.samples,
            "checks": [check.as_dict() for check in self.checks],
            "pass": self.passed,
        }
        for key, value in self.results.items():
            if key not in document:
                document[key] = value
        return document

    def to_json(self) -> str:
        return encode(self.as_dict()) + "\n"

    def to_text(self) -> str:
        lines = [f"scenario {self.scenario}  command {self.command}  seed {self.seed}  samples {self.samples}"]
        width = max((len(check.name) for check in self.checks), default=0)
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            if check.error is not None:
                lines.append(f"  {status}  {check.name:<{width}}  {check.error}: {check.message}")
                continue
            defect = "nan" if check.max_defect is None else f"{check.max_defect:.3e}"
            tolerance = "-" if check.tolerance is None else f"{check.tolerance:.1e}"
            line = f"  {status}  {check.name:<{width}}  max {defect}  tol {tolerance}"
            if check.provenance:
                line += f"  [{check.provenance}]"
            lines.append(line)
        for key, value in self.results.items():
            lines.append(f"{key}: {_text_value(value)}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _plain(value: Any) -> Any:
    """numpy scalars and arrays as Python values"""
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    return value


def _text_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return "[" + ", ".join(_text_value(item) for item in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{key}: {_text_value(item)}" for key, item in value.items()) + "}"
    return str(value)


def format_float(value: float) -> str:
    """17 significant digits; non-finite values become null"""
    if not math.isfinite(value):
        return "null"
    return format(value, ".17g")


def encode(value: Any, level: int = 0) -> str:
    """JSON text with keys in insertion order and floats at full precision"""
    value = _plain(value)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    inner = INDENT * (level + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{json.dumps(key, ensure_ascii=False)}: {encode(item, level + 1)}" for key, item in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + INDENT * level + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        return "[\n" + ",\n".join(inner + encode(item, level + 1) for item in value) + "\n" + INDENT * level + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")
