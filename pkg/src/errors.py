"""
Exception hierarchy for geometry checks, scenarios and the command line
"""

from typing import Iterable, Tuple


class VerificationError(Exception):
    """Base class for every error raised by the engine"""

    @property
    def code(self) -> str:
        """Short name used in report records"""
        return type(self).__name__


# Geometry errors: raised by numerics, reported as failed records by commands

class GeometryError(VerificationError):
    """Numerical or geometric precondition failure"""


class PointOutOfDomain(GeometryError):
    pass


class StencilOutOfDomain(GeometryError):
    pass


class NonPositiveDefinite(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


class DegeneratePlane(GeometryError):
    pass


class NotUnit(GeometryError):
    pass


class NotOrthogonalToXi(GeometryError):
    pass


class StructureInvalid(GeometryError):
    pass


class NotVertical(GeometryError):
    pass


class NotHorizontal(GeometryError):
    pass


class XiDirection(GeometryError):
    pass


class ZeroPhi(GeometryError):
    pass


class NotSlant(GeometryError):
    pass


class NotProperSlant(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class WrongDimensions(GeometryError):
    pass


class XiNotVertical(GeometryError):
    pass


class XiNotHorizontal(GeometryError):
    pass


class WrongXiPosition(GeometryError):
    pass


class NotAntiInvariant(GeometryError):
    pass


# Scenario errors: raised while loading, mapped to exit code 2

class ScenarioError(VerificationError):
    """Scenario file or builtin could not be turned into geometry"""


class ExpressionSyntaxError(ScenarioError):
    """Parse failure with the byte offset of the offending token"""

    def __init__(self, text: str, offset: int, expected: Iterable[str]):
        self.text = text
        self.offset = offset
        self.expected: Tuple[str, ...] = tuple(sorted(expected))
        super().__init__(
            f"syntax error at offset {offset} in {text!r}: expected one of {', '.join(self.expected)}"
        )


class EvalError(ScenarioError):
    pass


class ShapeMismatch(ScenarioError):
    pass


class SchemaError(ScenarioError):
    pass


class UnknownScenario(ScenarioError):
    pass


class UsageError(VerificationError):
    """Bad command line"""
