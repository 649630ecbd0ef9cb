"""
Arithmetic expression language for scenario files
"""

import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Set, Union

import numpy as np

from .constants import DIVISION_GUARD
from .errors import EvalError, ExpressionSyntaxError, ShapeMismatch

# Binding powers
ADDITIVE = 10
MULTIPLICATIVE = 20
PREFIX = 25
POWER = 30
ATOM = 40

FUNCTIONS: Dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "sqrt": math.sqrt,
}
BUILTIN_CONSTANTS: Dict[str, float] = {"pi": math.pi}

PREFIX_EXPECTED = ("(", "-", "identifier", "number")
INFIX_EXPECTED = ("*", "+", "-", "/", "^", "end of input")

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)
_VARIABLE = re.compile(r"^x([1-9]\d*)$")


@dataclass(frozen=True)
class Constant:
    value: float
    name: Optional[str] = None


@dataclass(frozen=True)
class Variable:
    index: int  # 1-based


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" or a function name
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


Node = Union[Constant, Variable, Unary, Binary]


@dataclass(frozen=True)
class Token:
    kind: str  # number, name, op, end
    text: str
    offset: int  # UTF-8 bytes


def _byte_offset(text: str, position: int) -> int:
    return len(text[:position].encode("utf-8"))


def tokenize(text: str) -> Iterator[Token]:
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position >= len(text):
            yield Token("end", "", _byte_offset(text, len(text)))
            return
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            raise ExpressionSyntaxError(text, _byte_offset(text, position), PREFIX_EXPECTED + INFIX_EXPECTED[:-1] + (")",))
        kind = match.lastgroup
        start = match.start(kind)
        yield Token(kind, match.group(kind), _byte_offset(text, start))
        position = match.end()


class Parser:
    """Pratt parser: + − bind 10, * / bind 20, prefix − binds 25, ^ binds 30 to the right"""

    INFIX_POWER = {"+": ADDITIVE, "-": ADDITIVE, "*": MULTIPLICATIVE, "/": MULTIPLICATIVE, "^": POWER}

    def __init__(self, text: str, constants: Optional[Mapping[str, float]] = None):
        self.text = text
        self.constants = dict(BUILTIN_CONSTANTS)
        if constants:
            self.constants.update({name: float(value) for name, value in constants.items()})
        self.tokens = tokenize(text)
        self.token = next(self.tokens)

    def advance(self) -> Token:
        current = self.token
        self.token = next(self.tokens)
        return current

    def fail(self, token: Token, expected) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(self.text, token.offset, expected)

    def binding_power(self, token: Token) -> int:
        if token.kind == "op":
            return self.INFIX_POWER.get(token.text, 0)
        return 0

    def parse(self) -> Node:
        node = self.expression(0)
        if self.token.kind != "end":
            raise self.fail(self.token, INFIX_EXPECTED)
        return node

    def expression(self, rbp: int) -> Node:
        left = self.nud(self.advance())
        while rbp < self.binding_power(self.token):
            left = self.led(self.advance(), left)
        return left

    def nud(self, token: Token) -> Node:
        if token.kind == "number":
            return Constant(float(token.text))
        if token.kind == "name":
            return self.name(token)
        if token.kind == "op" and token.text == "-":
            return Unary("neg", self.expression(PREFIX))
        if token.kind == "op" and token.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        raise self.fail(token, PREFIX_EXPECTED)

    def led(self, token: Token, left: Node) -> Node:
        power = self.INFIX_POWER[token.text]
        if token.text == "^":
            return Binary("^", left, self.expression(power - 1))
        return Binary(token.text, left, self.expression(power))

    def name(self, token: Token) -> Node:
        if token.text in FUNCTIONS:
            self.expect("(")
            argument = self.expression(0)
            self.expect(")")
            return Unary(token.text, argument)
        variable = _VARIABLE.match(token.text)
        if variable:
            return Variable(int(variable.group(1)))
        if token.text in self.constants:
            return Constant(self.constants[token.text], token.text)
        raise self.fail(token, ("constant", "function", "variable"))

    def expect(self, text: str) -> None:
        if self.token.kind != "op" or self.token.text != text:
            raise self.fail(self.token, (text,))
        self.advance()


def parse_expression(text: str, constants: Optional[Mapping[str, float]] = None) -> Node:
    """Parse text into an expression tree; named constants become Constant nodes carrying their name"""
    return Parser(text, constants).parse()


def variables(node: Node) -> Set[int]:
    if isinstance(node, Variable):
        return {node.index}
    if isinstance(node, Unary):
        return variables(node.operand)
    if isinstance(node, Binary):
        return variables(node.left) | variables(node.right)
    return set()


def _precedence(node: Node) -> int:
    if isinstance(node, Binary):
        return Parser.INFIX_POWER[node.op]
    if isinstance(node, Unary):
        return PREFIX if node.op == "neg" else ATOM
    if isinstance(node, Constant) and node.name is None and math.copysign(1.0, node.value) < 0:
        return PREFIX
    return ATOM


def render(node: Node) -> str:
    """Text that parses back to the same tree"""
    if isinstance(node, Constant):
        return node.name if node.name is not None else repr(float(node.value))
    if isinstance(node, Variable):
        return f"x{node.index}"
    if isinstance(node, Unary):
        if node.op != "neg":
            return f"{node.op}({render(node.operand)})"
        inner = render(node.operand)
        return f"-{inner}" if _precedence(node.operand) >= PREFIX else f"-({inner})"
    power = Parser.INFIX_POWER[node.op]
    left, right = render(node.left), render(node.right)
    if _precedence(node.left) < power or (node.op == "^" and _precedence(node.left) <= power):
        left = f"({left})"
    if _precedence(node.right) < power or (node.op != "^" and _precedence(node.right) <= power):
        right = f"({right})"
    return f"{left}{node.op}{right}"


def _divide(a: float, b: float) -> float:
    if abs(b) <= DIVISION_GUARD:
        raise EvalError(f"division by {b:g}")
    return a / b


def _power(a: float, b: float) -> float:
    try:
        result = a ** b
    except (OverflowError, ZeroDivisionError) as error:
        raise EvalError(f"{a:g}^{b:g}: {error}") from error
    if isinstance(result, complex):
        raise EvalError(f"{a:g}^{b:g} is not real")
    return result


_BINARY: Dict[str, Callable[[float, float], float]] = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _divide,
    "^": _power,
}


def _function(name: str) -> Callable[[float], float]:
    fn = FUNCTIONS[name]

    def apply(value: float) -> float:
        try:
            return fn(value)
        except (ValueError, OverflowError) as error:
            raise EvalError(f"{name}({value:g}): {error}") from error

    return apply


def compile_expression(node: Node, dimension: Optional[int] = None) -> Callable[[np.ndarray], float]:
    """Closure evaluating the tree at a coordinate vector"""
    if dimension is not None:
        too_large = [index for index in variables(node) if index > dimension]
        if too_large:
            raise ShapeMismatch(f"x{max(too_large)} used in a {dimension}-dimensional scenario")
    return _build(node)


def _build(node: Node) -> Callable[[np.ndarray], float]:
    if isinstance(node, Constant):
        value = float(node.value)
        return lambda x: value
    if isinstance(node, Variable):
        index = node.index - 1
        return lambda x: float(x[index])
    if isinstance(node, Unary):
        operand = _build(node.operand)
        if node.op == "neg":
            return lambda x: -operand(x)
        fn = _function(node.op)
        return lambda x: fn(operand(x))
    left, right = _build(node.left), _build(node.right)
    op = _BINARY[node.op]
    return lambda x: op(left(x), right(x))


def evaluate(node: Node, x: np.ndarray) -> float:
    return _build(node)(np.asarray(x, dtype=float))


def compile_array(texts, dimension: int, constants: Optional[Mapping[str, float]] = None) -> Callable[[np.ndarray], np.ndarray]:
    """Compile a (nested) list of expression strings into an array-valued function of the same shape"""
    shape = np.shape(np.array(texts, dtype=object))
    flat: List[Callable[[np.ndarray], float]] = [
        compile_expression(parse_expression(str(text), constants), dimension)
        for text in np.array(texts, dtype=object).ravel()
    ]

    def evaluate_all(x: np.ndarray) -> np.ndarray:
        return np.array([fn(x) for fn in flat], dtype=float).reshape(shape)

    return evaluate_all
