import numpy as np
import pytest

from src.catalog import ScenarioCatalog
from src.errors import EvalError, ExpressionSyntaxError, ShapeMismatch
from src.expression import (
    Binary,
    Constant,
    Unary,
    Variable,
    compile_array,
    compile_expression,
    evaluate,
    parse_expression,
    render,
    variables,
)
from src.scenario import load_scenario


def test_function_of_a_sum():
    assert parse_expression("sin(x1+x3)") == Unary("sin", Binary("+", Variable(1), Variable(3)))


def test_named_constant_keeps_its_name():
    node = parse_expression("1+t^2", {"t": 0.5})
    assert node == Binary("+", Constant(1.0), Binary("^", Constant(0.5, "t"), Constant(2.0)))


def test_syntax_error_carries_offset():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("x1+*x2")
    assert info.value.offset == 3
    assert "(" in info.value.expected


def test_unclosed_parenthesis():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("sin(x1")
    assert info.value.offset == 6


@pytest.mark.parametrize("text, expected", [
    ("2^3^2", 512.0),
    ("-2^2", -4.0),
    ("2*3+4", 10.0),
    ("8/2/2", 2.0),
    ("1-2-3", -4.0),
    ("-(1+2)*3", -9.0),
    ("  2 *  3 ", 6.0),
    ("sqrt(16)+exp(0)", 5.0),
    ("cos(pi)", -1.0),
])
def test_precedence_and_associativity(text, expected):
    assert evaluate(parse_expression(text), np.zeros(0)) == pytest.approx(expected)


def test_variables_and_evaluation():
    node = parse_expression("x1*x2 - x3/2")
    assert variables(node) == {1, 2, 3}
    assert evaluate(node, np.array([2.0, 3.0, 4.0])) == pytest.approx(4.0)


def test_division_guard():
    with pytest.raises(EvalError):
        evaluate(parse_expression("1/x1"), np.array([0.0]))


def test_domain_errors_become_eval_errors():
    with pytest.raises(EvalError):
        evaluate(parse_expression("sqrt(x1)"), np.array([-1.0]))


def test_variable_beyond_dimension():
    with pytest.raises(ShapeMismatch):
        compile_expression(parse_expression("x4"), 3)


def test_unknown_name():
    with pytest.raises(ExpressionSyntaxError):
        parse_expression("y1+1")


def test_compile_array_keeps_shape():
    fn = compile_array([["x1", "0"], ["0", "x2^2"]], 2)
    np.testing.assert_allclose(fn(np.array([3.0, 2.0])), [[3.0, 0.0], [0.0, 4.0]])


@pytest.mark.parametrize("text", ["-x1^2", "(x1-x2)/sqrt(2)", "2^(-x1)", "-(x1*x2)", "(-4/c)/(1-x1^2-x2^2)^2",
                                  "1-(x1-x2)", "x1/(x2*x3)", "(x1^x2)^x3"])
def test_render_round_trip(text):
    node = parse_expression(text, {"c": -1.0})
    assert parse_expression(render(node), {"c": -1.0}) == node


@pytest.mark.parametrize("name", ScenarioCatalog.names())
def test_builtin_expressions_round_trip(name):
    spec = load_scenario(name)
    for text in spec.expressions:
        node = parse_expression(text, spec.constants)
        assert parse_expression(render(node), spec.constants) == node


def test_syntax_error_offset_counts_utf8_bytes():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("x1\u00a0+*x2")
    assert info.value.offset == 5
