import numpy as np
import pytest

from src.errors import NonPositiveDefinite, PointOutOfDomain, RankDeficient, ShapeMismatch, StencilOutOfDomain
from src.geometry import (
    DefectReport,
    DiffScheme,
    DomainBox,
    ManifoldModel,
    MetricField,
    ScalarField,
    complement_basis,
    gram_schmidt,
    metric_eval,
    nullspace,
    numeric_partial,
    numerical_rank,
    orthogonal_complement,
    orthonormal_span,
    orthonormalize,
    partials,
    projector,
    relative_complement,
)
from src.sampling import make_rng, sample_points


def test_domain_box_contains_and_shrinks():
    box = DomainBox.cube(2)
    assert box.contains(np.array([0.5, -0.5]))
    assert not box.contains(np.array([0.95, 0.0]))
    assert not box.contains(np.array([0.89, 0.0]), margin=0.02)
    inner = box.shrink(0.25)
    assert inner.as_pairs() == [[pytest.approx(-0.45), pytest.approx(0.45)]] * 2


def test_domain_box_rejects_empty_interval():
    with pytest.raises(ShapeMismatch):
        DomainBox.from_pairs([[0.0, 1.0], [2.0, 2.0]])
    with pytest.raises(ShapeMismatch):
        DomainBox.from_pairs([[0.0, 1.0, 2.0]])


def test_diff_scheme_validation():
    with pytest.raises(ValueError):
        DiffScheme(step=0.0)
    with pytest.raises(ValueError):
        DiffScheme(order=3)
    assert DiffScheme(1e-3, 4).reach == pytest.approx(2e-3)


def test_partials_leading_axis_is_the_derivative_index():
    result = partials(lambda x: np.array([x[0] ** 2, x[0] * x[1]]), np.array([1.0, 2.0]))
    np.testing.assert_allclose(result, [[2.0, 2.0], [0.0, 1.0]], atol=1e-8)


def test_partials_near_the_boundary():
    with pytest.raises(StencilOutOfDomain):
        partials(lambda x: x, np.array([0.9 - 1e-6, 0.0]), domain=DomainBox.cube(2))


def test_metric_eval_checks_definiteness_and_domain():
    indefinite = MetricField(lambda x: np.diag([1.0, -1.0]), 2)
    with pytest.raises(NonPositiveDefinite):
        metric_eval(indefinite, np.zeros(2))
    with pytest.raises(PointOutOfDomain):
        metric_eval(MetricField.euclidean(2), np.array([2.0, 0.0]), DomainBox.cube(2))


def test_model_rejects_wrong_metric_dimension():
    with pytest.raises(ShapeMismatch):
        ManifoldModel("bad", 3, MetricField.euclidean(2))


def test_nullspace_and_rank():
    M = np.array([[1.0, 1.0, 0.0]])
    kernel = nullspace(M)
    assert len(kernel) == 2
    for v in kernel:
        assert M @ v == pytest.approx(np.zeros(1), abs=1e-12)
    assert numerical_rank(np.array([[1.0, 2.0], [2.0, 4.0]])) == 1
    assert numerical_rank(np.zeros((2, 2))) == 0


def test_orthonormalize_under_a_metric():
    G = np.diag([1.0, 4.0])
    basis = orthonormalize(G, [np.array([1.0, 0.0]), np.array([1.0, 1.0])])
    np.testing.assert_allclose(basis[0], [1.0, 0.0])
    np.testing.assert_allclose(basis[1], [0.0, 0.5])


def test_orthonormalize_dependent_vectors():
    with pytest.raises(RankDeficient):
        orthonormalize(np.eye(2), [np.array([1.0, 1.0]), np.array([2.0, 2.0])])
    with pytest.raises(RankDeficient):
        orthonormalize(np.eye(2), [np.zeros(2)])


def test_orthonormal_span_drops_dependent_vectors():
    G = np.diag([2.0, 1.0, 3.0])
    span = orthonormal_span(G, [np.array([1.0, 0.0, 0.0]), np.array([2.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])])
    assert len(span) == 2
    gram = np.array([[u @ G @ v for v in span] for u in span])
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-12)


def test_complement_is_orthogonal():
    G = np.array([[2.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]])
    basis = orthonormalize(G, [np.array([1.0, 0.0, 0.0])])
    complement = complement_basis(G, basis)
    assert len(complement) == 2
    for v in complement:
        assert basis[0] @ G @ v == pytest.approx(0.0, abs=1e-12)
    P = projector(G, basis) + projector(G, complement)
    np.testing.assert_allclose(P, np.eye(3), atol=1e-12)


def test_relative_complement():
    ambient = list(np.eye(3))
    rest = relative_complement(np.eye(3), ambient, [np.array([1.0, 0.0, 0.0])])
    assert len(rest) == 2
    for v in rest:
        assert v[0] == pytest.approx(0.0, abs=1e-12)


def test_projector_is_idempotent():
    G = np.diag([1.0, 2.0, 3.0])
    basis = orthonormalize(G, [np.array([1.0, 1.0, 0.0])])
    P = projector(G, basis)
    np.testing.assert_allclose(P @ P, P, atol=1e-12)


def test_defect_report_verdicts():
    report = DefectReport({"a": 1e-9, "b": 1.0}, {"a": 1e-8, "b": 1e-8}, samples=3)
    assert report.verdicts == {"a": True, "b": False}
    assert not report.passed
    assert report.failures() == {"b": 1.0}


def test_sampling_is_reproducible():
    box = DomainBox.cube(3)
    first = sample_points(box, 4, make_rng(7))
    second = sample_points(box, 4, make_rng(7))
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a, b)
        assert box.shrink(0.01).contains(a)
    other = sample_points(box, 4, make_rng(8))
    assert not np.array_equal(first[0], other[0])


SKEW = MetricField(lambda x: np.array([[2.0 + x[0] ** 2, 0.5, 0.0], [0.5, 1.0, x[1]], [0.0, x[1], 3.0]]), 3, "skew")


def test_gram_schmidt_is_orthonormal_under_the_metric():
    x = np.array([0.4, -0.3, 0.2])
    basis = gram_schmidt(SKEW, x, [np.array([1.0, 1.0, 0.0]), np.array([0.0, 1.0, 1.0]), np.array([1.0, 0.0, 1.0])])
    G = SKEW(x)
    gram = np.array([[u @ G @ v for v in basis] for u in basis])
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-10)


def test_gram_schmidt_rejects_zero_vector():
    with pytest.raises(RankDeficient):
        gram_schmidt(SKEW, np.zeros(3), [np.array([1.0, 0.0, 0.0]), np.zeros(3)])


def test_orthogonal_complement_under_the_metric():
    x = np.array([0.1, 0.6, -0.2])
    given = [np.array([1.0, 2.0, 0.0])]
    complement = orthogonal_complement(SKEW, x, given)
    G = SKEW(x)
    assert len(complement) == 2
    for u in complement:
        assert given[0] @ G @ u == pytest.approx(0.0, abs=1e-12)


def test_numeric_partial_orders_agree():
    f = ScalarField(lambda x: np.sin(x[0]) * np.exp(x[1]), 2, "wave")
    x = np.array([0.3, -0.2])
    step = 1e-3
    second = numeric_partial(f, x, 0, DiffScheme(step, 2))
    fourth = numeric_partial(f, x, 0, DiffScheme(step, 4))
    assert abs(second - fourth) <= 10.0 * step ** 2
    assert fourth == pytest.approx(np.cos(0.3) * np.exp(-0.2), abs=1e-10)


def test_orthonormal_span_drops_rounding_noise():
    noise = np.array([0.0, -6.16e-33, 0.0, 6.16e-33, 0.0])
    assert orthonormal_span(np.eye(5), [noise]) == []
    basis = orthonormal_span(np.eye(5), [np.array([1.0, 0.0, 0.0, 0.0, 0.0]), noise])
    assert len(basis) == 1
