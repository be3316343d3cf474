import numpy as np
import pytest

from utils.core.exceptions import InvalidArgumentError, UnsupportedOrderError
from utils.geometry import (
    Construction,
    NodeKind,
    NodeSet,
    barycentric_build,
    barycentric_derivative_two_stage,
    barycentric_eval,
    barycentric_operator,
    chebyshev,
    equispaced,
    kte,
)


def _nodes(values, interval=(0.0, 1.0)):
    return NodeSet(kind=NodeKind.CHEBYSHEV, interval=interval, values=np.asarray(values, dtype=float))


def test_weights_two_and_three_nodes():
    w2 = barycentric_build(_nodes([0.0, 1.0])).weights
    np.testing.assert_allclose(w2 / w2[1], [-1.0, 1.0])
    w3 = barycentric_build(_nodes([0.0, 0.5, 1.0])).weights
    np.testing.assert_allclose(2.0 * w3 / w3[0], [2.0, -4.0, 2.0])


def test_single_node_is_constant():
    interp = barycentric_build(chebyshev(1, 0.0, 1.0))
    np.testing.assert_allclose(barycentric_eval(interp, [4.2], np.array([0.0, 0.3, 1.0])), 4.2)


def test_eval_reproduces_data_and_constants():
    nodes = chebyshev(9, 0.0, 1.0)
    interp = barycentric_build(nodes)
    data = np.cos(5 * nodes.values)
    for k, lam in enumerate(nodes.values):
        assert barycentric_eval(interp, data, lam) == data[k]
    np.testing.assert_allclose(barycentric_eval(interp, np.full(9, -1.5), np.linspace(0, 1, 13)), -1.5, rtol=1e-13)


def test_linear_midpoint_is_mean():
    interp = barycentric_build(_nodes([0.2, 0.6]))
    assert barycentric_eval(interp, [1.0, 3.0], 0.4) == pytest.approx(2.0)


def test_polynomials_below_degree_n_are_exact(rng):
    nodes = chebyshev(6, -1.0, 1.0)
    interp = barycentric_build(nodes)
    coefficients = rng.standard_normal(6)
    poly = np.polynomial.Polynomial(coefficients)
    points = rng.uniform(-1.0, 1.0, 20)
    np.testing.assert_allclose(barycentric_eval(interp, poly(nodes.values), points), poly(points), atol=1e-12)


def test_two_stage_derivatives_of_simple_data():
    nodes = chebyshev(10, 0.0, 1.0)
    interp = barycentric_build(nodes)
    target = equispaced(25, 0.0, 1.0)
    lam = nodes.values
    np.testing.assert_allclose(barycentric_derivative_two_stage(interp, np.full(10, 2.0), 1, target), 0.0, atol=1e-11)
    np.testing.assert_allclose(barycentric_derivative_two_stage(interp, lam, 1, target), 1.0, atol=1e-11)
    np.testing.assert_allclose(barycentric_derivative_two_stage(interp, lam ** 2, 2, target), 2.0, atol=1e-9)


def test_two_stage_fifth_degree_on_canonical_interval():
    nodes = chebyshev(6, -1.0, 1.0)
    interp = barycentric_build(nodes)
    target = chebyshev(11, -1.0, 1.0)
    data = nodes.values ** 5
    x = target.values
    np.testing.assert_allclose(barycentric_derivative_two_stage(interp, data, 2, target), 20 * x ** 3, atol=1e-9)
    np.testing.assert_allclose(barycentric_derivative_two_stage(interp, data, 4, target), 120 * x, atol=1e-6)


def test_operator_matches_two_stage():
    nodes = kte(14, 0.0, 1.0, 0.85)
    target = equispaced(40, 0.0, 1.0)
    data = np.sin(2 * np.pi * nodes.values)
    interp = barycentric_build(nodes)
    for n in range(1, 5):
        op = barycentric_operator(nodes, target, n)
        assert op.construction is Construction.LAGRANGE_CHEBYSHEV_TWO_STAGE
        assert op.shape == (40, 14)
        np.testing.assert_allclose(op.matrix @ data, barycentric_derivative_two_stage(interp, data, n, target), rtol=1e-12, atol=1e-9)
    identity = barycentric_operator(nodes, nodes, 0)
    assert np.array_equal(identity.matrix, np.eye(14))


def test_weights_stay_finite_on_short_intervals():
    interp = barycentric_build(chebyshev(200, 0.0, 1e-3))
    assert np.all(np.isfinite(interp.weights))
    assert np.max(np.abs(interp.weights)) == pytest.approx(1.0)


def test_invalid_inputs():
    with pytest.raises(InvalidArgumentError):
        barycentric_build(_nodes([0.1, 0.1, 0.4]))
    interp = barycentric_build(chebyshev(5, 0.0, 1.0))
    with pytest.raises(InvalidArgumentError):
        barycentric_eval(interp, np.zeros(4), 0.5)
    with pytest.raises(UnsupportedOrderError):
        barycentric_derivative_two_stage(interp, np.zeros(5), 5, chebyshev(5, 0.0, 1.0))
    with pytest.raises(UnsupportedOrderError):
        barycentric_operator(chebyshev(5, 0.0, 1.0), chebyshev(5, 0.0, 1.0), -1)
