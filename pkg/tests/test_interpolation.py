import warnings

import numpy as np
import pytest

from utils.core.exceptions import (
    IllConditionedWarning,
    InvalidArgumentError,
    SingularSystemError,
    UnsupportedOrderError,
)
from utils.geometry import (
    Construction,
    DistanceMetric,
    InterpolationMethod,
    KernelFamily,
    KernelSpec,
    NodeKind,
    NodeSet,
    OperatorBank,
    apply,
    build_interp_matrix,
    build_operator,
    chebyshev,
    distance,
    equispaced,
    equispaced_periodic,
    kernel_lambda_derivative,
    kernel_value,
)
from utils.geometry.interpolation import evaluate_expansion, kernel_matrix, solve_coefficients

SBF = DistanceMetric.SBF_CHORDAL
RBF = DistanceMetric.RBF_ABSOLUTE


def test_distance_examples():
    assert distance(KernelSpec(metric=SBF), np.pi, 0.0) == pytest.approx(2.0)
    assert distance(KernelSpec(metric=SBF), 1.3, 1.3) == 0.0
    assert distance(KernelSpec(metric=RBF), 0.3, 0.7) == pytest.approx(0.4)
    # the chordal distance only sees lambda modulo 2 pi
    assert distance(KernelSpec(metric=SBF), 2 * np.pi + 0.5, 0.5) == pytest.approx(0.0, abs=1e-15)


def test_kernel_value_examples():
    assert kernel_value(KernelSpec(epsilon=3.7), 0.0) == 1.0
    assert kernel_value(KernelSpec(epsilon=1.0), np.sqrt(3.0)) == pytest.approx(2.0)
    assert kernel_value(KernelSpec(family=KernelFamily.LINEAR_SPLINE), 0.4) == pytest.approx(0.4)
    with pytest.raises(InvalidArgumentError):
        kernel_value(KernelSpec(), -0.1)


def test_kernel_spec_rejects_nonpositive_epsilon():
    with pytest.raises(ValueError):
        KernelSpec(epsilon=0.0)


@pytest.mark.parametrize("metric", [SBF, RBF])
@pytest.mark.parametrize("n", [1, 3])
def test_odd_derivatives_vanish_at_center(metric, n):
    spec = KernelSpec(epsilon=2.0, metric=metric)
    assert kernel_lambda_derivative(spec, n, 0.8, 0.8) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("metric", [SBF, RBF])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kernel_derivatives_match_finite_differences(metric, n):
    spec = KernelSpec(epsilon=1.1, metric=metric)
    lam = np.array([-0.7, 0.05, 0.9, 1.6, 2.4])
    center = 0.2
    h = 1e-5

    def lower(x):
        if n == 1:
            return kernel_value(spec, distance(spec, x, center))
        return kernel_lambda_derivative(spec, n - 1, x, center)

    fd = (lower(lam + h) - lower(lam - h)) / (2 * h)
    np.testing.assert_allclose(kernel_lambda_derivative(spec, n, lam, center), fd, rtol=1e-6, atol=1e-7)


def test_second_derivative_sbf_example():
    spec = KernelSpec(epsilon=1.0, metric=SBF)
    h = 1e-4
    phi = lambda x: kernel_value(spec, distance(spec, x, 0.0))
    x = np.pi / 2
    fd = (phi(x + h) - 2 * phi(x) + phi(x - h)) / h ** 2
    assert kernel_lambda_derivative(spec, 2, x, 0.0) == pytest.approx(fd, rel=1e-5)


@pytest.mark.parametrize("n", [0, 5, 2.5])
def test_unsupported_derivative_orders(n):
    with pytest.raises(UnsupportedOrderError):
        kernel_lambda_derivative(KernelSpec(), n, 0.1, 0.0)


def test_interp_matrix_is_symmetric_with_unit_diagonal(sbf_spec):
    nodes = chebyshev(15, 0.0, 2.0)
    A = build_interp_matrix(sbf_spec, nodes)
    assert np.array_equal(A, A.T)
    np.testing.assert_allclose(np.diag(A), 1.0)
    single = build_interp_matrix(sbf_spec, chebyshev(1, 0.0, 1.0))
    assert single.tolist() == [[1.0]]


def test_sbf_matrix_on_periodic_nodes_is_circulant(sbf_spec):
    A = build_interp_matrix(sbf_spec, equispaced_periodic(12, 0.0, 2 * np.pi))
    for k in range(1, 12):
        np.testing.assert_allclose(A[k], np.roll(A[0], k), atol=1e-14)


def test_duplicate_nodes_are_singular(rbf_spec, sbf_spec):
    repeated = NodeSet(kind=NodeKind.CHEBYSHEV, interval=(0.0, 1.0), values=np.array([0.1, 0.1, 0.5]))
    with pytest.raises(SingularSystemError):
        build_interp_matrix(rbf_spec, repeated)
    wrapped = NodeSet(kind=NodeKind.CHEBYSHEV, interval=(0.0, 7.0), values=np.array([0.0, 1.0, 2 * np.pi]))
    with pytest.raises(SingularSystemError):
        build_interp_matrix(sbf_spec, wrapped)
    # the same nodes are fine for the RBF metric
    build_interp_matrix(rbf_spec, wrapped)


@pytest.mark.parametrize("metric", [SBF, RBF])
def test_evaluation_operator_at_data_nodes_is_identity(metric):
    nodes = chebyshev(20, 0.0, 1.0)
    op = build_operator(KernelSpec(epsilon=3.0, metric=metric), nodes, nodes, 0)
    np.testing.assert_allclose(op.matrix, np.eye(20), atol=1e-10)
    assert op.shape == (20, 20)
    assert op.construction is Construction.RBF_FAMILY
    assert op.condition_estimate > 1.0


def test_operator_matches_coefficient_path(rng):
    spec = KernelSpec(epsilon=7.0, metric=RBF)
    nodes = chebyshev(8, 0.0, 1.0)
    target = equispaced(30, 0.0, 1.0)
    for _ in range(5):
        data = rng.standard_normal(8)
        coefficients = solve_coefficients(spec, nodes, data)
        for n in range(5):
            expected = evaluate_expansion(spec, nodes, coefficients, target.values, n)
            result = apply(build_operator(spec, nodes, target, n), data)
            np.testing.assert_allclose(result, expected, rtol=1e-8, atol=1e-9 * np.max(np.abs(expected)))


def test_sbf_reproduces_sine_on_circle():
    spec = KernelSpec(epsilon=1.1, metric=SBF)
    nodes = equispaced_periodic(25, 0.0, 2 * np.pi)
    target = equispaced_periodic(100, 0.0, 2 * np.pi)
    op = build_operator(spec, nodes, target, 0)
    assert np.max(np.abs(apply(op, np.sin(nodes.values)) - np.sin(target.values))) < 1e-6


def test_derivative_of_constant_is_small():
    spec = KernelSpec(epsilon=1.1, metric=SBF)
    nodes = equispaced_periodic(25, 0.0, 2 * np.pi)
    op = build_operator(spec, nodes, equispaced_periodic(100, 0.0, 2 * np.pi), 1)
    assert np.max(np.abs(apply(op, np.full(25, 3.0)))) < 1e-8


def test_sbf_operator_commutes_with_shifts():
    spec = KernelSpec(epsilon=1.1, metric=SBF)
    nodes = equispaced_periodic(8, 0.0, 2 * np.pi)
    target = equispaced_periodic(16, 0.0, 2 * np.pi)
    data = np.exp(np.cos(nodes.values))
    op = build_operator(spec, nodes, target, 1)
    shifted = apply(op, np.roll(data, -1))
    np.testing.assert_allclose(shifted, np.roll(apply(op, data), -2), atol=1e-9)


def test_derivative_operator_is_consistent_with_evaluation(rng):
    spec = KernelSpec(epsilon=7.0, metric=RBF)
    nodes = chebyshev(10, 0.0, 1.0)
    data = np.sin(3 * nodes.values)
    points = np.sort(rng.uniform(0.2, 0.8, 10))
    target = NodeSet(kind=NodeKind.CHEBYSHEV, interval=(0.0, 1.0), values=points)
    first = apply(build_operator(spec, nodes, target, 1), data)
    errors = []
    for h in (1e-3, 1e-4):
        plus = NodeSet(kind=NodeKind.CHEBYSHEV, interval=(0.0, 1.0), values=points + h)
        minus = NodeSet(kind=NodeKind.CHEBYSHEV, interval=(0.0, 1.0), values=points - h)
        fd = (apply(build_operator(spec, nodes, plus), data) - apply(build_operator(spec, nodes, minus), data)) / (2 * h)
        errors.append(np.max(np.abs(fd - first)))
    assert errors[1] < errors[0]
    assert errors[1] < 1e-6


def test_apply_linearity_and_shape_check(rng):
    nodes = chebyshev(10, 0.0, 1.0)
    op = build_operator(KernelSpec(epsilon=7.0, metric=RBF), nodes, equispaced(25, 0.0, 1.0), 2)
    u, v = rng.standard_normal(10), rng.standard_normal(10)
    np.testing.assert_allclose(apply(op, u + v), apply(op, u) + apply(op, v), atol=1e-9)
    assert np.array_equal(apply(op, np.zeros(10)), np.zeros(25))
    assert apply(op, np.zeros((10, 2))).shape == (25, 2)
    with pytest.raises(InvalidArgumentError):
        apply(op, np.zeros(9))


def test_operator_matrix_is_read_only(rbf_spec):
    nodes = chebyshev(6, 0.0, 1.0)
    op = build_operator(rbf_spec, nodes, nodes)
    with pytest.raises(ValueError):
        op.matrix[0, 0] = 2.0


def test_build_operator_rejects_order_five(rbf_spec):
    nodes = chebyshev(6, 0.0, 1.0)
    with pytest.raises(UnsupportedOrderError):
        build_operator(rbf_spec, nodes, nodes, 5)


def test_ill_conditioned_system_warns(monkeypatch):
    monkeypatch.setenv("RBFSTOKES_INTERPOLATION_CONDITION_THRESHOLD", "10")
    nodes = chebyshev(12, 0.0, 1.0)
    with pytest.warns(IllConditionedWarning):
        op = build_operator(KernelSpec(epsilon=1.0, metric=RBF), nodes, nodes)
    assert op.warnings
    assert op.condition_estimate > 10


def test_quiet_operators_keep_the_condition_note(monkeypatch):
    monkeypatch.setenv("RBFSTOKES_INTERPOLATION_CONDITION_THRESHOLD", "10")
    nodes = chebyshev(12, 0.0, 1.0)
    spec = KernelSpec(epsilon=1.0, metric=RBF)
    with warnings.catch_warnings():
        warnings.simplefilter("error", IllConditionedWarning)
        op = build_operator(spec, nodes, nodes, warn=False)
        banked = OperatorBank(nodes, spec, warn=False).get(nodes)
    assert op.warnings and banked.warnings
    assert op.condition_estimate > 10


def test_well_conditioned_system_is_quiet():
    nodes = chebyshev(8, 0.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", IllConditionedWarning)
        op = build_operator(KernelSpec(epsilon=7.0, metric=RBF), nodes, nodes)
    assert op.warnings == ()


def test_kernel_matrix_shape(rbf_spec):
    assert kernel_matrix(rbf_spec, np.zeros(3), np.zeros(5), 2).shape == (3, 5)


def test_operator_bank_memoizes(rbf_spec):
    nodes = chebyshev(10, 0.0, 1.0)
    target = equispaced(40, 0.0, 1.0)
    bank = OperatorBank(nodes, rbf_spec)
    first = bank.get(target, 1)
    assert bank.get(target, 1) is first
    bank.get(target, 2)
    bank.get(equispaced(40, 0.0, 1.0), 2)
    assert len(bank) == 2


def test_operator_bank_methods(rbf_spec):
    nodes = chebyshev(10, 0.0, 1.0)
    lagrange = OperatorBank(nodes, method=InterpolationMethod.LAGRANGE_CHEBYSHEV)
    assert lagrange.get(nodes, 0).construction is Construction.LAGRANGE_CHEBYSHEV_TWO_STAGE
    with pytest.raises(InvalidArgumentError):
        OperatorBank(nodes)
