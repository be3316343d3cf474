import numpy as np
import pytest

from utils.geometry import (
    DistanceMetric,
    KernelSpec,
    ParametricCurve,
    Topology,
    equispaced_periodic,
)

TWO_PI = 2.0 * np.pi


def circle_curve(radius: float = 1.0, n_d: int = 25) -> ParametricCurve:
    nodes = equispaced_periodic(n_d, 0.0, TWO_PI)
    sites = radius * np.column_stack([np.cos(nodes.values), np.sin(nodes.values)])
    return ParametricCurve(topology=Topology.CLOSED, data_nodes=nodes, data_sites=sites)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sbf_spec():
    return KernelSpec(epsilon=1.1, metric=DistanceMetric.SBF_CHORDAL)


@pytest.fixture
def rbf_spec():
    return KernelSpec(epsilon=1.5, metric=DistanceMetric.RBF_ABSOLUTE)


@pytest.fixture
def unit_circle():
    return circle_curve()


@pytest.fixture
def circle_sample():
    return equispaced_periodic(400, 0.0, TWO_PI)
