"""
Parametric node families for data sites and sample sites.

All generators return an immutable, strictly increasing ``NodeSet``.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial.chebyshev import chebpts1

from ..core.exceptions import InvalidArgumentError


class NodeKind(str, Enum):
    EQUISPACED_PERIODIC = "equispaced_periodic"
    EQUISPACED = "equispaced"
    CHEBYSHEV = "chebyshev"
    KTE = "kte"


@dataclass(frozen=True, eq=False)
class NodeSet:
    """A parametric node family on an interval [a, b]."""

    kind: NodeKind
    interval: Tuple[float, float]
    values: np.ndarray
    alpha: Optional[float] = None

    @property
    def count(self) -> int:
        return int(self.values.size)

    @property
    def spacing(self) -> Optional[float]:
        """Uniform quadrature weight (b - a)/N for equispaced kinds, None otherwise."""
        if self.kind in (NodeKind.EQUISPACED_PERIODIC, NodeKind.EQUISPACED):
            a, b = self.interval
            return (b - a) / self.count
        return None

    @property
    def key(self) -> tuple:
        """Hashable identity used to memoize operators."""
        return (self.kind.value, self.interval, self.alpha, self.values.tobytes())

    def __len__(self) -> int:
        return self.count


def _validate(n: int, a: float, b: float, minimum: int = 1) -> None:
    if int(n) != n or n < minimum:
        raise InvalidArgumentError(f"Node count must be an integer >= {minimum}, got {n}")
    if not a < b:
        raise InvalidArgumentError(f"Interval must satisfy a < b, got ({a}, {b})")


def _freeze(kind: NodeKind, a: float, b: float, values: np.ndarray,
            alpha: Optional[float] = None) -> NodeSet:
    values = np.ascontiguousarray(values, dtype=float)
    values.setflags(write=False)
    return NodeSet(kind=kind, interval=(float(a), float(b)), values=values, alpha=alpha)


def _to_interval(x: np.ndarray, a: float, b: float) -> np.ndarray:
    return a + (b - a) * (x + 1.0) / 2.0


def equispaced_periodic(n: int, a: float, b: float) -> NodeSet:
    """Nodes a + (k-1)(b-a)/N, k = 1..N; the period point b is excluded."""
    _validate(n, a, b)
    values = a + np.arange(n) * ((b - a) / n)
    return _freeze(NodeKind.EQUISPACED_PERIODIC, a, b, values)


def equispaced(n: int, a: float, b: float) -> NodeSet:
    """
    Midpoint-style equispaced nodes a + (j - 1/2)(b-a)/N.

    Every node carries the same quadrature weight (b-a)/N, which is what the
    Stokeslet sums over open curves assume.
    """
    _validate(n, a, b, minimum=2)
    values = a + (np.arange(n) + 0.5) * ((b - a) / n)
    return _freeze(NodeKind.EQUISPACED, a, b, values)


def chebyshev(n: int, a: float, b: float) -> NodeSet:
    """Chebyshev points of the first kind mapped to [a, b], ascending, endpoints excluded."""
    _validate(n, a, b)
    # chebpts1 uses the sine form, so the middle node is exactly zero for odd n
    x = chebpts1(n)
    return _freeze(NodeKind.CHEBYSHEV, a, b, _to_interval(x, a, b))


def kte(n: int, a: float, b: float, alpha: float) -> NodeSet:
    """
    Kosloff-Tal-Ezer mapped Chebyshev nodes.

    The map x -> arcsin(alpha x)/arcsin(alpha) is applied on the canonical
    interval [-1, 1] before the affine map to [a, b]; alpha = 1 gives
    equispaced nodes and alpha -> 0 recovers the Chebyshev nodes.
    """
    _validate(n, a, b)
    if not 0.0 < alpha <= 1.0:
        raise InvalidArgumentError(f"KTE alpha must lie in (0, 1], got {alpha}")
    x = np.arcsin(alpha * chebpts1(n)) / np.arcsin(alpha)
    return _freeze(NodeKind.KTE, a, b, _to_interval(x, a, b), alpha=float(alpha))


def make_nodes(kind: NodeKind | str, n: int, interval: Tuple[float, float],
               alpha: Optional[float] = None) -> NodeSet:
    """Dispatch on a node kind name (used by configs and the CLI)."""
    kind = NodeKind(kind)
    a, b = interval
    if kind is NodeKind.EQUISPACED_PERIODIC:
        return equispaced_periodic(n, a, b)
    if kind is NodeKind.EQUISPACED:
        return equispaced(n, a, b)
    if kind is NodeKind.CHEBYSHEV:
        return chebyshev(n, a, b)
    if alpha is None:
        raise InvalidArgumentError("KTE nodes require alpha")
    return kte(n, a, b, alpha)
