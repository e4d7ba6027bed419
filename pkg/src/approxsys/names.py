"""Names: rational sequences converging to a point at a stated rate.

An *ordinary* name f of xi satisfies dist(f(i), xi) < 1/(i+1) for every i.
A *Cauchy* name h satisfies dist(h(i), h(k)) <= 2^-i for all i < k (so its
limit is within 2^-i of h(i)).  Both kinds memoize: each index is computed
at most once, and concurrent readers observe one consistent value per index.

Nothing here can check that a name is genuine; consumers stay correct on
valid names and merely budget-bounded on invalid ones.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Callable

from .errors import DimensionError
from .numerics import Point, Rat, as_point, dist


class _MemoSeq:
    """Memoized total function N -> Point with per-name locking."""

    def __init__(self, fun: Callable[[int], Point], dim: int):
        self._fun = fun
        self.dim = dim
        self._cache: dict[int, Point] = {}
        self._lock = threading.RLock()

    def approx(self, i: int) -> Point:
        if i < 0:
            raise IndexError("name indices are natural numbers")
        with self._lock:
            value = self._cache.get(i)
            if value is None:
                value = as_point(self._fun(i))
                if len(value) != self.dim:
                    raise DimensionError(
                        f"name of dimension {self.dim} produced a point "
                        f"of dimension {len(value)}"
                    )
                self._cache[i] = value
        return value

    def __call__(self, i: int) -> Point:
        return self.approx(i)


class OrdinaryName(_MemoSeq):
    """Name with the 1/(i+1) rate contract."""


class CauchyName(_MemoSeq):
    """Name with the 2^-i modulus contract."""


def name_of_point(p) -> OrdinaryName:
    """The constant name of an exactly known rational point."""
    point = as_point(p)
    return OrdinaryName(lambda i: point, dim=len(point))


def dyadic_name(p) -> OrdinaryName:
    """Truncation name: coordinates cut to the grid 2^-(i+2).

    floor(x * 2^(i+2)) / 2^(i+2) is within 2^-(i+2) below x, so the point at
    index i is within 2^-(i+2) < 1/(i+1) of p in the max metric.
    """
    point = as_point(p)

    def fun(i: int) -> Point:
        scale = 1 << (i + 2)
        return tuple(Fraction(math.floor(c * scale), scale) for c in point)

    return OrdinaryName(fun, dim=len(point))


def ordinary_to_cauchy(f: OrdinaryName) -> CauchyName:
    """Reindex an ordinary name to the 2^-i modulus.

    Index i reads f at 2^(i+1), giving error < 1/(2^(i+1)+1) < 2^-(i+1); two
    such points at indices i < k are within 2^-(i+1) + 2^-(k+1) <= 2^-i.
    """
    return CauchyName(lambda i: f.approx(1 << (i + 1)), dim=f.dim)


def cauchy_to_ordinary(h: CauchyName) -> OrdinaryName:
    """Reindex a Cauchy name back to the 1/(n+1) rate.

    Index n reads h at the least i with 2^-i + 2^-(i+1) < 1/(n+1), i.e.
    2^(i+1) > 3(n+1); since 3(n+1) is never a power of two, that i is
    bit_length(3(n+1)) - 1.  The limit is within 2^-i of h(i) and the slack
    covers the strict inequality.
    """
    def fun(n: int) -> Point:
        i = (3 * (n + 1)).bit_length() - 1
        return h.approx(i)

    return OrdinaryName(fun, dim=h.dim)


def check_name_consistency(f: OrdinaryName, upto: int):
    """Search indices i < k <= upto for a pair refuting the ordinary contract.

    Any genuine name satisfies dist(f(i), f(k)) < 1/(i+1) + 1/(k+1) for all
    pairs (both points lie in a shared ball).  Returns the first violating
    (i, k) in lexicographic order, or None.  A None result is consistency up
    to the horizon, not validity.
    """
    points = [f.approx(i) for i in range(upto + 1)]
    for i in range(upto + 1):
        for k in range(i + 1, upto + 1):
            bound = Fraction(1, i + 1) + Fraction(1, k + 1)
            if dist(points[i], points[k]) >= bound:
                return (i, k)
    return None
