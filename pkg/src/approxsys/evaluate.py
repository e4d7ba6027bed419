"""Evaluation through approximation systems, and the converse extraction.

`apply` turns a system plus a name of the input point into one certified
output approximation; `eval_name` strings those into an output name.  In the
other direction, `operator_from_system` packages an evaluator as an abstract
name operator, and `system_from_operator` recovers an approximation system
from any such operator by brute certification.

Every value `apply` returns is membership-certified: a quadruple
(f(l), l, b, n) was confirmed in the system with the very index l at which
the name was read, so soundness of the system transfers to the result with
no further trust in the search heuristics.  The search order itself is
layered for practicality:

  phase A  witness ladder: ask the system for a candidate b at input
           precisions l = (n+1)*2^t - 1 and certify it (hit for the
           built-ins: exact-quotient and Taylor-midpoint hints);
  phase B  precision cascade: certify *some* value at coarse precision by a
           bounded sweep of small codes, then walk precision levels
           n_0 < n_1 < ... < n (each roughly doubling), refining a dyadic
           candidate grid around the previous level's certified value;
  phase C  a plain dovetailed sweep of (l, j, s) codes at full precision,
           which guarantees completeness: if any certifiable answer exists,
           enough budget eventually finds it.

Each membership probe costs one budget step, uniformly across phases, which
makes results deterministic and monotone in the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .core import ApproxSystem, Membership, Quadruple, decode_quadruple
from .errors import DimensionError, SearchTimeout
from .names import OrdinaryName
from .numerics import (
    Point,
    Rat,
    cantor_split,
    decode_point,
    decode_rat,
    decode_tuple,
    dist,
    pair3,
)

# Phase A input-precision ladder: l = (n+1)*2^t - 1 for t = 0..12.
_LADDER_RUNGS = 13
# Phase B bootstrap sweep length at the coarsest level.
_BOOT_SWEEP = 4096
# Phase B refinement: candidates base + j*delta for |j| <= 16, six rungs.
_GRID_HALF_WIDTH = 16
_LEVEL_RUNGS = 6


@dataclass(frozen=True)
class EvalResult:
    """One certified approximation: |value - f(point)| < 1/(precision_index+1)."""

    value: Rat
    precision_index: int
    search_steps: int


class _Probes:
    __slots__ = ("used", "budget")

    def __init__(self, budget: int):
        self.used = 0
        self.budget = budget


def _probe(system: ApproxSystem, quad: Quadruple, s: int, probes: _Probes) -> bool:
    if probes.used >= probes.budget:
        raise SearchTimeout(probes.budget)
    probes.used += 1
    return system.membership(quad, s) is Membership.YES


def _level_chain(n: int) -> List[int]:
    chain = [n]
    while chain[-1] > 0:
        chain.append((chain[-1] - 1) // 2)
    chain.reverse()
    return chain


def _center_out(half_width: int):
    yield 0
    for j in range(1, half_width + 1):
        yield j
        yield -j


def apply(system: ApproxSystem, f: OrdinaryName, n: int, budget: int,
          _probes: Optional[_Probes] = None) -> EvalResult:
    """One certified output approximation at precision index n.

    Raises SearchTimeout when `budget` membership probes are spent without a
    certificate; the spent budget is the only failure information available
    (invalid name, point outside the domain, and too-small budget are
    indistinguishable by design).
    """
    if f.dim != system.dim_in:
        raise DimensionError(
            f"{system.name}: name of dimension {f.dim}, system expects {system.dim_in}"
        )
    probes = _probes if _probes is not None else _Probes(budget)

    # phase A: certified witnesses at geometrically finer input precision
    if system.provides_witness:
        for t in range(_LADDER_RUNGS):
            l = (n + 1) * (1 << t) - 1
            a = f.approx(l)
            b = system.witness(a, l, n)
            if b is None:
                continue
            if _probe(system, Quadruple(a, l, b, n), l, probes):
                return EvalResult(b, n, probes.used)

    # phase B: bootstrap at the coarsest level, then cascade upward
    anchor: Optional[Rat] = None
    for level in _level_chain(n):
        found: Optional[Rat] = None
        if anchor is None:
            # level 0: sweep small (l, j, s) codes for any certifiable value
            for g in range(_BOOT_SWEEP):
                l, j, s = pair3(g)
                quad = Quadruple(f.approx(l), l, decode_rat(j), level)
                if _probe(system, quad, s, probes):
                    found = quad.b
                    break
        else:
            # refine the previous level's value on a dyadic grid: spacing
            # <= 1/(4(level+1)) and half-span 16*delta >= 1/(prev+1), so the
            # grid covers the true value whenever the anchor's certificate
            # holds, and some candidate lands within delta of it.
            h = (4 * (level + 1) - 1).bit_length()
            scale = 1 << h
            base = Fraction(math.floor(anchor * scale + Fraction(1, 2)), scale)
            for t in range(_LEVEL_RUNGS):
                l = (level + 1) * (1 << t) - 1
                a = f.approx(l)
                for off in _center_out(_GRID_HALF_WIDTH):
                    cand = base + Fraction(off, scale)
                    if _probe(system, Quadruple(a, l, cand, level), l, probes):
                        found = cand
                        break
                if found is not None:
                    break
        if found is None:
            break  # cascade failed; fall through to the exhaustive phase
        anchor = found
        if level == n:
            return EvalResult(found, n, probes.used)

    # phase C: exhaustive dovetailing at the requested precision
    g = 0
    while True:
        l, j, s = pair3(g)
        quad = Quadruple(f.approx(l), l, decode_rat(j), n)
        if _probe(system, quad, s, probes):
            return EvalResult(quad.b, n, probes.used)
        g += 1


def default_budget_schedule(n: int) -> int:
    return 10_000 * (1 << n)


def make_budget_schedule(base: int) -> Callable[[int], int]:
    def schedule(n: int) -> int:
        return base * (1 << n)

    return schedule


def eval_name(system: ApproxSystem, f: OrdinaryName,
              budget_schedule: Optional[Callable[[int], int]] = None) -> OrdinaryName:
    """The output name: index i carries apply(system, f, i, schedule(i)).

    Memoized by the name machinery, so composing systems re-evaluates
    nothing.  Output points are one-dimensional.
    """
    schedule = budget_schedule if budget_schedule is not None else default_budget_schedule

    def fun(i: int) -> Point:
        return (apply(system, f, i, schedule(i)).value,)

    return OrdinaryName(fun, dim=1)


# --- name operators -----------------------------------------------------------

@dataclass(frozen=True)
class Value:
    """Successful operator run: a rational output approximation."""

    v: Rat


@dataclass(frozen=True)
class OutOfBudget:
    """The step budget ran out; a larger budget may do better."""


@dataclass(frozen=True)
class OracleMiss:
    """The run needed the input name at `index`, beyond the given fragment."""

    index: int


RunOutcome = object  # Value | OutOfBudget | OracleMiss


class NameOperator:
    """Abstract budgeted computation on finite name fragments.

    run(fragment, output_index, steps) must be deterministic, and a Value
    outcome must persist under any fragment extension and any budget
    increase (with the same value).
    """

    def run(self, fragment: Tuple[Point, ...], output_index: int, steps: int):
        raise NotImplementedError


class _FragmentMiss(Exception):
    def __init__(self, index: int):
        super().__init__(index)
        self.index = index


class _FragmentName(OrdinaryName):
    """Name backed by a finite fragment; reads past the end raise."""

    def __init__(self, fragment: Tuple[Point, ...], dim: int):
        def fun(i: int) -> Point:
            if i < len(fragment):
                return fragment[i]
            raise _FragmentMiss(i)

        super().__init__(fun, dim)


_VALUE, _MISS, _TIMEOUT = "value", "miss", "timeout"


class _SystemOperator(NameOperator):
    """Wrap apply(system, -, output_index, steps) as a name operator.

    The memo records, per (fragment, output index), the outcome of the
    deepest run so far together with the probe count at which its event
    fired; replays reproduce exactly what a fresh run with the requested
    budget would return, because the probe sequence is deterministic and
    budget-monotone.
    """

    def __init__(self, system: ApproxSystem):
        self._system = system
        self._memo: Dict[Tuple[Tuple[Point, ...], int], Tuple[str, object, int]] = {}

    def run(self, fragment: Tuple[Point, ...], output_index: int, steps: int):
        fragment = tuple(tuple(c) for c in fragment)
        key = (fragment, output_index)
        rec = self._memo.get(key)
        if rec is not None:
            kind, payload, fired_at = rec
            if kind == _VALUE:
                return Value(payload) if steps >= fired_at else OutOfBudget()
            if kind == _MISS:
                return OracleMiss(payload) if steps >= fired_at else OutOfBudget()
            if steps <= fired_at:  # _TIMEOUT with no more budget than before
                return OutOfBudget()

        probes = _Probes(steps)
        name = _FragmentName(fragment, self._system.dim_in)
        try:
            res = apply(self._system, name, output_index, steps, _probes=probes)
        except _FragmentMiss as miss:
            self._memo[key] = (_MISS, miss.index, probes.used)
            return OracleMiss(miss.index)
        except SearchTimeout:
            self._memo[key] = (_TIMEOUT, None, steps)
            return OutOfBudget()
        self._memo[key] = (_VALUE, res.value, res.search_steps)
        return Value(res.value)


def operator_from_system(system: ApproxSystem) -> NameOperator:
    return _SystemOperator(system)


# --- systems from operators -----------------------------------------------------

# Candidate points per fragment slot: indices 0..16 are dyadic roundings of a
# at geometrically finer grids; larger indices walk the coded point
# enumeration restricted to the slot's admissibility ball.
_DYADIC_CANDIDATES = 17


class _OperatorSystem(ApproxSystem):
    """Approximation facts certified by running a name operator.

    (a, m, b, n) is accepted when some fragment g of length l+1 with
    2l+1 <= m and dist(g(k), a) < 1/(2k+2) for all k makes
    T.run(g, 2n+1, s) = Value(v) with |v - b| < 1/(2n+2).  Such a fragment
    is a name prefix of *every* point within 1/(m+1) of a (the two strict
    halves add to 1/(k+1)), so when T is the evaluator of a sound system the
    accepted quadruple is itself sound: |v - f(point)| < 1/(2n+2) and the
    triangle inequality lands b within 1/(n+1).
    """

    def __init__(self, operator: NameOperator, dim: int):
        super().__init__()
        if dim <= 0:
            raise DimensionError("system dimension must be positive")
        self._T = operator
        self.dim_in = dim
        self.name = "operator-system"
        self._scan_cache: Dict[Tuple[Point, int], Tuple[List[Point], int]] = {}
        self._cand_cache: Dict[Tuple[Point, int, int], Optional[Point]] = {}

    def _candidate(self, a: Point, k: int, c: int) -> Optional[Point]:
        """Admissible candidate for slot k near a, or None; memoized."""
        key = (a, k, c)
        try:
            return self._cand_cache[key]
        except KeyError:
            pass
        radius = Fraction(1, 2 * k + 2)
        if c < _DYADIC_CANDIDATES:
            h = (2 * k + 2).bit_length() + c
            scale = 1 << h
            p = tuple(
                Fraction(math.floor(x * scale + Fraction(1, 2)), scale) for x in a
            )
            result = p if dist(p, a) < radius else None
        else:
            # coded fallback: the (c - 17)-th enumerated point inside the ball
            want = c - _DYADIC_CANDIDATES
            points, next_code = self._scan_cache.get((a, k), ([], 0))
            while len(points) <= want:
                p = decode_point(next_code, self.dim_in)
                next_code += 1
                if dist(p, a) < radius:
                    points.append(p)
            self._scan_cache[(a, k)] = (points, next_code)
            result = points[want]
        self._cand_cache[key] = result
        return result

    def membership(self, quad: Quadruple, budget: int) -> Membership:
        self._check_dim(quad)
        a, m, b, n = quad.a, quad.m, quad.b, quad.n
        top = (m - 1) // 2  # largest fragment end l with 2l+1 <= m
        if top < 0:
            return Membership.NOT_YET
        out_idx = 2 * n + 1
        tol = Fraction(1, 2 * n + 2)
        ramp: List[Point] = []  # shared prefix of the all-defaults attempts
        ramp_dead = False
        for u in range(budget):
            if u <= top:
                if ramp_dead:
                    continue
                p = self._candidate(a, u, 0)
                if p is None:
                    ramp_dead = True  # longer default ramps share the slot
                    continue
                ramp.append(p)
                fragment = tuple(ramp)
            else:
                l, shift_code = cantor_split(u - top - 1)
                if l > top:
                    continue
                shifts = decode_tuple(shift_code, l + 1)
                slots = [self._candidate(a, k, c) for k, c in enumerate(shifts)]
                if any(p is None for p in slots):
                    continue
                fragment = tuple(slots)
            res = self._T.run(fragment, out_idx, budget)
            if isinstance(res, Value) and abs(res.v - b) < tol:
                return Membership.YES
        return Membership.NOT_YET

    def enumerate(self, k: int) -> Optional[Quadruple]:
        quad_code, s = cantor_split(k)
        quad = decode_quadruple(quad_code, self.dim_in)
        return quad if self.membership(quad, s) is Membership.YES else None


def system_from_operator(operator: NameOperator, dim: int) -> ApproxSystem:
    return _OperatorSystem(operator, dim)
