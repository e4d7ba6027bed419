"""Built-in approximation systems: division, cosine, and semialgebraic sets.

Each system is a decidable quadruple predicate wrapped by dovetailing; the
constructors return shared singletons so enumeration caches are reused.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

from .core import DecidableSystem, Quadruple
from .errors import FormatError
from .numerics import Point, Rat, rat_div

# --- division ----------------------------------------------------------------

def _division_decide(q: Quadruple) -> bool:
    # b must be the exact quotient, and the input radius small enough that
    # every point of the ball keeps the quotient within 1/(n+1):
    # sup |x1/x2 - b| over the ball is (1/(m+1)) * (|b| + 1/(m+1) + ...); the
    # closed form below is the integer test that bounds it strictly.
    a1, a2 = q.a
    if a2 * q.b != a1:
        return False
    return (q.m + 1) * abs(a2) >= 1 + (q.n + 1) * (abs(q.b) + 1)


def _division_witness(a: Point, m: int, n: int) -> Optional[Rat]:
    a1, a2 = a
    if a2 == 0:
        return None
    return a1 / a2


def _division_fast_scan(lo: int, hi: int):
    """Bulk form of enumerate for the division system.

    Identical verdicts to decode_quadruple + _division_decide, but with the
    pairing inverses inlined on machine integers; Fractions are built only
    for accepted codes.  The cross-multiplied tests are representation-free,
    so the non-reduced (r - s, t + 1) readings of the codes are safe.
    """
    isqrt = math.isqrt
    out = []
    for k in range(lo, hi):
        t = (isqrt(8 * k + 1) - 1) // 2
        rest = k - t * (t + 1) // 2
        i = t - rest
        t = (isqrt(8 * rest + 1) - 1) // 2
        rest2 = rest - t * (t + 1) // 2
        m = t - rest2
        t = (isqrt(8 * rest2 + 1) - 1) // 2
        n = rest2 - t * (t + 1) // 2
        j = t - n

        t = (isqrt(8 * i + 1) - 1) // 2
        c2 = i - t * (t + 1) // 2
        c1 = t - c2

        t = (isqrt(8 * c2 + 1) - 1) // 2
        t2 = c2 - t * (t + 1) // 2
        w = t - t2
        t = (isqrt(8 * w + 1) - 1) // 2
        s2 = w - t * (t + 1) // 2
        p2 = t - s2 - s2
        if p2 == 0:
            continue
        q2 = t2 + 1

        t = (isqrt(8 * c1 + 1) - 1) // 2
        t1 = c1 - t * (t + 1) // 2
        w = t - t1
        t = (isqrt(8 * w + 1) - 1) // 2
        s1 = w - t * (t + 1) // 2
        p1 = t - s1 - s1
        q1 = t1 + 1

        t = (isqrt(8 * j + 1) - 1) // 2
        tb = j - t * (t + 1) // 2
        w = t - tb
        t = (isqrt(8 * w + 1) - 1) // 2
        sb = w - t * (t + 1) // 2
        pb = t - sb - sb
        qb = tb + 1

        if p2 * pb * q1 != p1 * q2 * qb:
            continue
        if (m + 1) * abs(p2) * qb < q2 * qb + (n + 1) * (abs(pb) + qb) * q2:
            continue
        quad = Quadruple(
            (Fraction(p1, q1), Fraction(p2, q2)), m, Fraction(pb, qb), n
        )
        out.append((k, quad))
    return out


@lru_cache(maxsize=None)
def division_system() -> DecidableSystem:
    """Approximation system for (x1, x2) |-> x1/x2 on x2 != 0."""
    return DecidableSystem(
        _division_decide,
        dim=2,
        witness=_division_witness,
        name="division",
        fast_scan=_division_fast_scan,
    )


# --- maximal division ---------------------------------------------------------

def _corners(a: Point, m: int):
    a1, a2 = a
    M = m + 1
    return [(M * a1 + e1) / (M * a2 + e2) for e1 in (1, -1) for e2 in (1, -1)]


def _maximal_division_decide(q: Quadruple) -> bool:
    # Accept iff the quotient's range over the *closed* ball of radius
    # 1/(m+1) around a sits inside the closed interval of radius 1/(n+1)
    # around b.  The range of (a1 + s)/(a2 + t) over |s|,|t| <= 1/(m+1) is
    # spanned by the four corner values once the denominator is bounded away
    # from zero, i.e. (m+1)|a2| > 1.
    a1, a2 = q.a
    if (q.m + 1) * abs(a2) <= 1:
        return False
    v = Fraction(1, q.n + 1)
    lo, hi = q.b - v, q.b + v
    for c in _corners(q.a, q.m):
        if c < lo or c > hi:
            return False
    return True


def _maximal_division_witness(a: Point, m: int, n: int) -> Optional[Rat]:
    a1, a2 = a
    if (m + 1) * abs(a2) <= 1:
        return None
    corners = _corners(a, m)
    return (max(corners) + min(corners)) / 2


@lru_cache(maxsize=None)
def maximal_division_system() -> DecidableSystem:
    """The largest sound system for division: interval containment at corners."""
    return DecidableSystem(
        _maximal_division_decide,
        dim=2,
        witness=_maximal_division_witness,
        name="maximal-division",
    )


# --- cosine -------------------------------------------------------------------

@lru_cache(maxsize=65536)
def _cos_power_term(a: Rat, k: int) -> Rat:
    """a^(2k) / (2k)!"""
    return a ** (2 * k) / math.factorial(2 * k)


def _half_term(a: Rat, k: int) -> Rat:
    """e_k = a^(2k) / (2 * (2k)!), the split last term of sigma_k."""
    return _cos_power_term(a, k) / 2


@lru_cache(maxsize=65536)
def sigma_k(a: Rat, k: int) -> Rat:
    """Taylor midpoint: full cosine terms below k plus half the k-th term.

    sigma_k(a) = sum_{i<k} (-1)^i a^(2i)/(2i)! + (-1)^k a^(2k)/(2*(2k)!).
    Once a^2 <= (2k+1)(2k+2) the tail alternates with decreasing terms, so
    |cos a - sigma_k(a)| <= e_k.  Note sigma_0(a) = 1/2 for every a.
    """
    total = Fraction(0)
    sign = 1
    for i in range(k):
        total += sign * _cos_power_term(a, i)
        sign = -sign
    return total + sign * _half_term(a, k)


def _cos_k0(a2: Rat) -> int:
    k = 0
    while a2 > (2 * k + 1) * (2 * k + 2):
        k += 1
    return k


# Safety net for the membership scan.  The scan provably terminates (see
# _cosine_decide); the cap only turns an unnoticed bug into a loud error.
_COSINE_SCAN_CAP = 10_000


def _cosine_decide(q: Quadruple) -> bool:
    """Exact test for: some k has a^2 <= (2k+1)(2k+2) and
    |b - sigma_k(a)| + e_k + 1/(m+1) <= 1/(n+1).

    Writing g = 1/(n+1) - 1/(m+1) and F_k = |b - sigma_k(a)| + e_k, the scan
    from the first admissible k accepts on F_k <= g and rejects when
    F_k - 2 e_k > g: since F_k - 2 e_k <= |b - cos a| <= F_j for every
    admissible j, no later k can succeed.  Between the two rules lies
    g in [F_k - 2 e_k, F_k), and e_k -> 0 squeezes F_k -> |b - cos a|; the
    limit can hang only if |b - cos a| = g exactly, which is impossible:
    for a != 0 cos a is irrational while b and g are rational, and for a = 0
    the terms e_k vanish from k = 1 on, deciding immediately.
    """
    (a,) = q.a
    g = Fraction(1, q.n + 1) - Fraction(1, q.m + 1)
    if g < 0:
        return False
    k = _cos_k0(a * a)
    for _ in range(_COSINE_SCAN_CAP):
        e = _half_term(a, k)
        f = abs(q.b - sigma_k(a, k)) + e
        if f <= g:
            return True
        if f - 2 * e > g:
            return False
        k += 1
    raise AssertionError("cosine membership scan failed to terminate")


def _cosine_witness(a_pt: Point, m: int, n: int) -> Optional[Rat]:
    (a,) = a_pt
    g = Fraction(1, n + 1) - Fraction(1, m + 1)
    if g < 0:
        return None
    if g == 0:
        # only the degenerate a = 0 quadruples admit equality
        return Fraction(1) if a == 0 else None
    k = _cos_k0(a * a)
    for _ in range(400):
        if _half_term(a, k) <= g:
            return sigma_k(a, k)
        k += 1
    return None


@lru_cache(maxsize=None)
def cosine_system() -> DecidableSystem:
    """Approximation system for x |-> cos x via midpoint Taylor sections."""
    return DecidableSystem(
        _cosine_decide,
        dim=1,
        witness=_cosine_witness,
        name="cosine",
    )


# --- semialgebraic systems ----------------------------------------------------

# A polynomial over (a_1..a_N, b, u, v) is a tuple of monomials
# (coefficient, exponent-vector), exponent vectors of length N + 3.
Poly = Tuple[Tuple[int, Tuple[int, ...]], ...]


@dataclass(frozen=True)
class Atom:
    op: str  # ">" or ">="
    poly: Poly


@dataclass(frozen=True)
class FAnd:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class FOr:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class FNot:
    arg: "Formula"


Formula = Union[Atom, FAnd, FOr, FNot]


def atom(op: str, *monomials) -> Atom:
    return Atom(op, tuple((c, tuple(e)) for c, e in monomials))


def fand(*args: Formula) -> FAnd:
    return FAnd(tuple(args))


def for_(*args: Formula) -> FOr:
    return FOr(tuple(args))


def fnot(arg: Formula) -> FNot:
    return FNot(arg)


def _eval_poly(poly: Poly, vals: Tuple[Rat, ...]) -> Rat:
    total = Fraction(0)
    for coef, exps in poly:
        term = Fraction(coef)
        for val, e in zip(vals, exps):
            if e:
                term *= val ** e
        total += term
    return total


def eval_formula(formula: Formula, vals: Tuple[Rat, ...]) -> bool:
    if isinstance(formula, Atom):
        p = _eval_poly(formula.poly, vals)
        return p > 0 if formula.op == ">" else p >= 0
    if isinstance(formula, FAnd):
        return all(eval_formula(f, vals) for f in formula.args)
    if isinstance(formula, FOr):
        return any(eval_formula(f, vals) for f in formula.args)
    return not eval_formula(formula.arg, vals)


def _validate_formula(node: Formula, nvars: int):
    if isinstance(node, Atom):
        if node.op not in (">", ">="):
            raise FormatError(f"unknown comparison {node.op!r}")
        for coef, exps in node.poly:
            if isinstance(coef, bool) or not isinstance(coef, int):
                raise FormatError("polynomial coefficients must be integers")
            if len(exps) != nvars + 3:
                raise FormatError(
                    f"exponent vector of length {len(exps)}, expected {nvars + 3}"
                )
            for e in exps:
                if isinstance(e, bool) or not isinstance(e, int) or e < 0:
                    raise FormatError("exponents must be natural numbers")
        return
    if isinstance(node, (FAnd, FOr)):
        for f in node.args:
            _validate_formula(f, nvars)
        return
    if isinstance(node, FNot):
        _validate_formula(node.arg, nvars)
        return
    raise FormatError(f"not a formula node: {node!r}")


def formula_to_json(formula: Formula, nvars: int) -> dict:
    def tree(node: Formula):
        if isinstance(node, Atom):
            return {"op": node.op, "poly": [[c, list(e)] for c, e in node.poly]}
        if isinstance(node, FAnd):
            return {"and": [tree(f) for f in node.args]}
        if isinstance(node, FOr):
            return {"or": [tree(f) for f in node.args]}
        return {"not": [tree(node.arg)]}

    return {"vars": nvars, "formula": tree(formula)}


def formula_from_json(doc) -> Tuple[Formula, int]:
    """Parse the on-disk formula format; FormatError on any malformation."""
    if not isinstance(doc, dict) or set(doc) != {"vars", "formula"}:
        raise FormatError('formula document must have exactly "vars" and "formula"')
    nvars = doc["vars"]
    if isinstance(nvars, bool) or not isinstance(nvars, int) or nvars < 1:
        raise FormatError('"vars" must be a positive integer')

    def tree(node) -> Formula:
        if not isinstance(node, dict):
            raise FormatError(f"formula node must be an object: {node!r}")
        if set(node) == {"op", "poly"}:
            if not isinstance(node["poly"], list):
                raise FormatError('"poly" must be a list of monomials')
            monos = []
            for entry in node["poly"]:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise FormatError(f"monomial must be [coef, exps]: {entry!r}")
                coef, exps = entry
                if not isinstance(exps, list):
                    raise FormatError(f"exponent vector must be a list: {exps!r}")
                monos.append((coef, tuple(exps)))
            return Atom(node["op"], tuple(monos))
        if len(node) != 1:
            raise FormatError(f"ambiguous formula node: {sorted(node)!r}")
        (key, val), = node.items()
        if key in ("and", "or"):
            if not isinstance(val, list):
                raise FormatError(f'"{key}" takes a list of subformulas')
            args = tuple(tree(f) for f in val)
            return FAnd(args) if key == "and" else FOr(args)
        if key == "not":
            if isinstance(val, list):
                if len(val) != 1:
                    raise FormatError('"not" takes exactly one subformula')
                return FNot(tree(val[0]))
            return FNot(tree(val))
        raise FormatError(f"unknown formula node {key!r}")

    formula = tree(doc["formula"])
    _validate_formula(formula, nvars)
    return formula, nvars


def load_formula(path) -> Tuple[Formula, int]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read formula file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"formula file {path} is not valid JSON: {exc}") from exc
    return formula_from_json(doc)


def semialgebraic_system(formula: Formula, dim: int, *, name: str = "semialgebraic") -> DecidableSystem:
    """System whose members are the quadruples satisfying `formula`.

    The formula is evaluated exactly at (a_1, ..., a_N, b, u, v) with
    u = 1/(m+1) and v = 1/(n+1).  Soundness is the formula author's burden;
    the verifier module exists to audit it.
    """
    _validate_formula(formula, dim)

    def decide(q: Quadruple) -> bool:
        vals = q.a + (q.b, Fraction(1, q.m + 1), Fraction(1, q.n + 1))
        return eval_formula(formula, vals)

    return DecidableSystem(decide, dim, name=name)


def squaring_formula() -> Tuple[Formula, int]:
    """A sound and productive formula for x |-> x^2 over one variable.

    Over the closed ball [a-u, a+u] the square's range is an interval
    [lo, hi]: hi = max((a-u)^2, (a+u)^2) is always attained, and is covered
    by requiring both b + v >= (a+u)^2 and b + v >= (a-u)^2.  The infimum
    splits three ways:

      * 0 interior to the ball (u - a > 0 and u + a > 0): lo = 0, attained,
        but the *open* ball never attains its sup, so strict b - v < 0 i.e.
        v - b > 0 suffices;
      * 0 <= a - u: lo = (a-u)^2, so require (a-u)^2 - b + v >= 0;
      * a + u <= 0: lo = (a+u)^2, so require (a+u)^2 - b + v >= 0.

    All coefficients are integers; variable order (a, b, u, v).
    """
    A = (1, 0, 0, 0)
    B = (0, 1, 0, 0)
    U = (0, 0, 1, 0)
    V = (0, 0, 0, 1)
    AA = (2, 0, 0, 0)
    AU = (1, 0, 1, 0)
    UU = (0, 0, 2, 0)

    upper_plus = atom(">=", (1, B), (1, V), (-1, AA), (-2, AU), (-1, UU))
    upper_minus = atom(">=", (1, B), (1, V), (-1, AA), (2, AU), (-1, UU))
    zero_inside = fand(
        atom(">", (1, U), (-1, A)),
        atom(">", (1, U), (1, A)),
        atom(">", (1, V), (-1, B)),
    )
    right_of_zero = fand(
        atom(">=", (1, A), (-1, U)),
        atom(">=", (1, AA), (-2, AU), (1, UU), (-1, B), (1, V)),
    )
    left_of_zero = fand(
        atom(">=", (-1, A), (-1, U)),
        atom(">=", (1, AA), (2, AU), (1, UU), (-1, B), (1, V)),
    )
    formula = fand(upper_plus, upper_minus, for_(zero_inside, right_of_zero, left_of_zero))
    return formula, 1


@lru_cache(maxsize=None)
def squaring_system() -> DecidableSystem:
    formula, nvars = squaring_formula()
    return semialgebraic_system(formula, nvars, name="square")
