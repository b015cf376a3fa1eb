"""Integer-valued polynomials on representable p-adic sets.

Membership of f = g/d on a set S in Z_p only depends on g modulo p^m
where m = vp(d), so every query reduces to finitely many exact residue
checks even when S has infinite components.  The same depth-m reasoning
yields closure invariance: a polynomial is integer valued on S iff it is
on the topological closure of S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError, ResourceLimitError
from .exact import INFINITY, Rat, is_finite, rational_mod, vp
from .padic import PAdicSet, canonicalize, closure, member, some_elements
from .polys import IrreduciblePoly, RatPoly, max_valuation

__all__ = [
    "is_integer_valued", "polynomial_closure", "separating_polynomial",
    "WitnessRationalFunction", "witness_rational_function",
]


def is_integer_valued(f: RatPoly, s: PAdicSet,
                      config: Config = DEFAULT_CONFIG) -> bool:
    """Does f map every element of s into Z_p (p the set's prime)?

    True vacuously on the empty set.  With f = g/d and m = vp(d), the
    value vp(f(x)) is >= 0 iff g(x) = 0 mod p^m, and g(x) mod p^m only
    depends on x mod p^m; balls enumerate residues at depth m, sequences
    check finitely many early elements before their residues stabilize.
    """
    p = s.p
    m = vp(f.denominator, p)
    assert is_finite(m)
    if m == 0:
        return True
    g = RatPoly(f.coeffs)               # numerator, evaluated exactly
    modulus = p ** m

    def num_ok(x: Rat) -> bool:
        return vp(g.eval_at(x), p) >= m

    for ball in s.balls:
        if ball.depth >= m:
            if not num_ok(ball.center):
                return False
            continue
        count = p ** (m - ball.depth)
        if count > config.residue_cap:
            raise ResourceLimitError(
                f"membership check needs {count} residues",
                count, config.residue_cap)
        step = p ** ball.depth
        for t in range(count):
            if not num_ok((ball.center + t * step) % modulus):
                return False
    for x in s.points:
        if not num_ok(x):
            return False
    for seq in s.seqs:
        seq = seq.normalized()
        if not num_ok(seq.limit):
            return False                # forces the whole stabilized tail
        stable_from = m - vp(seq.scale, p)
        for n in range(0, max(stable_from, 0)):
            if not num_ok(seq.element(n)):
                return False
    return True


def polynomial_closure(e: PAdicSet, config: Config = DEFAULT_CONFIG) -> PAdicSet:
    """Largest set on which every f integer-valued on e stays integer valued.

    For subsets of Z_p this is exactly the topological closure.
    """
    return closure(e)


# ---------------------------------------------------------------------------
# separating polynomials
# ---------------------------------------------------------------------------

def _sum_val(factors: list[Fraction], x: Fraction, p: int):
    """vp of prod (x - a) over the factor list; INFINITY at a factor."""
    total = 0
    for a in factors:
        v = vp(x - a, p)
        if not is_finite(v):
            return INFINITY
        total += v
    return total


def _min_val_ball(factors: list[Fraction], p: int, center: int, depth: int):
    """(min over the ball of vp(prod (x - a)), an element attaining it).

    Factors outside the ball keep a constant distance to every element;
    only factors inside force a descent into the p child cosets.  Distinct
    factors split apart at finite depth, so the recursion terminates.
    """
    inside, fixed = [], 0
    for a in factors:
        d = vp(a - center, p)
        if d >= depth:
            inside.append(a)
        else:
            fixed += d
    if not inside:
        return fixed, Fraction(center)
    if len(inside) == 1:
        # nearest escape: stay at this depth but in another child coset
        a = inside[0]
        digit = rational_mod((a - center) / Fraction(p) ** depth, p)
        other = (digit + 1) % p
        return fixed + depth, Fraction(center + other * p ** depth)
    best = wit = None
    for j in range(p):
        v, w = _min_val_ball(inside, p, center + j * p ** depth, depth + 1)
        if best is None or v < best:
            best, wit = v, w
    return fixed + best, wit


def _min_val_seq(factors, seq, p: int):
    """Minimum over the sequence's elements (and included limit).

    Distances to the factors stabilize once vp(scale) + n passes every
    vp(limit - a); from there the product valuation is constant in n (or
    increasing, when the limit itself is a factor), so a finite prefix
    plus one tail sample is exact.
    """
    sv = vp(seq.scale, p)
    gaps = [vp(seq.limit - a, p) for a in factors if a != seq.limit]
    n_star = max((d - sv for d in gaps), default=seq.start) + 1
    best = wit = None
    for n in range(seq.start, max(seq.start, n_star) + 2):
        x = seq.element(n)
        v = _sum_val(factors, x, p)
        if is_finite(v) and (best is None or v < best):
            best, wit = v, x
    if seq.include_limit:
        v = _sum_val(factors, seq.limit, p)
        if is_finite(v) and (best is None or v < best):
            best, wit = v, seq.limit
    return (best, wit) if best is not None else (INFINITY, None)


def _min_valuation(factors: list[Fraction], s: PAdicSet):
    """(min over the closed set of vp(prod (x - a)), attaining element)."""
    p = s.p
    best, wit = INFINITY, None
    for ball in s.balls:
        v, w = _min_val_ball(factors, p, ball.center, ball.depth)
        if v < best:
            best, wit = v, w
    for x in s.points:
        v = _sum_val(factors, x, p)
        if v < best:
            best, wit = v, x
    for seq in s.seqs:
        v, w = _min_val_seq(factors, seq, p)
        if v < best:
            best, wit = v, w
    return best, wit


def separating_polynomial(e: PAdicSet, alpha: Rat,
                          config: Config = DEFAULT_CONFIG) -> RatPoly:
    """A polynomial integer-valued on e with a non-integral value at alpha.

    Requires alpha outside the closure of e.  Factors (X - a) are added
    greedily, each time through an element a of the set where the current
    product has its smallest valuation.  Such orderings realise the exact
    valuation gaps of the integer-valued polynomials on the set, so as
    soon as the product's valuation at alpha drops below the set minimum
    w, dividing by p^(vp at alpha + 1) gives a separator; alpha outside
    the closure guarantees the drop happens.
    """
    p = e.p
    alpha = Fraction(alpha)
    if vp(alpha, p) < 0:
        raise PreconditionError(f"{alpha} is not {p}-integral")
    f_closed = closure(e)
    if member(alpha, f_closed):
        raise PreconditionError(
            f"{alpha} lies in the closure; no separating polynomial exists")
    if f_closed.is_empty():
        return RatPoly([1], p)          # 1/p works against the empty set

    factors: list[Fraction] = []
    product = RatPoly([1])
    result = None
    for _ in range(config.search_degree_cap):
        w, attain = _min_valuation(factors, f_closed)
        at_alpha = _sum_val(factors, alpha, p)
        assert is_finite(at_alpha)      # alpha is not an element of the set
        if at_alpha < w:
            result = product * Fraction(1, p ** (at_alpha + 1))
            break
        assert attain is not None
        factors.append(attain)
        product = product * RatPoly.from_fractions([-attain, 1])
    if result is None:
        raise ResourceLimitError(
            "separator search exceeded the degree cap",
            config.search_degree_cap, config.search_degree_cap)

    try:
        valid = is_integer_valued(result, f_closed, config)
    except ResourceLimitError:
        # the full residue table is too large; the construction is exact,
        # so fall back to spot checks on concrete elements
        valid = all(vp(result.eval_at(x), p) >= 0
                    for x in some_elements(f_closed))
    if not valid:
        raise AssertionError("separator failed validation on the set")
    if vp(result.eval_at(alpha), p) >= 0:
        raise AssertionError("separator failed validation at alpha")
    return result


# ---------------------------------------------------------------------------
# witness rational functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessRationalFunction:
    """N/q(X) with N = product of p^(sup of vp(q) over the p-th set).

    Integer valued (p-adically, at each constrained prime) on the family
    by construction, yet not a polynomial: it certifies that the family's
    intersection of valuation overrings is not contained in the overring
    attached to q.
    """

    q: IrreduciblePoly
    exponents: tuple[tuple[int, int], ...]   # (prime, exponent), exponent > 0

    @property
    def numerator(self) -> int:
        out = 1
        for prime, exp in self.exponents:
            out *= prime ** exp
        return out

    def value_at(self, x: Rat) -> Fraction:
        qx = self.q.eval_at(x)
        if qx == 0:
            raise ZeroDivisionError(f"{x} is a root of {self.q}")
        return self.numerator / qx

    def __str__(self):
        return f"{self.numerator}/({self.q})"


def witness_rational_function(q: IrreduciblePoly, family: dict[int, PAdicSet],
                              config: Config = DEFAULT_CONFIG) -> WitnessRationalFunction:
    """Build N/q integer-valued on the finite family of per-prime sets.

    Each constrained prime contributes p^m with m the exact supremum of
    vp(q(x)) over its set; a root anywhere makes the supremum infinite and
    is reported as an error instead.
    """
    exponents = []
    for p in sorted(family):
        s = family[p]
        if s.p != p:
            raise PreconditionError(f"set at key {p} lives at prime {s.p}")
        if s.is_empty():
            continue
        mv = max_valuation(q, s, config)
        if not is_finite(mv):
            raise PreconditionError(
                f"{q} has a root in the set at prime {p}; no witness exists")
        if mv > 0:
            exponents.append((p, mv))
    witness = WitnessRationalFunction(q, tuple(exponents))
    _spot_check_witness(witness, family)
    return witness


def _spot_check_witness(w: WitnessRationalFunction,
                        family: dict[int, PAdicSet]) -> None:
    from .padic import some_elements
    for p, s in family.items():
        for x in some_elements(s, 3):
            if vp(w.value_at(x), p) < 0:
                raise AssertionError(
                    f"witness {w} fails at {x} for prime {p}")
