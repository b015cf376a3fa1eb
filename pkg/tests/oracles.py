"""Brute-force reference implementations used to check the library.

Everything in this file is deliberately naive: direct definitions,
residue enumeration, and exhaustive scanning over one full period.  The
only number-theoretic fact relied on is that an integer-coefficient
polynomial G satisfies vp(G(x) - G(y)) >= vp(x - y) for p-integral x, y
(because G(x) - G(y) is divisible by x - y in Z[x, y]), so conditions of
the form "vp(G(x)) >= m" only depend on x modulo p^m.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ivp.exact import rational_mod, vp
from ivp.padic import Ball, PAdicSet, SeqWithLimit


def eval_int_poly(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def brute_member(x, s: PAdicSet) -> bool:
    """Membership straight from the component definitions."""
    x = Fraction(x)
    if vp(x, s.p) < 0:
        return False
    for b in s.balls:
        if vp(x - b.center, s.p) >= b.depth:
            return True
    if any(x == pt for pt in s.points):
        return True
    for q in s.seqs:
        if q.include_limit and x == q.limit:
            return True
        # solve limit + scale * p^n == x for an integer n >= start
        t = (x - q.limit) / q.scale
        if t > 0:
            n = vp(t, s.p)
            if Fraction(s.p) ** n == t and n >= q.start:
                return True
    return False


def brute_in_closure(x, s: PAdicSet) -> bool:
    """x is in s or is the (possibly excluded) limit of one of its seqs."""
    x = Fraction(x)
    return brute_member(x, s) or any(x == q.limit for q in s.seqs)


def _seq_stable_index(q: SeqWithLimit, m: int) -> int:
    """First n with element(n) == limit mod p^m (all later ones agree too)."""
    return max(q.start, m - vp(q.scale, q.p))


def seq_residues(q: SeqWithLimit, m: int) -> set[int]:
    """All residues mod p^m hit by elements of the sequence (the limit's
    residue is hit by every deep element whether or not the limit itself
    belongs to the set)."""
    mod = q.p ** m
    stop = _seq_stable_index(q, m)
    return {rational_mod(q.element(n), mod) for n in range(q.start, stop + 1)}


def set_residues(s: PAdicSet, m: int) -> set[int]:
    """All residues mod p^m hit by the set."""
    mod = s.p ** m
    out = set()
    for b in s.balls:
        step = s.p ** b.depth
        if b.depth >= m:
            out.add(b.center % mod)
        else:
            out.update((b.center + step * t) % mod for t in range(mod // step))
    out.update(rational_mod(pt, mod) for pt in s.points)
    for q in s.seqs:
        out.update(seq_residues(q, m))
    return out


def _integer_form(f) -> tuple[list[int], int]:
    """Write f = G / D with G an integer-coefficient polynomial."""
    fractions = f.fraction_coeffs()
    d = math.lcm(*(c.denominator for c in fractions)) if fractions else 1
    return [int(c * d) for c in fractions], d


def brute_int_valued(f, s: PAdicSet) -> bool:
    """Is f p-integral on every element of s?  Exact: balls by residue
    enumeration mod p^m, points and sequences by direct evaluation up to
    the index where the residue mod p^m stops changing."""
    p = s.p
    g, d = _integer_form(f)
    m = vp(d, p)
    if m <= 0:
        return True
    for b in s.balls:
        step = p ** b.depth
        if b.depth >= m:
            picks = [b.center]
        else:
            picks = [b.center + step * t for t in range(p ** (m - b.depth))]
        for r in picks:
            if vp(eval_int_poly(g, r), p) < m:
                return False
    for pt in s.points:
        if vp(f.eval_at(pt), p) < 0:
            return False
    for q in s.seqs:
        for n in range(q.start, _seq_stable_index(q, m) + 1):
            if vp(f.eval_at(q.element(n)), p) < 0:
                return False
        if q.include_limit and vp(f.eval_at(q.limit), p) < 0:
            return False
    return True


def root_residues(coeffs, p: int, k: int) -> set[int]:
    """Solutions of q(x) == 0 mod p^k by full enumeration."""
    mod = p ** k
    return {r for r in range(mod) if eval_int_poly(coeffs, r) % mod == 0}


def brute_max_valuation_lower_bound(q_coeffs, s: PAdicSet, depth: int):
    """max vp(q(x)) over a finite probe of s (every residue the set hits
    mod p^depth is represented by an actual element).  A certified lower
    bound for the supremum; INFINITY when a probe is an exact root."""
    from ivp.exact import INFINITY, is_finite
    p = s.p
    best = None
    for x in probe_elements(s, depth):
        value = sum(Fraction(c) * Fraction(x) ** i
                    for i, c in enumerate(q_coeffs))
        v = vp(value, p)
        if not is_finite(v):
            return INFINITY
        if best is None or v > best:
            best = v
    return best


def probe_elements(s: PAdicSet, depth: int):
    """Concrete elements of s covering every residue mod p^depth it hits."""
    p = s.p
    out: list = []
    for b in s.balls:
        step = p ** b.depth
        if b.depth >= depth:
            out.append(b.center)
        else:
            out.extend(b.center + step * t for t in range(p ** (depth - b.depth)))
    out.extend(s.points)
    for q in s.seqs:
        stop = _seq_stable_index(q, depth)
        out.extend(q.element(n) for n in range(q.start, stop + 2))
        if q.include_limit:
            out.append(q.limit)
    return out


# ---------------------------------------------------------------------------
# integers-with-excluded-classes side
# ---------------------------------------------------------------------------

def intset_elements_in_period(e, extra_modulus: int = 1) -> list[int]:
    """All elements of e in one full period [0, lcm(L, extra_modulus)),
    plus its finite extras; exact because membership in e is periodic mod
    its exclusion modulus L outside the finite parts."""
    if e.is_finite():
        return sorted(set(e.finite_elements()))
    period = math.lcm(e.exclusion_modulus, extra_modulus)
    hits = [n for n in range(period) if e.contains(n)]
    hits.extend(x for x in e.extra if 0 <= x < period and x not in hits)
    return sorted(set(hits))


def brute_hit_residues(e, p: int, depth: int) -> set[int]:
    """Residues mod p^depth realised by elements of e (one period scan)."""
    mod = p ** depth
    if e.is_finite():
        return {x % mod for x in e.finite_elements()}
    res = {n % mod for n in intset_elements_in_period(e, mod)}
    res.update(x % mod for x in e.extra)
    return res


def brute_simultaneous_hit(e, prescriptions: dict[int, int], depth: int) -> bool:
    """Is there one element of e matching x_p mod p^depth for all p at
    once?  Scans a full period of the combined modulus; exact."""
    joint = 1
    for p in prescriptions:
        joint *= p ** depth
    if e.is_finite():
        pool = e.finite_elements()
    else:
        pool = intset_elements_in_period(e, joint)
    for n in pool:
        if all(n % p ** depth == x % p ** depth
               for p, x in prescriptions.items()):
            return True
    return False
