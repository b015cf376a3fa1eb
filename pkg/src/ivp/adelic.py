"""Integer sets with congruence exclusions and their closures.

An IntegerSet is either a finite explicit set or all of Z minus finitely
many congruence classes, plus finitely many explicitly re-added integers.
Each prime sees such a set through its closure in Z_p; the product of
those closures can be strictly larger than the closure inside the
restricted product, because congruence conditions at different primes
interact through the Chinese remainder theorem.  Both membership
questions are decidable and implemented exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError, ResourceLimitError
from .exact import Congruence, Rat, rational_mod, vp
from .padic import Ball, PAdicSet, canonicalize, member

__all__ = [
    "IntegerSet", "AdelicCandidate", "closure_in_zp",
    "product_closure_member", "adelic_closure_member", "closures_differ",
]


@dataclass(frozen=True)
class IntegerSet:
    """(Z or a finite base) minus congruence classes, plus extras.

    base=None means all of Z.  Membership of an integer n is: n is in the
    base and avoids every excluded class, or n is listed in extra.
    """

    base: Optional[tuple[int, ...]] = None
    excluded: tuple[Congruence, ...] = ()
    extra: tuple[int, ...] = ()

    def __post_init__(self):
        if self.base is not None:
            object.__setattr__(self, "base", tuple(sorted(set(self.base))))
        object.__setattr__(self, "excluded", tuple(sorted(
            set(self.excluded), key=lambda c: (c.modulus, c.residue))))
        object.__setattr__(self, "extra", tuple(sorted(set(self.extra))))

    @classmethod
    def all_integers(cls) -> "IntegerSet":
        return cls()

    @classmethod
    def finite(cls, elements) -> "IntegerSet":
        return cls(base=tuple(int(n) for n in elements))

    @classmethod
    def without_classes(cls, *excluded: Congruence) -> "IntegerSet":
        return cls(excluded=excluded)

    def contains(self, n: int) -> bool:
        if n in self.extra:
            return True
        if self.base is not None and n not in self.base:
            return False
        return not any(c.contains(n) for c in self.excluded)

    @property
    def exclusion_modulus(self) -> int:
        out = 1
        for c in self.excluded:
            out = math.lcm(out, c.modulus)
        return out

    def allowed_residues(self) -> tuple[int, ...]:
        """Residues mod the exclusion modulus not hit by any exclusion."""
        L = self.exclusion_modulus
        return tuple(r for r in range(L)
                     if not any(c.contains(r) for c in self.excluded))

    def is_finite(self) -> bool:
        if self.base is not None:
            return True
        return not self.allowed_residues()

    def finite_elements(self) -> tuple[int, ...]:
        if not self.is_finite():
            raise PreconditionError("integer set is infinite")
        if self.base is None:
            return self.extra
        kept = [n for n in self.base
                if not any(c.contains(n) for c in self.excluded)]
        return tuple(sorted(set(kept) | set(self.extra)))

    def is_empty(self) -> bool:
        return self.is_finite() and not self.finite_elements()

    def is_all_integers(self) -> bool:
        """True when every integer is a member.

        An excluded class removes infinitely many integers while extras
        restore only finitely many, so any exclusion rules this out.
        """
        return self.base is None and not self.excluded

    def sample(self, count: int = 8) -> tuple[int, ...]:
        """A few members, for spot checks."""
        if self.is_finite():
            return self.finite_elements()[:count]
        out = list(self.extra[:count])
        n = 0
        while len(out) < count:
            for cand in (n, -n):
                if self.contains(cand) and cand not in out:
                    out.append(cand)
            n += 1
        return tuple(out[:count])

    def __str__(self):
        if self.base is not None:
            body = "{" + ", ".join(map(str, self.base)) + "}"
        else:
            body = "Z"
        for c in self.excluded:
            body += f" \\ ({c})"
        if self.extra:
            body += " U {" + ", ".join(map(str, self.extra)) + "}"
        return body


def closure_in_zp(e: IntegerSet, p: int,
                  config: Config = DEFAULT_CONFIG) -> PAdicSet:
    """Topological closure of the integer set inside Z_p.

    Finite sets close to themselves.  Otherwise a residue class mod p^D,
    with D one past the p-valuation of the exclusion modulus, is either
    disjoint from the set or meets it densely, so the closure is a union
    of depth-D balls plus the finitely many re-added points.
    """
    if e.is_finite():
        return canonicalize(PAdicSet(
            p, points=[Fraction(n) for n in e.finite_elements()]))
    L = e.exclusion_modulus
    depth = vp(L, p) + 1
    count = p ** depth
    if count > config.residue_cap:
        raise ResourceLimitError(
            f"{count} residue classes at prime {p}", count, config.residue_cap)
    joint = math.lcm(count, L)
    allowed = e.allowed_residues()
    balls = []
    for c in range(count):
        # does class c mod p^D contain infinitely many members?
        if any(r % L in allowed for r in range(c, joint, count)):
            balls.append(Ball(p, c, depth))
    points = [Fraction(n) for n in e.extra]
    return canonicalize(PAdicSet(p, balls, points))


@dataclass(frozen=True)
class AdelicCandidate:
    """A finitely-supported prescription: value x_p at each listed prime,
    an unspecified integral value everywhere else."""

    values: tuple[tuple[int, Fraction], ...]

    @classmethod
    def of(cls, values: dict[int, Rat]) -> "AdelicCandidate":
        items = []
        for p in sorted(values):
            x = Fraction(values[p])
            if vp(x, p) < 0:
                raise PreconditionError(f"{x} is not {p}-integral")
            items.append((p, x))
        return cls(tuple(items))

    @classmethod
    def diagonal(cls, n: int, primes) -> "AdelicCandidate":
        return cls.of({p: Fraction(n) for p in primes})

    def value_at(self, p: int) -> Optional[Fraction]:
        for q, x in self.values:
            if q == p:
                return x
        return None

    def __str__(self):
        return ", ".join(f"{p}: {x}" for p, x in self.values)


def product_closure_member(e: IntegerSet, x: AdelicCandidate,
                           config: Config = DEFAULT_CONFIG) -> bool:
    """Membership in the plain product of the per-prime closures.

    Coordinates are independent here: each listed value must lie in the
    closure at its prime, and the unlisted coordinates can be filled with
    any element as long as the set is nonempty.
    """
    if e.is_empty():
        return False
    return all(member(x_p, closure_in_zp(e, p, config))
               for p, x_p in x.values)


def adelic_closure_member(e: IntegerSet, x: AdelicCandidate,
                          config: Config = DEFAULT_CONFIG) -> bool:
    """Membership in the closure taken inside the restricted product.

    Here one single integer must approximate every listed coordinate
    simultaneously to arbitrary depth.  The congruence constraints
    stabilize one level past the p-part of the exclusion modulus, so a
    finite CRT check decides the question; an exact rational match with a
    finite-set element or a re-added extra also settles it.
    """
    # a member z of e equal to every listed coordinate works at all depths
    exact_common = _common_exact_value(x)
    if exact_common is not None and e.contains(exact_common):
        return True
    if e.is_finite():
        # finitely many candidates z, each eventually expelled unless exact
        return False

    L = e.exclusion_modulus
    allowed = set(e.allowed_residues())
    modulus = 1
    congruences = []
    for p, x_p in x.values:
        depth = vp(L, p) + 1
        congruences.append(Congruence(rational_mod(x_p, p ** depth), p ** depth))
        modulus = math.lcm(modulus, p ** depth)
    joint = math.lcm(modulus, L)
    if joint > config.residue_cap:
        raise ResourceLimitError(
            f"joint modulus {joint}", joint, config.residue_cap)
    for r in range(joint):
        if all(c.contains(r) for c in congruences) and r % L in allowed:
            return True
    return False


def _common_exact_value(x: AdelicCandidate) -> Optional[int]:
    vals = {x_p for _, x_p in x.values}
    if len(vals) == 1:
        v = vals.pop()
        if v.denominator == 1:
            return int(v)
    return None


def closures_differ(e: IntegerSet,
                    config: Config = DEFAULT_CONFIG) -> Optional[AdelicCandidate]:
    """A candidate in the product of closures but not in the restricted-
    product closure, or None when the canonical candidates all fail.

    Finite sets of size two or more always separate: prescribing two
    different elements at two suitable primes cannot be matched by one
    integer.  For congruence-defined sets the candidates are the excluded
    residues, prescribed diagonally at the primes of the modulus.
    """
    if e.is_finite():
        elems = e.finite_elements()
        if len(elems) < 2:
            return None
        a, b = elems[0], elems[1]
        ps = []
        q = 2
        while len(ps) < 2:
            if is_coprime_to_all(q, (a - b,)) and _is_small_prime(q):
                ps.append(q)
            q += 1
        cand = AdelicCandidate.of({ps[0]: a, ps[1]: b})
        if (product_closure_member(e, cand, config)
                and not adelic_closure_member(e, cand, config)):
            return cand
        return None

    L = e.exclusion_modulus
    primes = [p for p in range(2, L + 1) if L % p == 0 and _is_small_prime(p)]
    for c in e.excluded:
        for r in range(c.residue, L, c.modulus):
            cand = AdelicCandidate.diagonal(r, primes)
            if (product_closure_member(e, cand, config)
                    and not adelic_closure_member(e, cand, config)):
                return cand
    return None


def _is_small_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(math.isqrt(n)) + 1))


def is_coprime_to_all(q: int, values) -> bool:
    return all(math.gcd(q, abs(v)) == 1 for v in values)
