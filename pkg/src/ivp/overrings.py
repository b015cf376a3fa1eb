"""Overrings of the ring of integer-valued polynomials on Z.

A ring here is described by closed sets: one per prime, almost all of
them given by a uniform default rule.  Rings ordered by inclusion
correspond (inclusion-reversing) to their families of closed sets, so
containment and equality reduce to per-prime set comparisons plus a
comparison of the default rules.

Representations are intersections of one-point valuation overrings: a
unitary factor pins a value at (p, alpha), a non-unitary factor pins the
denominator polynomial q.  The operations below decide which factors are
forced by the others, which are superfluous, and when a representation
without redundancy exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from .adelic import IntegerSet, closure_in_zp
from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError, ResourceLimitError, UnsupportedComparisonError
from .exact import Rat, check_prime_arg, is_finite, iter_primes, vp
from .membership import is_integer_valued, witness_rational_function, WitnessRationalFunction
from .padic import (Ball, DefaultRule, PAdicSet, RuleKind, SeqWithLimit,
                    canonicalize, closure, empty_set, full_set, instantiate,
                    is_closed, is_subset, isolated_points, member,
                    remove_isolated_point, sets_equal,
                    EMPTY_RULE, FULL_RULE, UNITS_AND_SELF_RULE)
from .polys import IrreduciblePoly, RatPoly, rational_roots, roots_in_set

__all__ = [
    "Decision", "TriState", "RingSpec", "Representation", "RingOfResult",
    "normalize_rule", "rule_subset", "ring_contains", "ring_equal", "ring_of",
    "ring_member", "representation_equals", "unitary_contains",
    "nonunitary_contains", "superfluous_unitary", "superfluous_nonunitary",
    "MinimalExtensionFamily", "MinimalExtensions", "minimal_extensions",
    "has_irredundant_representation", "localize", "globalize",
    "SimpleWitness", "is_simple_integer_set_ring",
]


# ---------------------------------------------------------------------------
# three-valued answers
# ---------------------------------------------------------------------------

class Decision(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TriState:
    """A definite yes/no, or an honest unknown with the bound that was hit.

    payload carries op-specific evidence: a witness rational function for
    a "no" containment, an escaping polynomial, and so on.
    """

    decision: Decision
    reason: str = ""
    bound: Optional[int] = None
    payload: object = None

    @classmethod
    def yes(cls, reason: str = "", payload=None) -> "TriState":
        return cls(Decision.YES, reason, None, payload)

    @classmethod
    def no(cls, reason: str = "", payload=None) -> "TriState":
        return cls(Decision.NO, reason, None, payload)

    @classmethod
    def unknown(cls, reason: str, bound: Optional[int] = None,
                payload=None) -> "TriState":
        return cls(Decision.UNKNOWN, reason, bound, payload)

    @property
    def is_yes(self) -> bool:
        return self.decision is Decision.YES

    @property
    def is_no(self) -> bool:
        return self.decision is Decision.NO

    @property
    def is_unknown(self) -> bool:
        return self.decision is Decision.UNKNOWN

    def __str__(self):
        body = self.decision.value
        if self.reason:
            body += f" ({self.reason})"
        return body


# ---------------------------------------------------------------------------
# default-rule normalization and comparison
# ---------------------------------------------------------------------------

def normalize_rule(rule: DefaultRule,
                   config: Config = DEFAULT_CONFIG) -> DefaultRule:
    """Collapse degenerate integer-set rules to their plain equivalents.

    An infinite set whose closure is everything even at the primes of its
    exclusion modulus prescribes exactly what the full rule does.
    """
    if rule.kind is not RuleKind.FROM_INTEGER_SET:
        return rule
    e: IntegerSet = rule.integer_set
    if e.is_finite():
        return EMPTY_RULE if not e.finite_elements() else rule
    if all(instantiate(rule, p, config) == full_set(p)
           for p in _intset_special_primes(e)):
        return FULL_RULE
    return rule


def _intset_special_primes(e: IntegerSet) -> tuple[int, ...]:
    """Primes where the closure of an infinite integer set can be proper."""
    out = []
    for p in iter_primes():
        if p > e.exclusion_modulus:
            break
        if e.exclusion_modulus % p == 0:
            out.append(p)
    return tuple(out)


def rule_subset(a: DefaultRule, b: DefaultRule,
                config: Config = DEFAULT_CONFIG) -> bool:
    """Is the set prescribed by a contained in the one prescribed by b at
    every single prime?  Decidable for all supported rule pairs."""
    a, b = normalize_rule(a), normalize_rule(b)
    if a == b:
        return True
    ka, kb = a.kind, b.kind
    if ka is RuleKind.EMPTY:
        return True
    if kb is RuleKind.EMPTY:
        return False
    if kb is RuleKind.FULL:
        return True

    if ka is RuleKind.FROM_INTEGER_SET:
        ea: IntegerSet = a.integer_set
        if ea.is_finite():
            elems = ea.finite_elements()
            if kb is RuleKind.UNITS_AND_SELF:
                # n must be a unit at every prime except possibly n itself
                return all(n in (1, -1) or _is_positive_prime(n) for n in elems)
            if kb is RuleKind.SINGLE_POWER:
                return not elems
            if kb is RuleKind.FROM_INTEGER_SET:
                return _intset_elements_in_rule_everywhere(elems, b, config)
            return False
        # infinite: the closure is all of Z_p at almost every prime
        if kb is RuleKind.FROM_INTEGER_SET:
            eb: IntegerSet = b.integer_set
            if eb.is_finite():
                return False
            checks = set(_intset_special_primes(ea)) | set(_intset_special_primes(eb))
            return all(is_subset(instantiate(a, p, config),
                                 instantiate(b, p, config), config)
                       for p in checks)
        return False        # full closures never fit in units/power sets

    if kb is RuleKind.FROM_INTEGER_SET:
        eb = b.integer_set
        if eb.is_finite():
            # uncountable or unbounded prescriptions inside a finite set: no
            return False
        checks = _intset_special_primes(eb)
        return all(is_subset(instantiate(a, p, config),
                             instantiate(b, p, config), config)
                   for p in checks)

    if ka is RuleKind.UNITS_AND_SELF:
        return False        # kb is power: units don't fit
    if ka is RuleKind.SINGLE_POWER:
        if kb is RuleKind.UNITS_AND_SELF:
            return a.exponent == 1
        if kb is RuleKind.SINGLE_POWER:
            return a.exponent == b.exponent
        return False
    if ka is RuleKind.FULL:
        return False
    raise UnsupportedComparisonError(f"rule pair {ka}, {kb}")


def _is_positive_prime(n: int) -> bool:
    from .exact import is_prime
    return n > 1 and is_prime(n)


def _intset_elements_in_rule_everywhere(elems, rule: DefaultRule,
                                        config: Config) -> bool:
    """Each integer must lie in the rule's set at every prime; away from
    the special primes an infinite-set closure is everything."""
    e: IntegerSet = rule.integer_set
    if e.is_finite():
        allowed = set(e.finite_elements())
        return all(n in allowed for n in elems)
    checks = _intset_special_primes(e)
    return all(member(Fraction(n), instantiate(rule, p, config))
               for p in checks for n in elems)


# ---------------------------------------------------------------------------
# ring descriptions
# ---------------------------------------------------------------------------

class RingSpec:
    """A ring given by its closed set at finitely many exceptional primes
    and a default rule everywhere else.

    Exceptional sets must be closed; they are canonicalized, and entries
    equal to the default rule's instantiation are pruned, so structurally
    equal specs describe equal rings.
    """

    __slots__ = ("exceptional", "default")

    def __init__(self, exceptional=None, default: DefaultRule = FULL_RULE,
                 config: Config = DEFAULT_CONFIG):
        default = normalize_rule(default, config)
        items = []
        for p, s in sorted(dict(exceptional or {}).items()):
            check_prime_arg(p)
            if s.p != p:
                raise PreconditionError(f"set at key {p} lives at prime {s.p}")
            canon = canonicalize(s, config)
            if not is_closed(canon):
                raise PreconditionError(
                    f"exceptional set at {p} is not closed")
            if canon == instantiate(default, p, config):
                continue
            items.append((p, canon))
        object.__setattr__(self, "exceptional", tuple(items))
        object.__setattr__(self, "default", default)

    def __setattr__(self, *_):
        raise AttributeError("RingSpec is immutable")

    def __eq__(self, other):
        return (isinstance(other, RingSpec)
                and self.exceptional == other.exceptional
                and self.default == other.default)

    def __hash__(self):
        return hash((self.exceptional, self.default))

    def __repr__(self):
        parts = [f"{p}: {s}" for p, s in self.exceptional]
        return f"RingSpec({{{', '.join(parts)}}}, default={self.default})"

    def window(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.exceptional)

    def local_set(self, p: int, config: Config = DEFAULT_CONFIG) -> PAdicSet:
        """The closed set this ring carves out inside Z_p."""
        for q, s in self.exceptional:
            if q == p:
                return s
        return instantiate(self.default, p, config)

    @classmethod
    def integers(cls) -> "RingSpec":
        """Int(Z): every local set is the whole of Z_p."""
        return cls({}, FULL_RULE)

    @classmethod
    def rationals(cls) -> "RingSpec":
        """Q[X]: every local set is empty."""
        return cls({}, EMPTY_RULE)

    @classmethod
    def primes_ring(cls) -> "RingSpec":
        """Polynomials sending primes to integers: {p} plus units at p."""
        return cls({}, UNITS_AND_SELF_RULE)

    @classmethod
    def from_integer_set(cls, e: IntegerSet,
                         config: Config = DEFAULT_CONFIG) -> "RingSpec":
        from .padic import integer_set_rule
        return cls({}, integer_set_rule(e), config)


def ring_contains(r1: RingSpec, r2: RingSpec,
                  config: Config = DEFAULT_CONFIG) -> TriState:
    """Is r1 a superset of r2?  Containment of rings reverses containment
    of their local sets at every prime."""
    window = sorted(set(r1.window()) | set(r2.window()))
    for p in window:
        if not is_subset(r1.local_set(p, config), r2.local_set(p, config),
                         config):
            return TriState.no(f"local set at {p} not contained")
    if not rule_subset(r1.default, r2.default, config):
        return TriState.no("default rule not contained")
    return TriState.yes()


def ring_equal(r1: RingSpec, r2: RingSpec,
               config: Config = DEFAULT_CONFIG) -> TriState:
    if r1 == r2:
        return TriState.yes("identical canonical form")
    a = ring_contains(r1, r2, config)
    if not a.is_yes:
        return a
    return ring_contains(r2, r1, config)


def localize(r: RingSpec, p: int, config: Config = DEFAULT_CONFIG) -> RingSpec:
    """Keep only the constraint at p; every other prime becomes free."""
    return RingSpec({p: r.local_set(p, config)}, EMPTY_RULE, config)


def globalize(parts: dict[int, PAdicSet], default: DefaultRule = EMPTY_RULE,
              config: Config = DEFAULT_CONFIG) -> RingSpec:
    """Assemble a ring from per-prime closed sets plus a tail rule."""
    return RingSpec(parts, default, config)


def _prime_divisors(n: int, config: Config) -> tuple[int, ...]:
    """Prime factors of n != 0, by trial division plus a primality check
    on the remaining cofactor."""
    from .exact import is_prime
    n = abs(n)
    if n == 0:
        raise PreconditionError("0 has every prime divisor")
    out = []
    d = 2
    while d * d <= n and d <= config.prime_scan_bound:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if d * d > n or is_prime(n):
            out.append(n)
        else:
            raise ResourceLimitError(
                f"cannot factor cofactor {n}", n, config.prime_scan_bound)
    return tuple(out)


def ring_member(f: RatPoly, r: RingSpec,
                config: Config = DEFAULT_CONFIG) -> bool:
    """Membership of a polynomial: integer valued on the local set at
    every prime of its denominator."""
    if f.denominator == 1:
        return True
    return all(is_integer_valued(f, r.local_set(p, config), config)
               for p in _prime_divisors(f.denominator, config))


# ---------------------------------------------------------------------------
# representations by valuation overrings
# ---------------------------------------------------------------------------

class Representation:
    """An intersection of one-point valuation overrings.

    unitary maps finitely many primes to the set of pinned values there;
    unlisted primes use the default rule.  nonunitary lists denominator
    polynomials explicitly; all_min additionally includes every
    irreducible polynomial with no root in any of the per-prime sets.
    """

    __slots__ = ("nonunitary", "all_min", "unitary", "default")

    def __init__(self, unitary=None, default: DefaultRule = FULL_RULE,
                 nonunitary=(), all_min: bool = False,
                 config: Config = DEFAULT_CONFIG):
        items = []
        for p, s in sorted((unitary or {}).items()):
            check_prime_arg(p)
            if s.p != p:
                raise PreconditionError(f"set at key {p} lives at prime {s.p}")
            items.append((p, canonicalize(s, config)))
        seen = set()
        polys = []
        for q in nonunitary:
            if not isinstance(q, IrreduciblePoly):
                raise PreconditionError("nonunitary entries must be certified")
            if q.coeffs not in seen:
                seen.add(q.coeffs)
                polys.append(q)
        object.__setattr__(self, "unitary", tuple(items))
        object.__setattr__(self, "default", normalize_rule(default, config))
        object.__setattr__(self, "nonunitary", tuple(polys))
        object.__setattr__(self, "all_min", bool(all_min))

    def __setattr__(self, *_):
        raise AttributeError("Representation is immutable")

    def __eq__(self, other):
        return (isinstance(other, Representation)
                and self.unitary == other.unitary
                and self.default == other.default
                and self.nonunitary == other.nonunitary
                and self.all_min == other.all_min)

    def __hash__(self):
        return hash((self.unitary, self.default, self.nonunitary, self.all_min))

    def __repr__(self):
        parts = [f"{p}: {s}" for p, s in self.unitary]
        qs = ", ".join(str(q) for q in self.nonunitary)
        return (f"Representation({{{', '.join(parts)}}}, default={self.default},"
                f" nonunitary=[{qs}], all_min={self.all_min})")

    def window(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.unitary)

    def unitary_at(self, p: int, config: Config = DEFAULT_CONFIG) -> PAdicSet:
        for q, s in self.unitary:
            if q == p:
                return s
        return instantiate(self.default, p, config)

    def lists(self, q: IrreduciblePoly) -> bool:
        return any(q.coeffs == r.coeffs for r in self.nonunitary)


@dataclass(frozen=True)
class RingOfResult:
    spec: RingSpec
    polynomial: TriState            # does the representation's ring equal
    #                                 the polynomial ring of its closures?
    escape: Optional[WitnessRationalFunction] = None


def ring_of(rep: Representation, config: Config = DEFAULT_CONFIG) -> RingOfResult:
    """The closed sets the representation cuts out, and whether the
    represented ring is exactly the polynomial ring of those sets.

    The unitary part alone always gives the polynomial ring of the
    closures.  Listed denominator polynomials shrink it further unless
    each of them is already forced; with a sparse default rule some
    irreducible polynomial escapes and the ring is strictly smaller.
    """
    spec = _closure_spec(rep, config)
    poly, escape = _polynomiality(rep, spec, config)
    return RingOfResult(spec, poly, escape)


def _polynomiality(rep: Representation, spec: RingSpec,
                   config: Config) -> tuple[TriState, Optional[WitnessRationalFunction]]:
    # listed denominator factors contain every polynomial, so they never
    # push the intersection below the polynomial ring; only an irreducible
    # *outside* the family can, by escaping every factor
    if rep.all_min:
        return (TriState.yes("includes the full minimal denominator family"), None)
    kind = spec.default.kind
    if kind in (RuleKind.FULL, RuleKind.UNITS_AND_SELF):
        return (TriState.yes("default rule forces every denominator"), None)
    if (kind is RuleKind.FROM_INTEGER_SET
            and not spec.default.integer_set.is_finite()):
        return (TriState.yes("default rule forces every denominator"), None)
    found = _escape_search(rep, spec, config)
    if isinstance(found, TriState):
        return (found, None)
    q, witness = found
    return (TriState.no(f"{q} is not represented and escapes via {witness}"),
            witness)


def _escape_search(rep: Representation, spec: RingSpec, config: Config):
    """Find an irreducible polynomial outside the listed family with no
    root in any local set and no divergent tail, together with its escape
    witness; TriState.unknown when the search bound is exhausted."""
    tried = 0
    for q in _escape_candidates(config):
        tried += 1
        if tried > 200:
            break
        if rep.lists(q):
            continue
        forced = _unitary_forces_vq(spec, q, config)
        if forced.is_no:
            return (q, forced.payload)
        if forced.is_unknown:
            return forced
    return TriState.unknown("no escaping polynomial found within bound", 200)


def _escape_candidates(config: Config):
    for c in range(0, 40):
        for sign in ((c,) if c == 0 else (c, -c)):
            yield IrreduciblePoly.certify(RatPoly([-sign, 1]), config)
    for d in range(2, 80):
        r = math.isqrt(d)
        if r * r == d:
            continue
        yield IrreduciblePoly.certify(RatPoly([-d, 0, 1]), config)


def _tail_window_closures(spec: RingSpec, config: Config) -> dict[int, PAdicSet]:
    return {p: spec.local_set(p, config) for p in spec.window()}


def _unitary_forces_vq(spec: RingSpec, q: IrreduciblePoly,
                       config: Config) -> TriState:
    """Does the intersection of the unitary factors described by spec lie
    inside the valuation overring of q?

    Yes when q has a root in one of the sets or the positive suprema of
    vp(q) spread over infinitely many primes; otherwise the finitely many
    finite suprema assemble an escaping rational function and the answer
    is no, with that witness attached.
    """
    window = _tail_window_closures(spec, config)
    for p, f_p in window.items():
        if f_p.is_empty():
            continue
        if roots_in_set(q, f_p, config):
            return TriState.yes(f"root inside the set at {p}")
    rule = spec.default
    kind = rule.kind
    if kind is RuleKind.FULL:
        return TriState.yes("roots exist at infinitely many primes")
    if kind is RuleKind.UNITS_AND_SELF:
        if q.coeffs == (0, 1):
            return TriState.yes("vp at the pinned value p is 1 for every p")
        return TriState.yes("unit roots exist at infinitely many primes")
    if kind is RuleKind.FROM_INTEGER_SET and not rule.integer_set.is_finite():
        return TriState.yes("roots exist at infinitely many primes")

    # sparse tail: only finitely many primes contribute, all finitely
    tail_primes: list[int] = []
    if kind is RuleKind.SINGLE_POWER:
        q0 = q.eval_int(0)
        if q0 == 0:
            return TriState.yes("vp at the pinned power is positive for every p")
        tail_primes = [p for p in _prime_divisors(q0, config)
                       if p not in window]
    elif kind is RuleKind.FROM_INTEGER_SET:
        elems = rule.integer_set.finite_elements()
        prod = 1
        for z in elems:
            qz = q.eval_int(z)
            if qz == 0:
                return TriState.yes(f"root {z} pinned at every prime")
            prod *= qz
        if prod not in (1, -1):
            tail_primes = [p for p in _prime_divisors(prod, config)
                           if p not in window]
    family = {p: s for p, s in window.items() if not s.is_empty()}
    for p in tail_primes:
        family[p] = instantiate(rule, p, config)
    witness = witness_rational_function(q, family, config)
    return TriState.no("finitely many finite contributions", payload=witness)


def representation_equals(rep: Representation, r: RingSpec,
                          config: Config = DEFAULT_CONFIG) -> TriState:
    """Does the representation describe exactly the ring r?

    Preconditions (errors, not answers): every pinned value must lie in
    r's local set at its prime.  Given that, the representation matches r
    iff the pinned values are dense in each local set and no irreducible
    polynomial outside the listed family escapes the intersection.
    """
    window = sorted(set(rep.window()) | set(r.window()))
    closures = {}
    for p in window:
        e_p = closure(rep.unitary_at(p, config))
        closures[p] = e_p
        if not is_subset(e_p, r.local_set(p, config), config):
            raise PreconditionError(
                f"pinned values at {p} leave the ring's local set")
    if not rule_subset(rep.default, r.default, config):
        raise PreconditionError(
            "default pinned values leave the ring's local sets")

    for p in window:
        if not is_subset(r.local_set(p, config), closures[p], config):
            return TriState.no(f"pinned values not dense at {p}")
    if not rule_subset(r.default, rep.default, config):
        return TriState.no("pinned values not dense at almost all primes")

    # density holds, so the unitary part closes onto exactly r's sets;
    # listed factors contain every polynomial, so the only remaining
    # question is whether some irreducible outside the family escapes
    if rep.all_min:
        return TriState.yes()
    kind = r.default.kind
    if kind in (RuleKind.FULL, RuleKind.UNITS_AND_SELF):
        return TriState.yes()
    if (kind is RuleKind.FROM_INTEGER_SET
            and not r.default.integer_set.is_finite()):
        return TriState.yes()
    found = _escape_search(rep, r, config)
    if isinstance(found, TriState):
        return found
    q, witness = found
    return TriState.no(f"{q} escapes the representation", payload=witness)


def unitary_contains(rep: Representation, p: int, alpha: Rat,
                     config: Config = DEFAULT_CONFIG) -> bool:
    """Is the valuation overring at (p, alpha) a superset of the
    represented ring?  Exactly when alpha is a limit of pinned values."""
    check_prime_arg(p)
    return member(Fraction(alpha), closure(rep.unitary_at(p, config)))


def nonunitary_contains(rep: Representation, q: IrreduciblePoly,
                        config: Config = DEFAULT_CONFIG) -> TriState:
    """Is the valuation overring of q a superset of the represented ring?

    Listed factors and the all_min family are containments by fiat; all
    other cases are settled by root and tail analysis of the unitary
    part, with a witness attached to every no.
    """
    if rep.lists(q):
        return TriState.yes("listed factor")
    if rep.all_min:
        # an unlisted q either has a root in some set, making the
        # containment automatic, or belongs to the minimal family
        return TriState.yes("covered by the minimal denominator family")
    return _unitary_forces_vq(_closure_spec(rep, config), q, config)


def superfluous_unitary(rep: Representation, p: int, alpha: Rat,
                        config: Config = DEFAULT_CONFIG) -> bool:
    """Can the factor pinning alpha at p be dropped without changing the
    ring?  Exactly when alpha is not isolated among the pinned values."""
    check_prime_arg(p)
    alpha = Fraction(alpha)
    e_p = canonicalize(rep.unitary_at(p, config), config)
    if not member(alpha, e_p):
        raise PreconditionError(f"{alpha} is not pinned at {p}")
    if any(b.contains(alpha) for b in e_p.balls):
        return True
    return any(s.limit == alpha for s in e_p.seqs)


def superfluous_nonunitary(rep: Representation, q: IrreduciblePoly,
                           config: Config = DEFAULT_CONFIG) -> TriState:
    """Can the listed factor for q be dropped without changing the ring?

    Other denominator factors never imply this one, so the question is
    whether the unitary part alone forces the containment.
    """
    if not rep.lists(q) and not rep.all_min:
        raise PreconditionError(f"{q} is not part of the representation")
    spec = _closure_spec(rep, config)
    if rep.all_min and not rep.lists(q):
        if not _in_minimal_family(spec, q, config):
            raise PreconditionError(f"{q} is not part of the representation")
    return _unitary_forces_vq(spec, q, config)


def _closure_spec(rep: Representation, config: Config) -> RingSpec:
    return RingSpec({p: closure(s) for p, s in rep.unitary},
                    rep.default, config)


def _in_minimal_family(spec: RingSpec, q: IrreduciblePoly,
                       config: Config) -> bool:
    """No root in any local set, listed or prescribed by the tail rule."""
    for p in spec.window():
        f_p = spec.local_set(p, config)
        if not f_p.is_empty() and roots_in_set(q, f_p, config):
            return False
    rule = spec.default
    kind = rule.kind
    if kind is RuleKind.EMPTY:
        return True
    if kind is RuleKind.FULL:
        return False        # roots exist at infinitely many primes
    if kind is RuleKind.UNITS_AND_SELF:
        if q.coeffs == (0, 1):
            return True     # the only root 0 is never a pinned value
        return False        # unit roots at infinitely many primes
    if kind is RuleKind.SINGLE_POWER:
        for root in rational_roots(q.coeffs):
            if root.denominator != 1 or root <= 1:
                continue
            base, count = _perfect_power(int(root), rule.exponent)
            if base is not None and base not in spec.window():
                return False
        return True
    e: IntegerSet = rule.integer_set
    if e.is_finite():
        return all(q.eval_int(z) != 0 for z in e.finite_elements())
    return False            # full closures at infinitely many primes


def _perfect_power(n: int, e: int) -> tuple[Optional[int], int]:
    """If n = b^e for a prime b, return (b, e)."""
    from .exact import is_prime
    lo, hi = 2, n
    while lo <= hi:
        mid = (lo + hi) // 2
        power = mid ** e
        if power == n:
            return (mid, e) if is_prime(mid) else (None, e)
        if power < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None, e


# ---------------------------------------------------------------------------
# minimal ring extensions and irredundance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinimalExtensionFamily:
    """A cofinite tail of a sequence of isolated pinned values: each index
    from from_n on yields one minimal extension of the base ring."""

    base: "RingSpec"
    prime: int
    seq: SeqWithLimit
    from_n: int

    def value_at(self, n: int) -> Fraction:
        if n < self.from_n:
            raise PreconditionError(f"family starts at index {self.from_n}")
        return self.seq.element(n)

    def ring_at(self, n: int, config: Config = DEFAULT_CONFIG) -> "RingSpec":
        return _drop_point(self.base, self.prime, self.value_at(n), config)


@dataclass(frozen=True)
class MinimalExtensions:
    base: "RingSpec"
    prime: int
    explicit: tuple[tuple[Fraction, "RingSpec"], ...]
    families: tuple[MinimalExtensionFamily, ...]

    def count_description(self) -> str:
        if not self.families:
            return str(len(self.explicit))
        return (f"{len(self.explicit)} + {len(self.families)} infinite "
                "families")


def _drop_point(r: RingSpec, p: int, alpha: Fraction,
                config: Config) -> RingSpec:
    removed = remove_isolated_point(r.local_set(p, config), alpha, config)
    parts = dict(r.exceptional)
    parts[p] = removed
    return RingSpec(parts, r.default, config)


def minimal_extensions(r: RingSpec, p: int,
                       config: Config = DEFAULT_CONFIG) -> MinimalExtensions:
    """All minimal ring extensions of r supported at the prime p.

    They correspond exactly to the isolated points of the local set:
    removing one isolated point is the smallest possible strict shrink of
    a closed set, hence the smallest possible strict ring extension.
    """
    z_p = r.local_set(p, config)
    iso = isolated_points(z_p, config)
    explicit = tuple((x, _drop_point(r, p, x, config)) for x in iso.explicit)
    families = tuple(MinimalExtensionFamily(r, p, t.seq, t.from_n)
                     for t in iso.tails)
    return MinimalExtensions(r, p, explicit, families)


def has_irredundant_representation(r: RingSpec,
                                   config: Config = DEFAULT_CONFIG) -> TriState:
    """Does some intersection of valuation overrings give r with no
    superfluous factor?

    Requires the isolated points to be dense in every local set; the
    default rule decides the almost-all-primes part: single points are
    isolated, balls never are.
    """
    for p in r.window():
        z_p = r.local_set(p, config)
        if z_p.is_empty():
            continue
        iso = isolated_points(z_p, config)
        if not is_subset(z_p, iso.closure_set(), config):
            return TriState.no(f"isolated points are not dense at {p}")
    kind = r.default.kind
    if kind is RuleKind.EMPTY:
        return TriState.yes("no constraints at almost all primes")
    if kind is RuleKind.SINGLE_POWER:
        return TriState.yes("one isolated value at almost all primes")
    if kind is RuleKind.FULL:
        return TriState.no("no isolated points in Z_p at almost all primes")
    if kind is RuleKind.UNITS_AND_SELF:
        return TriState.no("unit balls have no isolated points")
    e: IntegerSet = r.default.integer_set
    if e.is_finite():
        return TriState.yes("finitely many isolated values at almost all primes")
    return TriState.no("full local sets at almost all primes")


# ---------------------------------------------------------------------------
# simple rings of an integer set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleWitness:
    description: str
    integer_set: Optional[IntegerSet] = None


def is_simple_integer_set_ring(r: RingSpec,
                               config: Config = DEFAULT_CONFIG) -> tuple[TriState, Optional[SimpleWitness]]:
    """Is r the ring of polynomials integer valued on one set of integers?

    Such a set must be dense in every local set simultaneously, so
    congruence-style local sets assemble through the Chinese remainder
    theorem while scattered or sequence-shaped local sets usually
    obstruct.  Supported shapes get a definite answer, with the integer
    set attached to a yes; genuinely global interactions beyond them are
    reported unknown.
    """
    kind = r.default.kind
    window = r.window()

    if kind is RuleKind.EMPTY:
        if all(r.local_set(p, config).is_empty() for p in window):
            return (TriState.yes("the empty set works: the ring is Q[X]"),
                    SimpleWitness("empty set", IntegerSet.finite([])))
        return (TriState.no(
            "integers dense in a nonempty local set would constrain"
            " almost all primes"), None)

    if kind is RuleKind.SINGLE_POWER:
        return (TriState.no(
            "no integer is the pinned power at two different primes"), None)

    if kind is RuleKind.UNITS_AND_SELF:
        if not window:
            return (TriState.yes(
                "the primes together with 1 and -1 are dense in every"
                " local set"),
                SimpleWitness("all primes together with 1 and -1", None))
        return (TriState.unknown(
            "units-style tails with exceptional primes are outside the"
            " supported shapes"), None)

    if kind is RuleKind.FROM_INTEGER_SET:
        e: IntegerSet = r.default.integer_set
        if all(sets_equal(r.local_set(p, config),
                          closure_in_zp(e, p, config))
               for p in window):
            return (TriState.yes("the defining integer set itself works"),
                    SimpleWitness(str(e), e))
        return (TriState.unknown(
            "exceptional sets differ from the defining set's closures"), None)

    # full tail
    for p in window:
        if r.local_set(p, config).is_empty():
            return (TriState.no(
                "an empty local set forces the empty integer set, which is"
                " not dense in Z_p elsewhere"), None)
    if all(_balls_only(r.local_set(p, config)) for p in window):
        e = _crt_integer_set(r, config)
        return (TriState.yes("congruence classes assemble by CRT"),
                SimpleWitness(str(e), e))
    if all(_finite_integer_part(r.local_set(p, config)) is not None
           for p in window):
        # candidate integers are finitely many, never dense in a full tail
        return (TriState.no(
            "only finitely many integers satisfy the local constraints,"
            " never dense in Z_p at the remaining primes"), None)
    return (TriState.unknown(
        "sequence-shaped local sets interact across primes beyond the"
        " supported analysis"), None)


def _balls_only(s: PAdicSet) -> bool:
    return not s.points and not s.seqs and bool(s.balls)


def _finite_integer_part(s: PAdicSet) -> Optional[tuple[int, ...]]:
    """The integers in the set when provably finitely many, else None."""
    if s.balls:
        return None
    out = set()
    for x in s.points:
        if x.denominator == 1:
            out.add(int(x))
    for seq in s.seqs:
        hits = _seq_integer_indices(seq)
        if hits is None:
            return None
        for n in hits:
            out.add(int(seq.element(n)))
        if seq.include_limit and seq.limit.denominator == 1:
            out.add(int(seq.limit))
    return tuple(sorted(out))


def _seq_integer_indices(seq: SeqWithLimit) -> Optional[tuple[int, ...]]:
    """Indices with integer elements, when finitely many; None otherwise.

    Once the power of p has cleared the p-part of the scale's denominator
    the fractional parts of the elements cycle with a period dividing the
    remaining denominators, so an exact cycle scan decides whether hits
    recur forever or stop.
    """
    seq = seq.normalized()
    p = seq.p
    start_of_cycle = vp(Fraction(seq.scale).denominator, p)
    assert is_finite(start_of_cycle)
    hits = [n for n in range(start_of_cycle)
            if seq.element(n).denominator == 1]
    seen: dict[Fraction, int] = {}
    n = start_of_cycle
    while True:
        frac = seq.element(n) % 1
        if frac in seen:
            return tuple(hits)          # full cycle without an integer
        if frac == 0:
            return None                 # recurs with the cycle: infinite
        seen[frac] = n
        n += 1


def _crt_integer_set(r: RingSpec, config: Config) -> IntegerSet:
    """Excluded-classes description of the integers allowed by balls-only
    local sets at the window primes."""
    from .exact import Congruence
    excluded = []
    for p in r.window():
        s = r.local_set(p, config)
        depth = max(b.depth for b in s.balls)
        modulus = p ** depth
        if modulus > config.residue_cap:
            raise ResourceLimitError(
                f"residue enumeration at {p}", modulus, config.residue_cap)
        inside = set()
        for b in s.balls:
            step = p ** b.depth
            inside.update(range(b.center % step, modulus, step))
        for c in range(modulus):
            if c not in inside:
                excluded.append(Congruence(c, modulus))
    return IntegerSet(excluded=tuple(excluded))
