"""Representable subsets of the p-adic integers.

A set is a finite union of three kinds of components at a fixed prime p:

* ``Ball(p, c, k)``       -- the coset c + p^k Z_p (k = 0 is all of Z_p),
* finite rational points  -- elements of Z_p given exactly,
* ``SeqWithLimit``        -- a geometric tail {c + a*p^n : n >= N} whose
                             unique accumulation point is c.

This algebra is closed under the operations the library needs: closure,
canonicalization, subset tests, isolated points, and removal of an
isolated point.  Canonical forms are unique for sets presented in the
algebra, so structural equality of canonical forms is set equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError, ResourceLimitError
from .exact import INFINITY, Rat, check_prime_arg, rational_mod, vp


@dataclass(frozen=True)
class Ball:
    """The coset center + p^depth * Z_p; the center is stored reduced."""

    p: int
    center: int
    depth: int

    def __init__(self, p: int, center: Rat, depth: int):
        check_prime_arg(p)
        if depth < 0:
            raise PreconditionError(f"ball depth must be >= 0, got {depth}")
        if vp(center, p) < 0:
            raise PreconditionError(f"ball center {center} is not p-integral")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "center", rational_mod(center, p ** depth))

    def contains(self, x: Rat) -> bool:
        return vp(Fraction(x) - self.center, self.p) >= self.depth

    def contains_ball(self, other: "Ball") -> bool:
        return (self.depth <= other.depth
                and (other.center - self.center) % (self.p ** self.depth) == 0)

    def __str__(self):
        return f"ball({self.p}, {self.center}, {self.depth})"


@dataclass(frozen=True)
class SeqWithLimit:
    """Geometric sequence {limit + scale * p^n : n >= start} with its limit.

    The elements converge to ``limit``; include_limit records whether the
    limit itself belongs to the set.  All elements must be p-integral,
    which amounts to vp(limit) >= 0 and vp(scale) + start >= 0.
    """

    p: int
    limit: Fraction
    scale: Fraction
    start: int
    include_limit: bool

    def __init__(self, p: int, limit: Rat, scale: Rat, start: int = 0,
                 include_limit: bool = True):
        check_prime_arg(p)
        limit, scale = Fraction(limit), Fraction(scale)
        if scale == 0:
            raise PreconditionError("sequence scale must be nonzero")
        if vp(limit, p) < 0:
            raise PreconditionError(f"sequence limit {limit} is not p-integral")
        if vp(scale, p) + start < 0:
            raise PreconditionError(
                f"sequence elements leave Z_p (vp(scale)={vp(scale, p)}, start={start})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "limit", limit)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "include_limit", include_limit)

    def element(self, n: int) -> Fraction:
        return self.limit + self.scale * Fraction(self.p) ** n

    def element_index(self, x: Rat) -> Optional[int]:
        """The n with element(n) == x, or None (the limit is not an element)."""
        t = (Fraction(x) - self.limit) / self.scale
        if t <= 0:
            return None
        n = vp(t, self.p)
        if t == Fraction(self.p) ** n and n >= self.start:
            return n
        return None

    def contains(self, x: Rat) -> bool:
        if self.include_limit and Fraction(x) == self.limit:
            return True
        return self.element_index(x) is not None

    def normalized(self) -> "SeqWithLimit":
        """Rescale so the start index is 0 (same set of elements)."""
        if self.start == 0:
            return self
        return SeqWithLimit(self.p, self.limit,
                            self.scale * Fraction(self.p) ** self.start,
                            0, self.include_limit)

    def __str__(self):
        tag = "+lim" if self.include_limit else "-lim"
        return f"seq({self.p}; {self.limit}, {self.scale}, {self.start}, {tag})"


@dataclass(frozen=True)
class PAdicSet:
    """A finite union of balls, points and sequences at one prime."""

    p: int
    balls: tuple[Ball, ...] = ()
    points: tuple[Fraction, ...] = ()
    seqs: tuple[SeqWithLimit, ...] = ()

    def __init__(self, p: int, balls: Iterable[Ball] = (),
                 points: Iterable[Rat] = (), seqs: Iterable[SeqWithLimit] = ()):
        check_prime_arg(p)
        balls = tuple(balls)
        seqs = tuple(seqs)
        pts = tuple(Fraction(x) for x in points)
        for b in balls:
            if b.p != p:
                raise PreconditionError(f"ball prime {b.p} != set prime {p}")
        for s in seqs:
            if s.p != p:
                raise PreconditionError(f"sequence prime {s.p} != set prime {p}")
        for x in pts:
            if vp(x, p) < 0:
                raise PreconditionError(f"point {x} is not p-integral")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "balls", balls)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "seqs", seqs)

    def is_empty(self) -> bool:
        return not (self.balls or self.points or self.seqs)

    def __str__(self):
        if self.is_empty():
            return f"empty({self.p})"
        parts = [str(b) for b in self.balls]
        if self.points:
            parts.append(f"pts({self.p}; " + ", ".join(map(str, self.points)) + ")")
        parts.extend(str(s) for s in self.seqs)
        return " | ".join(parts)


def empty_set(p: int) -> PAdicSet:
    return PAdicSet(p)


def full_set(p: int) -> PAdicSet:
    return PAdicSet(p, balls=[Ball(p, 0, 0)])


def point_set(p: int, *points: Rat) -> PAdicSet:
    return PAdicSet(p, points=[Fraction(x) for x in points])


# ---------------------------------------------------------------------------
# membership and closure
# ---------------------------------------------------------------------------

def member(alpha: Rat, s: PAdicSet) -> bool:
    """Exact membership of a p-integral rational in the set."""
    alpha = Fraction(alpha)
    if vp(alpha, s.p) < 0:
        raise PreconditionError(f"{alpha} is not {s.p}-integral")
    return (any(b.contains(alpha) for b in s.balls)
            or alpha in s.points
            or any(q.contains(alpha) for q in s.seqs))


def closure(s: PAdicSet) -> PAdicSet:
    """Topological closure: the set plus all sequence limits, canonical."""
    seqs = [SeqWithLimit(q.p, q.limit, q.scale, q.start, True) for q in s.seqs]
    return canonicalize(PAdicSet(s.p, s.balls, s.points, seqs))


def is_closed(s: PAdicSet) -> bool:
    return canonicalize(s) == closure(s)


# ---------------------------------------------------------------------------
# canonicalization
# ---------------------------------------------------------------------------

def _canonical_balls(p: int, balls: Iterable[Ball]) -> list[Ball]:
    """Disjoint maximal balls with the same union (unique for clopen sets)."""
    work = {(b.depth, b.center) for b in balls}
    # merge complete sibling families: p balls at depth k sharing a parent
    merged = True
    while merged:
        merged = False
        by_parent: dict[tuple[int, int], set[int]] = {}
        for depth, center in work:
            if depth >= 1:
                parent = (depth - 1, center % p ** (depth - 1))
                by_parent.setdefault(parent, set()).add(center)
        for (pdepth, pcenter), children in by_parent.items():
            if len(children) == p:
                work -= {(pdepth + 1, c) for c in children}
                work.add((pdepth, pcenter))
                merged = True
                break
    # drop balls nested inside another (ultrametric: nested or disjoint)
    depths = sorted({d for d, _ in work})
    index = {(d, c) for d, c in work}
    keep = []
    for depth, center in work:
        covered = any((d, center % p ** d) in index
                      for d in depths if d < depth)
        if not covered:
            keep.append(Ball(p, center, depth))
    keep.sort(key=lambda b: (b.depth, b.center))
    return keep


def _in_ball_union(x: Fraction, balls: Sequence[Ball]) -> bool:
    return any(b.contains(x) for b in balls)


def _last_index_in_balls(seq: SeqWithLimit, balls: Sequence[Ball]) -> int:
    """Upper bound on n with element(n) inside the ball union.

    Requires the limit to lie outside every ball; beyond the bound the
    elements stay outside too (ultrametric: the distance to each ball
    center stabilizes at vp(limit - center) < depth).
    """
    bound = seq.start - 1
    sv = vp(seq.scale, seq.p)
    for b in balls:
        d = vp(seq.limit - b.center, seq.p)
        if d is INFINITY or d >= b.depth:
            raise PreconditionError("sequence limit lies inside a ball")
        bound = max(bound, d - sv)
    return bound


def canonicalize(s: PAdicSet, config: Config = DEFAULT_CONFIG) -> PAdicSet:
    """Normal form: structural equality of canonical forms is set equality.

    Rules: reduce ball centers and keep the unique maximal disjoint ball
    decomposition; dissolve sequences whose limit falls in a ball; merge
    sequences that are tails of one another; extend sequences downward
    through covered elements; absorb points into balls and sequences; an
    excluded limit listed as a point becomes an included limit.
    """
    p = s.p
    balls = _canonical_balls(p, s.balls)
    points = set(s.points)

    seqs: list[SeqWithLimit] = []
    for q in (q.normalized() for q in s.seqs):
        if _in_ball_union(q.limit, balls):
            # whole tail is eventually inside the union; keep the leftovers
            b = next(b for b in balls if b.contains(q.limit))
            tail_from = max(0, b.depth - vp(q.scale, p))
            for n in range(0, tail_from):
                e = q.element(n)
                if not _in_ball_union(e, balls):
                    points.add(e)
        else:
            seqs.append(q)

    # merge sequences that are p-power tails of one another (same limit)
    merged: dict[tuple[Fraction, Fraction], bool] = {}
    order: list[tuple[Fraction, Fraction]] = []
    for q in seqs:
        placed = False
        for key in list(order):
            limit, scale = key
            if limit != q.limit:
                continue
            ratio = q.scale / scale
            j = vp(ratio, p)
            if ratio != Fraction(p) ** j:
                continue
            include = merged[key] or q.include_limit
            if j >= 0:
                merged[key] = include          # q is a tail of the kept seq
            else:
                del merged[key]                # kept seq is a tail of q
                order[order.index(key)] = (q.limit, q.scale)
                merged[(q.limit, q.scale)] = include
            placed = True
            break
        if not placed:
            order.append((q.limit, q.scale))
            merged[(q.limit, q.scale)] = q.include_limit

    # extend each sequence downward through elements already covered
    final: list[SeqWithLimit] = []
    for limit, scale in order:
        include = merged[(limit, scale)]
        while True:
            cand = limit + scale / p
            if vp(cand, p) < 0:
                break
            if cand in points:
                points.discard(cand)
            elif not _in_ball_union(cand, balls):
                break
            scale = scale / p
        final.append(SeqWithLimit(p, limit, scale, 0, include))

    # absorb points: into balls, into sequence elements, into limits
    kept_points = []
    for x in sorted(points):
        if _in_ball_union(x, balls):
            continue
        if any(q.element_index(x) is not None for q in final):
            continue
        hit = [i for i, q in enumerate(final) if q.limit == x]
        if hit:
            for i in hit:
                q = final[i]
                final[i] = SeqWithLimit(p, q.limit, q.scale, 0, True)
            continue
        kept_points.append(x)

    # a limit included through any route is included everywhere
    included_limits = {q.limit for q in final if q.include_limit}
    final = [SeqWithLimit(p, q.limit, q.scale, 0, q.limit in included_limits)
             for q in final]
    final.sort(key=lambda q: (q.limit, q.scale, not q.include_limit))
    return PAdicSet(p, balls, kept_points, final)


def sets_equal(a: PAdicSet, b: PAdicSet) -> bool:
    if a.p != b.p:
        raise PreconditionError("sets live at different primes")
    return canonicalize(a) == canonicalize(b)


# ---------------------------------------------------------------------------
# subset, density
# ---------------------------------------------------------------------------

def _ball_covered(b: Ball, cover: Sequence[Ball], config: Config) -> bool:
    """Is the ball contained in the union of `cover`?  Exact enumeration."""
    if any(c.contains_ball(b) for c in cover):
        return True
    if not cover:
        return False
    depth = max(c.depth for c in cover)
    if depth <= b.depth:
        return False                    # would have been caught above
    count = b.p ** (depth - b.depth)
    if count > config.residue_cap:
        raise ResourceLimitError(
            f"ball cover check needs {count} residues", count, config.residue_cap)
    step = b.p ** b.depth
    index = {(c.depth, c.center) for c in cover}
    depths = sorted({c.depth for c in cover})
    for t in range(count):
        r = b.center + t * step
        if not any((d, r % b.p ** d) in index for d in depths):
            return False
    return True


def _seq_subset(q: SeqWithLimit, b: PAdicSet, config: Config) -> bool:
    """Is every element (and included limit) of q contained in set b?

    The tail is handled symbolically: beyond an explicit index bound the
    elements are either uniformly inside one component of b or uniformly
    outside all of them.
    """
    p = q.p
    q = q.normalized()
    c, a = q.limit, q.scale
    av = vp(a, p)
    if q.include_limit and not member(c, b):
        return False

    # a tail rule covers all n past its threshold; without one, balls,
    # points and foreign sequences can only catch finitely many elements,
    # so some element of q escapes b and the containment fails
    uniform_from: Optional[int] = None
    for ball in b.balls:
        d = vp(c - ball.center, p)
        if d is INFINITY or d >= ball.depth:
            t = ball.depth - av         # tail n >= t sits inside this ball
            uniform_from = t if uniform_from is None else min(uniform_from, t)
    for other in b.seqs:
        other = other.normalized()
        if other.limit != c:
            continue
        ratio = a / other.scale
        j = vp(ratio, p)
        if ratio == Fraction(p) ** j:
            # element(n) = other.element(n + j): inside for n + j >= 0
            t = max(0, -j)
            uniform_from = t if uniform_from is None else min(uniform_from, t)
    if uniform_from is None:
        return False
    return all(member(q.element(n), b) for n in range(0, uniform_from))


def is_subset(a: PAdicSet, b: PAdicSet, config: Config = DEFAULT_CONFIG) -> bool:
    """Decide containment of closed sets exactly."""
    if a.p != b.p:
        raise PreconditionError("sets live at different primes")
    a, b = canonicalize(a, config), canonicalize(b, config)
    for ball in a.balls:
        if not _ball_covered(ball, b.balls, config):
            return False
    for x in a.points:
        if not member(x, b):
            return False
    return all(_seq_subset(q, b, config) for q in a.seqs)


def is_dense_in(e: PAdicSet, f: PAdicSet, config: Config = DEFAULT_CONFIG) -> bool:
    """Does the closure of e cover f?"""
    return is_subset(f, closure(e), config)


# ---------------------------------------------------------------------------
# isolated points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsolatedTail:
    """All elements of seq with index >= from_n are isolated points."""

    seq: SeqWithLimit
    from_n: int


@dataclass(frozen=True)
class IsolatedPoints:
    """The isolated locus: finitely many explicit points plus whole tails."""

    parent: PAdicSet
    explicit: tuple[Fraction, ...]
    tails: tuple[IsolatedTail, ...]

    def closure_set(self) -> PAdicSet:
        """Closure of the isolated locus, as a set in the algebra."""
        seqs = []
        for t in self.tails:
            q = t.seq
            scale = q.scale * Fraction(q.p) ** t.from_n
            seqs.append(SeqWithLimit(q.p, q.limit, scale, 0, True))
        return canonicalize(PAdicSet(self.parent.p, (), self.explicit, seqs))

    def is_empty(self) -> bool:
        return not (self.explicit or self.tails)


def isolated_points(s: PAdicSet, config: Config = DEFAULT_CONFIG) -> IsolatedPoints:
    """Isolated points of a closed set.

    Balls contribute none.  Canonical finite points are always isolated.
    A sequence element is isolated unless it sits inside a ball or equals
    another sequence's limit; both can happen only finitely often, so each
    sequence reports finitely many explicit elements plus one whole tail.
    Limits of sequences are never isolated.
    """
    s = canonicalize(s, config)
    if canonicalize(closure(s), config) != s:
        raise PreconditionError("isolated_points expects a closed set")
    explicit = list(s.points)
    tails = []
    other_limits = [q.limit for q in s.seqs]
    for q in s.seqs:
        p, c, a = q.p, q.limit, q.scale
        av = vp(a, p)
        bound = q.start - 1
        if s.balls:
            bound = max(bound, _last_index_in_balls(q, s.balls))
        skip = set()
        for lim in other_limits:
            if lim == c:
                continue
            n = q.element_index(lim)
            if n is not None:
                skip.add(n)
                bound = max(bound, n)
        for n in range(q.start, bound + 1):
            if n in skip:
                continue
            e = q.element(n)
            if not _in_ball_union(e, s.balls):
                explicit.append(e)
        tails.append(IsolatedTail(q, bound + 1))
    # distinct sequences can share individual elements; report each once
    seen = set()
    uniq = []
    for x in explicit:
        if x not in seen:
            seen.add(x)
            uniq.append(x)
    return IsolatedPoints(s, tuple(sorted(uniq)), tuple(tails))


def remove_isolated_point(s: PAdicSet, alpha: Rat,
                          config: Config = DEFAULT_CONFIG) -> PAdicSet:
    """The closed set minus one isolated point (stays in the algebra)."""
    alpha = Fraction(alpha)
    s = canonicalize(s, config)
    if not member(alpha, s):
        raise PreconditionError(f"{alpha} is not in the set")
    if _in_ball_union(alpha, s.balls):
        raise PreconditionError(f"{alpha} lies in a ball, so it is not isolated")
    if any(q.limit == alpha for q in s.seqs):
        raise PreconditionError(f"{alpha} is a sequence limit, not isolated")
    if alpha in s.points:
        return PAdicSet(s.p, s.balls,
                        tuple(x for x in s.points if x != alpha), s.seqs)
    # alpha is a sequence element; split every sequence that lists it
    new_points = list(s.points)
    new_seqs = []
    for q in s.seqs:
        n = q.element_index(alpha)
        if n is None:
            new_seqs.append(q)
            continue
        new_points.extend(q.element(i) for i in range(q.start, n))
        new_seqs.append(SeqWithLimit(q.p, q.limit,
                                     q.scale * Fraction(q.p) ** (n + 1 - q.start),
                                     q.start, q.include_limit))
    return canonicalize(PAdicSet(s.p, s.balls, new_points, new_seqs), config)


# ---------------------------------------------------------------------------
# intersection helpers (used by the adelic and polynomial modules)
# ---------------------------------------------------------------------------

def meets_ball(s: PAdicSet, ball: Ball, config: Config = DEFAULT_CONFIG) -> bool:
    """Does the set intersect the given ball?  Exact."""
    if ball.p != s.p:
        raise PreconditionError("ball prime differs from set prime")
    for b in s.balls:
        if b.contains_ball(ball) or ball.contains_ball(b):
            return True
    if any(ball.contains(x) for x in s.points):
        return True
    for q in s.seqs:
        if ball.contains(q.limit):
            return True                 # the tail enters every such ball
        last = q.start - 1
        d = vp(q.limit - ball.center, q.p)
        last = max(last, d - vp(q.scale, q.p))
        if any(ball.contains(q.element(n)) for n in range(q.start, last + 1)):
            return True
    return False


def some_elements(s: PAdicSet, per_component: int = 4) -> Iterator[Fraction]:
    """A few concrete elements of the set, for sampling and validation."""
    for b in s.balls:
        for t in range(per_component):
            yield Fraction(b.center + t * b.p ** b.depth)
    yield from s.points
    for q in s.seqs:
        for n in range(q.start, q.start + per_component):
            yield q.element(n)
        if q.include_limit:
            yield q.limit


# ---------------------------------------------------------------------------
# default rules: per-prime set prescriptions for almost all primes
# ---------------------------------------------------------------------------

class RuleKind(Enum):
    FULL = "full"
    UNITS_AND_SELF = "units+p"
    SINGLE_POWER = "power"
    FROM_INTEGER_SET = "intset"
    EMPTY = "empty"


@dataclass(frozen=True)
class DefaultRule:
    """A uniform recipe assigning a set in Z_p to every prime p."""

    kind: RuleKind
    exponent: Optional[int] = None
    integer_set: object = None          # adelic.IntegerSet when FROM_INTEGER_SET

    def __post_init__(self):
        if self.kind is RuleKind.SINGLE_POWER:
            if self.exponent is None or self.exponent < 1:
                raise PreconditionError("SINGLE_POWER needs an exponent >= 1")
        elif self.exponent is not None:
            raise PreconditionError(f"{self.kind} takes no exponent")
        if (self.integer_set is None) == (self.kind is RuleKind.FROM_INTEGER_SET):
            raise PreconditionError("integer_set is for FROM_INTEGER_SET only")

    def __str__(self):
        if self.kind is RuleKind.SINGLE_POWER:
            return f"power({self.exponent})"
        if self.kind is RuleKind.FROM_INTEGER_SET:
            return f"intset({self.integer_set})"
        return self.kind.value


FULL_RULE = DefaultRule(RuleKind.FULL)
UNITS_AND_SELF_RULE = DefaultRule(RuleKind.UNITS_AND_SELF)
EMPTY_RULE = DefaultRule(RuleKind.EMPTY)


def single_power_rule(exponent: int) -> DefaultRule:
    return DefaultRule(RuleKind.SINGLE_POWER, exponent=exponent)


def integer_set_rule(integer_set) -> DefaultRule:
    return DefaultRule(RuleKind.FROM_INTEGER_SET, integer_set=integer_set)


def instantiate(rule: DefaultRule, p: int,
                config: Config = DEFAULT_CONFIG) -> PAdicSet:
    """The concrete closed set the rule prescribes at prime p."""
    check_prime_arg(p)
    if rule.kind is RuleKind.FULL:
        return full_set(p)
    if rule.kind is RuleKind.EMPTY:
        return empty_set(p)
    if rule.kind is RuleKind.SINGLE_POWER:
        return PAdicSet(p, points=[Fraction(p) ** rule.exponent])
    if rule.kind is RuleKind.UNITS_AND_SELF:
        # p itself plus every unit: {p} with the p-1 unit cosets mod p
        return PAdicSet(p, balls=[Ball(p, r, 1) for r in range(1, p)],
                        points=[Fraction(p)])
    if rule.kind is RuleKind.FROM_INTEGER_SET:
        from .adelic import closure_in_zp
        return closure_in_zp(rule.integer_set, p, config)
    raise PreconditionError(f"unknown rule {rule.kind}")
