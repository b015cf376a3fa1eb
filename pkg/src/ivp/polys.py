"""Polynomials over Q and their p-adic valuation analysis.

RatPoly keeps an integer coefficient vector plus a positive denominator
with no common factor, so every evaluation is exact.  Root finding inside
a representable p-adic set combines exhaustive rational-root enumeration
(for the countable components) with a residue-lifting tree over balls
whose branches terminate in Hensel certificates or provably root-free
classes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError, ResourceLimitError
from .exact import (INFINITY, Rat, Valuation, check_prime_arg, is_finite,
                    primes_below, vp)
from .padic import Ball, PAdicSet, canonicalize, member


@dataclass(frozen=True)
class RatPoly:
    """g(X)/d with g integer-coefficient and gcd(content(g), d) = 1."""

    coeffs: tuple[int, ...]             # low to high; () only for the zero poly
    denominator: int

    def __init__(self, coeffs: Iterable[int], denominator: int = 1):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if denominator == 0:
            raise PreconditionError("denominator must be nonzero")
        if denominator < 0:
            coeffs = [-c for c in coeffs]
            denominator = -denominator
        content = 0
        for c in coeffs:
            content = math.gcd(content, c)
        g = math.gcd(content, denominator)
        if g > 1:
            coeffs = [c // g for c in coeffs]
            denominator //= g
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "denominator", denominator)

    @classmethod
    def from_fractions(cls, values: Iterable[Rat]) -> "RatPoly":
        values = [Fraction(v) for v in values]
        den = math.lcm(*(v.denominator for v in values)) if values else 1
        return cls([int(v * den) for v in values], den)

    @classmethod
    def constant(cls, value: Rat) -> "RatPoly":
        return cls.from_fractions([value])

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        # degree of the zero polynomial is -1 by convention
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def fraction_coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.denominator) for c in self.coeffs]

    def coefficient(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return Fraction(self.coeffs[i], self.denominator)
        return Fraction(0)

    def eval_at(self, x: Rat) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc / self.denominator

    def derivative(self) -> "RatPoly":
        return RatPoly([i * c for i, c in enumerate(self.coeffs)][1:],
                       self.denominator)

    def shifted(self, center: Rat) -> "RatPoly":
        """Taylor shift: the polynomial h with h(Y) = self(center + Y)."""
        center = Fraction(center)
        out = [Fraction(0)] * (len(self.coeffs) or 1)
        for c in reversed(self.fraction_coeffs()):
            for i in range(len(out) - 1, 0, -1):
                out[i] = out[i] * center + out[i - 1]
            out[0] = out[0] * center + c
        return RatPoly.from_fractions(out)

    def scaled_arg(self, factor: Rat) -> "RatPoly":
        """The polynomial h with h(X) = self(factor * X)."""
        factor = Fraction(factor)
        return RatPoly.from_fractions(
            [c * factor ** i for i, c in enumerate(self.fraction_coeffs())])

    def __add__(self, other: "RatPoly") -> "RatPoly":
        a, b = self.fraction_coeffs(), other.fraction_coeffs()
        if len(a) < len(b):
            a, b = b, a
        return RatPoly.from_fractions(
            [x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self) -> "RatPoly":
        return RatPoly([-c for c in self.coeffs], self.denominator)

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other) -> "RatPoly":
        if not isinstance(other, RatPoly):
            other = RatPoly.constant(other)
        if self.is_zero() or other.is_zero():
            return RatPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPoly(out, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RatPoly":
        if e < 0:
            raise PreconditionError("negative polynomial power")
        result = RatPoly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*X" if abs(c) != 1 else ("X" if c > 0 else "-X"))
            else:
                terms.append(f"{c}*X^{i}" if abs(c) != 1
                             else (f"X^{i}" if c > 0 else f"-X^{i}"))
        body = " + ".join(terms).replace("+ -", "- ")
        return body if self.denominator == 1 else f"({body})/{self.denominator}"


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    # dense division over Q; b != 0
    r = a[:]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(r) >= len(b) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(b):
            break
        coef = r[-1] / b[-1]
        shift = len(r) - len(b)
        q[shift] = coef
        for i, bc in enumerate(b):
            r[shift + i] -= coef * bc
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return q, r


def resultant(f: RatPoly, g: RatPoly) -> Fraction:
    """Res(f, g) by the Euclidean formula, exact over Q."""
    a = f.fraction_coeffs()
    b = g.fraction_coeffs()
    sign = 1
    acc = Fraction(1)
    while True:
        while a and a[-1] == 0:
            a.pop()
        while b and b[-1] == 0:
            b.pop()
        if not a or not b:
            return Fraction(0)
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return sign * acc * b[0] ** da
        _, r = _poly_divmod(a, b)
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        acc *= b[-1] ** (da - dr)
        if (da % 2) and (db % 2):
            sign = -sign
        a, b = b, r


# ---------------------------------------------------------------------------
# irreducibility certificates
# ---------------------------------------------------------------------------

class CertificateKind(Enum):
    DEGREE_ONE = "degree-one"
    NO_RATIONAL_ROOT = "no-rational-root"
    MOD_P_WITNESS = "mod-p-witness"
    CALLER_ASSERTED = "caller-asserted"


def _divisors(n: int, cap: int = 1 << 22) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    if n > cap ** 2:
        raise ResourceLimitError(f"cannot enumerate divisors of {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs: Sequence[int]) -> tuple[Fraction, ...]:
    """All rational roots of an integer polynomial (exact, exhaustive)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise PreconditionError("zero polynomial has every root")
    roots = []
    low = 0
    while coeffs[low] == 0:
        low += 1
    if low > 0:
        roots.append(Fraction(0))
        coeffs = coeffs[low:]
    a0, an = coeffs[0], coeffs[-1]
    seen = set()
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand in seen:
                    continue
                seen.add(cand)
                acc = 0
                for c in reversed(coeffs):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return tuple(sorted(roots))


def _mod_poly_mul(a, b, mod_poly, ell):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % ell
    # reduce modulo mod_poly (monic)
    d = len(mod_poly) - 1
    for i in range(len(out) - 1, d - 1, -1):
        c = out[i]
        if c:
            for j in range(d + 1):
                out[i - d + j] = (out[i - d + j] - c * mod_poly[j]) % ell
    out = out[:d]
    while out and out[-1] == 0:
        out.pop()
    return out or [0]


def _mod_poly_gcd(a, b, ell):
    a, b = [x % ell for x in a], [x % ell for x in b]
    while any(b):
        while b and b[-1] % ell == 0:
            b.pop()
        if not b:
            break
        inv = pow(b[-1], -1, ell)
        b = [x * inv % ell for x in b]
        while len(a) >= len(b) and any(a):
            while a and a[-1] % ell == 0:
                a.pop()
            if len(a) < len(b):
                break
            coef = a[-1]
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * bc) % ell
        a, b = b, a
    while a and a[-1] % ell == 0:
        a.pop()
    return a or [0]


def _irreducible_mod(coeffs: Sequence[int], ell: int) -> bool:
    """Rabin's test for irreducibility over F_ell."""
    f = [c % ell for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    d = len(f) - 1
    if d < 1:
        return False
    inv = pow(f[-1], -1, ell)
    monic = [c * inv % ell for c in f]

    def x_pow_ell_power(e):
        # X^(ell^e) mod monic by repeated Frobenius on X
        result = [0, 1] if d > 1 else [(-monic[0]) % ell]
        for _ in range(e):
            result = _frob(result)
        return result

    def _frob(poly):
        # poly(X)^ell mod monic via square and multiply on the exponent
        out = [1]
        base = poly
        e = ell
        while e:
            if e & 1:
                out = _mod_poly_mul(out, base, monic, ell)
            base = _mod_poly_mul(base, base, monic, ell)
            e >>= 1
        return out

    top = x_pow_ell_power(d)
    minus_x = top[:]
    while len(minus_x) < 2:
        minus_x.append(0)
    minus_x[1] = (minus_x[1] - 1) % ell
    if any(minus_x):
        return False                    # X^(ell^d) != X
    for r in {f for f in _prime_factors(d)}:
        partial = x_pow_ell_power(d // r)
        diff = partial[:]
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % ell
        g = _mod_poly_gcd(monic, diff, ell)
        if len(g) - 1 > 0:
            return False
    return True


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


@dataclass(frozen=True)
class IrreduciblePoly:
    """A primitive integer polynomial with an irreducibility certificate."""

    coeffs: tuple[int, ...]
    certificate: CertificateKind
    witness_prime: Optional[int] = None

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise PreconditionError("irreducible polynomials are nonconstant")
        if self.coeffs[-1] == 0:
            raise PreconditionError("leading coefficient must be nonzero")

    @classmethod
    def certify(cls, poly: RatPoly, config: Config = DEFAULT_CONFIG) -> "IrreduciblePoly":
        """Prove irreducibility over Q, or raise.

        Degree 1 is immediate; degrees 2 and 3 reduce to the rational root
        test; higher degrees search for a prime modulo which the reduction
        stays irreducible with the same degree.
        """
        coeffs = _primitive_part(poly, config)
        d = len(coeffs) - 1
        if d == 1:
            return cls(coeffs, CertificateKind.DEGREE_ONE)
        if d <= 3:
            if rational_roots(coeffs):
                raise PreconditionError(f"{poly} has a rational root")
            return cls(coeffs, CertificateKind.NO_RATIONAL_ROOT)
        for ell in primes_below(config.prime_scan_bound):
            if coeffs[-1] % ell == 0:
                continue
            if _irreducible_mod(coeffs, ell):
                return cls(coeffs, CertificateKind.MOD_P_WITNESS, ell)
        raise PreconditionError(
            f"no irreducibility witness below {config.prime_scan_bound} for {poly}; "
            "use assert_irreducible if irreducibility is known")

    @classmethod
    def assert_irreducible(cls, poly: RatPoly,
                           config: Config = DEFAULT_CONFIG) -> "IrreduciblePoly":
        """Trust the caller; squarefreeness is still verified."""
        coeffs = _primitive_part(poly, config)
        as_poly = RatPoly(coeffs)
        if resultant(as_poly, as_poly.derivative()) == 0:
            raise PreconditionError(f"{poly} is not squarefree")
        return cls(coeffs, CertificateKind.CALLER_ASSERTED)

    def as_ratpoly(self) -> RatPoly:
        return RatPoly(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval_at(self, x: Rat) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        return str(RatPoly(self.coeffs))


def _primitive_part(poly: RatPoly, config: Config) -> tuple[int, ...]:
    if poly.is_zero() or poly.degree < 1:
        raise PreconditionError("expected a nonconstant polynomial")
    if poly.degree > config.degree_cap:
        raise PreconditionError(
            f"degree {poly.degree} exceeds cap {config.degree_cap}")
    coeffs = list(poly.coeffs)          # content already stripped vs denominator
    content = 0
    for c in coeffs:
        content = math.gcd(content, c)
    coeffs = [c // content for c in coeffs]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# root certificates and the residue-lifting tree
# ---------------------------------------------------------------------------

class RootKind(Enum):
    EXACT_RATIONAL = "exact-rational"
    HENSEL = "hensel"


@dataclass(frozen=True)
class RootCertificate:
    """A certified root location of q inside a ball.

    For HENSEL certificates the inequalities q_val >= depth + dq_val and
    dq_val < depth at the recorded center force a unique root in the ball
    (Newton iteration from the center converges and stays inside).  For
    EXACT_RATIONAL certificates the root itself is stored.
    """

    kind: RootKind
    ball: Ball
    center: int
    q_val: Valuation                    # vp(q(center)); INFINITY for exact roots
    dq_val: int                         # vp(q'(center))
    value: Optional[Fraction] = None

    def revalidate(self, q: IrreduciblePoly) -> bool:
        p = self.ball.p
        if self.kind is RootKind.EXACT_RATIONAL:
            return (self.value is not None
                    and q.eval_at(self.value) == 0
                    and self.ball.contains(self.value))
        # Newton criterion at the recorded center, relative to the ball depth
        tv = vp(q.eval_int(self.center), p)
        sv = vp(_derivative_int(q).eval_int(self.center), p)
        return (tv == self.q_val and sv == self.dq_val and is_finite(tv)
                and sv < self.ball.depth and tv >= self.ball.depth + sv)


def _derivative_int(q: IrreduciblePoly) -> IrreduciblePoly:
    # not necessarily irreducible; reuse the evaluation helpers only
    coeffs = tuple(i * c for i, c in enumerate(q.coeffs))[1:]
    obj = object.__new__(IrreduciblePoly)
    object.__setattr__(obj, "coeffs", coeffs)
    object.__setattr__(obj, "certificate", CertificateKind.CALLER_ASSERTED)
    object.__setattr__(obj, "witness_prime", None)
    return obj


def _tree_events(q: IrreduciblePoly, ball: Ball, config: Config):
    """Walk residue classes inside the ball, yielding per-class facts.

    Yields ("dead", r, m, t)   : vp(q(x)) = t < m for every x = r mod p^m,
           ("exact", r, m, s)  : r is a root, unique in its class,
           ("hensel", r, m, t, s): unique (irrational or unrecognized) root
                                   in the class, by the Newton criterion.
    Termination relies on q squarefree: vp(resultant(q, q')) caps the depth.
    """
    p = ball.p
    qq = q.as_ratpoly()
    res = resultant(qq, qq.derivative())
    if res == 0:
        raise PreconditionError(f"{q} is not squarefree")
    rv = vp(res, p)
    assert is_finite(rv)
    depth_cap = ball.depth + 2 * rv + 8
    dq = _derivative_int(q)
    stack = [(ball.center, ball.depth)]
    visited = 0
    while stack:
        r, m = stack.pop()
        visited += 1
        if visited > config.residue_cap:
            raise ResourceLimitError(
                f"root scan visited over {config.residue_cap} classes",
                visited, config.residue_cap)
        fr = q.eval_int(r)
        if fr == 0:
            s = vp(dq.eval_int(r), p)
            if not is_finite(s):
                raise PreconditionError(f"{q} has a repeated root at {r}")
            if m >= s + 1:
                yield ("exact", r, m, s)
                continue
        else:
            t = vp(fr, p)
            if t < m:
                yield ("dead", r, m, t)
                continue
            s = vp(dq.eval_int(r), p)
            if is_finite(s) and s < m and t >= m + s:
                yield ("hensel", r, m, t, s)
                continue
        if m >= depth_cap:
            raise ResourceLimitError(
                f"root scan exceeded depth {depth_cap} at class {r} mod {p}^{m}",
                m, depth_cap)
        base = p ** m
        for j in range(p):
            stack.append((r + j * base, m + 1))


def roots_in_set(q: IrreduciblePoly, s: PAdicSet,
                 config: Config = DEFAULT_CONFIG) -> tuple[RootCertificate, ...]:
    """Every root of q inside the set, each with a checkable certificate.

    Points, sequence elements and limits are rational, so roots there come
    from exhaustive rational-root enumeration; balls are scanned by the
    residue-lifting tree.  The returned list is complete.
    """
    p = s.p
    s = canonicalize(s, config)
    dq = _derivative_int(q)
    q_rationals = [x for x in rational_roots(q.coeffs) if vp(x, p) >= 0]
    certs: list[RootCertificate] = []
    covered_rationals: set[Fraction] = set()

    for ball in s.balls:
        for event in _tree_events(q, ball, config):
            if event[0] == "dead":
                continue
            if event[0] == "exact":
                _, r, m, sv = event
                certs.append(RootCertificate(
                    RootKind.EXACT_RATIONAL, Ball(p, r, m), r,
                    INFINITY, sv, Fraction(r)))
                covered_rationals.add(Fraction(r))
                continue
            _, r, m, tv, sv = event
            # a certified class may still hold a rational root; recognize it
            found = next((x for x in q_rationals if Ball(p, r, m).contains(x)),
                         None)
            if found is not None:
                certs.append(RootCertificate(
                    RootKind.EXACT_RATIONAL, Ball(p, r, m), r, tv, sv, found))
                covered_rationals.add(found)
            else:
                certs.append(RootCertificate(
                    RootKind.HENSEL, Ball(p, r, m), r, tv, sv))

    for root in q_rationals:
        if root in covered_rationals or not member(root, s):
            continue
        sv = vp(dq.eval_at(root), p)
        if not is_finite(sv):
            raise PreconditionError(f"{q} has a repeated root at {root}")
        depth = sv + 1
        ball = Ball(p, root, depth)
        certs.append(RootCertificate(
            RootKind.EXACT_RATIONAL, ball, ball.center, INFINITY, sv, root))
    certs.sort(key=lambda c: (c.ball.depth, c.ball.center, c.kind.value))
    return tuple(certs)


# ---------------------------------------------------------------------------
# exact maximum valuation over a set
# ---------------------------------------------------------------------------

def max_valuation_witness(q: IrreduciblePoly, s: PAdicSet,
                          config: Config = DEFAULT_CONFIG):
    """(sup of vp(q(x)) over x in s, witness attaining it).

    The supremum is INFINITY exactly when q has a root in the closure of
    the set; then the witness is None.  Otherwise the supremum is finite,
    attained, and returned with an attaining element.
    """
    p = s.p
    s = canonicalize(s, config)
    if s.is_empty():
        raise PreconditionError("maximum valuation over the empty set")
    if roots_in_set(q, closure_of(s), config):
        return INFINITY, None
    best: Optional[int] = None
    witness: Optional[Fraction] = None

    def consider(val: int, x: Fraction):
        nonlocal best, witness
        if best is None or val > best:
            best, witness = val, x

    for x in s.points:
        v = vp(q.eval_at(x), p)
        assert is_finite(v)
        consider(v, x)
    for seq in s.seqs:
        seq = seq.normalized()
        shifted = RatPoly(q.coeffs).shifted(seq.limit)
        b0 = shifted.coefficient(0)     # q(limit) != 0: no roots in closure
        v0 = vp(b0, p)
        assert is_finite(v0)
        av = vp(seq.scale, p)
        stable = 0
        for i in range(1, shifted.degree + 1):
            bi = shifted.coefficient(i)
            if bi == 0:
                continue
            vi = vp(bi, p)
            # smallest n with vi + i*(av + n) > v0
            need = math.ceil((v0 + 1 - vi) / i) - av
            stable = max(stable, need)
        consider(v0, seq.element(max(stable, 0)))
        for n in range(0, max(stable, 0)):
            v = vp(q.eval_at(seq.element(n)), p)
            assert is_finite(v)
            consider(v, seq.element(n))
    for ball in s.balls:
        for event in _tree_events(q, ball, config):
            if event[0] != "dead":
                raise PreconditionError("unexpected root during max valuation")
            _, r, m, t = event
            consider(t, Fraction(r))
    assert best is not None
    return best, witness


def max_valuation(q: IrreduciblePoly, s: PAdicSet,
                  config: Config = DEFAULT_CONFIG) -> Valuation:
    """sup of vp(q(x)) over the set; INFINITY iff q has a root there."""
    return max_valuation_witness(q, s, config)[0]


def closure_of(s: PAdicSet) -> PAdicSet:
    from .padic import closure
    return closure(s)


# ---------------------------------------------------------------------------
# residue tables
# ---------------------------------------------------------------------------

def reduce_mod(f: RatPoly, p: int, m: int,
               config: Config = DEFAULT_CONFIG) -> tuple[int, ...]:
    """Values of the numerator of f over all residues mod p^m.

    Entry r is g(r) mod p^m where f = g/d.  Requires vp(d) <= m so the
    table is meaningful for deciding vp(f) >= 0 questions at depth m.
    """
    check_prime_arg(p)
    if m < 0:
        raise PreconditionError("negative depth")
    if vp(f.denominator, p) > m:
        raise PreconditionError(
            f"denominator {f.denominator} has {p}-valuation above {m}")
    modulus = p ** m
    if modulus > config.residue_cap:
        raise ResourceLimitError(
            f"residue table of size {modulus}", modulus, config.residue_cap)
    table = []
    for r in range(modulus):
        acc = 0
        for c in reversed(f.coeffs):
            acc = (acc * r + c) % modulus
        table.append(acc)
    return tuple(table)
