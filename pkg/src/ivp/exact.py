"""Exact integer/rational helpers: p-adic valuations, CRT, primality.

All arithmetic is exact.  Rationals are ``fractions.Fraction`` (always
reduced, positive denominator); valuations are plain ints except for the
single INFINITY sentinel used for the valuation of zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError

Rat = Union[int, Fraction]


class _Infinity:
    """Sentinel for the valuation of 0; compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("ivp-infinity")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("negated infinity is not representable")

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()
Valuation = Union[int, _Infinity]


def is_finite(v: Valuation) -> bool:
    return v is not INFINITY


def check_prime_arg(p: int) -> None:
    if not isinstance(p, int) or p < 2 or not is_prime(p):
        raise PreconditionError(f"expected a prime, got {p!r}")


def vp(x: Rat, p: int) -> Valuation:
    """p-adic valuation of a rational; vp(0) is INFINITY."""
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return _int_vp(x.numerator, p) - _int_vp(x.denominator, p)


def _int_vp(n: int, p: int) -> int:
    # n != 0
    n = abs(n)
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def rational_mod(x: Rat, modulus: int) -> int:
    """Reduce a rational with denominator prime to `modulus` into [0, modulus).

    The denominator is inverted modulo `modulus`, so the result is the
    unique residue r with x = r in Z/modulus under the canonical map.
    """
    if modulus < 1:
        raise PreconditionError(f"modulus must be positive, got {modulus}")
    if modulus == 1:
        return 0
    x = Fraction(x)
    den = x.denominator
    if math.gcd(den, modulus) != 1:
        raise PreconditionError(
            f"denominator {den} not invertible mod {modulus}")
    return (x.numerator * pow(den, -1, modulus)) % modulus


@dataclass(frozen=True)
class Congruence:
    """The arithmetic progression residue + modulus*Z."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise PreconditionError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def contains(self, n: int) -> bool:
        return n % self.modulus == self.residue

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


def crt_solve(congruences: Sequence[Congruence]) -> Optional[Congruence]:
    """Combine congruences into one, or None when they are inconsistent.

    Moduli need not be coprime; compatibility is checked pairwise through
    the usual gcd condition while folding.
    """
    residue, modulus = 0, 1
    for c in congruences:
        g = math.gcd(modulus, c.modulus)
        if (c.residue - residue) % g != 0:
            return None
        lcm = modulus // g * c.modulus
        # lift: residue + modulus*t = c.residue (mod c.modulus)
        t = ((c.residue - residue) // g * pow(modulus // g, -1, c.modulus // g)) % (c.modulus // g)
        residue = (residue + modulus * t) % lcm
        modulus = lcm
    return Congruence(residue, modulus)


# Deterministic Miller-Rabin witnesses: correct for all n < 3.3 * 10**24,
# which covers the 64-bit guarantee advertised by Config.primality_bits.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int, config: Config = DEFAULT_CONFIG) -> bool:
    """Deterministic primality for n below the configured bit bound."""
    if n >= 1 << (config.primality_bits + 17):
        # the witness set is proven out to ~2**81; refuse beyond that
        raise PreconditionError(
            f"{n} exceeds the deterministic primality bound")
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int) -> list[int]:
    """All primes < bound by sieve."""
    if bound <= 2:
        return []
    sieve = bytearray([1]) * bound
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(bound) if sieve[i]]


def iter_primes() -> Iterator[int]:
    """Unbounded prime iterator (trial division against prior primes)."""
    found: list[int] = []
    n = 2
    while True:
        if all(n % q for q in found if q * q <= n):
            found.append(n)
            yield n
        n += 1
