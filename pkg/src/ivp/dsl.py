"""Text forms for sets, polynomials, integer sets, rings and
representations.

The set grammar is a |-separated union of components:

    ball(2; 5, 3)              5 + 8 Z_2
    pts(3; 1/2, 7)             explicit points
    seq(2; 0, 1, 0, +lim)      {0 + 1*2^n : n >= 0} with its limit
    full(5)  empty(5)          everything / nothing
    units+p(3)                 the units together with 3 itself
    power(5; 2)                the single point 25

Polynomials use ordinary expression syntax over X, e.g. (X^2 - X)/2.
Integer sets read like "Z \\ (65 mod 72) U {9}" or "{2, 3, 5}".  Rings
and representations are small JSON objects whose leaves use the grammars
above; parse_ring accepts either the JSON text itself or @path to a file.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .adelic import AdelicCandidate, IntegerSet
from .config import DEFAULT_CONFIG, Config
from .errors import PreconditionError
from .exact import Congruence
from .overrings import Representation, RingSpec
from .padic import (Ball, DefaultRule, PAdicSet, RuleKind, SeqWithLimit,
                    instantiate, EMPTY_RULE, FULL_RULE, UNITS_AND_SELF_RULE,
                    integer_set_rule, single_power_rule)
from .polys import IrreduciblePoly, RatPoly

__all__ = [
    "parse_rational", "parse_set", "format_set", "parse_poly",
    "parse_irreducible", "parse_intset", "format_intset", "parse_rule",
    "format_rule", "parse_candidate", "parse_family", "parse_ring",
    "format_ring", "parse_representation", "format_representation",
]


class ParseError(PreconditionError):
    pass


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# p-adic sets
# ---------------------------------------------------------------------------

_COMPONENT = re.compile(r"^\s*([a-z+]+)\s*\((.*)\)\s*$", re.DOTALL)


def _args(body: str) -> list[str]:
    parts = [a.strip() for a in body.replace(";", ",").split(",")]
    return [a for a in parts if a]


def parse_set(text: str, config: Config = DEFAULT_CONFIG) -> PAdicSet:
    balls, points, seqs = [], [], []
    prime = None
    for chunk in text.split("|"):
        m = _COMPONENT.match(chunk)
        if not m:
            raise ParseError(f"bad set component {chunk!r}")
        name, args = m.group(1), _args(m.group(2))
        if not args:
            raise ParseError(f"component {name} needs a prime")
        p = int(args[0])
        if prime is None:
            prime = p
        elif prime != p:
            raise ParseError(f"mixed primes {prime} and {p} in one set")
        rest = args[1:]
        if name == "ball":
            if len(rest) != 2:
                raise ParseError("ball takes (p; center, depth)")
            balls.append(Ball(p, parse_rational(rest[0]), int(rest[1])))
        elif name == "pts":
            points.extend(parse_rational(a) for a in rest)
        elif name == "seq":
            if len(rest) != 4 or rest[3] not in ("+lim", "-lim"):
                raise ParseError(
                    "seq takes (p; limit, scale, start, +lim|-lim)")
            seqs.append(SeqWithLimit(p, parse_rational(rest[0]),
                                     parse_rational(rest[1]), int(rest[2]),
                                     rest[3] == "+lim"))
        elif name == "full":
            balls.append(Ball(p, 0, 0))
        elif name == "empty":
            pass
        elif name == "units+p":
            part = instantiate(UNITS_AND_SELF_RULE, p, config)
            balls.extend(part.balls)
            points.extend(part.points)
        elif name == "power":
            if len(rest) != 1:
                raise ParseError("power takes (p; exponent)")
            points.append(Fraction(p) ** int(rest[0]))
        else:
            raise ParseError(f"unknown set component {name!r}")
    if prime is None:
        raise ParseError("empty set expression; use empty(p)")
    return PAdicSet(prime, balls, points, seqs)


def format_set(s: PAdicSet) -> str:
    return str(s)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[Xx]|\*\*|[()+\-*/^])")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"bad character in polynomial: {text[pos:]!r}")
            break
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _PolyParser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expr(self) -> RatPoly:
        left = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self) -> RatPoly:
        left = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            right = self.factor()
            if op == "*":
                left = left * right
            else:
                if right.degree > 0 or right.is_zero():
                    raise ParseError("division only by nonzero constants")
                left = left * RatPoly.constant(1 / right.eval_at(0))
        return left

    def factor(self) -> RatPoly:
        if self.peek() == "-":
            self.take()
            return RatPoly.constant(-1) * self.factor()
        if self.peek() == "+":
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exp = self.take()
            if exp is None or not exp.isdigit():
                raise ParseError("exponent must be a literal integer")
            return base ** int(exp)
        return base

    def atom(self) -> RatPoly:
        tok = self.take()
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise ParseError("unbalanced parentheses")
            return inner
        if tok in ("X", "x"):
            return RatPoly.x()
        if tok is not None and tok.isdigit():
            return RatPoly.constant(int(tok))
        raise ParseError(f"unexpected token {tok!r} in polynomial")


def parse_poly(text: str) -> RatPoly:
    parser = _PolyParser(_tokenize(text))
    poly = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input {parser.toks[parser.i:]!r}")
    return poly


def parse_irreducible(text: str,
                      config: Config = DEFAULT_CONFIG) -> IrreduciblePoly:
    return IrreduciblePoly.certify(parse_poly(text), config)


# ---------------------------------------------------------------------------
# integer sets
# ---------------------------------------------------------------------------

_BRACES = re.compile(r"^\{([^}]*)\}")
_EXCLUDE = re.compile(r"^\\\s*\(\s*(-?\d+)\s+mod\s+(\d+)\s*\)")


def parse_intset(text: str) -> IntegerSet:
    rest = text.strip()
    base = None
    if rest.startswith("Z"):
        rest = rest[1:].lstrip()
    else:
        m = _BRACES.match(rest)
        if not m:
            raise ParseError(f"integer set must start with Z or {{...}}: {text!r}")
        base = _int_list(m.group(1))
        rest = rest[m.end():].lstrip()
    excluded = []
    while rest.startswith("\\"):
        m = _EXCLUDE.match(rest)
        if not m:
            raise ParseError(f"bad exclusion near {rest!r}")
        excluded.append(Congruence(int(m.group(1)), int(m.group(2))))
        rest = rest[m.end():].lstrip()
    extra: tuple[int, ...] = ()
    if rest.startswith("U"):
        rest = rest[1:].lstrip()
        m = _BRACES.match(rest)
        if not m:
            raise ParseError(f"expected {{...}} after U in {text!r}")
        extra = _int_list(m.group(1))
        rest = rest[m.end():].lstrip()
    if rest:
        raise ParseError(f"trailing input in integer set: {rest!r}")
    return IntegerSet(base=base, excluded=tuple(excluded), extra=extra)


def _int_list(body: str) -> tuple[int, ...]:
    body = body.strip()
    if not body:
        return ()
    return tuple(int(x.strip()) for x in body.split(","))


def format_intset(e: IntegerSet) -> str:
    return str(e)


# ---------------------------------------------------------------------------
# default rules
# ---------------------------------------------------------------------------

_RULE = re.compile(r"^\s*([a-z+]+)\s*(?:\((.*)\))?\s*$", re.DOTALL)


def parse_rule(text: str) -> DefaultRule:
    m = _RULE.match(text)
    if not m:
        raise ParseError(f"bad rule {text!r}")
    name, body = m.group(1), m.group(2)
    if name == "full" and body is None:
        return FULL_RULE
    if name == "empty" and body is None:
        return EMPTY_RULE
    if name == "units+p" and body is None:
        return UNITS_AND_SELF_RULE
    if name == "power" and body is not None:
        return single_power_rule(int(body.strip()))
    if name == "intset" and body is not None:
        return integer_set_rule(parse_intset(body))
    raise ParseError(f"unknown rule {text!r}")


def format_rule(rule: DefaultRule) -> str:
    return str(rule)


# ---------------------------------------------------------------------------
# adelic candidates and per-prime families
# ---------------------------------------------------------------------------

def parse_candidate(text: str) -> AdelicCandidate:
    """"2: 65, 3: 65" -> the candidate with those coordinates."""
    values = {}
    for part in re.split(r"[;,]", text):
        part = part.strip()
        if not part:
            continue
        p_txt, _, val = part.partition(":")
        if not val:
            raise ParseError(f"candidate entries look like 'p: value': {part!r}")
        values[int(p_txt)] = parse_rational(val)
    if not values:
        raise ParseError("empty candidate")
    return AdelicCandidate.of(values)


def _split_outside_parens(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_family(text: str,
                 config: Config = DEFAULT_CONFIG) -> dict[int, PAdicSet]:
    """"2: full(2); 3: pts(3; 9)" -> per-prime sets."""
    out = {}
    for part in _split_outside_parens(text, ";"):
        part = part.strip()
        if not part:
            continue
        p_txt, _, body = part.partition(":")
        if not body:
            raise ParseError(f"family entries look like 'p: set': {part!r}")
        p = int(p_txt)
        s = parse_set(body, config)
        if s.p != p:
            raise ParseError(f"set for prime {p} uses prime {s.p}")
        out[p] = s
    if not out:
        raise ParseError("empty family")
    return out


# ---------------------------------------------------------------------------
# rings and representations (JSON with DSL leaves)
# ---------------------------------------------------------------------------

def _load_json(text_or_obj):
    if isinstance(text_or_obj, dict):
        return text_or_obj
    text = text_or_obj.strip()
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None


def _parse_prime_sets(entries, config: Config) -> dict[int, PAdicSet]:
    """Accept either a mapping {"2": "full(2)"} or a list of
    {"p": 2, "set": "full(2)"} entries (the list is what format_ring
    emits, the mapping is the convenient hand-written form)."""
    if isinstance(entries, dict):
        entries = [(int(k), v) for k, v in entries.items()]
    out = {}
    for entry in entries or []:
        if isinstance(entry, dict):
            p, body = int(entry["p"]), entry["set"]
        else:
            p, body = int(entry[0]), entry[1]
        s = parse_set(body, config)
        if s.p != p:
            raise ParseError(f"set listed for {p} uses prime {s.p}")
        out[p] = s
    return out


def parse_ring(text_or_obj, config: Config = DEFAULT_CONFIG) -> RingSpec:
    obj = _load_json(text_or_obj)
    unknown = set(obj) - {"exceptional", "default"}
    if unknown:
        raise ParseError(f"unknown ring keys {sorted(unknown)}")
    return RingSpec(_parse_prime_sets(obj.get("exceptional"), config),
                    parse_rule(obj.get("default", "full")), config)


def format_ring(r: RingSpec) -> dict:
    return {
        "exceptional": [{"p": p, "set": format_set(s)}
                        for p, s in r.exceptional],
        "default": format_rule(r.default),
    }


def parse_representation(text_or_obj,
                         config: Config = DEFAULT_CONFIG) -> Representation:
    obj = _load_json(text_or_obj)
    unknown = set(obj) - {"unitary", "default", "nonunitary", "all_min"}
    if unknown:
        raise ParseError(f"unknown representation keys {sorted(unknown)}")
    polys = [parse_irreducible(q, config) for q in obj.get("nonunitary", [])]
    return Representation(_parse_prime_sets(obj.get("unitary"), config),
                          parse_rule(obj.get("default", "full")),
                          nonunitary=polys,
                          all_min=bool(obj.get("all_min", False)),
                          config=config)


def format_representation(rep: Representation) -> dict:
    return {
        "unitary": [{"p": p, "set": format_set(s)} for p, s in rep.unitary],
        "default": format_rule(rep.default),
        "nonunitary": [str(q) for q in rep.nonunitary],
        "all_min": rep.all_min,
    }
