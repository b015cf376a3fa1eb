"""Command-line front end.

Every query subcommand prints a human-readable answer (or JSON with
--json) and exits 0 for a definite result, 2 for an honest unknown, and
1 for errors including violated preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import adelic, dsl, membership, overrings, padic, polys
from .config import DEFAULT_CONFIG, Config, load_config_file
from .errors import IvpError
from .exact import INFINITY, is_finite
from .overrings import Decision, TriState


def _bool_result(flag: bool, **extra):
    return 0, {"answer": bool(flag), **extra}, ["yes" if flag else "no"]


def _tristate_result(ts: TriState, **extra):
    code = 2 if ts.is_unknown else 0
    payload = {"answer": ts.decision.value, "reason": ts.reason, **extra}
    if ts.bound is not None:
        payload["bound"] = ts.bound
    lines = [str(ts)]
    if ts.payload is not None:
        payload["witness"] = str(ts.payload)
        lines.append(f"witness: {ts.payload}")
    return code, payload, lines


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def _cmd_member(args, config):
    s = dsl.parse_set(args.set, config)
    return _bool_result(padic.member(dsl.parse_rational(args.x), s))


def _cmd_closure(args, config):
    s = padic.closure(dsl.parse_set(args.set, config))
    return 0, {"closure": dsl.format_set(s)}, [dsl.format_set(s)]


def _cmd_subset(args, config):
    a = dsl.parse_set(args.a, config)
    b = dsl.parse_set(args.b, config)
    return _bool_result(padic.is_subset(a, b, config))


def _cmd_dense(args, config):
    e = dsl.parse_set(args.e, config)
    f = dsl.parse_set(args.f, config)
    return _bool_result(padic.is_dense_in(e, f, config))


def _cmd_isolated(args, config):
    s = padic.canonicalize(dsl.parse_set(args.set, config), config)
    iso = padic.isolated_points(s, config)
    payload = {
        "explicit": [str(x) for x in iso.explicit],
        "tails": [{"seq": str(t.seq), "from": t.from_n} for t in iso.tails],
    }
    lines = [f"explicit: {', '.join(map(str, iso.explicit)) or '(none)'}"]
    for t in iso.tails:
        lines.append(f"tail: {t.seq} from n={t.from_n}")
    return 0, payload, lines


def _cmd_roots(args, config):
    q = dsl.parse_irreducible(args.poly, config)
    s = dsl.parse_set(args.set, config)
    certs = polys.roots_in_set(q, s, config)
    payload = {"count": len(certs), "certificates": []}
    lines = [f"{len(certs)} root(s)"]
    for c in certs:
        entry = {"kind": c.kind.value, "ball": str(c.ball)}
        if c.value is not None:
            entry["value"] = str(c.value)
        payload["certificates"].append(entry)
        lines.append(f"  {c.kind.value} in {c.ball}"
                     + (f" value {c.value}" if c.value is not None else ""))
    return 0, payload, lines


def _cmd_maxval(args, config):
    q = dsl.parse_irreducible(args.poly, config)
    s = dsl.parse_set(args.set, config)
    value, witness = polys.max_valuation_witness(q, s, config)
    if not is_finite(value):
        return 0, {"value": "infinity"}, ["infinity (root in the closure)"]
    payload = {"value": value}
    lines = [str(value)]
    if witness is not None:
        payload["witness"] = str(witness)
        lines.append(f"attained at {witness}")
    return 0, payload, lines


def _cmd_intval(args, config):
    f = dsl.parse_poly(args.poly)
    s = dsl.parse_set(args.set, config)
    return _bool_result(membership.is_integer_valued(f, s, config))


def _cmd_witness(args, config):
    q = dsl.parse_irreducible(args.poly, config)
    family = dsl.parse_family(args.family, config)
    w = membership.witness_rational_function(q, family, config)
    payload = {"witness": str(w),
               "exponents": {str(p): e for p, e in w.exponents}}
    return 0, payload, [str(w)]


def _cmd_separate(args, config):
    s = dsl.parse_set(args.set, config)
    f = membership.separating_polynomial(s, dsl.parse_rational(args.alpha),
                                         config)
    return 0, {"polynomial": str(f)}, [str(f)]


def _cmd_ring_eq(args, config):
    r1 = dsl.parse_ring(args.r1, config)
    r2 = dsl.parse_ring(args.r2, config)
    return _tristate_result(overrings.ring_equal(r1, r2, config))


def _cmd_ring_contains(args, config):
    r1 = dsl.parse_ring(args.r1, config)
    r2 = dsl.parse_ring(args.r2, config)
    return _tristate_result(overrings.ring_contains(r1, r2, config))


def _cmd_ring_of(args, config):
    rep = dsl.parse_representation(args.rep, config)
    res = overrings.ring_of(rep, config)
    payload = {"ring": dsl.format_ring(res.spec),
               "polynomial": res.polynomial.decision.value,
               "reason": res.polynomial.reason}
    lines = [json.dumps(dsl.format_ring(res.spec)),
             f"polynomial: {res.polynomial}"]
    if res.escape is not None:
        payload["escape"] = str(res.escape)
        lines.append(f"escape: {res.escape}")
    code = 2 if res.polynomial.is_unknown else 0
    return code, payload, lines


def _cmd_rep_eq(args, config):
    rep = dsl.parse_representation(args.rep, config)
    ring = dsl.parse_ring(args.ring, config)
    return _tristate_result(overrings.representation_equals(rep, ring, config))


def _cmd_unitary_contains(args, config):
    rep = dsl.parse_representation(args.rep, config)
    return _bool_result(overrings.unitary_contains(
        rep, args.p, dsl.parse_rational(args.alpha), config))


def _cmd_nonunitary_contains(args, config):
    rep = dsl.parse_representation(args.rep, config)
    q = dsl.parse_irreducible(args.poly, config)
    return _tristate_result(overrings.nonunitary_contains(rep, q, config))


def _cmd_superfluous(args, config):
    rep = dsl.parse_representation(args.rep, config)
    if args.poly is not None:
        q = dsl.parse_irreducible(args.poly, config)
        return _tristate_result(overrings.superfluous_nonunitary(rep, q, config))
    if args.p is None or args.alpha is None:
        raise IvpError("superfluous needs either --poly or both --p and --alpha")
    return _bool_result(overrings.superfluous_unitary(
        rep, args.p, dsl.parse_rational(args.alpha), config))


def _cmd_min_ext(args, config):
    ring = dsl.parse_ring(args.ring, config)
    ext = overrings.minimal_extensions(ring, args.p, config)
    payload = {
        "explicit": [{"value": str(x), "ring": dsl.format_ring(r)}
                     for x, r in ext.explicit],
        "families": [{"seq": str(f.seq), "from": f.from_n}
                     for f in ext.families],
    }
    lines = [f"count: {ext.count_description()}"]
    for x, _ in ext.explicit:
        lines.append(f"  drop {x}")
    for f in ext.families:
        lines.append(f"  drop any element of {f.seq} from n={f.from_n}")
    return 0, payload, lines


def _cmd_irredundant(args, config):
    ring = dsl.parse_ring(args.ring, config)
    return _tristate_result(overrings.has_irredundant_representation(ring, config))


def _cmd_localize(args, config):
    ring = dsl.parse_ring(args.ring, config)
    local = overrings.localize(ring, args.p, config)
    return 0, {"ring": dsl.format_ring(local)}, [json.dumps(dsl.format_ring(local))]


def _cmd_globalize(args, config):
    family = dsl.parse_family(args.family, config)
    rule = dsl.parse_rule(args.default)
    ring = overrings.globalize(family, rule, config)
    return 0, {"ring": dsl.format_ring(ring)}, [json.dumps(dsl.format_ring(ring))]


def _cmd_simple(args, config):
    ring = dsl.parse_ring(args.ring, config)
    ts, witness = overrings.is_simple_integer_set_ring(ring, config)
    extra = {}
    if witness is not None:
        extra["set"] = witness.description
    code, payload, lines = _tristate_result(ts, **extra)
    if witness is not None:
        lines.append(f"set: {witness.description}")
    return code, payload, lines


def _cmd_adele_prod(args, config):
    e = dsl.parse_intset(args.intset)
    x = dsl.parse_candidate(args.candidate)
    return _bool_result(adelic.product_closure_member(e, x, config))


def _cmd_adele_hat(args, config):
    e = dsl.parse_intset(args.intset)
    x = dsl.parse_candidate(args.candidate)
    return _bool_result(adelic.adelic_closure_member(e, x, config))


def _cmd_adele_diff(args, config):
    e = dsl.parse_intset(args.intset)
    w = adelic.closures_differ(e, config)
    if w is None:
        return 0, {"differ": False}, ["closures agree on all canonical candidates"]
    return 0, {"differ": True, "candidate": str(w)}, [f"candidate: {w}"]


def _cmd_selftest(args, config):
    from fractions import Fraction as F
    checks = 0
    s = dsl.parse_set("seq(2; 0, 1, 0, -lim)", config)
    assert not padic.member(F(0), s) and padic.member(F(0), padic.closure(s))
    checks += 1
    f = dsl.parse_poly("(X^2 - X)/2")
    assert membership.is_integer_valued(f, padic.full_set(2), config)
    checks += 1
    q = dsl.parse_irreducible("X^2 - 17", config)
    assert len(polys.roots_in_set(q, padic.full_set(2), config)) == 2
    assert not polys.roots_in_set(dsl.parse_irreducible("X^2 + 1", config),
                                  padic.full_set(2), config)
    checks += 1
    e = dsl.parse_intset("Z \\ (65 mod 72)")
    cand = dsl.parse_candidate("2: 65, 3: 65")
    assert adelic.product_closure_member(e, cand, config)
    assert not adelic.adelic_closure_member(e, cand, config)
    checks += 1
    intz = overrings.RingSpec.integers()
    assert overrings.ring_contains(overrings.RingSpec.primes_ring(),
                                   intz, config).is_yes
    checks += 1
    return 0, {"checks": checks}, [f"selftest passed ({checks} checks)"]


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # exit 1 on usage errors; 2 is reserved for honest unknowns
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--config", metavar="PATH", default=argparse.SUPPRESS,
                        help="key=value file overriding resource limits")
    common.add_argument("--residue-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--degree-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--prime-scan-bound", type=int,
                        default=argparse.SUPPRESS)

    parser = _Parser(
        prog="ivp",
        parents=[common],
        description="exact computations with p-adic value sets, their "
                    "integer-valued polynomials, and the associated rings")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, **arguments):
        p = sub.add_parser(name, help=help_text, parents=[common])
        for arg, kwargs in arguments.items():
            p.add_argument(f"--{arg.replace('_', '-')}", **kwargs)
        p.set_defaults(handler=handler)
        return p

    req = {"required": True}
    add("member", _cmd_member, "is x in the set",
        set=req, x=req)
    add("closure", _cmd_closure, "canonical topological closure",
        set=req)
    add("subset", _cmd_subset, "is a a subset of b",
        a=req, b=req)
    add("dense", _cmd_dense, "is e dense in f",
        e=req, f=req)
    add("isolated", _cmd_isolated, "isolated points of a closed set",
        set=req)
    add("roots", _cmd_roots, "certified roots of q inside the set",
        poly=req, set=req)
    add("maxval", _cmd_maxval, "supremum of vp(q) over the set",
        poly=req, set=req)
    add("intval", _cmd_intval, "is f integer valued on the set",
        poly=req, set=req)
    add("witness", _cmd_witness, "escape rational function for q and a family",
        poly=req, family=req)
    add("separate", _cmd_separate, "polynomial separating alpha from the set",
        set=req, alpha=req)
    add("ring-of", _cmd_ring_of, "ring described by a representation",
        rep=req)
    add("ring-eq", _cmd_ring_eq, "are two rings equal",
        r1=req, r2=req)
    add("ring-contains", _cmd_ring_contains, "is r1 a superset of r2",
        r1=req, r2=req)
    add("rep-eq", _cmd_rep_eq, "does the representation describe the ring",
        rep=req, ring=req)
    add("unitary-contains", _cmd_unitary_contains,
        "is the valuation ring at (p, alpha) forced",
        rep=req, p={"required": True, "type": int}, alpha=req)
    add("nonunitary-contains", _cmd_nonunitary_contains,
        "is the valuation ring of q forced",
        rep=req, poly=req)
    add("superfluous", _cmd_superfluous, "can the factor be dropped",
        rep=req, p={"type": int}, alpha={}, poly={})
    add("min-ext", _cmd_min_ext, "minimal ring extensions at p",
        ring=req, p={"required": True, "type": int})
    add("irredundant", _cmd_irredundant,
        "does an irredundant representation exist",
        ring=req)
    add("localize", _cmd_localize, "keep only the constraint at p",
        ring=req, p={"required": True, "type": int})
    add("globalize", _cmd_globalize, "assemble a ring from per-prime sets",
        family=req, default={"default": "empty"})
    add("simple", _cmd_simple, "is the ring cut out by one set of integers",
        ring=req)
    add("adele-prod", _cmd_adele_prod,
        "candidate in the product of per-prime closures",
        intset=req, candidate=req)
    add("adele-hat", _cmd_adele_hat,
        "candidate in the restricted-product closure",
        intset=req, candidate=req)
    add("adele-diff", _cmd_adele_diff, "do the two closures differ",
        intset=req)
    add("selftest", _cmd_selftest, "quick internal consistency checks")
    return parser


def _build_config(args) -> Config:
    config = load_config_file(args.config) if args.config else DEFAULT_CONFIG
    overrides = {}
    if args.residue_cap is not None:
        overrides["residue_cap"] = args.residue_cap
    if args.degree_cap is not None:
        overrides["degree_cap"] = args.degree_cap
    if args.prime_scan_bound is not None:
        overrides["prime_scan_bound"] = args.prime_scan_bound
    return config.with_overrides(**overrides) if overrides else config


# the common flags use SUPPRESS defaults so that a value given before the
# subcommand survives the subparser pass; absent flags are filled in here
_COMMON_DEFAULTS = {"json": False, "config": None, "residue_cap": None,
                    "degree_cap": None, "prime_scan_bound": None}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for dest, value in _COMMON_DEFAULTS.items():
        if not hasattr(args, dest):
            setattr(args, dest, value)
    try:
        config = _build_config(args)
        code, payload, lines = args.handler(args, config)
    except IvpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
