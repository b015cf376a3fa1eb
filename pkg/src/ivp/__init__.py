"""Exact computations with p-adic value sets and their rings of
integer-valued polynomials.

The package works with a closed algebra of representable subsets of the
p-adic integers (balls, finite point sets, convergent sequences), decides
membership and closure questions exactly, and builds on that to compare
the rings of rational polynomials that are integral on such sets.
"""

from .adelic import (
    AdelicCandidate,
    IntegerSet,
    adelic_closure_member,
    closure_in_zp,
    closures_differ,
    product_closure_member,
)
from .config import DEFAULT_CONFIG, Config, load_config_file
from .errors import (
    IvpError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedComparisonError,
)
from .exact import INFINITY, Congruence, crt_solve, is_prime, vp
from .membership import (
    WitnessRationalFunction,
    is_integer_valued,
    polynomial_closure,
    separating_polynomial,
    witness_rational_function,
)
from .overrings import (
    Decision,
    MinimalExtensions,
    Representation,
    RingSpec,
    TriState,
    globalize,
    has_irredundant_representation,
    is_simple_integer_set_ring,
    localize,
    minimal_extensions,
    nonunitary_contains,
    normalize_rule,
    representation_equals,
    ring_contains,
    ring_equal,
    ring_member,
    ring_of,
    rule_subset,
    superfluous_nonunitary,
    superfluous_unitary,
    unitary_contains,
)
from .padic import (
    EMPTY_RULE,
    FULL_RULE,
    UNITS_AND_SELF_RULE,
    Ball,
    DefaultRule,
    PAdicSet,
    RuleKind,
    SeqWithLimit,
    canonicalize,
    closure,
    empty_set,
    full_set,
    instantiate,
    integer_set_rule,
    is_closed,
    is_dense_in,
    is_subset,
    isolated_points,
    member,
    point_set,
    remove_isolated_point,
    sets_equal,
    single_power_rule,
    some_elements,
)
from .polys import (
    IrreduciblePoly,
    RatPoly,
    RootCertificate,
    RootKind,
    max_valuation,
    max_valuation_witness,
    rational_roots,
    resultant,
    roots_in_set,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
