"""Logic-generic proof kernel: inference rules as Horn clauses over typed
lambda-terms, higher-order unification, resolution, tactics, and an
interactive goal package."""

import sys as _sys

# term operations recurse on structure, and quantifier searches build
# deeply nested Skolem subscripts; the CPython default stack is too shallow
if _sys.getrecursionlimit() < 8_000:
    _sys.setrecursionlimit(8_000)

from .terms import (
    Abs,
    App,
    Arity,
    Atomic,
    Bound,
    Const,
    Environment,
    Fun,
    IllAritied,
    KernelError,
    Param,
    Term,
    Var,
    aconv,
    apply_env,
    arity_of,
    beta_contract,
    eta_expand,
    fn,
    head_normal,
    normalize,
    standardize,
)
from .unify import (
    DepthExceeded,
    DisagreementPair,
    Unifier,
    flexflex_trivial,
    occurs_rigid,
    unify,
)
from .rules import Rule, derived_rule_check, forward_resolve, mk_rule, resolve
from .tactics import (
    depth_first,
    depth_rules_fun_tac,
    fail_tac,
    id_tac,
    orelse,
    repeat,
    rules_tac,
    then,
    try_tac,
)
from .logic import (
    LogicSignature,
    RuleSet,
    SkolemLegend,
    load_rules,
    parse_term,
    parse_terms,
    print_term,
)
from .fixtures import (
    ctt_fixture,
    depth_intr_tac,
    fol_auto_tac,
    fol_fixture,
    type_check_tac,
)
from .session import ProofState, Session, script_replay, script_save

__all__ = [name for name in dir() if not name.startswith("_")]
