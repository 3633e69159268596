"""Inference rules as Horn clauses over lambda-terms, and resolution.

A rule is an ordered list of premises plus a conclusion, all of the
judgement arity ``prop``, together with any flex-flex constraints carried
over from earlier unifications.  The same structure serves as the goal
tree of a backwards proof: the conclusion is the original goal and the
premises are the open subgoals.  There is no internal derivation tree.
"""

from __future__ import annotations

from dataclasses import dataclass

from typing import Iterator, Sequence

from .terms import (
    Arity,
    Atomic,
    Environment,
    KernelError,
    Param,
    Term,
    Var,
    aconv,
    apply_env,
    arity_of,
    free_vars,
    max_generation,
    normalize,
    standardize,
    subterms,
)
from .unify import (
    DepthExceeded,
    DisagreementPair,
    Unifier,
    instantiate_pair,
    make_pair,
    unify_pairs,
)

PROP = Atomic("prop")


class BadArity(KernelError):
    """A premise or conclusion is not a well-aritied prop."""


class InconsistentVar(KernelError):
    """The same scheme-variable name is used at two arities in one rule."""


@dataclass(frozen=True)
class Rule:
    premises: tuple[Term, ...]
    conclusion: Term
    flexflex: tuple[DisagreementPair, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "flexflex", tuple(self.flexflex))

    @property
    def is_theorem(self) -> bool:
        return not self.premises

    def terms(self) -> Iterator[Term]:
        yield self.conclusion
        yield from self.premises
        for p in self.flexflex:
            yield p.lhs
            yield p.rhs

    def max_gen(self) -> int:
        return max((max_generation(t) for t in self.terms()), default=-1)

    def same_as(self, other: "Rule") -> bool:
        return (
            len(self.premises) == len(other.premises)
            and aconv(self.conclusion, other.conclusion)
            and all(aconv(a, b) for a, b in zip(self.premises, other.premises))
        )


def mk_rule(premises: Sequence[Term], conclusion: Term) -> Rule:
    """Validate and normalize a rule: every part must be a well-aritied
    prop and every scheme-variable name must be used at one arity only."""
    parts = [conclusion, *premises]
    for t in parts:
        try:
            a = arity_of(t)
        except KernelError as e:
            raise BadArity(str(e)) from e
        if a != PROP:
            raise BadArity(f"rule part has arity {a!r}, expected {PROP!r}")
    seen: dict[str, Arity] = {}
    for t in parts:
        for v in free_vars(t):
            prior = seen.setdefault(v.name, v.arity)
            if prior != v.arity:
                raise InconsistentVar(
                    f"?{v.name} used at arities {prior!r} and {v.arity!r}"
                )
    return Rule(tuple(normalize(p) for p in premises), normalize(conclusion))


def standardize_rule(r: Rule, generation: int) -> Rule:
    std = lambda t: standardize(t, generation)
    return Rule(
        tuple(std(p) for p in r.premises),
        std(r.conclusion),
        tuple(
            DisagreementPair(p.binders, std(p.lhs), std(p.rhs)) for p in r.flexflex
        ),
    )


def resolve(
    goal: Rule, i: int, rule: Rule, max_depth: int | None = None
) -> Iterator[Rule]:
    """Resolve premise ``i`` of the goal tree against the conclusion of
    ``rule``: for every unifier, splice the rule's instantiated premises in
    place of the premise.  The rule is standardized apart first, and both
    sides' flex-flex constraints are re-submitted to the unifier."""
    if not 0 <= i < len(goal.premises):
        raise IndexError(f"premise index {i} out of range")
    gen = max(goal.max_gen(), rule.max_gen()) + 1
    r = standardize_rule(rule, gen)
    env = Environment({}, gen + 1)
    pairs = [make_pair((), r.conclusion, goal.premises[i])]
    pairs += [instantiate_pair(env, p) for p in (*goal.flexflex, *r.flexflex)]
    for uni in unify_pairs(pairs, env, max_depth):
        inst = lambda t: apply_env(uni.env, t)
        premises = (
            tuple(inst(p) for p in goal.premises[:i])
            + tuple(inst(p) for p in r.premises)
            + tuple(inst(p) for p in goal.premises[i + 1 :])
        )
        yield Rule(premises, inst(goal.conclusion), uni.flexflex)


def forward_resolve(rule: Rule, facts: Sequence[Rule]) -> Iterator[Rule]:
    """Discharge the leading premises of ``rule`` against theorem schemes,
    positionally: fact k closes what was premise k.  With no facts the
    rule itself is produced."""
    for k, f in enumerate(facts):
        if f.premises:
            raise ValueError(f"fact {k} still has premises")
    if len(facts) > len(rule.premises):
        raise ValueError("more facts than premises")

    def go(cur: Rule, k: int) -> Iterator[Rule]:
        if k == len(facts):
            yield cur
            return
        for nxt in resolve(cur, 0, facts[k]):
            yield from go(nxt, k + 1)

    return go(rule, 0)


def _freeze(t: Term) -> Term:
    """Turn scheme variables into fresh rigid symbols so matching can only
    instantiate the other side."""
    if isinstance(t, Var):
        return Param(f"!{t.name}.{t.gen}", (), t.arity)
    from .terms import Abs, App

    if isinstance(t, Abs):
        return Abs(t.hint, t.arg_arity, _freeze(t.body))
    if isinstance(t, App):
        return App(_freeze(t.fun), _freeze(t.arg))
    if isinstance(t, Param):
        return Param(t.base, tuple(_freeze(s) for s in t.subscripts), t.arity)
    return t


def derived_rule_check(r: Rule, instance_of: Rule, max_depth: int = 24) -> bool:
    """True when some substitution makes ``instance_of`` alpha-equal to
    ``r``, premise by premise and in conclusion.  ``r`` is frozen so only
    the general rule's variables may move."""
    if len(r.premises) != len(instance_of.premises):
        return False
    gen = max(r.max_gen(), instance_of.max_gen()) + 1
    general = standardize_rule(instance_of, gen)
    env = Environment({}, gen + 1)
    pairs = [make_pair((), general.conclusion, _freeze(r.conclusion))]
    pairs += [
        make_pair((), g, _freeze(s))
        for g, s in zip(general.premises, r.premises)
    ]
    pairs += [instantiate_pair(env, p) for p in general.flexflex]
    try:
        for _ in unify_pairs(pairs, env, max_depth):
            return True
    except DepthExceeded:
        return False
    return False


def param_acyclic(t: Term) -> bool:
    """No Skolem parameter may contain itself in its own subscripts."""
    for s in subterms(t):
        if isinstance(s, Param):
            for sub in s.subscripts:
                if any(
                    isinstance(inner, Param) and inner == s
                    for inner in subterms(sub)
                ):
                    return False
    return True
