"""Shipped logics: natural-deduction first-order logic and a fragment of
constructive type theory, each as a signature plus a rule file, with the
goal-analysis policies their searches use.

The quantifier rules carry Skolem parameters subscripted with everything
the parameter must stay out of; the unification occurs check then enforces
the usual side conditions.  The FOL rules include the hypothesis list in
every subscript.  The product-introduction rule of the type-theory fixture
is kept exactly in its published form, whose ``pri`` subscripts omit the
hypothesis list; the surrounding rules are standard formulations and the
two assumption rules do Prolog-style list search.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

from .logic import Infix, LogicSignature, RuleSet, load_rules
from .rules import Rule
from .tactics import GoalAnalyzer, Tactic, depth_rules_fun_tac, rules_tac
from .terms import Atomic, Const, Term, Var, fn, spine, term_depth

# ------------------------------------------------------------------- FOL

_form = Atomic("form")
_term = Atomic("term")
_hyps = Atomic("hyps")
_prop = Atomic("prop")


def fol_signature() -> LogicSignature:
    sig = LogicSignature(
        atomic=frozenset({"term", "form", "hyps", "prop"}),
        constants={
            "&": fn(_form, _form, _form),
            "|": fn(_form, _form, _form),
            "-->": fn(_form, _form, _form),
            "=": fn(_term, _term, _form),
            "Pi": fn(fn(_term, _form), _form),
            "Sigma": fn(fn(_term, _form), _form),
            "|-": fn(_hyps, _form, _prop),
            "nil": _hyps,
            "cons": fn(_form, _hyps, _hyps),
            "0": _term,
        },
        infixes={
            "|-": Infix("|-", 10, "none"),
            "-->": Infix("-->", 40, "right"),
            "|": Infix("|", 50, "right"),
            "&": Infix("&", 60, "right"),
            "=": Infix("=", 70, "none"),
        },
        binders={"ALL": "Pi", "EX": "Sigma"},
        skolems={"all": _term, "exi": _term},
    )
    sig.validate()
    return sig


FOL_RULES = '''\
# Natural deduction with a fixed hypothesis list threaded through every
# rule; assumptions are found by Prolog-style list search.

rule conj_intro
premise "?H |- ?A"
premise "?H |- ?B"
conclusion "?H |- ?A & ?B"

rule conj_elim1
premise "?H |- ?A & ?B"
conclusion "?H |- ?A"

rule conj_elim2
premise "?H |- ?A & ?B"
conclusion "?H |- ?B"

rule disj_intro1
premise "?H |- ?A"
conclusion "?H |- ?A | ?B"

rule imp_intro
premise "cons(?A, ?H) |- ?B"
conclusion "?H |- ?A --> ?B"

rule imp_elim
premise "?H |- ?A --> ?B"
premise "?H |- ?A"
conclusion "?H |- ?B"

rule assume_head
conclusion "cons(?A, ?H) |- ?A"

rule assume_tail
premise "?H |- ?A"
conclusion "cons(?B, ?H) |- ?A"

rule all_intro
premise "?H |- ?B(all[?H, ?B])"
conclusion "?H |- ALL x. ?B(x)"

rule all_elim
premise "?H |- ALL x. ?B(x)"
conclusion "?H |- ?B(?t)"

rule ex_intro
premise "?H |- ?B(?t)"
conclusion "?H |- EX x. ?B(x)"

rule ex_elim
premise "?H |- EX x. ?B(x)"
premise "cons(?B(exi[?H, ?B, ?C]), ?H) |- ?C"
conclusion "?H |- ?C"
'''


def fol_fixture() -> RuleSet:
    return load_rules(fol_signature(), FOL_RULES, "fol")


# ------------------------------------------------------ goal decomposition


def sequent_parts(t: Term) -> tuple[Term, Term] | None:
    """Split 'ctx |- body' into (ctx, body); None for other shapes."""
    head, args = spine(t)
    if isinstance(head, Const) and head.name == "|-" and len(args) == 2:
        return args[0], args[1]
    return None


def _flex(t: Term) -> bool:
    head, _ = spine(t)
    return isinstance(head, Var)


def _rigid_head_name(t: Term) -> str | None:
    head, _ = spine(t)
    return head.name if isinstance(head, Const) else None


_FOL_INTRO = ["conj_intro", "disj_intro1", "imp_intro", "all_intro", "ex_intro"]
_FOL_ELIM = ["conj_elim1", "conj_elim2", "imp_elim", "all_elim", "ex_elim"]
_FOL_ASSUME = ["assume_head", "assume_tail"]


def fol_analyzer(rs: RuleSet) -> GoalAnalyzer:
    """Search policy, not a completeness claim: defer subgoals whose formula
    is still a scheme variable (any rule would unify with them); try the
    assumption rules plus the introduction rules matching the formula's
    connective; fall back to eliminations only on goals with no matching
    introduction, which keeps the branching at desk scale."""
    assume = [rs.rule(n) for n in _FOL_ASSUME if n in rs.rules]
    intro = [rs.rule(n) for n in _FOL_INTRO if n in rs.rules]
    elim = [rs.rule(n) for n in _FOL_ELIM if n in rs.rules]

    def matches(goal_formula: Term, r: Rule) -> bool:
        parts = sequent_parts(r.conclusion)
        if parts is None:
            return False
        gh = _rigid_head_name(goal_formula)
        rh = _rigid_head_name(parts[1])
        return gh is not None and gh == rh

    def analyze(premise: Term) -> Sequence[Rule]:
        parts = sequent_parts(premise)
        if parts is None or _flex(parts[1]):
            return []
        intros = [r for r in intro if matches(parts[1], r)]
        if intros:
            return assume + intros
        return assume + elim

    return analyze


def iterative_deepening_tac(
    analyzer: GoalAnalyzer,
    max_nodes: int = 10_000,
    max_depth: int = 8,
    unify_depth: int | None = 12,
    state_depth_guard: int = 64,
) -> Tactic:
    """Depth-first proof search, deepened one rule application at a time so
    a divergent branch cannot starve the rest of the tree.  Yields fully
    closed goal trees; exhausting the node budget just ends the stream.
    States whose subgoals grow past the structural-depth guard are pruned:
    they arise only on runaway quantifier chains and would otherwise drive
    term sizes past what the interpreter can traverse."""

    def tac(goal: Rule) -> Iterator[Rule]:
        nodes = 0

        for limit in range(0, max_depth + 1):
            cut = False

            def expand(g: Rule) -> Iterator[Rule]:
                chosen = None
                for idx, premise in enumerate(g.premises):
                    rules = analyzer(premise)
                    if rules:
                        chosen = (idx, rules)
                        break
                if chosen is None:
                    return iter(())
                return rules_tac(chosen[1], chosen[0], unify_depth)(g)

            def go(g: Rule, depth: int) -> Iterator[Rule]:
                nonlocal nodes, cut
                if nodes >= max_nodes:
                    cut = True
                    return
                nodes += 1
                if not g.premises:
                    if depth == limit:
                        yield g
                    return
                if depth >= limit:
                    cut = True
                    return
                if any(term_depth(p) > state_depth_guard for p in g.premises):
                    cut = True
                    return
                for g2 in expand(g):
                    yield from go(g2, depth + 1)

            yield from go(goal, 0)
            if not cut or nodes >= max_nodes:
                return

    return tac


def fol_auto_tac(
    rs: RuleSet, max_nodes: int = 10_000, max_depth: int = 8
) -> Tactic:
    return iterative_deepening_tac(fol_analyzer(rs), max_nodes, max_depth)


# ------------------------------------------------------------ type theory

_o = Atomic("o")
_jdg = Atomic("jdg")


def ctt_signature() -> LogicSignature:
    sig = LogicSignature(
        atomic=frozenset({"o", "jdg", "hyps", "prop"}),
        constants={
            ":": fn(_o, _o, _jdg),
            "isty": fn(_o, _jdg),
            "|-": fn(_hyps, _jdg, _prop),
            ",": fn(_hyps, _jdg, _hyps),
            "nil": _hyps,
            "Prod": fn(_o, fn(_o, _o), _o),
            "Sum": fn(_o, _o, _o),
            "Times": fn(_o, _o, _o),
            "Nat": _o,
            "0": _o,
            "succ": fn(_o, _o),
            "lambda": fn(fn(_o, _o), _o),
            "apply": fn(_o, _o, _o),
            "pair": fn(_o, _o, _o),
            "split": fn(fn(_o, _o, _o), _o, _o),
            "inl": fn(_o, _o),
            "inr": fn(_o, _o),
            "when": fn(fn(_o, _o), fn(_o, _o), _o, _o),
            "rec": fn(_o, fn(_o, _o, _o), _o, _o),
        },
        infixes={
            "|-": Infix("|-", 10, "none"),
            ",": Infix(",", 20, "left"),
            ":": Infix(":", 30, "none"),
            "=>": Infix("Prod", 40, "right", family=True),
            "*": Infix("apply", 55, "left"),
        },
        binders={"PROD": "Prod", "lam": "lambda"},
        postfixes={"type": "isty"},
        skolems={
            "pri": _o,
            "prf": _o,
            "nre1": _o,
            "nre2": _o,
            "tse1": _o,
            "tse2": _o,
            "swl": _o,
            "swr": _o,
        },
    )
    sig.validate()
    return sig


CTT_RULES = '''\
# Judgements: '?a : ?A' (elementhood) and '?A type'; contexts are ordered
# lists searched Prolog-style by the two assumption rules.

rule assume_head
premise "?H |- ?A type"
conclusion "?H, ?a : ?A |- ?a : ?A"

rule assume_tail
premise "?H |- ?a : ?A"
conclusion "?H, ?b : ?B |- ?a : ?A"

rule nat_form
conclusion "?H |- Nat type"

rule nat_intro_0
conclusion "?H |- 0 : Nat"

rule nat_intro_succ
premise "?H |- ?a : Nat"
conclusion "?H |- succ(?a) : Nat"

rule nat_elim
premise "?H |- ?a : Nat"
premise "?H |- ?b : ?C(0)"
premise "?H, nre1[?H, ?C, ?e] : Nat, nre2[?H, ?C, ?e] : ?C(nre1[?H, ?C, ?e]) |- ?e(nre1[?H, ?C, ?e], nre2[?H, ?C, ?e]) : ?C(succ(nre1[?H, ?C, ?e]))"
conclusion "?H |- rec(?a, ?e, ?b) : ?C(?a)"

rule prod_form
premise "?H |- ?A type"
premise "?H, prf[?H, ?A, ?B] : ?A |- ?B(prf[?H, ?A, ?B]) type"
conclusion "?H |- Prod(?A, ?B) type"

rule prod_intro
premise "?H |- ?A type"
premise "?H, pri[?b1, ?B1] : ?A |- ?b1(pri[?b1, ?B1]) : ?B1(pri[?b1, ?B1])"
conclusion "?H |- lambda(?b1) : Prod(?A, ?B1)"

rule prod_elim
premise "?H |- ?f : Prod(?A, ?B)"
premise "?H |- ?a : ?A"
conclusion "?H |- ?f * ?a : ?B(?a)"

rule times_form
premise "?H |- ?A type"
premise "?H |- ?B type"
conclusion "?H |- Times(?A, ?B) type"

rule times_intro
premise "?H |- ?a : ?A"
premise "?H |- ?b : ?B"
conclusion "?H |- pair(?a, ?b) : Times(?A, ?B)"

rule times_elim
premise "?H |- ?p : Times(?A, ?B)"
premise "?H, tse1[?H, ?C, ?e] : ?A, tse2[?H, ?C, ?e] : ?B |- ?e(tse1[?H, ?C, ?e], tse2[?H, ?C, ?e]) : ?C(pair(tse1[?H, ?C, ?e], tse2[?H, ?C, ?e]))"
conclusion "?H |- split(?e, ?p) : ?C(?p)"

rule sum_form
premise "?H |- ?A type"
premise "?H |- ?B type"
conclusion "?H |- Sum(?A, ?B) type"

rule sum_intro_l
premise "?H |- ?a : ?A"
premise "?H |- ?B type"
conclusion "?H |- inl(?a) : Sum(?A, ?B)"

rule sum_intro_r
premise "?H |- ?b : ?B"
premise "?H |- ?A type"
conclusion "?H |- inr(?b) : Sum(?A, ?B)"

rule sum_elim
premise "?H |- ?s : Sum(?A, ?B)"
premise "?H, swl[?H, ?C, ?f, ?g] : ?A |- ?f(swl[?H, ?C, ?f, ?g]) : ?C(inl(swl[?H, ?C, ?f, ?g]))"
premise "?H, swr[?H, ?C, ?f, ?g] : ?B |- ?g(swr[?H, ?C, ?f, ?g]) : ?C(inr(swr[?H, ?C, ?f, ?g]))"
conclusion "?H |- when(?f, ?g, ?s) : ?C(?s)"
'''


def ctt_fixture() -> RuleSet:
    return load_rules(ctt_signature(), CTT_RULES, "ctt")


def judgement_parts(t: Term) -> tuple[str, list[Term]] | None:
    """('elem', [a, A]) or ('type', [A]) for the body of a sequent."""
    parts = sequent_parts(t)
    if parts is None:
        return None
    head, args = spine(parts[1])
    if isinstance(head, Const) and head.name == ":" and len(args) == 2:
        return ("elem", args)
    if isinstance(head, Const) and head.name == "isty" and len(args) == 1:
        return ("type", args)
    return None


_FORMATION = ["nat_form", "prod_form", "times_form", "sum_form"]
_INTRO = [
    "nat_intro_0",
    "nat_intro_succ",
    "prod_intro",
    "times_intro",
    "sum_intro_l",
    "sum_intro_r",
]
_ELIM = ["nat_elim", "prod_elim", "times_elim", "sum_elim"]
_ASSUME = ["assume_head", "assume_tail"]


def _named(rs: RuleSet, names: Sequence[str]) -> list[Rule]:
    return [rs.rule(n) for n in names if n in rs.rules]


def ctt_intro_analyzer(rs: RuleSet) -> GoalAnalyzer:
    """Formation and introduction rules only.  'A type' is deferred while A
    is a variable; 'a : A' is deferred while both sides are variables."""
    assume = _named(rs, _ASSUME)
    form = _named(rs, _FORMATION)
    intro = _named(rs, _INTRO)

    def analyze(premise: Term) -> Sequence[Rule]:
        j = judgement_parts(premise)
        if j is None:
            return []
        kind, args = j
        if kind == "type":
            return [] if _flex(args[0]) else form
        a, ty = args
        if _flex(a) and _flex(ty):
            return []
        return assume + intro

    return analyze


def ctt_check_analyzer(rs: RuleSet) -> GoalAnalyzer:
    """Like the introduction policy but with eliminations as well, so the
    element of an 'a : A' goal must be rigid or every elimination rule
    would apply."""
    assume = _named(rs, _ASSUME)
    form = _named(rs, _FORMATION)
    intro = _named(rs, _INTRO)
    elim = _named(rs, _ELIM)

    def analyze(premise: Term) -> Sequence[Rule]:
        j = judgement_parts(premise)
        if j is None:
            return []
        kind, args = j
        if kind == "type":
            return [] if _flex(args[0]) else form
        a, _ty = args
        if _flex(a):
            return []
        return assume + intro + elim

    return analyze


def depth_intr_tac(rs: RuleSet, max_nodes: int | None = 10_000) -> Tactic:
    return depth_rules_fun_tac(
        ctt_intro_analyzer(rs), max_nodes=max_nodes, unify_depth=24
    )


def type_check_tac(rs: RuleSet, max_nodes: int | None = 10_000) -> Tactic:
    return depth_rules_fun_tac(
        ctt_check_analyzer(rs), max_nodes=max_nodes, unify_depth=24
    )


# ----------------------------------------------------------- equation mode

def playground_signature() -> LogicSignature:
    """Signature for the interactive equation solver: one atomic arity and
    an addition infix; other constants are free and get inferred arities."""
    t = Atomic("term")
    sig = LogicSignature(
        atomic=frozenset({"term", "prop"}),
        constants={"+": fn(t, t, t), "0": t},
        infixes={"+": Infix("+", 50, "left")},
    )
    sig.validate()
    return sig


LOGICS: dict[str, Callable[[], RuleSet]] = {
    "fol": fol_fixture,
    "ctt": ctt_fixture,
}
