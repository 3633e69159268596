"""Higher-order unification: classification, occurs check, SIMPL, MATCH,
enumeration, and the flex-flex trivial unifier."""

import itertools

import pytest

from conftest import TAU, assert_sound, canonical, closing_env, distinct_unifiers

from hornproof.terms import (
    Abs,
    App,
    Bound,
    Const,
    Environment,
    Param,
    Var,
    aconv,
    apply_env,
    eta_expand,
    fn,
    mk_app,
    normalize,
)
from hornproof.unify import (
    Branch,
    DepthExceeded,
    Failed,
    Occurrence,
    PairKind,
    Solved,
    UnifyProblem,
    classify,
    flexflex_trivial,
    make_pair,
    match_candidates,
    occurs_rigid,
    simpl,
    unify,
)

A = Const("A", TAU)
B = Const("B", TAU)
C = Const("C", TAU)
A1 = Const("A", fn(TAU, TAU))
F1 = Const("F", fn(TAU, TAU))


def var(name, arity=TAU, gen=0):
    return Var(name, gen, arity)


def pair(lhs, rhs):
    return make_pair((), eta_expand(normalize(lhs)), eta_expand(normalize(rhs)))


# --------------------------------------------------------------- classify


def test_classify_rigid_rigid():
    assert classify(pair(App(A1, B), App(A1, C))) is PairKind.RIGID_RIGID


def test_classify_flex_rigid():
    f = var("f", fn(TAU, TAU, TAU))
    lhs = mk_app(f, [C, var("x")])
    assert classify(pair(lhs, App(A1, B))) is PairKind.FLEX_RIGID


def test_classify_flex_flex():
    f = var("f", fn(TAU, TAU))
    g = var("g", fn(TAU, TAU))
    assert classify(pair(App(f, A), App(g, B))) is PairKind.FLEX_FLEX


def test_classify_assign():
    assert classify(pair(var("x"), App(A1, B))) is PairKind.ASSIGN


def test_classify_param_head_is_rigid():
    p = Param("all", (A,), TAU)
    assert classify(pair(p, A)) is PairKind.RIGID_RIGID


# ------------------------------------------------------------ occurs check


def test_occurs_direct_rigid_path():
    x = var("x")
    assert occurs_rigid(x, App(F1, x)) is Occurrence.OCCURS_RIGID


def test_occurs_under_flexible_head_unclassified():
    x = var("x")
    f = var("f", fn(TAU, TAU))
    assert occurs_rigid(x, App(f, x)) is Occurrence.UNCLASSIFIED


def test_occurs_inside_param_subscripts_is_rigid():
    x = var("x")
    p = Param("all", (App(F1, x),), TAU)
    assert occurs_rigid(x, p) is Occurrence.OCCURS_RIGID


def test_no_occurrence():
    assert occurs_rigid(var("x"), App(A1, B)) is Occurrence.NO_OCCURRENCE


# ------------------------------------------------------------------ simpl


def _problem(*pairs):
    env = Environment.fresh_for(*itertools.chain(*[(p.lhs, p.rhs) for p in pairs]))
    return UnifyProblem(env, tuple(pairs), ())


def test_simpl_identical_sides_solved_empty():
    r = simpl(_problem(pair(App(A1, B), App(A1, B))))
    assert isinstance(r, Solved)
    assert not r.unifier.env.bindings and not r.unifier.flexflex


def test_simpl_head_clash_fails():
    G = Const("G", fn(TAU, TAU))
    r = simpl(_problem(pair(App(A1, B), App(G, B))))
    assert isinstance(r, Failed)


def test_simpl_assignment_most_general():
    x = var("x")
    r = simpl(_problem(pair(x, App(A1, B))))
    assert isinstance(r, Solved)
    assert apply_env(r.unifier.env, x) == App(A1, B)


def test_simpl_occurs_check_fails():
    x = var("x")
    r = simpl(_problem(pair(x, App(F1, x))))
    assert isinstance(r, Failed)


def test_simpl_branches_on_leftmost_flex_rigid():
    f = var("f", fn(TAU, TAU))
    r = simpl(_problem(pair(App(f, A), B), pair(App(f, B), C)))
    assert isinstance(r, Branch)
    assert aconv(r.chosen.rhs, B)


# ------------------------------------------------------- match_candidates


def test_match_guesses_projections_then_imitation():
    # flexible binary head against a unary constant: two projections, then
    # the imitation copying the rigid head
    f = var("f", fn(TAU, TAU, TAU))
    x = var("x")
    p = pair(mk_app(f, [C, x]), App(A1, B))
    env = Environment.fresh_for(p.lhs, p.rhs)
    cands = match_candidates(p, env)
    assert len(cands) == 3
    bindings = [normalize(apply_env(e, f)) for e in cands]
    assert aconv(bindings[0], Abs("y", TAU, Abs("z", TAU, Bound(1))))
    assert aconv(bindings[1], Abs("y", TAU, Abs("z", TAU, Bound(0))))
    # imitation introduces a fresh variable applied to both arguments
    head = bindings[2]
    assert isinstance(head, Abs) and isinstance(head.body, Abs)
    assert isinstance(head.body.body, App) and head.body.body.fun == A1


def test_match_bound_rigid_head_gives_no_imitation():
    # unifying under a shared binder with the bound variable as rigid head:
    # the flexible head cannot imitate it
    f = var("f", fn(TAU, TAU))
    p = make_pair(
        [("w", TAU)],
        eta_expand(normalize(App(f, A)), [TAU]),
        Bound(0),
    )
    env = Environment.fresh_for(p.lhs)
    cands = match_candidates(p, env)
    assert len(cands) == 1  # only the projection


def test_match_atomic_projection_is_bare():
    f = var("f", fn(TAU, TAU))
    p = pair(App(f, B), A)
    env = Environment.fresh_for(p.lhs, p.rhs)
    cands = match_candidates(p, env)
    proj = normalize(apply_env(cands[0], f))
    assert aconv(proj, Abs("x", TAU, Bound(0)))


# ------------------------------------------------------------ enumeration


def test_two_unifier_case():
    f, x = var("f", fn(TAU, TAU)), var("x")
    lhs = App(f, x)
    got = distinct_unifiers(unify(lhs, A), [f, x])
    assert len(got) == 2
    for uni in unify(lhs, A):
        assert_sound(lhs, A, uni)


def test_trace_three_unifiers():
    f, x = var("f", fn(TAU, TAU, TAU)), var("x")
    lhs = mk_app(f, [C, x])
    rhs = App(A1, B)
    unis = list(unify(lhs, rhs))
    assert len(unis) == 3
    for uni in unis:
        assert_sound(lhs, rhs, uni)
    fs = [normalize(apply_env(uni.env, f)) for uni in unis]
    assert aconv(fs[0], Abs("y", TAU, Abs("z", TAU, Bound(0))))
    assert aconv(fs[1], Abs("y", TAU, Abs("z", TAU, App(A1, Bound(0)))))
    assert aconv(fs[2], Abs("y", TAU, Abs("z", TAU, App(A1, B))))


@pytest.mark.parametrize("q", [1, 2, 3])
def test_count_law_one_argument(q):
    Aq = Const("A", fn(*([TAU] * q), TAU))
    Bs = [Const(f"B{i}", TAU) for i in range(q)]
    f, x = var("f", fn(TAU, TAU)), var("x")
    lhs, rhs = App(f, x), mk_app(Aq, Bs)
    got = distinct_unifiers(unify(lhs, rhs), [f, x])
    assert len(got) == q + 2


@pytest.mark.parametrize("q", [1, 2, 3])
def test_count_law_two_arguments(q):
    Aq = Const("A", fn(*([TAU] * q), TAU))
    Bs = [Const(f"B{i}", TAU) for i in range(q)]
    f = var("f", fn(TAU, TAU, TAU))
    x1, x2 = var("x1"), var("x2")
    lhs, rhs = mk_app(f, [x1, x2]), mk_app(Aq, Bs)
    got = distinct_unifiers(unify(lhs, rhs), [f, x1, x2])
    assert len(got) == q * q + q + 3


def test_infinite_stream_prefix():
    f = var("f", fn(fn(TAU, TAU), TAU))
    lhs = App(f, Abs("x", TAU, Bound(0)))
    stream = unify(lhs, A)
    got = []
    for _ in range(4):
        uni = next(stream)
        assert_sound(lhs, A, uni)
        got.append(normalize(apply_env(closing_env(uni), f)))
    y = fn(TAU, TAU)
    assert aconv(got[0], Abs("y", y, A))
    assert aconv(got[1], Abs("y", y, App(Bound(0), A)))
    assert aconv(got[2], Abs("y", y, App(Bound(0), App(Bound(0), A))))
    assert aconv(got[3], Abs("y", y, App(Bound(0), App(Bound(0), App(Bound(0), A)))))


def test_ordering_trivial_solution_last():
    zero = Const("0", TAU)
    plus = Const("+", fn(TAU, TAU, TAU))
    f = var("f", fn(TAU, TAU))
    lhs, rhs = App(f, zero), mk_app(plus, [zero, zero])
    unis = list(unify(lhs, rhs))
    assert len(unis) == 4
    sols = [normalize(apply_env(u.env, f)) for u in unis]
    expected_last = Abs("x", TAU, mk_app(plus, [zero, zero]))
    assert aconv(sols[-1], expected_last)
    expected = {
        canonical(u, [f]) for u in unis
    }
    assert len(expected) == 4


def test_occurs_soundness_in_enumeration():
    x = var("x")
    assert list(unify(x, App(F1, x))) == []
    unis = list(unify(x, App(A1, B)))
    assert len(unis) == 1
    assert apply_env(unis[0].env, x) == App(A1, B)


def test_determinism():
    f, x = var("f", fn(TAU, TAU, TAU)), var("x")
    lhs, rhs = mk_app(f, [C, x]), App(A1, B)
    a = [canonical(u, [f, x]) for u in unify(lhs, rhs)]
    b = [canonical(u, [f, x]) for u in unify(lhs, rhs)]
    assert a == b


def test_depth_bound_raises():
    f = var("f", fn(fn(TAU, TAU), TAU))
    lhs = App(f, Abs("x", TAU, Bound(0)))
    stream = unify(lhs, A, max_depth=3)
    got = []
    with pytest.raises(DepthExceeded):
        for uni in stream:
            got.append(uni)
    assert len(got) == 3  # the shallow unifiers still came out first


def test_flexflex_pairs_are_retained():
    f = var("f", fn(TAU, TAU))
    g = var("g", fn(TAU, TAU))
    unis = list(unify(App(f, A), App(g, B)))
    assert len(unis) == 1
    assert len(unis[0].flexflex) == 1
    assert not unis[0].env.bindings


# -------------------------------------------------------- flexflex_trivial


def test_flexflex_trivial_closes_pair():
    f = var("f", fn(TAU, TAU))
    g = var("g", fn(TAU, TAU))
    p = pair(App(f, A), App(g, B))
    env = flexflex_trivial([p])
    assert aconv(
        normalize(apply_env(env, App(f, A))), normalize(apply_env(env, App(g, B)))
    )


def test_flexflex_trivial_empty():
    assert flexflex_trivial([]).bindings == {}


def test_flexflex_trivial_same_head():
    f = var("f", fn(TAU, TAU))
    p = pair(App(f, A), App(f, B))
    env = flexflex_trivial([p])
    assert len(env.bindings) == 1
    assert aconv(
        normalize(apply_env(env, App(f, A))), normalize(apply_env(env, App(f, B)))
    )


# --------------------------------------------------------------- soundness


def test_soundness_randomized(gen_tau):
    import random

    from conftest import TermGen
    from hornproof.logic import LogicSignature
    from hornproof.terms import Atomic

    rng = random.Random(12345)
    sig = LogicSignature(
        atomic=frozenset({"t", "prop"}),
        constants={
            "A": TAU,
            "B": TAU,
            "F": fn(TAU, TAU),
            "G": fn(TAU, TAU, TAU),
        },
    )
    gen = TermGen(sig, seed=99)
    checked = 0
    for i in range(300):
        arity = rng.choice([TAU, fn(TAU, TAU)])
        lhs = gen.term(arity, depth=3)
        rhs = gen.term(arity, depth=3)
        try:
            for k, uni in enumerate(unify(lhs, rhs, max_depth=6)):
                assert_sound(lhs, rhs, uni)
                checked += 1
                if k >= 4:
                    break
        except DepthExceeded:
            continue
    assert checked > 50  # the sample really exercised the enumerator
