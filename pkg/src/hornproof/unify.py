"""Higher-order unification: SIMPL simplification, MATCH guessing by
projection and imitation, flex-flex retention, lazy unifier enumeration.

Pairs are kept eta-long and beta-normal with their shared binder prefix
stripped into the pair, so each side is a head applied to arguments at
atomic arity.  A head is rigid when it is a constant, bound variable, or
Skolem parameter, flexible when it is a scheme variable.

Enumeration is depth-first over the MATCH tree, iteratively deepened on
the number of MATCH applications: plain depth-first search would dive
forever into a projection subtree on problems with infinitely many
unifiers and never emit anything, while deepening emits every unifier at
the iteration equal to its MATCH depth.  Within one iteration the order
is the depth-first one, projections before imitation, so the pure
imitation unifier of a finite problem still comes out last.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .terms import (
    Abs,
    Arity,
    Bound,
    Const,
    Environment,
    ExpansionOverflow,
    IllAritied,
    KernelError,
    Param,
    ResourceLimit,
    Term,
    Var,
    aconv,
    apply_env,
    arity_of,
    arity_spine,
    eta_expand,
    fn,
    is_closed,
    mk_app,
    normalize,
    spine,
)


class DepthExceeded(ResourceLimit):
    """The optional MATCH-depth bound was reached; the search may diverge."""


# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class DisagreementPair:
    """Two terms of equal atomic arity under a shared binder prefix."""

    binders: tuple[tuple[str, Arity], ...]
    lhs: Term
    rhs: Term

    def binder_arities(self) -> list[Arity]:
        # innermost first, as arity_of expects
        return [a for _, a in reversed(self.binders)]


@dataclass(frozen=True)
class UnifyProblem:
    env: Environment
    pairs: tuple[DisagreementPair, ...]
    flexflex: tuple[DisagreementPair, ...]


@dataclass(frozen=True)
class Unifier:
    """An environment plus the flex-flex pairs retained as constraints."""

    env: Environment
    flexflex: tuple[DisagreementPair, ...]


class PairKind(enum.Enum):
    RIGID_RIGID = "rigid-rigid"
    FLEX_RIGID = "flex-rigid"
    FLEX_FLEX = "flex-flex"
    ASSIGN = "assign"


class Occurrence(enum.Enum):
    OCCURS_RIGID = "occurs-rigid"
    NO_OCCURRENCE = "no-occurrence"
    UNCLASSIFIED = "unclassified"


# ------------------------------------------------------------- pair setup


def make_pair(
    binders: Sequence[tuple[str, Arity]], lhs: Term, rhs: Term
) -> DisagreementPair:
    """Build a pair, absorbing the common lambda prefix of two eta-long
    sides into the shared binders."""
    bs = list(binders)
    while isinstance(lhs, Abs) and isinstance(rhs, Abs):
        if lhs.arg_arity != rhs.arg_arity:
            raise IllAritied("disagreement pair sides differ in arity")
        bs.append((lhs.hint, lhs.arg_arity))
        lhs, rhs = lhs.body, rhs.body
    if isinstance(lhs, Abs) or isinstance(rhs, Abs):
        raise IllAritied("disagreement pair sides differ in arity")
    return DisagreementPair(tuple(bs), lhs, rhs)


def _prepare(t: Term, binders: Sequence[Arity]) -> Term:
    return eta_expand(normalize(t), binders)


def instantiate_pair(env: Environment, p: DisagreementPair) -> DisagreementPair:
    ctx = p.binder_arities()
    return make_pair(
        p.binders,
        _prepare(apply_env(env, p.lhs), ctx),
        _prepare(apply_env(env, p.rhs), ctx),
    )


def _head(t: Term) -> Term:
    return spine(t)[0]


def _is_flex(t: Term) -> bool:
    return isinstance(_head(t), Var)


# ------------------------------------------------------------ occurs check


def occurs_rigid(v: Var, t: Term) -> Occurrence:
    """Does ``v`` occur in ``t`` along a path of rigid heads only?  Param
    subscripts count as rigid positions.  A rigid occurrence rules out any
    unifier of v with t; occurrences only under flexible heads stay
    unclassified."""
    hits: set[bool] = set()

    def walk(t: Term, rigid: bool) -> None:
        head, args = spine(t)
        if isinstance(head, Var):
            if head.key == v.key:
                hits.add(rigid)
            for a in args:
                walk(a, False)
            return
        if isinstance(head, Abs):
            walk(head.body, rigid)
        elif isinstance(head, Param):
            for s in head.subscripts:
                walk(s, rigid)
        for a in args:
            walk(a, rigid)

    walk(t, True)
    if True in hits:
        return Occurrence.OCCURS_RIGID
    if hits:
        return Occurrence.UNCLASSIFIED
    return Occurrence.NO_OCCURRENCE


# ------------------------------------------------------------ classification


def classify(p: DisagreementPair) -> PairKind:
    """Classify a normalized pair by its heads; assignments (a bare variable
    against a side it cannot occur in flexibly) are singled out so SIMPL can
    solve or fail them at once."""
    for a, b in ((p.lhs, p.rhs), (p.rhs, p.lhs)):
        if isinstance(a, Var) and not (isinstance(b, Var) and b.key == a.key):
            occ = occurs_rigid(a, b)
            if occ is Occurrence.OCCURS_RIGID:
                return PairKind.ASSIGN
            if occ is Occurrence.NO_OCCURRENCE and is_closed(b):
                return PairKind.ASSIGN
    lf, rf = _is_flex(p.lhs), _is_flex(p.rhs)
    if lf and rf:
        return PairKind.FLEX_FLEX
    if lf or rf:
        return PairKind.FLEX_RIGID
    return PairKind.RIGID_RIGID


def oriented(p: DisagreementPair) -> DisagreementPair:
    """Flexible (or bare-variable) side on the left."""
    kind = classify(p)
    if kind is PairKind.ASSIGN:
        if isinstance(p.lhs, Var):
            return p
        return DisagreementPair(p.binders, p.rhs, p.lhs)
    if kind is PairKind.FLEX_RIGID and not _is_flex(p.lhs):
        return DisagreementPair(p.binders, p.rhs, p.lhs)
    return p


# ------------------------------------------------------------------ SIMPL


@dataclass(frozen=True)
class Solved:
    unifier: Unifier


@dataclass(frozen=True)
class Failed:
    reason: str = ""


@dataclass(frozen=True)
class Branch:
    problem: UnifyProblem
    chosen: DisagreementPair


SimplResult = Solved | Failed | Branch


def _same_rigid_head(a: Term, b: Term) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Const):
        return a.name == b.name and a.arity == b.arity
    if isinstance(a, Bound):
        return a.index == b.index
    if isinstance(a, Param):
        return (
            a.base == b.base
            and a.arity == b.arity
            and len(a.subscripts) == len(b.subscripts)
        )
    return False


def simpl(prob: UnifyProblem) -> SimplResult:
    """First-order-style simplification: decompose rigid-rigid pairs, solve
    or refute assignments, set flex-flex pairs aside.  Returns Solved when
    only flex-flex pairs remain, otherwise a Branch on the leftmost
    flex-rigid pair."""
    env = prob.env
    # pairs tagged with the binding count they were normalized under, so a
    # pair is only re-instantiated after a new assignment
    version = 0
    queue: list[tuple[DisagreementPair, int]] = [
        (p, -1) for p in (*prob.pairs, *prob.flexflex)
    ]
    flexflex: list[DisagreementPair] = []
    flexrigid: list[DisagreementPair] = []

    while queue:
        p, seen = queue.pop(0)
        if seen != version:
            p = instantiate_pair(env, p)
        if aconv(p.lhs, p.rhs):
            continue
        kind = classify(p)
        if kind is PairKind.RIGID_RIGID:
            lh, largs = spine(p.lhs)
            rh, rargs = spine(p.rhs)
            if not _same_rigid_head(lh, rh):
                return Failed(f"clash of rigid heads {lh!r} / {rh!r}")
            subpairs = []
            if isinstance(lh, Param):
                subpairs.extend(zip(lh.subscripts, rh.subscripts))
            subpairs.extend(zip(largs, rargs))
            queue[:0] = [
                (make_pair(p.binders, a, b), version) for a, b in subpairs
            ]
        elif kind is PairKind.ASSIGN:
            p = oriented(p)
            v = p.lhs
            assert isinstance(v, Var)
            if occurs_rigid(v, p.rhs) is Occurrence.OCCURS_RIGID:
                return Failed(f"occurs check: {v.name}@{v.gen}")
            env = env.bind(v, p.rhs)
            version += 1
            queue = [(q, -1) for q in flexrigid + flexflex] + queue
            flexrigid, flexflex = [], []
        elif kind is PairKind.FLEX_FLEX:
            flexflex.append(p)
        else:
            flexrigid.append(oriented(p))

    if flexrigid:
        return Branch(
            UnifyProblem(env, tuple(flexrigid), tuple(flexflex)), flexrigid[0]
        )
    return Solved(Unifier(env, tuple(flexflex)))


# ------------------------------------------------------------------ MATCH


def match_candidates(p: DisagreementPair, env: Environment) -> list[Environment]:
    """Candidate bindings for the flexible head of a flex-rigid pair:
    one projection per argument whose arity can deliver the result, then
    imitation when the rigid head is a constant or parameter.  Each
    candidate extends ``env`` and allocates its fresh variables at
    ``env.next_gen``."""
    p = oriented(p)
    fhead, fargs = spine(p.lhs)
    if not isinstance(fhead, Var):
        raise IllAritied("match_candidates needs a flexible left side")
    rhead, _ = spine(p.rhs)
    arg_arities, result = arity_spine(fhead.arity)
    n = len(arg_arities)
    gen = env.next_gen

    def fresh_applied(idx: int, res: Arity) -> Term:
        h = Var(f"h{idx}", gen, fn(*arg_arities, res) if arg_arities else res)
        return mk_app(h, [Bound(n - 1 - k) for k in range(n)])

    def close(body: Term) -> Term:
        for a in reversed(arg_arities):
            body = Abs("x", a, body)
        return eta_expand(normalize(body))

    candidates: list[Environment] = []
    for i, ai in enumerate(arg_arities):
        gammas, delta = arity_spine(ai)
        if delta != result:
            continue
        body = mk_app(
            Bound(n - 1 - i), [fresh_applied(j, g) for j, g in enumerate(gammas)]
        )
        candidates.append(env.bind(fhead, close(body)).bump())
    if isinstance(rhead, (Const, Param)) and is_closed(rhead):
        taus, _ = arity_spine(rhead.arity)
        body = mk_app(rhead, [fresh_applied(j, g) for j, g in enumerate(taus)])
        candidates.append(env.bind(fhead, close(body)).bump())
    return candidates


# ------------------------------------------------------------ enumeration


class _SearchNode:
    """One node of the MATCH tree, with its SIMPL outcome and children
    computed once and reused across the deepening rounds."""

    __slots__ = ("problem", "result", "kids")

    def __init__(self, problem: UnifyProblem):
        self.problem = problem
        self.result: SimplResult | None = None
        self.kids: list["_SearchNode"] | None = None

    def outcome(self) -> SimplResult:
        if self.result is None:
            try:
                self.result = simpl(self.problem)
            except ExpansionOverflow:
                # the branch materialized unmanageable terms; abandon it
                # rather than the whole enumeration
                self.result = Failed("term expansion overflow")
        return self.result

    def children(self) -> list["_SearchNode"]:
        if self.kids is None:
            result = self.outcome()
            assert isinstance(result, Branch)
            merged = result.problem.pairs + result.problem.flexflex
            self.kids = [
                _SearchNode(UnifyProblem(cand, merged, ()))
                for cand in match_candidates(result.chosen, result.problem.env)
            ]
        return self.kids


def unify_pairs(
    pairs: Sequence[DisagreementPair],
    env: Environment,
    max_depth: int | None = None,
) -> Iterator[Unifier]:
    """Enumerate unifiers of a set of disagreement pairs, iteratively
    deepened on MATCH applications so every unifier at depth d appears in
    round d.  ``max_depth`` bounds the deepening; reaching it with branches
    still open raises DepthExceeded after all shallower unifiers have been
    produced."""
    root = _SearchNode(UnifyProblem(env, tuple(pairs), ()))

    for limit in itertools.count():
        pruned = False

        def dfs(node: _SearchNode, used: int) -> Iterator[Unifier]:
            nonlocal pruned
            result = node.outcome()
            if isinstance(result, Failed):
                return
            if isinstance(result, Solved):
                if used == limit:
                    yield result.unifier
                return
            if used == limit:
                pruned = True
                return
            for kid in node.children():
                yield from dfs(kid, used + 1)

        yield from dfs(root, 0)
        if not pruned:
            return
        if max_depth is not None and limit >= max_depth:
            raise DepthExceeded(f"no unifier within {max_depth} MATCH steps")


def unify(
    t: Term,
    u: Term,
    env: Environment | None = None,
    max_depth: int | None = None,
) -> Iterator[Unifier]:
    """Lazy stream of unifiers of two well-aritied terms of equal arity."""
    if env is None:
        env = Environment.fresh_for(t, u)
    pair = make_pair((), _prepare(apply_env(env, t), ()), _prepare(apply_env(env, u), ()))
    return unify_pairs([pair], env, max_depth)


# --------------------------------------------------------------- flex-flex


def flexflex_trivial(pairs: Sequence[DisagreementPair]) -> Environment:
    """The trivial unifier for a set of flex-flex constraints: each flexible
    head becomes a constant function onto one fresh variable shared per
    pair.  Applying the result closes every pair."""
    gen = 0
    for p in pairs:
        for t in (p.lhs, p.rhs):
            gen = max(gen, Environment.fresh_for(t).next_gen)
    env = Environment({}, gen)

    def const_fun(head: Var, target: Var) -> Term:
        args, _ = arity_spine(head.arity)
        body: Term = target
        for a in reversed(args):
            body = Abs("x", a, body)
        return body

    for i, raw in enumerate(pairs):
        p = instantiate_pair(env, raw)
        if aconv(p.lhs, p.rhs):
            continue
        lh, _ = spine(p.lhs)
        rh, _ = spine(p.rhs)
        if not isinstance(lh, Var) or not isinstance(rh, Var):
            raise IllAritied("flexflex_trivial applied to a non-flex-flex pair")
        _, res = arity_spine(arity_of(p.lhs, p.binder_arities()))
        shared = Var(f"h{i}", env.next_gen, res)
        env = env.bind(lh, const_fun(lh, shared))
        if rh.key != lh.key:
            env = env.bind(rh, const_fun(rh, shared))
        env = env.bump()
    return env
