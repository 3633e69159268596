"""Tactics and tacticals: functions from goal trees to lazy streams of
refined goal trees, with depth-first search and goal deferral."""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

from .rules import Rule, resolve
from .terms import ResourceLimit, Term

Tactic = Callable[[Rule], Iterator[Rule]]

# Analyzes one subgoal, returning the rules worth trying; an empty list
# defers the goal.
GoalAnalyzer = Callable[[Term], Sequence[Rule]]


def rules_tac(
    rules: Sequence[Rule], i: int = 0, unify_depth: int | None = None
) -> Tactic:
    """Try each rule in order against premise ``i``; the output stream
    runs through both levels of choice (which rule, which unifier).  With
    ``unify_depth`` set, a unification that would search deeper is cut off
    after the unifiers already found, so one divergent equation cannot
    hang a proof search; a resolution that overruns the term-expansion
    guards is likewise dropped."""
    rules = list(rules)

    def tac(goal: Rule) -> Iterator[Rule]:
        if not 0 <= i < len(goal.premises):
            return
        for r in rules:
            try:
                yield from resolve(goal, i, r, max_depth=unify_depth)
            except ResourceLimit:
                continue

    return tac


def id_tac(goal: Rule) -> Iterator[Rule]:
    yield goal


def fail_tac(goal: Rule) -> Iterator[Rule]:
    return
    yield  # pragma: no cover


def then(t1: Tactic, t2: Tactic) -> Tactic:
    """Sequential composition; instantiations made by t1 live in the rule
    it returns, so t2 sees them in every remaining subgoal."""

    def tac(goal: Rule) -> Iterator[Rule]:
        for g in t1(goal):
            yield from t2(g)

    return tac


def orelse(t1: Tactic, t2: Tactic) -> Tactic:
    """t1's stream if it is nonempty, else t2's; t2 is never consulted
    when t1 produces anything."""

    def tac(goal: Rule) -> Iterator[Rule]:
        it = t1(goal)
        first = next(it, None)
        if first is None:
            yield from t2(goal)
        else:
            yield first
            yield from it

    return tac


def try_tac(t: Tactic) -> Tactic:
    return orelse(t, id_tac)


def append_tac(t1: Tactic, t2: Tactic) -> Tactic:
    """Both streams, t1's alternatives before t2's (unlike orelse, t2 is
    reached by backtracking even when t1 succeeds)."""

    def tac(goal: Rule) -> Iterator[Rule]:
        yield from t1(goal)
        yield from t2(goal)

    return tac


def repeat(t: Tactic) -> Tactic:
    """Apply ``t`` until it fails, backtracking through alternatives; the
    states where no further application succeeds are the results."""

    def tac(goal: Rule) -> Iterator[Rule]:
        it = t(goal)
        first = next(it, None)
        if first is None:
            yield goal
            return
        yield from tac(first)
        for g in it:
            yield from tac(g)

    return tac


def _never(premise: Term) -> bool:
    return False


def depth_first(
    satisfied: Callable[[Term], bool] = _never,
    t: Tactic | None = None,
    max_nodes: int | None = None,
    max_depth: int | None = None,
) -> Tactic:
    """Depth-first search over repeated applications of ``t``, yielding
    the states whose every premise satisfies the predicate.  A state with
    no applicable outputs is abandoned.  ``max_nodes`` caps visited states
    and ``max_depth`` caps applications along one path; exhausting either
    just truncates the stream, so an unprovable goal under a bound comes
    back as an empty sequence."""
    if t is None:
        raise ValueError("depth_first needs a tactic")

    def tac(goal: Rule) -> Iterator[Rule]:
        budget = [max_nodes]

        def go(g: Rule, depth: int) -> Iterator[Rule]:
            if budget[0] is not None:
                if budget[0] <= 0:
                    return
                budget[0] -= 1
            if all(satisfied(p) for p in g.premises):
                yield g
                return
            if max_depth is not None and depth >= max_depth:
                return
            for g2 in t(g):
                yield from go(g2, depth + 1)

        yield from go(goal, 0)

    return tac


def depth_rules_fun_tac(
    analyzer: GoalAnalyzer,
    max_nodes: int | None = None,
    max_depth: int | None = None,
    unify_depth: int | None = None,
) -> Tactic:
    """Depth-first search driven by a goal analyzer: at each state the
    first premise for which the analyzer returns a nonempty rule list is
    expanded; a state where every premise is deferred is yielded as a
    result.  Deferred premises are re-analyzed at every visit, so later
    instantiation can wake them up."""

    def tac(goal: Rule) -> Iterator[Rule]:
        budget = [max_nodes]

        def go(g: Rule, depth: int) -> Iterator[Rule]:
            if budget[0] is not None:
                if budget[0] <= 0:
                    return
                budget[0] -= 1
            chosen: tuple[int, Sequence[Rule]] | None = None
            for idx, premise in enumerate(g.premises):
                rules = analyzer(premise)
                if rules:
                    chosen = (idx, rules)
                    break
            if chosen is None:
                yield g
                return
            if max_depth is not None and depth >= max_depth:
                return
            idx, rules = chosen
            for g2 in rules_tac(rules, idx, unify_depth)(g):
                yield from go(g2, depth + 1)

        yield from go(goal, 0)

    return tac
