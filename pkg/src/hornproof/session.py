"""Interactive goal package: proof states with saved alternative streams,
backtracking, undo, qed, scripts, and the equation-solving mode.

Applying a tactic takes the first goal tree it produces and saves the
remainder of the stream; backtracking to a step discards everything after
it and pulls the next tree from that step's remainder.  A full command log
(separate from the history stack, which undo pops) makes any session
replayable as a script.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .fixtures import (
    LOGICS,
    ctt_fixture,
    depth_intr_tac,
    fol_auto_tac,
    fol_fixture,
    iterative_deepening_tac,
    playground_signature,
    type_check_tac,
)
from .logic import (
    LogicSignature,
    ParseError,
    RuleSet,
    SkolemLegend,
    load_rules,
    parse_term,
    parse_terms,
    print_term,
)
from .rules import PROP, Rule, mk_rule
from .tactics import (
    GoalAnalyzer,
    Tactic,
    append_tac,
    depth_first,
    fail_tac,
    id_tac,
    orelse,
    repeat,
    rules_tac,
    then,
    try_tac,
)
from .terms import (
    Atomic,
    Environment,
    KernelError,
    Term,
    aconv,
    apply_env,
    arity_of,
    eta_expand,
    normalize,
)
from .unify import Unifier, flexflex_trivial, unify


class SessionError(KernelError):
    pass


class TacticFailed(SessionError):
    """The tactic produced no goal trees; the state is unchanged."""


class BacktrackExhausted(SessionError):
    """That step's stream of alternatives is empty; the state is unchanged."""


class EmptyHistory(SessionError):
    pass


class GoalsRemain(SessionError):
    pass


class ReplayMismatch(SessionError):
    """A recorded command failed during replay."""


class BadArityGoal(SessionError):
    pass


# --------------------------------------------------------------- sessions


def _generic_analyzer(rs: RuleSet) -> GoalAnalyzer:
    from .fixtures import _flex

    rules = rs.rule_list()

    def analyze(premise: Term) -> Sequence[Rule]:
        return [] if _flex(premise) else rules

    return analyze


class Session:
    """A loaded logic plus the bounds injected into interactive searches
    (the library itself is unbounded)."""

    def __init__(
        self,
        ruleset: RuleSet,
        logic_name: str = "custom",
        unify_depth: int = 64,
        max_nodes: int = 10_000,
        skolem_compress: bool = True,
    ):
        self.ruleset = ruleset
        self.logic_name = logic_name
        self.unify_depth = unify_depth
        self.max_nodes = max_nodes
        self.skolem_compress = skolem_compress
        self.named_tactics: dict[str, Tactic] = {}
        if logic_name == "fol":
            self.named_tactics["auto"] = fol_auto_tac(ruleset, max_nodes)
        elif logic_name == "ctt":
            self.named_tactics["type_check"] = type_check_tac(ruleset, max_nodes)
            self.named_tactics["depth_intr"] = depth_intr_tac(ruleset, max_nodes)
            self.named_tactics["auto"] = self.named_tactics["type_check"]
        else:
            self.named_tactics["auto"] = iterative_deepening_tac(
                _generic_analyzer(ruleset), max_nodes
            )

    @staticmethod
    def for_logic(name: str, **kw) -> "Session":
        """'fol', 'ctt', or a rule-file path."""
        if name in LOGICS:
            return Session(LOGICS[name](), logic_name=name, **kw)
        with open(name, encoding="utf-8") as fh:
            text = fh.read()
        base = LogicSignature(atomic=frozenset({"prop"}))
        return Session(load_rules(base, text, source=name), logic_name=name, **kw)

    @property
    def signature(self) -> LogicSignature:
        return self.ruleset.signature

    # -- goals

    def new_goal(self, prop: Term | str) -> "ProofState":
        if isinstance(prop, str):
            text = prop
            term = parse_term(self.signature, text)
        else:
            term = prop
            text = print_term(self.signature, term)
        if arity_of(term) != PROP:
            raise BadArityGoal(f"a goal must be a prop, got {arity_of(term)!r}")
        term = normalize(term)
        return ProofState(self, Rule((term,), term), text)

    # -- tactic expressions

    def tactic(self, text: str) -> Tactic:
        return _parse_tactic(self, text)

    # -- equation solving

    def solve(self, lhs: str, rhs: str) -> Iterator[tuple[str, Unifier]]:
        """Unify two parsed terms, rendering each unifier as text; unknown
        identifiers become free constants with inferred arities."""
        default = Atomic("term") if "term" in self.signature.atomic else None
        l, r = parse_terms(
            self.signature, [lhs, rhs], free_constants=True, default_var_arity=default
        )
        la, ra = arity_of(l), arity_of(r)
        if la != ra:
            raise BadArityGoal(f"sides have different arities: {la!r} / {ra!r}")
        for uni in unify(l, r, max_depth=self.unify_depth):
            yield self._render_unifier(l, r, uni), uni

    def _render_unifier(self, l: Term, r: Term, uni: Unifier) -> str:
        from .terms import free_vars

        names = sorted(
            {v for v in free_vars(l) | free_vars(r)}, key=lambda v: (v.name, v.gen)
        )
        parts = []
        for v in names:
            t = normalize(apply_env(uni.env, v))
            if not aconv(t, v):
                parts.append(f"?{v.name} = {print_term(self.signature, t)}")
        body = "{" + ", ".join(parts) + "}"
        if uni.flexflex:
            residue = "; ".join(
                f"{print_term(self.signature, p.lhs)} =?= {print_term(self.signature, p.rhs)}"
                for p in uni.flexflex
            )
            body += f"  with constraints [{residue}]"
        return body


# ------------------------------------------------------------ proof state


@dataclass
class Step:
    prior: Rule
    command: str
    rest: Iterator[Rule]
    _peeked: Rule | None = None
    _done: bool = False

    def has_more(self) -> bool:
        if self._peeked is None and not self._done:
            self._peeked = next(self.rest, None)
            if self._peeked is None:
                self._done = True
        return self._peeked is not None

    def next_alternative(self) -> Rule | None:
        if self.has_more():
            out = self._peeked
            self._peeked = None
            return out
        return None


class ProofState:
    """Current goal tree plus the backtrack history and command log."""

    def __init__(self, session: Session, goal: Rule, goal_text: str):
        self.session = session
        self.goal = goal
        self.goal_text = goal_text
        self.steps: list[Step] = []
        self.log: list[str] = []
        self.legend = SkolemLegend()

    # -- commands

    def apply(self, tactic_expr: str) -> "ProofState":
        tac = self.session.tactic(tactic_expr)
        stream = tac(self.goal)
        first = next(stream, None)
        if first is None:
            raise TacticFailed(f"tactic produced no goal trees: {tactic_expr}")
        self.steps.append(Step(self.goal, tactic_expr, stream))
        self.goal = first
        self.log.append(f"apply {tactic_expr}")
        return self

    def backtrack(self, step_index: int) -> "ProofState":
        """1-based index into the history; discards later steps and takes
        the next alternative saved at that step."""
        if not 1 <= step_index <= len(self.steps):
            raise BacktrackExhausted(f"no step {step_index}")
        step = self.steps[step_index - 1]
        nxt = step.next_alternative()
        if nxt is None:
            raise BacktrackExhausted(
                f"no alternatives remain at step {step_index}"
            )
        del self.steps[step_index:]
        self.goal = nxt
        self.log.append(f"backtrack {step_index}")
        return self

    def undo(self) -> "ProofState":
        if not self.steps:
            raise EmptyHistory("nothing to undo")
        step = self.steps.pop()
        self.goal = step.prior
        self.log.append("undo")
        return self

    def qed(self) -> Rule:
        """Close residual flex-flex constraints with the trivial unifier and
        return the finished theorem scheme."""
        if self.goal.premises:
            raise GoalsRemain(f"{len(self.goal.premises)} subgoals remain")
        concl = self.goal.conclusion
        if self.goal.flexflex:
            env = flexflex_trivial(self.goal.flexflex)
            concl = normalize(apply_env(env, concl))
        self.log.append("qed")
        return Rule((), concl)

    # -- display

    def show(self) -> str:
        sig = self.session.signature
        compress = self.session.skolem_compress
        lines = [
            "Goal: "
            + print_term(sig, self.goal.conclusion, compress, self.legend)
        ]
        if not self.goal.premises:
            lines.append("No subgoals.  (qed)")
        for i, p in enumerate(self.goal.premises, 1):
            lines.append(f" {i}. " + print_term(sig, p, compress, self.legend))
        if self.goal.flexflex:
            lines.append(f" [{len(self.goal.flexflex)} flex-flex constraints]")
        if compress and self.legend.labels:
            for label, full in self.legend.entries(sig):
                lines.append(f"   {label} = {full}")
        return "\n".join(lines)


# ---------------------------------------------------------------- scripts


def script_save(state: ProofState, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f'goal "{state.goal_text}"\n')
        for cmd in state.log:
            fh.write(cmd + "\n")


def script_replay(session: Session, path: str) -> tuple[ProofState, Rule | None]:
    """Re-run a script; returns the final state and, if the script ended in
    qed, the theorem."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    state: ProofState | None = None
    theorem: Rule | None = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("goal"):
                text = line[len("goal") :].strip()
                if text.startswith('"') and text.endswith('"'):
                    text = text[1:-1]
                state = session.new_goal(text)
            elif state is None:
                raise ReplayMismatch("script must open with a goal line")
            elif line.startswith("apply "):
                state.apply(line[len("apply ") :].strip())
            elif line.startswith("backtrack"):
                state.backtrack(int(line.split()[1]))
            elif line == "undo":
                state.undo()
            elif line == "qed":
                theorem = state.qed()
            else:
                raise ReplayMismatch(f"unknown command {line!r}")
        except ReplayMismatch:
            raise
        except (KernelError, ValueError, IndexError) as e:
            raise ReplayMismatch(f"{path}:{lineno}: {line!r} failed: {e}") from e
    if state is None:
        raise ReplayMismatch("empty script")
    return state, theorem


# ------------------------------------------------------ tactic expressions

_TACTIC_TOKENS = ("THEN", "ORELSE", "REPEAT", "TRY", "DEPTH_FIRST", "(", ")")


def _lex_tactic(text: str) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()":
            out.append(c)
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "()":
            j += 1
        out.append(text[i:j])
        i = j
    return out


def _parse_tactic(session: Session, text: str) -> Tactic:
    toks = _lex_tactic(text)
    pos = [0]

    def peek() -> str | None:
        return toks[pos[0]] if pos[0] < len(toks) else None

    def take() -> str:
        t = peek()
        if t is None:
            raise ParseError("unexpected end of tactic expression")
        pos[0] += 1
        return t

    def atom() -> Tactic:
        t = take()
        if t == "(":
            inner = alternation()
            if take() != ")":
                raise ParseError("missing ')' in tactic expression")
            return inner
        if t == "REPEAT":
            return repeat(atom())
        if t == "TRY":
            return try_tac(atom())
        if t == "DEPTH_FIRST":
            return depth_first(t=atom(), max_nodes=session.max_nodes)
        if t == "id":
            return id_tac
        if t == "fail":
            return fail_tac
        if t in ("THEN", "ORELSE", ")"):
            raise ParseError(f"misplaced {t!r} in tactic expression")
        name, _, index = t.partition("@")
        i = int(index) - 1 if index else 0
        if not index and name in session.named_tactics:
            return session.named_tactics[name]
        if name in session.ruleset.rules:
            return rules_tac(
                [session.ruleset.rule(name)], i, session.unify_depth
            )
        raise ParseError(f"unknown rule or tactic {name!r}")

    def sequence() -> Tactic:
        left = atom()
        while peek() == "THEN":
            take()
            left = then(left, atom())
        return left

    def alternation() -> Tactic:
        left = sequence()
        while peek() in ("ORELSE", "APPEND"):
            op = take()
            right = sequence()
            left = orelse(left, right) if op == "ORELSE" else append_tac(left, right)
        return left

    tac = alternation()
    if peek() is not None:
        raise ParseError(f"trailing input in tactic expression: {peek()!r}")
    return tac
