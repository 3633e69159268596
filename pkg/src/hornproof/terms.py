"""Typed lambda-calculus kernel: arities, terms, conversion, environments.

Bound variables are de Bruijn indices.  Abstraction nodes keep a printing
hint that equality ignores, so structural equality (`==`) coincides with
alpha-equivalence.  Scheme variables carry a generation number, letting
copies of a rule be renamed apart without inventing new names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union


class KernelError(Exception):
    """Base class for kernel failures."""


class IllAritied(KernelError):
    """A term violates the arity discipline."""


class ResourceLimit(KernelError):
    """A configurable work bound was hit; the computation may diverge."""


class ExpansionOverflow(ResourceLimit):
    """Instantiating a term would materialize something too deep or too
    large to traverse; runaway searches hit this instead of the
    interpreter's stack."""


# Instantiation guards: generous for honest proofs, small enough that the
# recursion below never outruns the interpreter stack.
APPLY_DEPTH_LIMIT = 800
APPLY_SIZE_LIMIT = 500_000


# --------------------------------------------------------------- arities


@dataclass(frozen=True)
class Atomic:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fun:
    arg: "Arity"
    res: "Arity"

    def __repr__(self) -> str:
        a = f"({self.arg!r})" if isinstance(self.arg, Fun) else repr(self.arg)
        return f"{a} -> {self.res!r}"


Arity = Union[Atomic, Fun]


def fn(*arities: Arity) -> Arity:
    """Right-nested function arity: fn(a, b, c) is a -> (b -> c)."""
    if not arities:
        raise ValueError("fn() needs at least one arity")
    result = arities[-1]
    for a in reversed(arities[:-1]):
        result = Fun(a, result)
    return result


def arity_spine(a: Arity) -> tuple[list[Arity], Atomic]:
    """Split a1 -> ... -> an -> base into ([a1..an], base)."""
    args: list[Arity] = []
    while isinstance(a, Fun):
        args.append(a.arg)
        a = a.res
    return args, a


# ----------------------------------------------------------------- terms


@dataclass(frozen=True)
class Const:
    name: str
    arity: Arity


@dataclass(frozen=True)
class Var:
    """Scheme variable: a (name, generation) pair at a fixed arity."""

    name: str
    gen: int
    arity: Arity

    @property
    def key(self) -> tuple[str, int]:
        return (self.name, self.gen)


@dataclass(frozen=True)
class Bound:
    index: int


@dataclass(frozen=True, eq=False)
class Abs:
    hint: str
    arg_arity: Arity
    body: "Term"

    # hint is display-only: equality and hashing ignore it, which makes
    # `==` on terms alpha-equivalence.
    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Abs)
            and self.arg_arity == other.arg_arity
            and self.body == other.body
        )

    def __hash__(self) -> int:
        return hash(("abs", self.arg_arity, self.body))


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Param:
    """Skolem parameter: a rigid symbol whose identity includes the
    expressions it must never occur in (its subscripts)."""

    base: str
    subscripts: tuple["Term", ...]
    arity: Arity

    def __post_init__(self) -> None:
        object.__setattr__(self, "subscripts", tuple(self.subscripts))


Term = Union[Const, Var, Bound, Abs, App, Param]


def aconv(t: Term, u: Term) -> bool:
    """Alpha-equivalence; structural because indices are nameless."""
    return t == u


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split nested applications into (head, [args])."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def mk_app(head: Term, args: Sequence[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


# ---------------------------------------------------------- arity checking


def arity_of(t: Term, binders: Sequence[Arity] = ()) -> Arity:
    """Arity of ``t``; ``binders`` lists enclosing bound-variable arities
    innermost first.  Raises IllAritied on malformed applications."""
    if isinstance(t, (Const, Var, Param)):
        return t.arity
    if isinstance(t, Bound):
        if not 0 <= t.index < len(binders):
            raise IllAritied(f"loose bound variable {t.index}")
        return binders[t.index]
    if isinstance(t, Abs):
        return Fun(t.arg_arity, arity_of(t.body, [t.arg_arity, *binders]))
    if isinstance(t, App):
        fa = arity_of(t.fun, binders)
        if not isinstance(fa, Fun):
            raise IllAritied(f"cannot apply a term of atomic arity {fa!r}")
        aa = arity_of(t.arg, binders)
        if fa.arg != aa:
            raise IllAritied(f"argument arity {aa!r} does not fit {fa!r}")
        return fa.res
    raise IllAritied(f"not a term: {t!r}")


# ------------------------------------------------------------- conversion


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    if by == 0:
        return t
    if isinstance(t, Bound):
        return Bound(t.index + by) if t.index >= cutoff else t
    if isinstance(t, Abs):
        body = shift(t.body, by, cutoff + 1)
        return t if body is t.body else Abs(t.hint, t.arg_arity, body)
    if isinstance(t, App):
        f, a = shift(t.fun, by, cutoff), shift(t.arg, by, cutoff)
        return t if f is t.fun and a is t.arg else App(f, a)
    if isinstance(t, Param):
        subs = tuple(shift(s, by, cutoff) for s in t.subscripts)
        return t if all(a is b for a, b in zip(subs, t.subscripts)) else Param(
            t.base, subs, t.arity
        )
    return t


def _subst_bound(t: Term, depth: int, arg: Term) -> Term:
    if isinstance(t, Bound):
        if t.index == depth:
            return shift(arg, depth)
        if t.index > depth:
            return Bound(t.index - 1)
        return t
    if isinstance(t, Abs):
        return Abs(t.hint, t.arg_arity, _subst_bound(t.body, depth + 1, arg))
    if isinstance(t, App):
        return App(_subst_bound(t.fun, depth, arg), _subst_bound(t.arg, depth, arg))
    if isinstance(t, Param):
        return Param(
            t.base, tuple(_subst_bound(s, depth, arg) for s in t.subscripts), t.arity
        )
    return t


def beta_contract(f: Term, a: Term) -> Term:
    """One beta step: substitute ``a`` for the outer bound variable of ``f``."""
    if not isinstance(f, Abs):
        raise IllAritied("beta_contract needs an abstraction")
    return _subst_bound(f.body, 0, a)


def normalize(t: Term) -> Term:
    """Full beta-normal form (normal-order; terminates on well-aritied
    terms).  Untouched subterms are shared, not rebuilt."""
    if isinstance(t, App):
        f = normalize(t.fun)
        if isinstance(f, Abs):
            return normalize(beta_contract(f, t.arg))
        a = normalize(t.arg)
        return t if f is t.fun and a is t.arg else App(f, a)
    if isinstance(t, Abs):
        body = normalize(t.body)
        return t if body is t.body else Abs(t.hint, t.arg_arity, body)
    if isinstance(t, Param):
        subs = tuple(normalize(s) for s in t.subscripts)
        if all(a is b for a, b in zip(subs, t.subscripts)):
            return t
        return Param(t.base, subs, t.arity)
    return t


_ETA_HINTS = "xyzuvw"


def eta_expand(t: Term, binders: Sequence[Arity] = ()) -> Term:
    """Eta-long form of a beta-normal term: every subterm of function arity
    in head or argument position becomes an explicit abstraction."""
    if isinstance(t, Abs):
        body = eta_expand(t.body, [t.arg_arity, *binders])
        return t if body is t.body else Abs(t.hint, t.arg_arity, body)
    head, args = spine(t)
    if isinstance(head, Abs):
        raise IllAritied("eta_expand expects a beta-normal term")
    if isinstance(head, Bound):
        if not 0 <= head.index < len(binders):
            raise IllAritied(f"loose bound variable {head.index}")
        head_arity = binders[head.index]
    else:
        head_arity = head.arity
    arg_arities, _ = arity_spine(head_arity)
    if len(args) > len(arg_arities):
        raise IllAritied("over-applied head")
    head0 = head
    if isinstance(head, Param):
        subs = tuple(eta_expand(s, binders) for s in head.subscripts)
        if not all(a is b for a, b in zip(subs, head.subscripts)):
            head = Param(head.base, subs, head.arity)
    missing = arg_arities[len(args) :]
    m = len(missing)
    new_args = [_eta_at(a, ar, binders) for a, ar in zip(args, arg_arities)]
    if m == 0:
        if head is head0 and all(a is b for a, b in zip(new_args, args)):
            return t
        return mk_app(head, new_args)
    inner = [*reversed(missing), *binders]
    core = shift(mk_app(head, new_args), m)
    extra = [_eta_at(Bound(m - 1 - j), a, inner) for j, a in enumerate(missing)]
    body: Term = mk_app(core, extra)
    for j, a in enumerate(reversed(missing)):
        hint = _ETA_HINTS[(m - 1 - j) % len(_ETA_HINTS)]
        body = Abs(hint, a, body)
    return body


def _eta_at(t: Term, arity: Arity, binders: Sequence[Arity]) -> Term:
    # like eta_expand but with the arity already known
    if isinstance(arity, Atomic) and not isinstance(t, (Abs, App)):
        if isinstance(t, Param) and t.subscripts:
            return eta_expand(t, binders)
        return t
    return eta_expand(t, binders)


def head_normal(t: Term) -> tuple[list[tuple[str, Arity]], Term, list[Term]]:
    """Decompose into (binders, head, args) using head-position beta steps
    only; the head is a Const, Var, Bound, or Param."""
    binders: list[tuple[str, Arity]] = []
    while True:
        while isinstance(t, Abs):
            binders.append((t.hint, t.arg_arity))
            t = t.body
        head, args = spine(t)
        if isinstance(head, Abs) and args:
            t = mk_app(beta_contract(head, args[0]), args[1:])
            continue
        return binders, head, args


# ----------------------------------------------------------- environments


@dataclass(frozen=True, eq=False)
class Environment:
    """Finite map from scheme variables to terms, plus the generation
    counter used to standardize rules apart.  Bindings may chain: a bound
    term can mention other bound variables, and apply_env resolves all of
    them.  Persistent: bind() returns a new environment."""

    bindings: Mapping[tuple[str, int], Term] = field(default_factory=dict)
    next_gen: int = 0

    def lookup(self, name: str, gen: int) -> Term | None:
        return self.bindings.get((name, gen))

    def bind(self, v: Var, t: Term) -> "Environment":
        if arity_of(t) != v.arity:
            raise IllAritied(f"binding {v.name}@{v.gen} breaks its arity")
        return Environment({**self.bindings, v.key: t}, self.next_gen)

    def bump(self, by: int = 1) -> "Environment":
        return Environment(self.bindings, self.next_gen + by)

    def merged(self, other: "Environment") -> "Environment":
        return Environment(
            {**self.bindings, **other.bindings},
            max(self.next_gen, other.next_gen),
        )

    @staticmethod
    def fresh_for(*terms: Term) -> "Environment":
        top = max((max_generation(t) for t in terms), default=-1)
        return Environment({}, top + 1)

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}@{g}" for (n, g) in self.bindings)
        return f"Environment([{inner}], next_gen={self.next_gen})"


def apply_env(env: Environment, t: Term) -> Term:
    """Replace every bound scheme variable, chasing chained bindings, and
    beta-normalize the result.  Descends into Param subscripts.  Chained
    bindings are expanded tree-style, so pathological chains can blow up;
    the guards raise ExpansionOverflow instead of exhausting the stack."""
    if not env.bindings:
        return normalize(t)
    budget = [APPLY_SIZE_LIMIT]

    def go(t: Term, depth: int) -> Term:
        if depth > APPLY_DEPTH_LIMIT:
            raise ExpansionOverflow(f"instantiation deeper than {APPLY_DEPTH_LIMIT}")
        budget[0] -= 1
        if budget[0] < 0:
            raise ExpansionOverflow(f"instantiation larger than {APPLY_SIZE_LIMIT}")
        if isinstance(t, Var):
            u = env.lookup(t.name, t.gen)
            return t if u is None else go(u, depth + 1)
        if isinstance(t, Abs):
            return Abs(t.hint, t.arg_arity, go(t.body, depth + 1))
        if isinstance(t, App):
            return App(go(t.fun, depth + 1), go(t.arg, depth + 1))
        if isinstance(t, Param):
            return Param(
                t.base, tuple(go(s, depth + 1) for s in t.subscripts), t.arity
            )
        return t

    return normalize(go(t, 0))


def standardize(t: Term, generation: int) -> Term:
    """Move every scheme variable (including those inside Param subscripts)
    to the given generation."""
    if isinstance(t, Var):
        return Var(t.name, generation, t.arity)
    if isinstance(t, Abs):
        return Abs(t.hint, t.arg_arity, standardize(t.body, generation))
    if isinstance(t, App):
        return App(standardize(t.fun, generation), standardize(t.arg, generation))
    if isinstance(t, Param):
        return Param(
            t.base, tuple(standardize(s, generation) for s in t.subscripts), t.arity
        )
    return t


# -------------------------------------------------------------- utilities


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Abs):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.fun)
        yield from subterms(t.arg)
    elif isinstance(t, Param):
        for s in t.subscripts:
            yield from subterms(s)


def free_vars(t: Term) -> frozenset[Var]:
    return frozenset(s for s in subterms(t) if isinstance(s, Var))


def max_generation(t: Term) -> int:
    return max((v.gen for v in free_vars(t)), default=-1)


def term_size(t: Term) -> int:
    """Number of nodes, counted without recursion (safe on huge terms)."""
    n = 0
    stack = [t]
    while stack:
        s = stack.pop()
        n += 1
        if isinstance(s, Abs):
            stack.append(s.body)
        elif isinstance(s, App):
            stack.append(s.fun)
            stack.append(s.arg)
        elif isinstance(s, Param):
            stack.extend(s.subscripts)
    return n


def term_depth(t: Term) -> int:
    """Structural depth, counted without recursion."""
    best = 0
    stack: list[tuple[Term, int]] = [(t, 1)]
    while stack:
        s, d = stack.pop()
        best = max(best, d)
        if isinstance(s, Abs):
            stack.append((s.body, d + 1))
        elif isinstance(s, App):
            stack.append((s.fun, d + 1))
            stack.append((s.arg, d + 1))
        elif isinstance(s, Param):
            stack.extend((sub, d + 1) for sub in s.subscripts)
    return best


def is_closed(t: Term, depth: int = 0) -> bool:
    """True when no bound-variable index escapes ``depth`` enclosing binders."""
    if isinstance(t, Bound):
        return t.index < depth
    if isinstance(t, Abs):
        return is_closed(t.body, depth + 1)
    if isinstance(t, App):
        return is_closed(t.fun, depth) and is_closed(t.arg, depth)
    if isinstance(t, Param):
        return all(is_closed(s, depth) for s in t.subscripts)
    return True
