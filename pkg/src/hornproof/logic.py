"""Object logics as data: signatures, concrete syntax, rule files.

A signature declares atomic arities, constants, infix operators, binder
keywords, postfix keywords, and Skolem bases.  The term parser is driven
entirely by the signature; scheme variables get their arities by solving
the constraints their positions impose, with an explicit ``?name:arity``
annotation available when a variable is under-constrained.  The printer
inverts the parser (round trip up to whitespace) and can compress Skolem
parameters to short labels with a legend.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .rules import Rule, mk_rule
from .terms import (
    Abs,
    App,
    Arity,
    Atomic,
    Bound,
    Const,
    Fun,
    KernelError,
    Param,
    Term,
    Var,
    arity_spine,
    mk_app,
    shift,
    spine,
)


class ParseError(KernelError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line, self.col = line, col


class UnknownConstant(ParseError):
    pass


class ArityError(KernelError):
    pass


class DuplicateRuleName(KernelError):
    pass


# ------------------------------------------------------------- signatures


@dataclass(frozen=True)
class Infix:
    const: str
    prec: int
    assoc: str = "left"  # left | right | none
    family: bool = False  # wrap the right operand in a dummy abstraction


@dataclass(frozen=True)
class LogicSignature:
    atomic: frozenset[str]
    constants: Mapping[str, Arity] = field(default_factory=dict)
    infixes: Mapping[str, Infix] = field(default_factory=dict)
    binders: Mapping[str, str] = field(default_factory=dict)
    postfixes: Mapping[str, str] = field(default_factory=dict)
    skolems: Mapping[str, Arity] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "atomic", frozenset(self.atomic))

    def extended(
        self,
        atomic: Iterable[str] = (),
        constants: Mapping[str, Arity] | None = None,
        infixes: Mapping[str, Infix] | None = None,
        binders: Mapping[str, str] | None = None,
        postfixes: Mapping[str, str] | None = None,
        skolems: Mapping[str, Arity] | None = None,
    ) -> "LogicSignature":
        return LogicSignature(
            self.atomic | set(atomic),
            {**self.constants, **(constants or {})},
            {**self.infixes, **(infixes or {})},
            {**self.binders, **(binders or {})},
            {**self.postfixes, **(postfixes or {})},
            {**self.skolems, **(skolems or {})},
        )

    def validate(self) -> None:
        if "prop" not in self.atomic:
            raise ArityError("signature must declare the atomic arity 'prop'")
        for sym, ix in self.infixes.items():
            a = self.constants.get(ix.const)
            if a is None:
                raise ArityError(f"infix {sym!r} names undeclared constant {ix.const!r}")
            args, _ = arity_spine(a)
            if len(args) != 2:
                raise ArityError(f"infix constant {ix.const!r} must take two arguments")
            if ix.family and not isinstance(args[1], Fun):
                raise ArityError(
                    f"family infix {sym!r} needs a function-arity second argument"
                )
        for kw, cname in self.binders.items():
            if self._binder_shape(cname) is None:
                raise ArityError(f"binder {kw!r}: constant {cname!r} has no binder shape")
        for kw, cname in self.postfixes.items():
            a = self.constants.get(cname)
            if a is None or not isinstance(a, Fun) or isinstance(a.res, Fun):
                raise ArityError(f"postfix {kw!r} needs a one-argument constant")
        for base in self.skolems:
            if base in self.constants:
                raise ArityError(f"skolem base {base!r} clashes with a constant")

    def _binder_shape(self, cname: str) -> tuple[int, Arity] | None:
        """(number of leading non-function args, bound-variable arity) for a
        binder constant: c(%x.b) or c(dom, %x.b)."""
        a = self.constants.get(cname)
        if a is None:
            return None
        if isinstance(a, Fun) and isinstance(a.arg, Fun):
            return (0, a.arg.arg)
        if (
            isinstance(a, Fun)
            and isinstance(a.res, Fun)
            and isinstance(a.res.arg, Fun)
        ):
            return (1, a.res.arg.arg)
        return None


# ------------------------------------------------------------ arity texts


def parse_arity(sig: LogicSignature, text: str) -> Arity:
    """Parse 'term', 'term -> form', '(a -> b) -> c' against the declared
    atomic arities."""
    toks = re.findall(r"->|\(|\)|[A-Za-z0-9_']+|\S", text)
    pos = [0]

    def peek() -> str | None:
        return toks[pos[0]] if pos[0] < len(toks) else None

    def atom() -> Arity:
        t = peek()
        if t == "(":
            pos[0] += 1
            a = arrow()
            if peek() != ")":
                raise ArityError(f"missing ')' in arity {text!r}")
            pos[0] += 1
            return a
        if t is None or not re.fullmatch(r"[A-Za-z0-9_']+", t):
            raise ArityError(f"bad arity syntax: {text!r}")
        pos[0] += 1
        if t not in sig.atomic:
            raise ArityError(f"unknown atomic arity {t!r}")
        return Atomic(t)

    def arrow() -> Arity:
        a = atom()
        if peek() == "->":
            pos[0] += 1
            return Fun(a, arrow())
        return a

    a = arrow()
    if peek() is not None:
        raise ArityError(f"trailing input in arity {text!r}")
    return a


def arity_text(a: Arity, nested: bool = False) -> str:
    if isinstance(a, Atomic):
        return a.name
    inner = f"{arity_text(a.arg, True)} -> {arity_text(a.res)}"
    return f"({inner})" if nested else inner


# ------------------------------------------------------ arity inference


class _AVar:
    """Mutable inference cell for an unknown arity."""

    __slots__ = ("ref", "label")
    _n = 0

    def __init__(self, label: str = ""):
        self.ref: Arity | _AVar | None = None
        self.label = label


def _prune(a):
    while isinstance(a, _AVar) and a.ref is not None:
        a = a.ref
    return a


def _occurs_avar(v: _AVar, a) -> bool:
    a = _prune(a)
    if a is v:
        return True
    if isinstance(a, Fun):
        return _occurs_avar(v, a.arg) or _occurs_avar(v, a.res)
    return False


def _unify_arity(a, b, what: str) -> None:
    a, b = _prune(a), _prune(b)
    if a is b:
        return
    if isinstance(a, _AVar):
        if _occurs_avar(a, b):
            raise ArityError(f"circular arity constraint at {what}")
        a.ref = b
        return
    if isinstance(b, _AVar):
        _unify_arity(b, a, what)
        return
    if isinstance(a, Atomic) and isinstance(b, Atomic) and a.name == b.name:
        return
    if isinstance(a, Fun) and isinstance(b, Fun):
        _unify_arity(a.arg, b.arg, what)
        _unify_arity(a.res, b.res, what)
        return
    raise ArityError(f"arity clash at {what}: {_show_ae(a)} vs {_show_ae(b)}")


def _show_ae(a) -> str:
    a = _prune(a)
    if isinstance(a, _AVar):
        return f"?{a.label or 'arity'}"
    if isinstance(a, Fun):
        return f"({_show_ae(a.arg)} -> {_show_ae(a.res)})"
    return a.name


def _deep_zonk(a, default: Arity | None, what: str) -> Arity:
    a = _prune(a)
    if isinstance(a, _AVar):
        if default is None:
            raise ArityError(
                f"cannot infer the arity of {what}; annotate it, e.g. {what}:<arity>"
            )
        return default
    if isinstance(a, Fun):
        return Fun(_deep_zonk(a.arg, default, what), _deep_zonk(a.res, default, what))
    return a


# --------------------------------------------------------------- tokenizer


@dataclass(frozen=True)
class _Tok:
    kind: str  # var ident sym punct end
    text: str
    line: int
    col: int


_IDENT_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")
_VAR_RE = re.compile(r"\?([A-Za-z0-9_][A-Za-z0-9_']*)(?:@(\d+))?")


def _tokenize(sig: LogicSignature, src: str) -> list[_Tok]:
    symbols = sorted(set(sig.infixes) | {"->", ":"}, key=len, reverse=True)
    toks: list[_Tok] = []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "?":
            m = _VAR_RE.match(src, i)
            if not m:
                raise ParseError("bad scheme-variable name", line, col)
            toks.append(_Tok("var", m.group(0), line, col))
            col += m.end() - i
            i = m.end()
            continue
        matched = None
        for s in symbols:
            if src.startswith(s, i):
                matched = s
                break
        # an identifier wins over a symbol that is merely its prefix
        im = _IDENT_RE.match(src, i)
        if im and (not matched or len(im.group(0)) >= len(matched)):
            toks.append(_Tok("ident", im.group(0), line, col))
            col += im.end() - i
            i = im.end()
            continue
        if matched:
            toks.append(_Tok("sym", matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if c in "()[],.%":
            toks.append(_Tok("punct", c, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Tok("end", "", line, col))
    return toks


# ------------------------------------------------------------------ parser


_BINDER_HINTS_RESERVED = frozenset({"type"})


class _Parser:
    def __init__(
        self,
        sig: LogicSignature,
        free_constants: bool,
        default_var_arity: Arity | None,
    ):
        self.sig = sig
        self.free_constants = free_constants
        self.default = default_var_arity
        self.vars: dict[str, _AVar | Arity] = {}
        self.frees: dict[str, _AVar] = {}
        self.toks: list[_Tok] = []
        self.pos = 0
        self.scope: list[tuple[str, object]] = []  # (name, arity or cell)

    # -- token plumbing

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        if t.kind != "end":
            self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def fail(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    # -- grammar

    def parse_text(self, src: str) -> Term:
        self.toks = _tokenize(self.sig, src)
        self.pos = 0
        t = self.expr(0, frozenset())
        end = self.peek()
        if end.kind != "end":
            raise self.fail(f"trailing input starting at {end.text!r}")
        return t

    def expr(self, min_prec: int, stops: frozenset[str]) -> Term:
        left = self.operand(stops)
        while True:
            t = self.peek()
            if t.kind not in ("sym", "punct") or t.text in stops:
                return left
            ix = self.sig.infixes.get(t.text)
            if ix is None or ix.prec < min_prec:
                return left
            self.next()
            right_min = ix.prec if ix.assoc == "right" else ix.prec + 1
            right = self.expr(right_min, stops)
            c = Const(ix.const, self.sig.constants[ix.const])
            if ix.family:
                args, _ = arity_spine(c.arity)
                fam_arg = args[1]
                assert isinstance(fam_arg, Fun)
                right = Abs("_", fam_arg.arg, shift(right, 1))
            left = App(App(c, left), right)

    def operand(self, stops: frozenset[str]) -> Term:
        t = self.next()
        if t.kind == "var":
            m = _VAR_RE.fullmatch(t.text)
            assert m
            name, gen = m.group(1), int(m.group(2) or 0)
            cell = self.vars.setdefault(name, _AVar(f"?{name}"))
            if self.annotation_follows():
                self.expect(":")
                ann = self.parse_inline_arity()
                _unify_arity(cell, ann, f"?{name}")
            return self.suffixes(Var(name, gen, cell), stops)
        if t.kind == "ident":
            name = t.text
            if name in self.sig.binders:
                return self.binder(name, stops)
            for depth, (bname, barity) in enumerate(reversed(self.scope)):
                if bname == name:
                    return self.suffixes(Bound(depth), stops)
            if name in self.sig.skolems and self.peek().text == "[":
                return self.suffixes(self.skolem(name), stops)
            a = self.sig.constants.get(name)
            if a is not None:
                return self.suffixes(Const(name, a), stops)
            if self.free_constants:
                cell = self.frees.setdefault(name, _AVar(name))
                return self.suffixes(Const(name, cell), stops)
            raise UnknownConstant(f"unknown constant {name!r}", t.line, t.col)
        if t.text == "%":
            return self.lam(stops)
        if t.text == "(":
            inner = self.expr(0, frozenset())
            self.expect(")")
            return self.suffixes(inner, stops)
        raise ParseError(
            f"unexpected {t.text or 'end of input'!r}", t.line, t.col
        )

    def annotation_follows(self) -> bool:
        # '?x : term' is an annotation only when what follows the colon can
        # start an arity; otherwise ':' is left alone for the infix level.
        if self.peek().text != ":":
            return False
        nxt = self.peek(1)
        return nxt.text == "(" or (nxt.kind == "ident" and nxt.text in self.sig.atomic)

    def parse_inline_arity(self) -> Arity:
        # arity grammar embedded in the token stream; the '->' form requires
        # parentheses so the annotation cannot swallow surrounding syntax
        def atom() -> Arity:
            t = self.next()
            if t.text == "(":
                a = arrow()
                self.expect(")")
                return a
            if t.kind == "ident" and t.text in self.sig.atomic:
                return Atomic(t.text)
            raise ParseError(f"bad arity at {t.text!r}", t.line, t.col)

        def arrow() -> Arity:
            a = atom()
            if self.peek().text == "->":
                self.next()
                return Fun(a, arrow())
            return a

        return atom()

    def binder(self, kw: str, stops: frozenset[str]) -> Term:
        cname = self.sig.binders[kw]
        shape = self.sig._binder_shape(cname)
        assert shape is not None
        extra, bound_arity = shape
        vtok = self.next()
        if vtok.kind != "ident":
            raise ParseError(f"binder {kw} needs a variable name", vtok.line, vtok.col)
        c = Const(cname, self.sig.constants[cname])
        dom: Term | None = None
        if extra == 1:
            self.expect(":")
            dom = self.expr(0, stops | {"."})
        self.expect(".")
        self.scope.append((vtok.text, bound_arity))
        body = self.expr(0, stops)
        self.scope.pop()
        absx = Abs(vtok.text, bound_arity, body)
        return App(App(c, dom), absx) if dom is not None else App(c, absx)

    def lam(self, stops: frozenset[str]) -> Term:
        vtok = self.next()
        if vtok.kind != "ident":
            raise ParseError("'%' needs a variable name", vtok.line, vtok.col)
        cell: object = _AVar(f"%{vtok.text}")
        if self.annotation_follows():
            self.expect(":")
            cell = self.parse_inline_arity()
        self.expect(".")
        self.scope.append((vtok.text, cell))
        body = self.expr(0, stops)
        self.scope.pop()
        return Abs(vtok.text, cell, body)  # type: ignore[arg-type]

    def skolem(self, base: str) -> Term:
        self.expect("[")
        subs: list[Term] = []
        if self.peek().text != "]":
            while True:
                subs.append(self.expr(0, frozenset({",", "]"})))
                if self.peek().text == ",":
                    self.next()
                    continue
                break
        self.expect("]")
        return Param(base, tuple(subs), self.sig.skolems[base])

    def suffixes(self, t: Term, stops: frozenset[str]) -> Term:
        while True:
            nxt = self.peek()
            if nxt.text == "(":
                self.next()
                args: list[Term] = []
                if self.peek().text != ")":
                    while True:
                        args.append(self.expr(0, frozenset({",", ")"})))
                        if self.peek().text == ",":
                            self.next()
                            continue
                        break
                self.expect(")")
                t = mk_app(t, args)
                continue
            if nxt.kind == "ident" and nxt.text in self.sig.postfixes:
                self.next()
                cname = self.sig.postfixes[nxt.text]
                t = App(Const(cname, self.sig.constants[cname]), t)
                continue
            return t

    # -- inference and resolution

    def infer(self, t: Term, ctx: list[object]) -> object:
        if isinstance(t, (Const, Var, Param)):
            if isinstance(t, Param):
                for s in t.subscripts:
                    self.infer(s, ctx)
            return t.arity
        if isinstance(t, Bound):
            return ctx[t.index]
        if isinstance(t, Abs):
            return Fun(t.arg_arity, self.infer(t.body, [t.arg_arity, *ctx]))  # type: ignore[arg-type]
        if isinstance(t, App):
            fa = self.infer(t.fun, ctx)
            aa = self.infer(t.arg, ctx)
            res = _AVar("result")
            _unify_arity(fa, Fun(aa, res), self.describe(t))  # type: ignore[arg-type]
            return res
        raise ArityError(f"not a term: {t!r}")

    def describe(self, t: Term) -> str:
        head, _ = spine(t)
        if isinstance(head, Const):
            return f"application of {head.name!r}"
        if isinstance(head, Var):
            return f"application of ?{head.name}"
        return "an application"

    def resolve_term(self, t: Term) -> Term:
        if isinstance(t, Var):
            return Var(t.name, t.gen, _deep_zonk(t.arity, self.default, f"?{t.name}"))
        if isinstance(t, Const):
            return Const(t.name, _deep_zonk(t.arity, self.default, t.name))
        if isinstance(t, Abs):
            return Abs(
                t.hint,
                _deep_zonk(t.arg_arity, self.default, f"%{t.hint}"),
                self.resolve_term(t.body),
            )
        if isinstance(t, App):
            return App(self.resolve_term(t.fun), self.resolve_term(t.arg))
        if isinstance(t, Param):
            return Param(t.base, tuple(self.resolve_term(s) for s in t.subscripts), t.arity)
        return t


def parse_terms(
    sig: LogicSignature,
    texts: Sequence[str],
    free_constants: bool = False,
    default_var_arity: Arity | None = None,
) -> list[Term]:
    """Parse several texts with one shared scheme-variable context, so a
    variable name means the same thing in every text (as inside a rule)."""
    p = _Parser(sig, free_constants, default_var_arity)
    raw = [p.parse_text(src) for src in texts]
    for t in raw:
        p.infer(t, [])
    return [p.resolve_term(t) for t in raw]


def parse_term(
    sig: LogicSignature,
    text: str,
    free_constants: bool = False,
    default_var_arity: Arity | None = None,
) -> Term:
    return parse_terms(sig, [text], free_constants, default_var_arity)[0]


# ----------------------------------------------------------------- printer


class SkolemLegend:
    """Stable short labels for Skolem parameters, per base, in order of
    first appearance."""

    def __init__(self) -> None:
        self.labels: dict[Param, str] = {}
        self.counters: dict[str, int] = {}

    def label(self, p: Param) -> str:
        got = self.labels.get(p)
        if got is None:
            k = self.counters.get(p.base, 0) + 1
            self.counters[p.base] = k
            got = f"{p.base}#{k}"
            self.labels[p] = got
        return got

    def entries(self, sig: LogicSignature) -> list[tuple[str, str]]:
        return [
            (label, print_term(sig, p)) for p, label in self.labels.items()
        ]


_ATOM_PREC = 100


class _Printer:
    def __init__(
        self,
        sig: LogicSignature,
        compress: bool,
        legend: SkolemLegend | None,
        annotate: bool,
        full_parens: bool,
    ):
        self.sig = sig
        self.compress = compress
        self.legend = legend if legend is not None else SkolemLegend()
        self.own_legend = legend is None
        self.annotate = annotate
        self.full = full_parens
        self.infix_of = {ix.const: (sym, ix) for sym, ix in sig.infixes.items()}
        self.binder_of = {c: kw for kw, c in sig.binders.items()}
        self.postfix_of = {c: kw for kw, c in sig.postfixes.items()}
        self.scope: list[str] = []
        self.annotated: set[tuple[str, int]] = set()

    def fresh_hint(self, hint: str) -> str:
        taken = (
            set(self.scope)
            | set(self.sig.constants)
            | set(self.sig.binders)
            | set(self.sig.postfixes)
            | set(self.sig.skolems)
        )
        base = hint if hint and hint != "_" else "x"
        if base not in taken:
            return base
        k = 1
        while f"{base}{k}" in taken:
            k += 1
        return f"{base}{k}"

    def wrap(self, text: str, need: bool) -> str:
        return f"({text})" if need or self.full else text

    def show(self, t: Term, min_prec: int, rightmost: bool) -> str:
        head, args = spine(t)

        if isinstance(head, Const):
            got = self.special(head, args, min_prec, rightmost)
            if got is not None:
                return got
        if isinstance(t, Abs):
            hint = self.fresh_hint(t.hint)
            self.scope.append(hint)
            body = self.show(t.body, 0, True)
            self.scope.pop()
            ann = f":{arity_text(t.arg_arity, nested=True)}" if self.annotate else ""
            return self.wrap(f"%{hint}{ann}. {body}", not rightmost)
        if isinstance(t, Var):
            text = f"?{t.name}" if t.gen == 0 else f"?{t.name}@{t.gen}"
            if self.annotate and (t.name, t.gen) not in self.annotated:
                self.annotated.add((t.name, t.gen))
                text += f":{arity_text(t.arity, nested=True)}"
            return text
        if isinstance(t, Bound):
            idx = t.index
            if idx < len(self.scope):
                return self.scope[-1 - idx]
            return f"#{idx}"
        if isinstance(t, Param):
            return self.param(t)
        if isinstance(t, Const):
            return t.name
        # generic application
        shown_head = self.show(head, _ATOM_PREC + 1, False)
        shown_args = ", ".join(self.show(a, 0, True) for a in args)
        return f"{shown_head}({shown_args})"

    def param(self, p: Param) -> str:
        if self.compress:
            return self.legend.label(p)
        subs = ", ".join(self.show(s, 0, True) for s in p.subscripts)
        return f"{p.base}[{subs}]"

    def special(
        self, head: Const, args: list[Term], min_prec: int, rightmost: bool
    ) -> str | None:
        name = head.name
        if name in self.postfix_of and len(args) == 1:
            inner = self.show(args[0], _ATOM_PREC + 1, False)
            return f"{inner} {self.postfix_of[name]}"
        if name in self.infix_of and len(args) == 2:
            sym, ix = self.infix_of[name]
            if ix.family:
                fam = args[1]
                if isinstance(fam, Abs) and not _uses_bound0(fam.body):
                    rhs = shift(fam.body, -1)
                    lt = self.show(args[0], ix.prec + 1, False)
                    rt = self.show(rhs, ix.prec, rightmost and min_prec <= ix.prec)
                    return self.wrap(f"{lt} {sym} {rt}", ix.prec < min_prec)
                # dependent: fall through to the binder form below
            else:
                lp = ix.prec if ix.assoc == "left" else ix.prec + 1
                rp = ix.prec if ix.assoc == "right" else ix.prec + 1
                need = ix.prec < min_prec
                lt = self.show(args[0], lp, False)
                rt = self.show(args[1], rp, rightmost and not need)
                sep = "" if sym == "," else " "
                return self.wrap(f"{lt}{sep}{sym} {rt}", need)
        if name in self.binder_of:
            shape = self.sig._binder_shape(name)
            if shape is not None:
                extra, _ = shape
                if len(args) == extra + 1 and isinstance(args[extra], Abs):
                    absx = args[extra]
                    hint = self.fresh_hint(absx.hint)
                    kw = self.binder_of[name]
                    if extra == 1:
                        dom = self.show(args[0], 0, False)
                        headtxt = f"{kw} {hint} : {dom}."
                    else:
                        headtxt = f"{kw} {hint}."
                    self.scope.append(hint)
                    body = self.show(absx.body, 0, True)
                    self.scope.pop()
                    return self.wrap(f"{headtxt} {body}", not rightmost)
        return None


def _uses_bound0(t: Term, depth: int = 0) -> bool:
    if isinstance(t, Bound):
        return t.index == depth
    if isinstance(t, Abs):
        return _uses_bound0(t.body, depth + 1)
    if isinstance(t, App):
        return _uses_bound0(t.fun, depth) or _uses_bound0(t.arg, depth)
    if isinstance(t, Param):
        return any(_uses_bound0(s, depth) for s in t.subscripts)
    return False


def print_term(
    sig: LogicSignature,
    t: Term,
    compress_skolem: bool = False,
    legend: SkolemLegend | None = None,
    annotate: bool = False,
    full_parens: bool = False,
) -> str:
    """Concrete syntax for a term.  Without compression the result parses
    back to an alpha-equal term; with compression Skolem parameters print
    as short labels (output only) and, when no shared legend is supplied,
    a legend is appended."""
    pr = _Printer(sig, compress_skolem, legend, annotate, full_parens)
    text = pr.show(t, 0, True)
    if compress_skolem and pr.own_legend and pr.legend.labels:
        lines = [f"{label} = {full}" for label, full in pr.legend.entries(sig)]
        text += "\n  where " + "; ".join(lines)
    return text


# --------------------------------------------------------------- rule files


@dataclass
class RuleSet:
    """A signature plus the named rules loaded against it."""

    signature: LogicSignature
    rules: dict[str, Rule]
    texts: dict[str, tuple[tuple[str, ...], str]]

    def rule(self, name: str) -> Rule:
        return self.rules[name]

    def rule_list(self) -> list[Rule]:
        return list(self.rules.values())

    def names(self) -> list[str]:
        return list(self.rules.keys())


_DECL_RE = re.compile(r"^(arity|const|infix|infixfam|binder|postfix|skolem)\s+(.*)$")


def _unquote(s: str, where: str) -> str:
    s = s.strip()
    if len(s) < 2 or s[0] != '"' or s[-1] != '"':
        raise ParseError(f'{where}: expected a double-quoted string')
    return s[1:-1]


def load_rules(sig: LogicSignature, text: str, source: str = "<rules>") -> RuleSet:
    """Load a rule file: optional declaration lines extending the
    signature, then named rule blocks (``rule NAME`` / ``premise "..."``
    lines / ``conclusion "..."``).  '#' starts a comment."""
    rules: dict[str, Rule] = {}
    texts: dict[str, tuple[tuple[str, ...], str]] = {}
    cur_name: str | None = None
    cur_premises: list[str] = []

    def finish(concl_text: str, lineno: int) -> None:
        nonlocal cur_name, cur_premises
        assert cur_name is not None
        try:
            parts = parse_terms(sig, [*cur_premises, concl_text])
            rules[cur_name] = mk_rule(parts[:-1], parts[-1])
        except KernelError as e:
            raise type(e)(f"{source}:{lineno}: rule {cur_name!r}: {e}") from e
        texts[cur_name] = (tuple(cur_premises), concl_text)
        cur_name = None
        cur_premises = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if '"' in stripped:
            # a trailing comment must come after the closing quote
            tail = stripped.rsplit('"', 1)[1]
            if "#" in tail:
                stripped = stripped[: stripped.rindex("#")].strip()
        elif "#" in stripped:
            stripped = stripped.split("#", 1)[0].strip()
        line = stripped
        if not line:
            continue
        m = _DECL_RE.match(line)
        if m and cur_name is None:
            sig = _apply_decl(sig, m.group(1), m.group(2), source, lineno)
            continue
        if line.startswith("rule "):
            if cur_name is not None:
                raise ParseError(f"{source}:{lineno}: rule {cur_name!r} has no conclusion")
            name = line[5:].strip()
            if not name or not _IDENT_RE.fullmatch(name):
                raise ParseError(f"{source}:{lineno}: bad rule name {name!r}")
            if name in rules:
                raise DuplicateRuleName(f"{source}:{lineno}: duplicate rule {name!r}")
            cur_name = name
            continue
        if line.startswith("premise"):
            if cur_name is None:
                raise ParseError(f"{source}:{lineno}: premise outside a rule block")
            cur_premises.append(_unquote(line[len("premise") :], f"{source}:{lineno}"))
            continue
        if line.startswith("conclusion"):
            if cur_name is None:
                raise ParseError(f"{source}:{lineno}: conclusion outside a rule block")
            finish(_unquote(line[len("conclusion") :], f"{source}:{lineno}"), lineno)
            continue
        raise ParseError(f"{source}:{lineno}: cannot understand {line!r}")
    if cur_name is not None:
        raise ParseError(f"{source}: rule {cur_name!r} has no conclusion")
    sig.validate()
    return RuleSet(sig, rules, texts)


def _apply_decl(
    sig: LogicSignature, kind: str, rest: str, source: str, lineno: int
) -> LogicSignature:
    def bad(msg: str) -> ParseError:
        return ParseError(f"{source}:{lineno}: {msg}")

    if kind == "arity":
        name = rest.strip()
        if not _IDENT_RE.fullmatch(name):
            raise bad(f"bad arity name {name!r}")
        return sig.extended(atomic=[name])
    if kind in ("const", "skolem"):
        if ":" not in rest:
            raise bad(f"{kind} wants 'NAME : ARITY'")
        name, atext = rest.split(":", 1)
        name = name.strip()
        arity = parse_arity(sig, atext.strip())
        if kind == "const":
            return sig.extended(constants={name: arity})
        return sig.extended(skolems={name: arity})
    if kind in ("infix", "infixfam"):
        parts = rest.split()
        if len(parts) != 4:
            raise bad(f"{kind} wants 'SYMBOL CONST PREC left|right|none'")
        sym, cname, prec, assoc = parts
        if assoc not in ("left", "right", "none"):
            raise bad(f"bad associativity {assoc!r}")
        return sig.extended(
            infixes={sym: Infix(cname, int(prec), assoc, family=(kind == "infixfam"))}
        )
    if kind == "binder":
        parts = rest.split()
        if len(parts) != 2:
            raise bad("binder wants 'KEYWORD CONST'")
        return sig.extended(binders={parts[0]: parts[1]})
    if kind == "postfix":
        parts = rest.split()
        if len(parts) != 2:
            raise bad("postfix wants 'KEYWORD CONST'")
        return sig.extended(postfixes={parts[0]: parts[1]})
    raise bad(f"unknown declaration {kind!r}")
