"""Shared fixtures and helpers: small signatures, a seeded well-aritied
term generator, and unifier soundness/canonicalization utilities."""

from __future__ import annotations

import random
import re

import pytest


def pytest_runtest_logreport(report):
    # one visible line per acceptance criterion
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    m = re.search(r"test_(a\d+)", report.nodeid)
    if not m:
        return
    label = m.group(1).upper()
    outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    print(f"\nACCEPTANCE {label}: {outcome}", flush=True)

from hornproof.fixtures import ctt_fixture, fol_fixture
from hornproof.logic import LogicSignature
from hornproof.terms import (
    Abs,
    App,
    Arity,
    Atomic,
    Bound,
    Const,
    Environment,
    Fun,
    Param,
    Term,
    Var,
    aconv,
    apply_env,
    arity_spine,
    eta_expand,
    fn,
    mk_app,
    normalize,
)
from hornproof.unify import Unifier, flexflex_trivial

TAU = Atomic("t")


@pytest.fixture(scope="session")
def fol():
    return fol_fixture()


@pytest.fixture(scope="session")
def ctt():
    return ctt_fixture()


# ------------------------------------------------------------- unifiers


def closing_env(uni: Unifier) -> Environment:
    return uni.env.merged(flexflex_trivial(uni.flexflex))


def assert_sound(lhs: Term, rhs: Term, uni: Unifier) -> None:
    env = closing_env(uni)
    a = eta_expand(normalize(apply_env(env, lhs)))
    b = eta_expand(normalize(apply_env(env, rhs)))
    assert aconv(a, b), f"unifier does not equate the sides:\n  {a}\n  {b}"


def canonical(uni: Unifier, probe: list[Var]) -> tuple:
    """Rename leftover variables in order of first appearance so unifiers
    that differ only in fresh-variable names compare equal."""
    env = closing_env(uni)
    renaming: dict[tuple[str, int], Var] = {}

    def rename(t: Term) -> Term:
        if isinstance(t, Var):
            if t.key not in renaming:
                renaming[t.key] = Var(f"c{len(renaming)}", 0, t.arity)
            return renaming[t.key]
        if isinstance(t, Abs):
            return Abs("_", t.arg_arity, rename(t.body))
        if isinstance(t, App):
            return App(rename(t.fun), rename(t.arg))
        if isinstance(t, Param):
            return Param(t.base, tuple(rename(s) for s in t.subscripts), t.arity)
        return t

    return tuple(rename(eta_expand(normalize(apply_env(env, v)))) for v in probe)


def distinct_unifiers(stream, probe: list[Var], limit: int | None = None) -> set:
    seen = set()
    for i, uni in enumerate(stream):
        seen.add(canonical(uni, probe))
        if limit is not None and i + 1 >= limit:
            break
    return seen


# -------------------------------------------------------- term generation


class TermGen:
    """Seeded generator of closed well-aritied terms over a signature."""

    def __init__(self, sig: LogicSignature, seed: int = 0, allow_vars: bool = True):
        self.sig = sig
        self.rng = random.Random(seed)
        self.allow_vars = allow_vars
        self.by_result: dict[Atomic, list[tuple[str, Arity]]] = {}
        for name, arity in sig.constants.items():
            _, base = arity_spine(arity)
            self.by_result.setdefault(base, []).append((name, arity))

    def term(self, arity: Arity, binders: tuple[Arity, ...] = (), depth: int = 4) -> Term:
        if isinstance(arity, Fun):
            body = self.term(arity.res, (arity.arg, *binders), depth - 1)
            return Abs("v", arity.arg, body)
        choices = []
        bound = [i for i, a in enumerate(binders) if a == arity]
        if bound:
            choices.append("bound")
        heads = self.by_result.get(arity, [])
        if heads:
            choices.append("const")
        if self.allow_vars:
            choices.append("var")
        if not choices:
            choices = ["var"]
        kind = self.rng.choice(choices)
        if kind == "bound":
            return Bound(self.rng.choice(bound))
        if kind == "var":
            return Var(f"v{self.rng.randrange(3)}_{arity_key(arity)}", 0, arity)
        name, harity = self.rng.choice(heads)
        args, _ = arity_spine(harity)
        if depth <= 0 and args:
            return Var(f"w{self.rng.randrange(3)}_{arity_key(arity)}", 0, arity)
        return mk_app(
            Const(name, harity),
            [self.term(a, binders, depth - 1) for a in args],
        )


def arity_key(a: Arity) -> str:
    if isinstance(a, Atomic):
        return a.name
    return f"f{arity_key(a.arg)}_{arity_key(a.res)}"


@pytest.fixture
def gen_tau():
    sig = LogicSignature(
        atomic=frozenset({"t", "prop"}),
        constants={
            "A": TAU,
            "B": TAU,
            "F": fn(TAU, TAU),
            "G": fn(TAU, TAU, TAU),
            "H": fn(fn(TAU, TAU), TAU),
        },
    )
    return TermGen(sig)
