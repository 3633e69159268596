"""Command-line interface: REPL, script checking, equation solving, and
the protocol server."""

from __future__ import annotations

import argparse
import sys
from typing import Iterator

from .logic import print_term
from .session import (
    ProofState,
    Session,
    SessionError,
    script_replay,
    script_save,
)
from .terms import KernelError
from .unify import DepthExceeded, Unifier

PAGE = 5


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--logic",
        default="fol",
        help="fol, ctt, or a rule-file path (default: fol)",
    )
    p.add_argument(
        "--depth", type=int, default=64, help="unification depth bound (default 64)"
    )
    p.add_argument(
        "--nodes", type=int, default=10_000, help="search node bound (default 10000)"
    )
    p.add_argument(
        "--no-skolem-compress",
        action="store_true",
        help="print Skolem parameters in full",
    )


def _session(args: argparse.Namespace) -> Session:
    return Session.for_logic(
        args.logic,
        unify_depth=args.depth,
        max_nodes=args.nodes,
        skolem_compress=not args.no_skolem_compress,
    )


def main(argv: list[str] | None = None) -> int:
    top = argparse.ArgumentParser(
        prog="hornproof",
        description="Interactive proof kernel over Horn-clause inference rules",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("repl", help="interactive goal package")
    _add_common(p)

    p = sub.add_parser("check", help="replay a proof script")
    p.add_argument("rulefile", help="fol, ctt, or a rule-file path")
    p.add_argument("script", help="script file to replay")
    p.add_argument("--depth", type=int, default=64)
    p.add_argument("--nodes", type=int, default=10_000)
    p.add_argument("--no-skolem-compress", action="store_true")

    p = sub.add_parser("solve", help="enumerate unifiers of two terms")
    p.add_argument("lhs")
    p.add_argument("rhs")
    _add_common(p)
    p.set_defaults(logic="playground")

    p = sub.add_parser("serve", help="serve the session protocol")
    p.add_argument("--port", type=int, required=True)
    _add_common(p)

    args = top.parse_args(argv)
    try:
        if args.command == "repl":
            return repl(_session(args))
        if args.command == "check":
            args.logic = args.rulefile
            session = _session(args)
            state, theorem = script_replay(session, args.script)
            print(state.show())
            if theorem is not None:
                print("qed:", print_term(session.signature, theorem.conclusion))
            return 0
        if args.command == "solve":
            if args.logic == "playground":
                from .fixtures import playground_signature
                from .logic import RuleSet

                session = Session(
                    RuleSet(playground_signature(), {}, {}),
                    unify_depth=args.depth,
                    max_nodes=args.nodes,
                )
            else:
                session = _session(args)
            return solve_cmd(session, args.lhs, args.rhs)
        if args.command == "serve":
            from .server import serve

            print(f"serving on 127.0.0.1:{args.port} (logic: {args.logic})")
            serve(args.port, args.logic)
            return 0
    except KernelError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    return 0


def solve_cmd(session: Session, lhs: str, rhs: str) -> int:
    shown = 0
    stream = session.solve(lhs, rhs)
    while True:
        page, more = _pull_page(stream)
        for text in page:
            shown += 1
            print(f"{shown}. {text}")
        if not page and shown == 0:
            print("no unifiers")
            return 1
        if not more:
            return 0
        answer = input("more? [y/N] ").strip().lower()
        if answer not in ("y", "yes"):
            return 0


def _pull_page(stream: Iterator[tuple[str, Unifier]]) -> tuple[list[str], bool]:
    out: list[str] = []
    try:
        for _ in range(PAGE):
            text, _uni = next(stream)
            out.append(text)
    except StopIteration:
        return out, False
    except DepthExceeded:
        print("(search depth bound reached)")
        return out, False
    return out, True


HELP = """commands:
  goal "<prop>"        start a new proof
  apply <tactic>       apply a tactic (rule names, name@k, THEN, ORELSE,
                       REPEAT t, TRY t, DEPTH_FIRST t, id, fail, auto, ...)
  show                 print the current state
  rules                list rule names
  backtrack <k>        take the next alternative at step k
  undo                 revert the last step
  qed                  finish and print the theorem
  save <path>          write the session script
  solve <l> =?= <r>    enumerate unifiers
  more                 next page of unifiers
  help, quit
"""


def repl(session: Session) -> int:
    print(f"hornproof ({session.logic_name}); 'help' lists commands")
    state: ProofState | None = None
    solver: Iterator[tuple[str, Unifier]] | None = None

    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            print()
            return 0
        if not line:
            continue
        cmd, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if cmd in ("quit", "exit"):
                return 0
            elif cmd == "help":
                print(HELP, end="")
            elif cmd == "goal":
                if rest.startswith('"') and rest.endswith('"'):
                    rest = rest[1:-1]
                state = session.new_goal(rest)
                print(state.show())
            elif cmd == "rules":
                print(" ".join(session.ruleset.names()))
            elif state is None and cmd in ("apply", "show", "backtrack", "undo", "qed", "save"):
                print("no goal yet; use: goal \"<prop>\"")
            elif cmd == "apply":
                assert state is not None
                state.apply(rest)
                print(state.show())
            elif cmd == "show":
                assert state is not None
                print(state.show())
            elif cmd == "backtrack":
                assert state is not None
                state.backtrack(int(rest))
                print(state.show())
            elif cmd == "undo":
                assert state is not None
                state.undo()
                print(state.show())
            elif cmd == "qed":
                assert state is not None
                theorem = state.qed()
                print("qed:", print_term(session.signature, theorem.conclusion))
            elif cmd == "save":
                assert state is not None
                script_save(state, rest)
                print(f"saved {rest}")
            elif cmd == "solve":
                if "=?=" not in rest:
                    print('usage: solve <lhs> =?= <rhs>')
                    continue
                l, r = rest.split("=?=", 1)
                solver = session.solve(l.strip(), r.strip())
                page, more = _pull_page(solver)
                for i, text in enumerate(page, 1):
                    print(f"{i}. {text}")
                if not page:
                    print("no unifiers")
                elif more:
                    print("('more' continues)")
            elif cmd == "more":
                if solver is None:
                    print("no active solve")
                    continue
                page, more = _pull_page(solver)
                for text in page:
                    print(f". {text}")
                if not more:
                    print("(exhausted)")
            else:
                print(f"unknown command {cmd!r}; 'help' lists commands")
        except SessionError as e:
            print(f"error: {e}")
        except KernelError as e:
            print(f"error: {e}")
        except ValueError as e:
            print(f"error: {e}")


if __name__ == "__main__":
    sys.exit(main())
