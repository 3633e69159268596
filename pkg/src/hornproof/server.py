"""Socket endpoint for the goal package: length-prefixed JSON messages,
one session per connection, commands processed strictly in order.

Framing: each message is an ASCII decimal byte count terminated by a
newline, followed by exactly that many bytes of UTF-8 JSON.  Every request
gets exactly one response; kernel errors come back as structured error
responses and never terminate the session.  See PROTOCOL.md.
"""

from __future__ import annotations

import json
import socket
import socketserver
import threading
from typing import Any

from .fixtures import LOGICS
from .logic import arity_text, print_term
from .rules import resolve
from .session import ProofState, Session, SessionError
from .terms import Abs, App, Bound, Const, KernelError, Param, Term, Var
from .unify import DepthExceeded

PROTOCOL_VERSION = 1
APPLICABLE_CAP = 4


def term_tree(t: Term) -> dict[str, Any]:
    """Structural JSON rendering of a term for clients."""
    if isinstance(t, Const):
        return {"kind": "const", "name": t.name, "arity": arity_text(t.arity)}
    if isinstance(t, Var):
        return {
            "kind": "var",
            "name": t.name,
            "gen": t.gen,
            "arity": arity_text(t.arity),
        }
    if isinstance(t, Bound):
        return {"kind": "bound", "index": t.index}
    if isinstance(t, Abs):
        return {
            "kind": "abs",
            "hint": t.hint,
            "arg_arity": arity_text(t.arg_arity),
            "body": term_tree(t.body),
        }
    if isinstance(t, App):
        return {"kind": "app", "fun": term_tree(t.fun), "arg": term_tree(t.arg)}
    if isinstance(t, Param):
        return {
            "kind": "param",
            "base": t.base,
            "arity": arity_text(t.arity),
            "subscripts": [term_tree(s) for s in t.subscripts],
        }
    raise KernelError(f"not a term: {t!r}")


class SessionHandler:
    """Dispatches protocol requests against one Session/ProofState pair."""

    def __init__(self, default_logic: str = "fol"):
        self.session: Session | None = None
        self.state: ProofState | None = None
        self.default_logic = default_logic
        self.solver = None
        self.solve_texts: list[str] = []

    # -- helpers

    def _need_state(self) -> ProofState:
        if self.state is None:
            raise SessionError("no goal has been set")
        return self.state

    def _need_session(self) -> Session:
        if self.session is None:
            self.session = Session.for_logic(self.default_logic)
        return self.session

    def state_payload(self) -> dict[str, Any]:
        st = self._need_state()
        sig = st.session.signature
        compress = st.session.skolem_compress
        subgoals = [
            {
                "num": i,
                "text": print_term(sig, p, compress, st.legend),
                "tree": term_tree(p),
            }
            for i, p in enumerate(st.goal.premises, 1)
        ]
        history = [
            {"step": i, "command": s.command, "has_more": s.has_more()}
            for i, s in enumerate(st.steps, 1)
        ]
        return {
            "ok": True,
            "conclusion": print_term(sig, st.goal.conclusion, compress, st.legend),
            "subgoals": subgoals,
            "history": history,
            "legend": [
                {"label": label, "text": text}
                for label, text in st.legend.entries(sig)
            ],
            "constraints": len(st.goal.flexflex),
            "proved": not st.goal.premises,
        }

    # -- request dispatch

    def handle(self, req: dict[str, Any]) -> dict[str, Any]:
        kind = req.get("type")
        try:
            if kind == "hello":
                return {
                    "ok": True,
                    "type": "hello",
                    "version": PROTOCOL_VERSION,
                    "server": "hornproof",
                }
            if kind == "list-logics":
                return {"ok": True, "logics": sorted(LOGICS)}
            if kind == "load-rules":
                name = req.get("logic", self.default_logic)
                self.session = Session.for_logic(name)
                self.state = None
                return {"ok": True, "rules": self.session.ruleset.names()}
            if kind == "new-goal":
                self.state = self._need_session().new_goal(req["goal"])
                return self.state_payload()
            if kind == "state":
                return self.state_payload()
            if kind == "applicable-rules":
                return self.applicable(int(req.get("goal", 1)))
            if kind == "apply":
                self._need_state().apply(req["tactic"])
                return self.state_payload()
            if kind == "backtrack":
                self._need_state().backtrack(int(req["step"]))
                return self.state_payload()
            if kind == "undo":
                self._need_state().undo()
                return self.state_payload()
            if kind == "qed":
                theorem = self._need_state().qed()
                sig = self._need_session().signature
                return {
                    "ok": True,
                    "theorem": print_term(sig, theorem.conclusion),
                }
            if kind == "solve":
                return self.solve(req)
            return {
                "ok": False,
                "error": {"kind": "BadRequest", "message": f"unknown type {kind!r}"},
            }
        except KernelError as e:
            return {
                "ok": False,
                "error": {"kind": type(e).__name__, "message": str(e)},
            }
        except (KeyError, ValueError, TypeError, OSError) as e:
            return {
                "ok": False,
                "error": {"kind": "BadRequest", "message": f"{type(e).__name__}: {e}"},
            }

    def applicable(self, goal_num: int) -> dict[str, Any]:
        st = self._need_state()
        if not 1 <= goal_num <= len(st.goal.premises):
            raise SessionError(f"no subgoal {goal_num}")
        out = []
        for name, rule in st.session.ruleset.rules.items():
            count, capped = 0, False
            try:
                stream = resolve(
                    st.goal, goal_num - 1, rule, max_depth=st.session.unify_depth
                )
                for count, _ in enumerate(stream, 1):
                    if count >= APPLICABLE_CAP:
                        capped = True
                        break
            except KernelError:
                capped = True
            out.append({"rule": name, "unifiers": count, "capped": capped})
        return {"ok": True, "rules": out}

    def solve(self, req: dict[str, Any]) -> dict[str, Any]:
        page = int(req.get("page", 0))
        page_size = int(req.get("page_size", 5))
        if page == 0 or self.solver is None:
            session = self._need_session()
            self.solver = session.solve(req["lhs"], req["rhs"])
            self.solve_texts = []
        # page k covers entries [k*page_size, (k+1)*page_size); one extra
        # pull decides whether a further page exists
        want = (page + 1) * page_size
        try:
            while len(self.solve_texts) < want + 1:
                text, _ = next(self.solver)
                self.solve_texts.append(text)
        except (StopIteration, DepthExceeded):
            pass
        window = self.solve_texts[page * page_size : want]
        return {
            "ok": True,
            "unifiers": window,
            "page": page,
            "more": len(self.solve_texts) > want,
        }


# ------------------------------------------------------------- transport


def send_message(sock: socket.socket, payload: dict[str, Any]) -> None:
    data = json.dumps(payload).encode("utf-8")
    sock.sendall(str(len(data)).encode("ascii") + b"\n" + data)


def recv_message(sock: socket.socket) -> dict[str, Any] | None:
    header = b""
    while not header.endswith(b"\n"):
        c = sock.recv(1)
        if not c:
            return None
        header += c
        if len(header) > 20:
            raise ValueError("oversized frame header")
    n = int(header.strip())
    data = b""
    while len(data) < n:
        chunk = sock.recv(n - len(data))
        if not chunk:
            return None
        data += chunk
    return json.loads(data.decode("utf-8"))


class _Handler(socketserver.BaseRequestHandler):
    def handle(self) -> None:  # one session per connection
        session = SessionHandler(self.server.default_logic)  # type: ignore[attr-defined]
        sock = self.request
        while True:
            try:
                req = recv_message(sock)
            except (ValueError, OSError):
                break
            if req is None:
                break
            try:
                resp = session.handle(req)
            except Exception as e:  # the session must survive anything
                resp = {
                    "ok": False,
                    "error": {"kind": "InternalError", "message": str(e)},
                }
            try:
                send_message(sock, resp)
            except OSError:
                break


class ProofServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, port: int, default_logic: str = "fol"):
        super().__init__(("127.0.0.1", port), _Handler)
        self.default_logic = default_logic


def serve(port: int, default_logic: str = "fol") -> None:
    """Serve sessions on localhost until interrupted."""
    with ProofServer(port, default_logic) as server:
        server.serve_forever()


def serve_background(port: int, default_logic: str = "fol") -> ProofServer:
    """Start a server thread and return the server (for tests and tools)."""
    server = ProofServer(port, default_logic)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
