"""Live elicitation sessions: the round engines driven by human answers.

A session owns one engine run.  Rounds are synchronous barriers: the engine
asks a batch of agents, waits until every one of them has answered, then
recomputes the matching and decides the next round (or finishes).  Every
mutation is appended to a JSON-lines event log so a crashed service can
replay a session to its exact state.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .core import InvalidInputError, Matching
from .elicitation import EngineBase, NaiveEngine, ProtocolError, SqrtNpoEngine
from .npo import check_npo
from .nrm import check_nrm


def _make_engine(n: int, goal: str) -> EngineBase:
    if goal == "npo":
        return SqrtNpoEngine(n)
    if goal == "nrm":
        return NaiveEngine(n, "nrm")
    raise InvalidInputError(f"unknown goal {goal!r}")


class Session:
    """One elicitation run with token-addressed human agents."""

    def __init__(
        self,
        session_id: str,
        n: int,
        goal: str,
        agent_names: tuple[str, ...],
        tokens: tuple[str, ...],
        log_path: Path | None = None,
    ):
        if not 1 <= n <= 500:
            raise InvalidInputError("n must be in [1, 500]")
        if len(agent_names) != n or len(set(agent_names)) != n:
            raise InvalidInputError("need n unique agent names")
        self.id = session_id
        self.n = n
        self.goal = goal
        self.agent_names = agent_names
        self.object_names = tuple(f"o{j + 1}" for j in range(n))
        self.tokens = tokens
        self._token_to_agent = {tok: i for i, tok in enumerate(tokens)}
        self.state = "registering"
        self.joined: set[int] = set()
        self.engine = _make_engine(n, goal)
        self.pending: dict[int, int] = {}  # agent -> position asked
        self.result: Matching | None = None
        self._log_path = log_path
        self._lock = threading.Lock()

    # -- construction ------------------------------------------------------

    @classmethod
    def create(
        cls, n: int, goal: str, agent_names, log_dir: Path | None = None
    ) -> "Session":
        session_id = secrets.token_urlsafe(9)
        names = tuple(agent_names) if agent_names else tuple(
            f"a{i + 1}" for i in range(n)
        )
        tokens = tuple(secrets.token_urlsafe(9) for _ in range(n))
        log_path = (
            log_dir / f"{session_id}.jsonl" if log_dir is not None else None
        )
        session = cls(session_id, n, goal, names, tokens, log_path)
        session._log(
            {
                "type": "created",
                "id": session_id,
                "n": n,
                "goal": goal,
                "agents": list(names),
                "tokens": list(tokens),
            }
        )
        return session

    @classmethod
    def replay(cls, log_path: Path) -> "Session":
        """Rebuild a session from its event log (engine is deterministic)."""
        events = [
            json.loads(line)
            for line in log_path.read_text().splitlines()
            if line.strip()
        ]
        head = events[0]
        assert head["type"] == "created"
        session = cls(
            head["id"],
            head["n"],
            head["goal"],
            tuple(head["agents"]),
            tuple(head["tokens"]),
            log_path=None,  # do not double-append while replaying
        )
        for ev in events[1:]:
            if ev["type"] == "joined":
                session.join(session.tokens[ev["agent"]])
            elif ev["type"] == "answered":
                session.submit(session.tokens[ev["agent"]], ev["object"])
            elif ev["type"] == "aborted":
                session.abort()
        session._log_path = log_path
        return session

    def _log(self, event: dict) -> None:
        if self._log_path is None:
            return
        self._log_path.parent.mkdir(parents=True, exist_ok=True)
        with self._log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")

    # -- agent-facing operations ------------------------------------------

    def agent_for_token(self, token: str) -> int:
        agent = self._token_to_agent.get(token)
        if agent is None:
            raise KeyError("unknown token")
        return agent

    def join(self, token: str) -> int:
        with self._lock:
            agent = self.agent_for_token(token)
            if self.state not in ("registering", "eliciting"):
                raise ProtocolError("session is over")
            if agent not in self.joined:
                self.joined.add(agent)
                self._log({"type": "joined", "agent": agent})
                if self.state == "registering" and len(self.joined) == self.n:
                    self._start()
            return agent

    def start(self) -> None:
        """Coordinator start; only valid once everyone has joined."""
        with self._lock:
            if self.state == "eliciting":
                return
            if self.state != "registering":
                raise ProtocolError("session is over")
            if len(self.joined) != self.n:
                raise ProtocolError("not all agents have joined")
            self._start()

    def _start(self) -> None:
        self.state = "eliciting"
        self._log({"type": "started"})
        self._advance()

    def _advance(self) -> None:
        """Open engine rounds until one is actually waiting on answers."""
        while True:
            targets = self.engine.begin_round()
            if targets is None:
                self.result = self.engine.result
                self.state = "done"
                self._log({"type": "finished"})
                return
            self.pending = {
                a: len(self.engine.prefs[a]) + 1 for a in targets
            }
            return

    def pending_query(self, token: str) -> int | None:
        agent = self.agent_for_token(token)
        with self._lock:
            if self.state != "eliciting":
                return None
            return self.pending.get(agent)

    def submit(self, token: str, object_name: str) -> None:
        with self._lock:
            agent = self.agent_for_token(token)
            if self.state != "eliciting":
                raise ProtocolError("session is not eliciting")
            if agent not in self.pending:
                raise ProtocolError("no pending query for this agent")
            try:
                obj = self.object_names.index(object_name)
            except ValueError:
                raise ProtocolError(f"unknown object {object_name!r}") from None
            self.engine.record_answer(agent, obj)
            del self.pending[agent]
            self._log({"type": "answered", "agent": agent, "object": object_name})
            if self.engine.round_complete():
                self.engine.complete_round()
                self._advance()

    def abort(self) -> None:
        with self._lock:
            if self.state in ("done", "aborted"):
                return
            self.state = "aborted"
            self._log({"type": "aborted"})

    # -- read-only views ---------------------------------------------------

    def result_passes_check(self) -> bool:
        if self.result is None:
            return False
        P = self.engine.profile()
        check = check_npo if self.goal == "npo" else check_nrm
        return check(P, self.result)

    def snapshot(self) -> dict:
        t = self.engine.transcript
        return {
            "id": self.id,
            "state": self.state,
            "goal": self.goal,
            "n": self.n,
            "agents": list(self.agent_names),
            "objects": list(self.object_names),
            "joined": sorted(self.joined),
            "k": [len(p) for p in self.engine.prefs],
            "s": t.s_rounds[-1],
            "total_queries": t.total,
            "pending_agents": sorted(self.pending),
            "result": (
                {
                    self.agent_names[a]: self.object_names[o]
                    for a, o in sorted(self.result.pairs)
                }
                if self.result is not None
                else None
            ),
        }
