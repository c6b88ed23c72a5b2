"""HTTP session API: create a session from a term, inspect its state and
net neighbourhood, fire enabled transitions (forward or reversing), undo.

Sessions are in-memory; each session serializes its mutations behind a
lock, so concurrent sessions do not interfere.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .ccs import CCSError, Process, render
from .names import (
    BWD,
    DirectedTransition,
    FWD,
    KeyPlace,
    SyncKeyPlace,
    label_of,
    render_action,
    render_directed,
    render_place,
)
from .petri import LazyNet, Marking, enabled, explore, fire
from .rccs import (
    Monitored,
    RCCSError,
    RProcess,
    backward_steps_named,
    forward_steps_named,
    parse_rccs,
    render_rccs,
    split_normalize,
)
from .reversible import encode_reversible


@dataclass
class Session:
    term: Process
    net: LazyNet
    state: RProcess
    marking: Marking
    history: list = field(default_factory=list)  # (name, prev_state, prev_marking)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def enabled_steps(self) -> dict:
        """Rendered directed name -> (directed transition, successor state)."""
        out = {}
        for s in forward_steps_named(self.state):
            t = DirectedTransition(s.transition, FWD)
            out[render_directed(t)] = (t, s.result)
        for s in backward_steps_named(self.state):
            t = DirectedTransition(s.transition, BWD)
            out[render_directed(t)] = (t, s.result)
        return out

    def state_json(self) -> dict:
        steps = self.enabled_steps()
        return {
            "term-rendering": render(self.term),
            "rccs-rendering": render_rccs(self.state),
            "marking": sorted(render_place(s) for s in self.marking),
            "enabled": [
                {
                    "name": name,
                    "direction": t.direction,
                    "label": render_action(label_of(t.base)),
                }
                for name, (t, _r2) in sorted(steps.items())
            ],
            "history": [name for name, _s, _m in self.history],
        }

    def fire_named(self, name: str) -> None:
        steps = self.enabled_steps()
        if name not in steps:
            raise StaleStateError(name)
        t, next_state = steps[name]
        next_marking = fire(self.net, self.marking, t)
        self.history.append((name, self.state, self.marking))
        self.state = split_normalize(next_state)
        self.marking = next_marking

    def undo(self) -> None:
        if not self.history:
            raise StaleStateError("nothing to undo")
        _name, prev_state, prev_marking = self.history.pop()
        self.state = prev_state
        self.marking = prev_marking

    def net_view(self, radius: int) -> dict:
        window = LazyNet(
            initial=self.marking,
            truncate=self.net.truncate,
            key_resolver=self.net.key_resolver,
        )
        finite = explore(window, depth=radius)
        live = {
            render_directed(t)
            for t in enabled(self.net, self.marking)
        }
        places = []
        for s in sorted(finite.places, key=render_place):
            kind = "proc"
            if isinstance(s, KeyPlace):
                kind = "key"
            elif isinstance(s, SyncKeyPlace):
                kind = "synckey"
            places.append(
                {"id": render_place(s), "kind": kind, "marked": s in self.marking}
            )
        transitions = []
        for t, (pre, post) in sorted(
            finite.transitions.items(), key=lambda kv: render_directed(kv[0])
        ):
            transitions.append(
                {
                    "id": render_directed(t),
                    "direction": t.direction,
                    "label": render_action(label_of(t.base)),
                    "enabled": render_directed(t) in live,
                    "preset": sorted(render_place(s) for s in pre),
                    "postset": sorted(render_place(s) for s in post),
                }
            )
        return {"places": places, "transitions": transitions}


class StaleStateError(Exception):
    pass


# structured JSON forms of memories and monitored processes (the state
# endpoint carries renderings; these are for programmatic consumers)


def memory_json(m) -> list:
    from .rccs import FullSync, PartialSync, Split

    out = []
    for e in m.events:
        if isinstance(e, Split):
            out.append({"kind": "split", "side": e.side})
        elif isinstance(e, PartialSync):
            out.append(
                {
                    "kind": "partial",
                    "action": render_action(e.action),
                    "branch": e.branch,
                    "discarded": render(e.discarded),
                }
            )
        else:
            out.append(
                {
                    "kind": "full",
                    "partner": memory_json(e.partner),
                    "action": render_action(e.action),
                    "branch": e.branch,
                    "discarded": render(e.discarded),
                }
            )
    return out


def rprocess_json(r) -> dict:
    from .rccs import Monitored as Mon, RPar, RRestrict

    if isinstance(r, Mon):
        return {
            "kind": "monitored",
            "memory": memory_json(r.memory),
            "body": render(r.body),
        }
    if isinstance(r, RPar):
        return {
            "kind": "par",
            "left": rprocess_json(r.left),
            "right": rprocess_json(r.right),
        }
    if isinstance(r, RRestrict):
        return {
            "kind": "restrict",
            "channel": r.channel,
            "body": rprocess_json(r.body),
        }
    raise TypeError(r)


class CreateSession(BaseModel):
    term: str


class FireRequest(BaseModel):
    transition: str


def create_app() -> FastAPI:
    app = FastAPI(title="rccsnet session service")
    # the browser stepper is usually served from another local port
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    def get_session(sid: str) -> Session:
        with store_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.post("/sessions")
    def create(req: CreateSession):
        try:
            root = parse_rccs(req.term)
            state = split_normalize(root)
            net = encode_reversible(root)
        except (CCSError, RCCSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = Session(
            term=root.body, net=net, state=state, marking=net.initial
        )
        sid = uuid.uuid4().hex
        with store_lock:
            sessions[sid] = session
        return {"id": sid, "state": session.state_json()}

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        session = get_session(sid)
        with session.lock:
            return session.state_json()

    @app.post("/sessions/{sid}/fire")
    def fire_transition(sid: str, req: FireRequest):
        session = get_session(sid)
        with session.lock:
            try:
                session.fire_named(req.transition)
            except StaleStateError:
                raise HTTPException(
                    status_code=409, detail=f"transition not enabled: {req.transition}"
                )
            return session.state_json()

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        session = get_session(sid)
        with session.lock:
            try:
                session.undo()
            except StaleStateError:
                raise HTTPException(status_code=409, detail="nothing to undo")
            return session.state_json()

    @app.get("/sessions/{sid}/net")
    def net_view(sid: str, radius: int = 1):
        session = get_session(sid)
        with session.lock:
            return session.net_view(radius)

    @app.delete("/sessions/{sid}")
    def delete(sid: str):
        with store_lock:
            if sid not in sessions:
                raise HTTPException(status_code=404, detail="unknown session")
            del sessions[sid]
        return {"deleted": sid}

    return app


app = create_app()
