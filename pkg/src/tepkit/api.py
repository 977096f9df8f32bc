"""HTTP session service for the solitaire.

Sessions live in memory; every mutation is re-validated server-side and can
be mirrored to an append-only JSON-lines replay log. Long component probes
can run as background jobs with a polling endpoint.
"""

from __future__ import annotations

import json
import threading
import uuid
from typing import Dict, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .errors import ResourceBudgetError, UsageError
from .families import family_from_json
from .groups import Shape, group_from_json, shape
from .solitaire import (
    SolitaireMove,
    SupportConfig,
    apply_move,
    component,
    default_corner_set,
    is_legal_move,
    legal_moves,
    verify_independent,
)


class Session:
    def __init__(self, sid, group, s, t, initial, family):
        self.id = sid
        self.group = group
        self.s = s
        self.t = t
        self.initial = initial
        self.current = initial
        self.history = []
        self.family = family
        self.lock = threading.Lock()
        self.jobs: Dict[str, dict] = {}

    def state_json(self):
        return {
            "id": self.id,
            "shape": self.s.to_json(),
            "moveCells": self.t.to_json(),
            "support": self.current.support.to_json(),
            "history": [m.to_json(self.group) for m in self.history],
            "hasFamily": self.family is not None,
        }


SCHEMA = {
    "group": {"kind": "lattice|free|heisenberg", "d": "int?", "n": "int?"},
    "element": "lattice/heisenberg: [int,...]; free: reduced word string",
    "shape": {"group": "group", "members": ["element"]},
    "move": {"g": "element", "a": "element", "b": "element"},
    "session": {
        "create": {
            "group": "group",
            "shape": "shape members",
            "moveCells": "optional shape members (defaults to translated lax corners)",
            "support": "shape members",
            "family": "optional family spec",
        },
        "state": {
            "id": "string",
            "support": "shape",
            "history": ["move"],
        },
    },
    "endpoints": [
        "POST /sessions",
        "GET /sessions/{id}",
        "GET /sessions/{id}/moves",
        "POST /sessions/{id}/moves",
        "POST /sessions/{id}/undo",
        "GET /sessions/{id}/independence?budget=N",
        "GET /sessions/{id}/component?limit=N&wait=0|1",
        "GET /sessions/{id}/jobs/{job}",
    ],
}


def create_app(log_path: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="solitaire sessions")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: Dict[str, Session] = {}
    log_lock = threading.Lock()

    def log(record):
        if log_path is None:
            return
        with log_lock:
            with open(log_path, "a") as fh:
                fh.write(json.dumps(record) + "\n")

    def get_session(sid) -> Session:
        sess = sessions.get(sid)
        if sess is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return sess

    @app.get("/schema")
    def schema():
        return SCHEMA

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        try:
            group = group_from_json(body["group"])
            s = shape(group, (group.element_from_json(m) for m in body["shape"]))
            support = shape(
                group, (group.element_from_json(m) for m in body["support"])
            )
            if body.get("moveCells") is not None:
                t = shape(
                    group,
                    (group.element_from_json(m) for m in body["moveCells"]),
                )
            else:
                t = default_corner_set(s)
            family = None
            if body.get("family") is not None:
                family = family_from_json(body["family"])
                if family.shape != s:
                    raise HTTPException(
                        status_code=422,
                        detail="family shape must match the session shape",
                    )
        except HTTPException:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if not set(t.members) <= set(s.members):
            raise HTTPException(
                status_code=422, detail="move cells must lie inside the shape"
            )
        sid = uuid.uuid4().hex[:12]
        sess = Session(sid, group, s, t, SupportConfig(support), family)
        sessions[sid] = sess
        log({"event": "create", "id": sid, "body": body})
        return sess.state_json()

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        return get_session(sid).state_json()

    @app.get("/sessions/{sid}/moves")
    def list_moves(sid: str):
        sess = get_session(sid)
        with sess.lock:
            moves = legal_moves(sess.current, sess.s, sess.t)
            support = set(sess.current.support.members)
            out = []
            for m in moves:
                leaving = m.a if m.a in support else m.b
                entering = m.b if leaving == m.a else m.a
                enc = sess.group.element_to_json
                out.append(
                    {
                        **m.to_json(sess.group),
                        "leaving": enc(leaving),
                        "entering": enc(entering),
                    }
                )
        return {"moves": out}

    @app.post("/sessions/{sid}/moves")
    def post_move(sid: str, body: dict):
        sess = get_session(sid)
        try:
            move = SolitaireMove.from_json(body, sess.group)
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        with sess.lock:
            if not is_legal_move(sess.current, move, sess.s, sess.t):
                raise HTTPException(
                    status_code=409,
                    detail="move is not legal in the current support",
                )
            sess.current = apply_move(sess.current, move, sess.s, sess.t)
            sess.history.append(move)
            log({"event": "move", "id": sid, "move": body})
            return sess.state_json()

    @app.post("/sessions/{sid}/undo")
    def undo(sid: str):
        sess = get_session(sid)
        with sess.lock:
            if not sess.history:
                raise HTTPException(status_code=409, detail="history is empty")
            sess.history.pop()
            current = sess.initial
            for m in sess.history:
                current = apply_move(current, m, sess.s, sess.t)
            sess.current = current
            log({"event": "undo", "id": sid})
            return sess.state_json()

    @app.get("/sessions/{sid}/independence")
    def independence(sid: str, budget: int = 10**6):
        sess = get_session(sid)
        if sess.family is None:
            raise HTTPException(
                status_code=409, detail="no family attached to this session"
            )
        from .geometry import default_geometry

        try:
            ok = verify_independent(
                sess.current,
                sess.family,
                default_geometry(sess.group),
                budget=budget,
            )
        except ResourceBudgetError as exc:
            raise HTTPException(status_code=413, detail=str(exc))
        return {"independent": ok}

    def run_component(sess: Session, limit: int):
        rep = component(sess.current, sess.s, sess.t, limit=limit)
        return {"size": rep["size"], "exhausted": rep["exhausted"], "budget": limit}

    @app.get("/sessions/{sid}/component")
    def component_probe(sid: str, limit: int = 10**5, wait: int = 1):
        sess = get_session(sid)
        if limit <= 0:
            raise HTTPException(status_code=400, detail="limit must be positive")
        if wait:
            return run_component(sess, limit)
        job = uuid.uuid4().hex[:12]
        sess.jobs[job] = {"done": False}

        def work():
            result = run_component(sess, limit)
            sess.jobs[job] = {"done": True, "result": result}

        threading.Thread(target=work, daemon=True).start()
        return {"job": job}

    @app.get("/sessions/{sid}/jobs/{job}")
    def job_status(sid: str, job: str):
        sess = get_session(sid)
        if job not in sess.jobs:
            raise HTTPException(status_code=404, detail="unknown job")
        return sess.jobs[job]

    return app
