"""HTTP API exposing diagram sessions to the workbench UI.

Sessions live in memory: a history of validated snapshots with an undo/redo
cursor.  Every mutating call either appends a snapshot (truncating redo
history) or fails atomically with a machine-readable code — precondition
failures surface as 409, validation/document problems as 400, and every
snapshot returned is re-validated server-side before it leaves the process.

Editor conventions for structural edits: adding a conditioning arc replicates
the existing table across the new parent's outcomes (the old numbers stay
meaningful), removing one averages over the dropped parent.  The UI holds no
model logic of its own.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, replace

import numpy as np
from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import errors as er
from . import io as dio
from . import transforms
from .lottery import statistics, value_lottery
from .model import (
    CHANCE, DECISION, VALUE,
    ConditionalTable, Diagram, NodeId, OutcomeSpace,
    config_count, validate,
)
from .solve import pinned_value_lottery, solve, value_of_information

HISTORY_BOUNDARY = "HISTORY_BOUNDARY"
UNKNOWN_SESSION = "UNKNOWN_SESSION"
UNKNOWN_EDIT = "UNKNOWN_EDIT"

TRANSFORM_KINDS = {
    "reverse": transforms.ARC_REVERSAL,
    "remove_chance": transforms.CHANCE_REMOVAL,
    "remove_decision": transforms.DECISION_REMOVAL,
    "remove_barren": transforms.BARREN_REMOVAL,
    "add_info_arc": transforms.INFO_ARC_ADDITION,
}


@dataclass
class _Entry:
    diagram: Diagram
    record: dict | None  # transform/edit summary that produced this snapshot


class Session:
    def __init__(self, sid: str, diagram: Diagram):
        self.id = sid
        self.lock = threading.Lock()
        self.history: list[_Entry] = [_Entry(diagram, None)]
        self.cursor = 0

    @property
    def diagram(self) -> Diagram:
        return self.history[self.cursor].diagram

    def push(self, diagram: Diagram, record: dict | None) -> None:
        del self.history[self.cursor + 1:]
        self.history.append(_Entry(diagram, record))
        self.cursor += 1


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="infdiag service",
                  description="Influence diagram sessions: edit, transform, solve, inspect.")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    sessions: dict[str, Session] = {}

    @app.exception_handler(er.PreconditionError)
    async def _precondition(_: Request, exc: er.PreconditionError):
        return JSONResponse(status_code=409,
                            content={"error": {"code": exc.code, "message": str(exc)}})

    @app.exception_handler(er.InvalidDiagramError)
    async def _invalid(_: Request, exc: er.InvalidDiagramError):
        return JSONResponse(status_code=400, content={
            "error": {"code": "INVALID_DIAGRAM", "message": str(exc),
                      "violations": [v.to_dict() for v in exc.report]}})

    @app.exception_handler(er.DocumentError)
    async def _document(_: Request, exc: er.DocumentError):
        content = {"error": {"code": "BAD_DOCUMENT", "message": str(exc)}}
        violations = getattr(exc, "violations", None)
        if violations:
            content["error"]["violations"] = [v.to_dict() for v in violations]
        return JSONResponse(status_code=400, content=content)

    def get_session(sid: str) -> Session:
        try:
            return sessions[sid]
        except KeyError:
            raise er.PreconditionError(UNKNOWN_SESSION, f"no session {sid!r}") from None

    def snapshot(session: Session) -> dict:
        entry = session.history[session.cursor]
        report = validate(entry.diagram)
        if report:  # engine invariant breach: every stored snapshot was validated
            raise RuntimeError(f"invalid snapshot in session {session.id}: {report[0].message}")
        return {
            "session_id": session.id,
            "cursor": session.cursor,
            "history_length": len(session.history),
            "can_undo": session.cursor > 0,
            "can_redo": session.cursor + 1 < len(session.history),
            "record": entry.record,
            "diagram": dio.to_document(entry.diagram),
        }

    @app.post("/api/sessions", status_code=201)
    def create_session(payload: dict = Body(...)):
        document = payload.get("document", payload)
        diagram = dio.from_document(document)
        sid = uuid.uuid4().hex[:12]
        sessions[sid] = Session(sid, diagram)
        return snapshot(sessions[sid])

    @app.get("/api/sessions/{sid}")
    def get_snapshot(sid: str):
        return snapshot(get_session(sid))

    @app.get("/api/sessions/{sid}/document")
    def get_document(sid: str):
        return dio.to_document(get_session(sid).diagram)

    @app.post("/api/sessions/{sid}/edits")
    def apply_edit(sid: str, payload: dict = Body(...)):
        session = get_session(sid)
        with session.lock:
            try:
                edited = _edit(session.diagram, payload)
            except (TypeError, ValueError) as exc:
                raise er.DocumentError(f"malformed edit payload: {exc}") from exc
            report = validate(edited)
            if report:
                raise er.InvalidDiagramError(report)
            session.push(edited, {"edit": payload.get("op")})
            return snapshot(session)

    @app.post("/api/sessions/{sid}/transforms")
    def apply_transform(sid: str, payload: dict = Body(...)):
        session = get_session(sid)
        kind = TRANSFORM_KINDS.get(payload.get("kind"))
        if kind is None:
            raise er.PreconditionError(UNKNOWN_EDIT, f"unknown transform {payload.get('kind')!r}")
        if kind in (transforms.ARC_REVERSAL, transforms.INFO_ARC_ADDITION):
            subject = (payload.get("from"), payload.get("to"))
        else:
            subject = (payload.get("node"),)
        if any(not isinstance(s, str) for s in subject):
            raise er.PreconditionError(er.UNKNOWN_NODE, "transform subject must name nodes")
        with session.lock:
            rec = transforms.apply(session.diagram, kind, *subject)
            summary = {"kind": rec.kind, "subject": list(rec.subject)}
            if rec.patched_rows:
                summary["patched_rows"] = list(rec.patched_rows)
            if rec.policy is not None:
                summary["policy"] = dio.policy_dict(rec.before, rec.policy)
            session.push(rec.after, summary)
            return {**snapshot(session), "record": summary}

    @app.post("/api/sessions/{sid}/solve")
    def solve_session(sid: str):
        session = get_session(sid)
        with session.lock:
            return dio.report_dict(solve(session.diagram))

    @app.post("/api/sessions/{sid}/lottery")
    def lottery_session(sid: str, payload: dict | None = Body(default=None)):
        session = get_session(sid)
        payload = payload or {}
        with session.lock:
            s = solve(session.diagram)
            if "decision" in payload:
                lot = pinned_value_lottery(session.diagram, payload["decision"],
                                           payload.get("alternative", 0))
            else:
                lot = value_lottery(s.source, s.policy_map())
            ev, sd, ce = statistics(lot, s.risk)
            return {
                "atoms": [{"payoff": x, "probability": p} for x, p in lot.atoms],
                "statistics": {"certain_equivalent": ce, "expected_value": ev,
                               "standard_deviation": sd},
            }

    @app.post("/api/sessions/{sid}/voi")
    def voi_session(sid: str, payload: dict = Body(...)):
        session = get_session(sid)
        frm, to = payload.get("from"), payload.get("to")
        if not isinstance(frm, str) or not isinstance(to, str):
            raise er.PreconditionError(er.UNKNOWN_NODE, "voi needs 'from' and 'to' node ids")
        with session.lock:
            return {"value_of_information": value_of_information(session.diagram, frm, to)}

    @app.post("/api/sessions/{sid}/undo")
    def undo(sid: str):
        session = get_session(sid)
        with session.lock:
            if session.cursor == 0:
                raise er.PreconditionError(HISTORY_BOUNDARY, "nothing to undo")
            session.cursor -= 1
            return snapshot(session)

    @app.post("/api/sessions/{sid}/redo")
    def redo(sid: str):
        session = get_session(sid)
        with session.lock:
            if session.cursor + 1 >= len(session.history):
                raise er.PreconditionError(HISTORY_BOUNDARY, "nothing to redo")
            session.cursor += 1
            return snapshot(session)

    ui_dir = static_dir or os.environ.get("INFDIAG_UI_DIR", "frontend/dist")
    if os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


# ---------------------------------------------------------------------------
# Structural edits
# ---------------------------------------------------------------------------

def _edit(d: Diagram, payload: dict) -> Diagram:
    op = payload.get("op")
    if op == "set_name":
        node = d.node(_nid(payload, "node"))
        return d.with_nodes([replace(node, name=str(payload.get("name", "")))])
    if op == "set_outcomes":
        return _set_outcomes(d, _nid(payload, "node"), payload.get("outcomes"))
    if op == "set_table":
        node = d.node(_nid(payload, "node"))
        if node.kind != CHANCE:
            raise er.PreconditionError(er.NOT_CHANCE, f"{node.id!r} has no probability table")
        rows = np.asarray(payload.get("table"), dtype=np.float64)
        cards = d.cards(node.parents)
        table = ConditionalTable(len(node.space), cards,
                                 rows.reshape(config_count(cards), len(node.space)))
        return d.with_nodes([replace(node, table=table)])
    if op == "set_payoff":
        node = d.node(_nid(payload, "node"))
        if node.kind != VALUE:
            raise er.PreconditionError(er.IS_VALUE_NODE, f"{node.id!r} is not the value node")
        return d.with_nodes([replace(node, payoff=np.asarray(payload.get("payoff"), dtype=np.float64))])
    if op == "set_risk_aversion":
        node = d.node(_nid(payload, "node"))
        if node.kind != VALUE:
            raise er.PreconditionError(er.IS_VALUE_NODE, f"{node.id!r} is not the value node")
        return d.with_nodes([replace(node, risk_aversion=float(payload.get("value", 0.0)))])
    if op == "add_node":
        record = payload.get("node")
        cards = {nid: len(n.space) for nid, n in d.nodes.items() if n.kind != VALUE}
        kinds = {nid: n.kind for nid, n in d.nodes.items()}
        rec_id = record.get("id") if isinstance(record, dict) else None
        if isinstance(rec_id, str) and rec_id in d.nodes:
            raise er.PreconditionError(er.ARC_PRESENT, f"node id {rec_id!r} already in use")
        if isinstance(record, dict) and record.get("kind") != VALUE:
            cards[record.get("id")] = len(record.get("outcomes") or [])
            kinds[record.get("id")] = record.get("kind")
        node = dio.node_from_record(record, cards, kinds)
        out = d.with_nodes([node])
        position = payload.get("position")
        if position:
            out = out.with_layout({node.id: (position[0], position[1])})
        return out
    if op == "remove_node":
        return _remove_node(d, _nid(payload, "node"))
    if op == "add_arc":
        return _add_arc(d, _nid(payload, "from"), _nid(payload, "to"))
    if op == "remove_arc":
        return _remove_arc(d, _nid(payload, "from"), _nid(payload, "to"))
    if op == "move_node":
        nid = _nid(payload, "node")
        d.node(nid)
        return d.with_layout({nid: (float(payload.get("x", 0)), float(payload.get("y", 0)))})
    raise er.PreconditionError(UNKNOWN_EDIT, f"unknown edit op {op!r}")


def _nid(payload: dict, key: str) -> NodeId:
    nid = payload.get(key)
    if not isinstance(nid, str) or not nid:
        raise er.PreconditionError(er.UNKNOWN_NODE, f"edit needs a node id in {key!r}")
    return nid


def _set_outcomes(d: Diagram, nid: NodeId, outcomes) -> Diagram:
    node = d.node(nid)
    if node.kind == VALUE:
        raise er.PreconditionError(er.IS_VALUE_NODE, "the value node has no outcomes")
    if not isinstance(outcomes, list) or not all(isinstance(o, str) for o in outcomes):
        raise er.PreconditionError(UNKNOWN_EDIT, "outcomes must be a list of strings")
    space = OutcomeSpace(tuple(outcomes))
    if len(space) == len(node.space):
        return d.with_nodes([replace(node, space=space)])
    if d.children[nid]:
        raise er.PreconditionError(
            er.HAS_CHILDREN,
            f"cannot change the outcome count of {nid!r} while other nodes depend on it")
    if node.kind == DECISION:
        return d.with_nodes([replace(node, space=space)])
    rows = config_count(d.cards(node.parents))
    uniform = np.full((rows, len(space)), 1.0 / len(space))
    table = ConditionalTable(len(space), d.cards(node.parents), uniform)
    return d.with_nodes([replace(node, space=space, table=table)])


def _add_arc(d: Diagram, frm: NodeId, to: NodeId) -> Diagram:
    source, target = d.node(frm), d.node(to)
    if source.kind == VALUE:
        raise er.PreconditionError(er.IS_VALUE_NODE, "the value node has no outgoing arcs")
    if frm in target.parents:
        raise er.PreconditionError(er.ARC_PRESENT, f"arc {frm!r} -> {to!r} already present")
    if frm == to or d.has_path(to, frm):
        raise er.PreconditionError(er.ADDITION_WOULD_CYCLE,
                                   f"adding {frm!r} -> {to!r} would create a cycle")
    if target.kind == DECISION:
        return d.with_nodes([replace(target, informational_parents=target.parents + (frm,))])
    card = d.cardinality(frm)
    if target.kind == CHANCE:
        probs = np.repeat(target.table.probabilities, card, axis=0)
        table = ConditionalTable(len(target.space), d.cards(target.parents) + (card,), probs)
        return d.with_nodes([replace(target, parents=target.parents + (frm,), table=table)])
    payoff = np.repeat(target.payoff, card)
    return d.with_nodes([replace(target, parents=target.parents + (frm,), payoff=payoff)])


def _remove_arc(d: Diagram, frm: NodeId, to: NodeId) -> Diagram:
    target = d.node(to)
    if frm not in target.parents:
        raise er.PreconditionError(er.ARC_ABSENT, f"no arc {frm!r} -> {to!r}")
    axis = target.parents.index(frm)
    parents = target.parents[:axis] + target.parents[axis + 1:]
    if target.kind == DECISION:
        return d.with_nodes([replace(target, informational_parents=parents)])
    cards = d.cards(target.parents)
    if target.kind == CHANCE:
        shaped = target.table.probabilities.reshape(*cards, len(target.space))
        probs = shaped.mean(axis=axis).reshape(-1, len(target.space))
        table = ConditionalTable(len(target.space), d.cards(parents), probs)
        return d.with_nodes([replace(target, parents=parents, table=table)])
    shaped = target.payoff.reshape(*cards) if cards else target.payoff
    payoff = shaped.mean(axis=axis).reshape(-1)
    return d.with_nodes([replace(target, parents=parents, payoff=payoff)])


def _remove_node(d: Diagram, nid: NodeId) -> Diagram:
    node = d.node(nid)
    if node.kind == VALUE:
        raise er.PreconditionError(er.IS_VALUE_NODE, "a diagram keeps its value node")
    out = d
    for child in d.children[nid]:
        out = _remove_arc(out, nid, child)
    return out.with_nodes(drop=[nid])


app = create_app()


def main() -> None:
    import uvicorn

    uvicorn.run("infdiag.service:app", host=os.environ.get("HOST", "127.0.0.1"),
                port=int(os.environ.get("PORT", "8000")))


if __name__ == "__main__":
    main()
