"""Diagram documents (`.idg.json`) and solution reports.

The document is plain JSON with an explicit schema version: a node list in
the order drawn, dense table rows in mixed-radix parent order, and optional
per-node canvas coordinates.  Probabilities serialize as decimals that parse
back bit-exactly, so ``load(save(d))`` reproduces ``d``.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from . import errors as er
from .lottery import statistics, value_lottery
from .model import (
    CHANCE, DECISION, VALUE, RENORMALIZE_TOL,
    ChanceNode, ConditionalTable, DecisionNode, Diagram, NodeId, OutcomeSpace,
    ValueNode, config_count, iter_configs, validate,
)
from .solve import Solution, alternative_statistics

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_document(d: Diagram) -> dict:
    nodes = []
    for node in d.nodes.values():
        rec: dict[str, Any] = {"id": node.id, "name": node.name, "kind": node.kind}
        if node.kind == CHANCE:
            rec["outcomes"] = list(node.space.labels)
            rec["parents"] = list(node.parents)
            rec["table"] = [[float(p) for p in row] for row in node.table.probabilities]
        elif node.kind == DECISION:
            rec["outcomes"] = list(node.space.labels)
            rec["parents"] = list(node.informational_parents)
        else:
            rec["parents"] = list(node.parents)
            rec["payoff"] = [float(x) for x in node.payoff]
            rec["risk_aversion"] = float(node.risk_aversion)
        nodes.append(rec)
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "nodes": nodes}
    if d.layout:
        doc["layout"] = {nid: [x, y] for nid, (x, y) in d.layout.items()}
    return doc


def save(d: Diagram) -> bytes:
    return (json.dumps(to_document(d), indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def load(data: bytes | str, *, renormalize: bool = False, strict: bool = True) -> Diagram:
    """Parse a document; with ``strict`` the result must pass validation."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if not data.strip():
        raise er.DocumentError("document is empty", line=1, column=1)
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise er.DocumentError(f"not valid JSON: {exc.msg}",
                               line=exc.lineno, column=exc.colno) from None
    return from_document(doc, renormalize=renormalize, strict=strict)


def from_document(doc: Any, *, renormalize: bool = False, strict: bool = True) -> Diagram:
    if not isinstance(doc, dict):
        raise er.DocumentError("document root must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise er.DocumentError(f"unsupported schema_version {version!r}")
    records = doc.get("nodes")
    if not isinstance(records, list) or not records:
        raise er.DocumentError("document must carry a non-empty 'nodes' list")

    cards: dict[NodeId, int] = {}
    kinds: dict[NodeId, str] = {}
    for rec in records:
        nid = _require_id(rec)
        if nid in kinds:
            raise er.DocumentError(f"duplicate node id {nid!r}", node=nid)
        kind = rec.get("kind")
        if kind not in (CHANCE, DECISION, VALUE):
            raise er.DocumentError(f"unknown node kind {kind!r}", node=nid)
        kinds[nid] = kind
        if kind != VALUE:
            outcomes = rec.get("outcomes")
            if not isinstance(outcomes, list) or not outcomes \
                    or not all(isinstance(o, str) for o in outcomes):
                raise er.DocumentError("outcomes must be a non-empty list of strings", node=nid)
            cards[nid] = len(outcomes)

    nodes = [node_from_record(rec, cards, kinds, renormalize=renormalize) for rec in records]

    layout = {}
    raw_layout = doc.get("layout", {})
    if raw_layout and not isinstance(raw_layout, dict):
        raise er.DocumentError("layout must map node ids to [x, y] pairs")
    for nid, pos in (raw_layout or {}).items():
        if nid not in kinds:
            continue
        try:
            x, y = float(pos[0]), float(pos[1])
        except (TypeError, ValueError, IndexError):
            raise er.DocumentError("layout entries must be [x, y] pairs", node=nid) from None
        layout[nid] = (x, y)

    d = Diagram.from_nodes(nodes, layout)
    if strict:
        report = validate(d)
        if report:
            first = report[0]
            exc = er.DocumentError(first.message, node=first.node, row=first.row)
            exc.violations = report
            raise exc
    return d


def node_from_record(rec: Any, cards: dict[NodeId, int], kinds: dict[NodeId, str],
                     *, renormalize: bool = False):
    nid = _require_id(rec)
    kind = rec["kind"]
    name = rec.get("name", nid)
    if not isinstance(name, str):
        raise er.DocumentError("name must be a string", node=nid)
    parents = rec.get("parents", [])
    if not isinstance(parents, list):
        raise er.DocumentError("parents must be a list of node ids", node=nid)
    for p in parents:
        if p not in kinds:
            raise er.DocumentError(f"unknown parent {p!r}", node=nid)
        if kinds[p] == VALUE:
            raise er.DocumentError("the value node cannot be a parent", node=nid)
    parent_cards = tuple(cards[p] for p in parents)

    if kind == DECISION:
        return DecisionNode(nid, name, OutcomeSpace(tuple(rec["outcomes"])), tuple(parents))

    if kind == CHANCE:
        rows = rec.get("table")
        expected = config_count(parent_cards)
        if not isinstance(rows, list) or len(rows) != expected:
            got = len(rows) if isinstance(rows, list) else "no"
            raise er.DocumentError(
                f"table needs {expected} rows for parents {list(parents)}, got {got}", node=nid)
        width = cards[nid]
        matrix = np.zeros((expected, width))
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != width:
                raise er.DocumentError(f"table row must have {width} entries", node=nid, row=r)
            try:
                matrix[r] = [float(x) for x in row]
            except (TypeError, ValueError):
                raise er.DocumentError("table entries must be numbers", node=nid, row=r) from None
        if renormalize:
            sums = matrix.sum(axis=1)
            fixable = np.abs(sums - 1.0) <= RENORMALIZE_TOL
            matrix[fixable] /= sums[fixable, None]
        return ChanceNode(nid, name, OutcomeSpace(tuple(rec["outcomes"])), tuple(parents),
                          ConditionalTable(width, parent_cards, matrix))

    payoff = rec.get("payoff")
    expected = config_count(parent_cards)
    if not isinstance(payoff, list) or len(payoff) != expected:
        got = len(payoff) if isinstance(payoff, list) else "no"
        raise er.DocumentError(
            f"payoff needs {expected} entries for parents {list(parents)}, got {got}", node=nid)
    try:
        entries = [float(x) for x in payoff]
    except (TypeError, ValueError):
        raise er.DocumentError("payoff entries must be numbers", node=nid) from None
    gamma = rec.get("risk_aversion", 0.0)
    if not isinstance(gamma, (int, float)) or isinstance(gamma, bool):
        raise er.DocumentError("risk_aversion must be a number", node=nid)
    return ValueNode(nid, name, tuple(parents), entries, float(gamma))


def _require_id(rec: Any) -> NodeId:
    if not isinstance(rec, dict):
        raise er.DocumentError("each node must be an object")
    nid = rec.get("id")
    if not isinstance(nid, str) or not nid:
        raise er.DocumentError("each node needs a non-empty string id")
    return nid


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def _fmt(x: float, precision: int) -> str:
    return format(float(x) + 0.0, f".{precision}g")


def report_dict(s: Solution) -> dict:
    """Machine-readable report (full precision)."""
    d = s.source
    out: dict[str, Any] = {
        "optimal_value": s.optimal_value,
        "optimal_expected_utility": s.optimal_expected_utility,
        "risk_aversion": s.risk.gamma,
        "policies": [policy_dict(d, p) for p in s.policies],
        "transcript": [{"kind": r.kind, "subject": list(r.subject),
                        **({"patched_rows": list(r.patched_rows)} if r.patched_rows else {})}
                       for r in s.transcript],
    }
    order = d.decision_order()
    if order:
        out["alternative_statistics"] = [
            {"alternative": row.alternative,
             "certain_equivalent": row.certain_equivalent,
             "expected_value": row.expected_value,
             "standard_deviation": row.standard_deviation}
            for row in alternative_statistics(d, order[0])
        ]
        out["first_decision"] = order[0]
    else:
        lot = value_lottery(d, {})
        ev, sd, ce = statistics(lot, s.risk)
        out["statistics"] = {"certain_equivalent": ce, "expected_value": ev,
                             "standard_deviation": sd}
    return out


def policy_dict(d: Diagram, p) -> dict:
    node = d.nodes[p.decision]
    labels = []
    for state, alt in zip(iter_configs(p.domain_cards), p.choice):
        labels.append({
            "state": {pid: d.nodes[pid].space.labels[v] for pid, v in zip(p.domain, state)},
            "alternative": node.space.labels[int(alt)],
        })
    return {"decision": p.decision, "domain": list(p.domain), "choices": labels}


def render_report(s: Solution, precision: int = 6) -> str:
    """Human-readable report; pinned layout, stable across runs."""
    d = s.source
    lines = [f"optimal value: {_fmt(s.optimal_value, precision)}"]
    if s.risk.gamma > 0:
        lines.append(f"risk aversion: {_fmt(s.risk.gamma, precision)}")
        lines.append(f"expected utility: {_fmt(s.optimal_expected_utility, precision)}")
    for p in s.policies:
        node = d.nodes[p.decision]
        lines.append("")
        lines.append(f"policy for {node.name}:")
        if not p.domain:
            lines.append(f"  -> {node.space.labels[int(p.choice[0])]}")
        else:
            header = [d.nodes[pid].name for pid in p.domain]
            rows = [header + ["choice"]]
            for state, alt in zip(iter_configs(p.domain_cards), p.choice):
                rows.append([d.nodes[pid].space.labels[v] for pid, v in zip(p.domain, state)]
                            + [node.space.labels[int(alt)]])
            lines.extend("  " + line for line in _align(rows))
    order = d.decision_order()
    if order:
        first = d.nodes[order[0]]
        lines.append("")
        lines.append(f"alternatives for {first.name} "
                     "(certain equivalent, expected value, standard deviation):")
        rows = []
        for row in alternative_statistics(d, order[0]):
            rows.append([row.alternative,
                         _fmt(row.certain_equivalent, precision),
                         _fmt(row.expected_value, precision),
                         _fmt(row.standard_deviation, precision)])
        lines.extend("  " + line for line in _align(rows))
    else:
        lot = value_lottery(d, {})
        ev, sd, ce = statistics(lot, s.risk)
        lines.append("")
        lines.append("statistics (certain equivalent, expected value, standard deviation):")
        lines.append(f"  {_fmt(ce, precision)} {_fmt(ev, precision)} {_fmt(sd, precision)}")
    lines.append("")
    lines.append(f"reduction steps: {len(s.transcript)}")
    for k, rec in enumerate(s.transcript, 1):
        lines.append(f"  {k}. {rec.describe()}")
    return "\n".join(lines) + "\n"


def _align(rows: list[list[str]]) -> list[str]:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return [" ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
            for row in rows]


def export_report(s: Solution, format: str = "text", precision: int = 6) -> bytes:
    if format == "text":
        return render_report(s, precision).encode("utf-8")
    if format == "json":
        return (json.dumps(report_dict(s), indent=2) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {format!r}")
