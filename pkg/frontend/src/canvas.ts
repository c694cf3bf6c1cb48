/** SVG canvas: nodes drawn by kind, arcs with arrowheads, selection, drag. */

import { boundaryPoint, NODE_HEIGHT, NODE_WIDTH, shapeElement, shapeForKind, svg } from "./shapes.js";
import type { Arc, DiagramDocument, NodeRecord } from "./types.js";
import { arcsOf } from "./types.js";

export interface CanvasHandlers {
  onSelectNode(id: string | null): void;
  onSelectArc(arc: Arc | null): void;
  onMoveNode(id: string, x: number, y: number): void;
  /** Fired when the user clicks a target while an arc is pending. */
  onCompleteArc(from: string, to: string): void;
}

export interface CanvasState {
  selectedNode: string | null;
  selectedArc: Arc | null;
  /** Source node of an arc being drawn, if any. */
  pendingArcFrom: string | null;
}

export class DiagramCanvas {
  readonly root: SVGSVGElement;
  private handlers: CanvasHandlers;
  private positions = new Map<string, [number, number]>();
  private dragging: { id: string; startX: number; startY: number; x: number; y: number } | null = null;

  constructor(handlers: CanvasHandlers) {
    this.handlers = handlers;
    this.root = svg("svg", { class: "canvas", viewBox: "0 0 900 560" });
    const defs = svg("defs");
    const marker = svg("marker", {
      id: "arrow", viewBox: "0 0 10 10", refX: 9, refY: 5,
      markerWidth: 7, markerHeight: 7, orient: "auto-start-reverse",
    });
    const tip = svg("path", { d: "M 0 0 L 10 5 L 0 10 z" });
    tip.setAttribute("class", "arrow-tip");
    marker.appendChild(tip);
    defs.appendChild(marker);
    this.root.appendChild(defs);
    this.root.addEventListener("pointerdown", (ev) => {
      if (ev.target === this.root) {
        this.handlers.onSelectNode(null);
        this.handlers.onSelectArc(null);
      }
    });
  }

  position(id: string): [number, number] {
    return this.positions.get(id) ?? [100, 100];
  }

  render(doc: DiagramDocument, state: CanvasState): void {
    while (this.root.childNodes.length > 1) this.root.removeChild(this.root.lastChild!);
    this.assignPositions(doc);

    for (const arc of arcsOf(doc)) this.root.appendChild(this.arcElement(doc, arc, state));
    for (const node of doc.nodes) this.root.appendChild(this.nodeElement(node, state));
  }

  private assignPositions(doc: DiagramDocument): void {
    this.positions.clear();
    const layout = doc.layout ?? {};
    let fallback = 0;
    for (const node of doc.nodes) {
      const pos = layout[node.id];
      if (pos) {
        this.positions.set(node.id, [pos[0], pos[1]]);
      } else {
        this.positions.set(node.id, [120 + (fallback % 4) * 190, 90 + Math.floor(fallback / 4) * 130]);
        fallback += 1;
      }
    }
  }

  private nodeElement(node: NodeRecord, state: CanvasState): SVGElement {
    const [x, y] = this.position(node.id);
    const group = svg("g", { class: `node kind-${node.kind}`, "data-node": node.id });
    const shape = shapeForKind(node.kind);
    const outline = shapeElement(shape, x, y);
    outline.setAttribute("data-shape", shape);
    if (state.selectedNode === node.id) group.classList.add("selected");
    if (state.pendingArcFrom === node.id) group.classList.add("arc-source");
    group.appendChild(outline);
    const label = svg("text", { x, y, "text-anchor": "middle", "dominant-baseline": "middle" });
    label.textContent = node.name;
    group.appendChild(label);

    group.addEventListener("pointerdown", (ev) => {
      ev.stopPropagation();
      if (state.pendingArcFrom && state.pendingArcFrom !== node.id) {
        this.handlers.onCompleteArc(state.pendingArcFrom, node.id);
        return;
      }
      this.handlers.onSelectNode(node.id);
      this.dragging = { id: node.id, startX: ev.clientX, startY: ev.clientY, x, y };
      const move = (mv: PointerEvent) => {
        if (!this.dragging) return;
        const nx = this.dragging.x + (mv.clientX - this.dragging.startX);
        const ny = this.dragging.y + (mv.clientY - this.dragging.startY);
        group.setAttribute("transform",
          `translate(${nx - this.dragging.x}, ${ny - this.dragging.y})`);
      };
      const up = (uv: PointerEvent) => {
        window.removeEventListener("pointermove", move);
        window.removeEventListener("pointerup", up);
        if (!this.dragging) return;
        const nx = this.dragging.x + (uv.clientX - this.dragging.startX);
        const ny = this.dragging.y + (uv.clientY - this.dragging.startY);
        const moved = Math.hypot(nx - this.dragging.x, ny - this.dragging.y) > 2;
        this.dragging = null;
        if (moved) this.handlers.onMoveNode(node.id, nx, ny);
      };
      window.addEventListener("pointermove", move);
      window.addEventListener("pointerup", up);
    });
    return group;
  }

  private arcElement(doc: DiagramDocument, arc: Arc, state: CanvasState): SVGElement {
    const [fx, fy] = this.position(arc.from);
    const [tx, ty] = this.position(arc.to);
    const fromNode = doc.nodes.find((n) => n.id === arc.from)!;
    const toNode = doc.nodes.find((n) => n.id === arc.to)!;
    const start = boundaryPoint(shapeForKind(fromNode.kind), fx, fy, tx, ty);
    const end = boundaryPoint(shapeForKind(toNode.kind), tx, ty, fx, fy);
    const group = svg("g", { class: "arc", "data-arc": `${arc.from}->${arc.to}` });
    if (state.selectedArc && state.selectedArc.from === arc.from && state.selectedArc.to === arc.to) {
      group.classList.add("selected");
    }
    if (toNode.kind === "decision") group.classList.add("informational");
    const line = svg("line", {
      x1: start.x, y1: start.y, x2: end.x, y2: end.y, "marker-end": "url(#arrow)",
    });
    // invisible fat line so thin arcs are clickable
    const hit = svg("line", { x1: start.x, y1: start.y, x2: end.x, y2: end.y, class: "hit" });
    hit.addEventListener("pointerdown", (ev) => {
      ev.stopPropagation();
      this.handlers.onSelectArc(arc);
    });
    group.appendChild(line);
    group.appendChild(hit);
    return group;
  }
}
