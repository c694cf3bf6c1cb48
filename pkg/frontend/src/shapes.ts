/** Node rendering convention: chance=oval, decision=rectangle, value=rounded rectangle. */

import type { NodeKind } from "./types.js";

export type Shape = "oval" | "rectangle" | "rounded-rectangle";

export const NODE_WIDTH = 120;
export const NODE_HEIGHT = 52;
const SVG_NS = "http://www.w3.org/2000/svg";

export function shapeForKind(kind: NodeKind): Shape {
  switch (kind) {
    case "chance":
      return "oval";
    case "decision":
      return "rectangle";
    case "value":
      return "rounded-rectangle";
  }
}

export function svg<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value));
  return el;
}

/** Outline element for a node, centered on (x, y). */
export function shapeElement(shape: Shape, x: number, y: number): SVGElement {
  const w = NODE_WIDTH;
  const h = NODE_HEIGHT;
  if (shape === "oval") {
    return svg("ellipse", { cx: x, cy: y, rx: w / 2, ry: h / 2 });
  }
  const rect = svg("rect", { x: x - w / 2, y: y - h / 2, width: w, height: h });
  if (shape === "rounded-rectangle") {
    rect.setAttribute("rx", "16");
    rect.setAttribute("ry", "16");
  }
  return rect;
}

/** Point on the node boundary toward (tx, ty), for arrow endpoints. */
export function boundaryPoint(
  shape: Shape, x: number, y: number, tx: number, ty: number,
): { x: number; y: number } {
  const dx = tx - x;
  const dy = ty - y;
  const len = Math.hypot(dx, dy) || 1;
  if (shape === "oval") {
    const rx = NODE_WIDTH / 2;
    const ry = NODE_HEIGHT / 2;
    const scale = 1 / Math.hypot(dx / rx, dy / ry || 1e-9);
    return { x: x + dx * scale, y: y + dy * scale };
  }
  const hw = NODE_WIDTH / 2;
  const hh = NODE_HEIGHT / 2;
  const scale = Math.min(hw / Math.abs(dx / len) || Infinity, hh / Math.abs(dy / len) || Infinity);
  return { x: x + (dx / len) * scale, y: y + (dy / len) * scale };
}
