/** Node inspector: name, type, outcomes, and the paged distribution grid.
 *
 * Grid rows follow the engine's mixed-radix order (first parent most
 * significant), one row per parent configuration, with the row sum
 * highlighted whenever it is off 1.  Probability cells echo the snapshot's
 * own decimal strings, so a committed entry reads back identically.
 */

import type { DiagramDocument, NodeRecord } from "./types.js";
import { nodeById } from "./types.js";

export const PAGE_SIZE = 9;

export interface InspectorHandlers {
  onRename(id: string, name: string): void;
  onTableChange(id: string, rows: number[][]): void;
  onPayoffChange(id: string, payoff: number[], riskAversion: number): void;
}

const KIND_LABELS: Record<string, string> = {
  chance: "Probabilistic",
  decision: "Decision",
  value: "Expected Value",
};

export function parentConfigurations(cards: number[]): number[][] {
  const total = cards.reduce((a, b) => a * b, 1);
  const rows: number[][] = [];
  for (let index = 0; index < total; index++) {
    const config = new Array<number>(cards.length);
    let rest = index;
    for (let k = cards.length - 1; k >= 0; k--) {
      config[k] = rest % cards[k];
      rest = Math.floor(rest / cards[k]);
    }
    rows.push(config);
  }
  return rows;
}

export function rowSum(row: number[]): number {
  return row.reduce((a, b) => a + b, 0);
}

export class Inspector {
  readonly root: HTMLElement;
  private handlers: InspectorHandlers;
  private page = 0;

  constructor(handlers: InspectorHandlers) {
    this.handlers = handlers;
    this.root = document.createElement("aside");
    this.root.className = "inspector";
  }

  render(doc: DiagramDocument | null, selected: string | null): void {
    this.root.textContent = "";
    if (!doc || !selected) {
      this.root.appendChild(el("p", "muted", "Select a node to inspect it."));
      return;
    }
    const node = nodeById(doc, selected);
    if (!node) return;

    const title = el("h2", "", "");
    const nameInput = document.createElement("input");
    nameInput.className = "name-input";
    nameInput.value = node.name;
    nameInput.addEventListener("change", () => this.handlers.onRename(node.id, nameInput.value));
    title.appendChild(nameInput);
    this.root.appendChild(title);
    this.root.appendChild(el("p", "kind-label", `Type: ${KIND_LABELS[node.kind]}`));

    if (node.outcomes) {
      this.root.appendChild(el("p", "outcomes", `Outcomes: ${node.outcomes.join("  ")}`));
    }
    if (node.kind === "chance") this.renderTable(doc, node);
    if (node.kind === "value") this.renderPayoff(doc, node);
  }

  private parentLabels(doc: DiagramDocument, node: NodeRecord): { headers: string[]; rows: string[][] } {
    const parents = node.parents.map((pid) => nodeById(doc, pid)!);
    const cards = parents.map((p) => p.outcomes!.length);
    const rows = parentConfigurations(cards).map((config) =>
      config.map((v, k) => parents[k].outcomes![v]));
    return { headers: parents.map((p) => p.name), rows };
  }

  private renderTable(doc: DiagramDocument, node: NodeRecord): void {
    const { headers, rows } = this.parentLabels(doc, node);
    const matrix = node.table!.map((row) => [...row]);
    const table = document.createElement("table");
    table.className = "grid";
    const head = table.createTHead().insertRow();
    for (const h of headers) head.appendChild(th(h));
    for (const outcome of node.outcomes!) head.appendChild(th(outcome));
    head.appendChild(th("sum"));

    const body = table.createTBody();
    const start = this.pageStart(matrix.length);
    for (let r = start; r < Math.min(start + PAGE_SIZE, matrix.length); r++) {
      const tr = body.insertRow();
      tr.className = "config-row";
      for (const label of rows[r] ?? []) tr.appendChild(td(label, "config"));
      matrix[r].forEach((p, c) => {
        const cell = tr.insertCell();
        const input = document.createElement("input");
        input.className = "prob";
        input.value = String(p);
        input.addEventListener("change", () => {
          matrix[r][c] = Number(input.value);
          this.handlers.onTableChange(node.id, matrix);
        });
        cell.appendChild(input);
      });
      const sum = rowSum(matrix[r]);
      const sumCell = td(String(Math.round(sum * 1e12) / 1e12), "sum");
      if (Math.abs(sum - 1.0) > 1e-9) sumCell.classList.add("bad-sum");
      tr.appendChild(sumCell);
    }
    this.root.appendChild(el("p", "grid-title", "Distribution:"));
    this.root.appendChild(table);
    this.renderPager(matrix.length);
  }

  private renderPayoff(doc: DiagramDocument, node: NodeRecord): void {
    const { headers, rows } = this.parentLabels(doc, node);
    const payoff = [...node.payoff!];
    const gammaRow = el("p", "risk", "Risk Aversion: ");
    const gammaInput = document.createElement("input");
    gammaInput.className = "gamma";
    gammaInput.value = String(node.risk_aversion ?? 0);
    gammaInput.addEventListener("change", () =>
      this.handlers.onPayoffChange(node.id, payoff, Number(gammaInput.value)));
    gammaRow.appendChild(gammaInput);
    this.root.appendChild(gammaRow);

    const table = document.createElement("table");
    table.className = "grid";
    const head = table.createTHead().insertRow();
    for (const h of headers) head.appendChild(th(h));
    head.appendChild(th("payoff"));
    const body = table.createTBody();
    const start = this.pageStart(payoff.length);
    for (let r = start; r < Math.min(start + PAGE_SIZE, payoff.length); r++) {
      const tr = body.insertRow();
      for (const label of rows[r] ?? []) tr.appendChild(td(label, "config"));
      const cell = tr.insertCell();
      const input = document.createElement("input");
      input.className = "prob";
      input.value = String(payoff[r]);
      input.addEventListener("change", () => {
        payoff[r] = Number(input.value);
        this.handlers.onPayoffChange(node.id, payoff, Number(gammaInput.value));
      });
      cell.appendChild(input);
    }
    this.root.appendChild(el("p", "grid-title", "Distribution:"));
    this.root.appendChild(table);
    this.renderPager(payoff.length);
  }

  private pageStart(total: number): number {
    const pages = Math.max(1, Math.ceil(total / PAGE_SIZE));
    this.page = this.page % pages;
    return this.page * PAGE_SIZE;
  }

  private renderPager(total: number): void {
    if (total <= PAGE_SIZE) return;
    const button = document.createElement("button");
    button.className = "show-page";
    const pages = Math.ceil(total / PAGE_SIZE);
    button.textContent = `Show Page (${this.page + 1}/${pages})`;
    button.addEventListener("click", () => {
      this.page = (this.page + 1) % pages;
      button.dispatchEvent(new CustomEvent("page-change", { bubbles: true }));
    });
    this.root.appendChild(button);
  }
}

function el(tag: string, className: string, text: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  node.textContent = text;
  return node;
}

function th(text: string): HTMLTableCellElement {
  const cell = document.createElement("th");
  cell.textContent = text;
  return cell;
}

function td(text: string, className = ""): HTMLTableCellElement {
  const cell = document.createElement("td");
  if (className) cell.className = className;
  cell.textContent = text;
  return cell;
}
