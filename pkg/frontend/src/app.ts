/** Workbench application: menu bar, canvas, inspector, results, status line.
 *
 * The UI holds no model logic.  Every gesture becomes a service call; the
 * returned snapshot re-renders the whole view, and rejected calls surface
 * their violation or precondition codes in the status line.
 */

import { ApiError, SessionClient } from "./api.js";
import { DiagramCanvas } from "./canvas.js";
import { Inspector } from "./inspector.js";
import { ResultsPanel, fmt } from "./results.js";
import type { Arc, DiagramDocument, NodeKind, Snapshot } from "./types.js";
import { nodeById } from "./types.js";

const STARTER: DiagramDocument = {
  schema_version: 1,
  nodes: [
    { id: "value", name: "Value", kind: "value", parents: [], payoff: [0], risk_aversion: 0 },
  ],
  layout: { value: [450, 280] },
};

const MESSAGES: Record<string, string> = {
  REVERSAL_WOULD_CYCLE: "another path connects these nodes; reversing would create a cycle",
  ADDITION_WOULD_CYCLE: "that arc would create a cycle",
  ARC_PRESENT: "that arc is already in the diagram",
  ARC_ABSENT: "no such arc",
  NOT_VALUE_ONLY_CHILD: "value node has non-informational parents; reduce those first",
  NONINFORMATIONAL_VALUE_PARENT: "value node has non-informational parents",
  ROW_NOT_NORMALIZED: "a probability row does not sum to 1",
  HAS_CHILDREN: "the node still has children",
  HISTORY_BOUNDARY: "nothing further to undo or redo",
};

export class App {
  readonly client: SessionClient;
  readonly canvas: DiagramCanvas;
  readonly inspector: Inspector;
  readonly results: ResultsPanel;
  readonly status: HTMLElement;
  snapshot: Snapshot | null = null;
  selectedNode: string | null = null;
  selectedArc: Arc | null = null;
  pendingArcFrom: string | null = null;
  arcMode: "conditioning" | "what-if" | null = null;
  private counter = 0;

  constructor(readonly root: HTMLElement, client: SessionClient) {
    this.client = client;
    this.canvas = new DiagramCanvas({
      onSelectNode: (id) => this.selectNode(id),
      onSelectArc: (arc) => this.selectArc(arc),
      onMoveNode: (id, x, y) => this.call(() =>
        this.client.edit({ op: "move_node", node: id, x, y })),
      onCompleteArc: (from, to) => this.completeArc(from, to),
    });
    this.inspector = new Inspector({
      onRename: (id, name) => this.call(() => this.client.edit({ op: "set_name", node: id, name })),
      onTableChange: (id, rows) => this.call(() =>
        this.client.edit({ op: "set_table", node: id, table: rows })),
      onPayoffChange: (id, payoff, gamma) => this.call(async () => {
        await this.client.edit({ op: "set_payoff", node: id, payoff });
        return this.client.edit({ op: "set_risk_aversion", node: id, value: gamma });
      }),
    });
    this.results = new ResultsPanel();
    this.status = document.createElement("p");
    this.status.className = "status";
    this.build();
  }

  async start(document?: DiagramDocument): Promise<void> {
    this.snapshot = await this.client.create(document ?? STARTER);
    this.renderAll();
  }

  // -- layout -----------------------------------------------------------

  private build(): void {
    const menubar = document.createElement("nav");
    menubar.className = "menubar";
    menubar.appendChild(this.menu("Diagram", [
      ["New", () => this.call(async () => { await this.start(); return this.snapshot!; })],
      ["Save", () => this.saveDocument()],
      ["Solve", () => this.solve()],
      ["Value Lottery", () => this.lottery()],
      ["Undo", () => this.call(() => this.client.undo())],
      ["Redo", () => this.call(() => this.client.redo())],
    ]));
    menubar.appendChild(this.menu("Nodes", [
      ["Add Chance", () => this.addNode("chance")],
      ["Add Decision", () => this.addNode("decision")],
      ["Add Value", () => this.addNode("value")],
      ["Delete Selected", () => this.deleteSelected()],
      ["Remove (reduce)", () => this.reduceSelected()],
    ]));
    menubar.appendChild(this.menu("Arcs", [
      ["Draw Arc", () => this.beginArc("conditioning")],
      ["Reverse Selected", () => this.reverseSelected()],
      ["Delete Selected Arc", () => this.deleteSelectedArc()],
      ["What-if Information", () => this.beginArc("what-if")],
    ]));
    menubar.appendChild(this.menu("Windows", [
      ["Inspector", () => this.inspector.root.classList.toggle("hidden")],
      ["Results", () => this.results.root.classList.toggle("hidden")],
    ]));

    const main = document.createElement("div");
    main.className = "workspace";
    main.appendChild(this.canvas.root as unknown as HTMLElement);
    main.appendChild(this.inspector.root);

    this.root.appendChild(menubar);
    this.root.appendChild(main);
    this.root.appendChild(this.results.root);
    this.root.appendChild(this.status);
  }

  private menu(label: string, items: [string, () => void][]): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "menu";
    const name = document.createElement("button");
    name.className = "menu-name";
    name.textContent = label;
    wrap.appendChild(name);
    const list = document.createElement("div");
    list.className = "menu-items";
    for (const [text, action] of items) {
      const item = document.createElement("button");
      item.textContent = text;
      item.addEventListener("click", () => {
        this.setStatus("");
        action();
      });
      list.appendChild(item);
    }
    wrap.appendChild(list);
    return wrap;
  }

  // -- selection and rendering ------------------------------------------

  private selectNode(id: string | null): void {
    this.selectedNode = id;
    this.selectedArc = null;
    if (id === null) this.pendingArcFrom = null;
    this.renderAll();
  }

  private selectArc(arc: Arc | null): void {
    this.selectedArc = arc;
    this.selectedNode = null;
    this.renderAll();
  }

  renderAll(): void {
    if (!this.snapshot) return;
    this.canvas.render(this.snapshot.diagram, {
      selectedNode: this.selectedNode,
      selectedArc: this.selectedArc,
      pendingArcFrom: this.pendingArcFrom,
    });
    this.inspector.render(this.snapshot.diagram, this.selectedNode);
  }

  setStatus(text: string): void {
    this.status.textContent = text;
  }

  /** Run a service call; on success adopt the snapshot, on failure show the code. */
  async call(action: () => Promise<Snapshot>): Promise<void> {
    try {
      const snap = await action();
      this.snapshot = snap;
      if (this.selectedNode && !nodeById(snap.diagram, this.selectedNode)) this.selectedNode = null;
      this.selectedArc = null;
      this.renderAll();
    } catch (exc) {
      this.showError(exc);
    }
  }

  private showError(exc: unknown): void {
    if (exc instanceof ApiError) {
      const human = MESSAGES[exc.code];
      const detail = exc.violations.map((v) => v.message).join("; ");
      this.setStatus(human ?? detail ?? exc.message ?? exc.code);
      if (human && detail) this.setStatus(`${human} (${detail})`);
    } else {
      this.setStatus(String(exc));
    }
  }

  // -- node and arc editing ----------------------------------------------

  private addNode(kind: NodeKind): void {
    this.counter += 1;
    const id = `${kind}${this.counter}`;
    const record: Record<string, unknown> = { id, name: id, kind, parents: [] };
    if (kind === "chance") {
      record.outcomes = ["yes", "no"];
      record.table = [[0.5, 0.5]];
    } else if (kind === "decision") {
      record.outcomes = ["a", "b"];
    } else {
      record.payoff = [0];
      record.risk_aversion = 0;
    }
    this.call(() => this.client.edit({
      op: "add_node", node: record, position: [140 + this.counter * 30, 120 + this.counter * 20],
    }));
  }

  private deleteSelected(): void {
    if (!this.selectedNode) {
      this.setStatus("select a node first");
      return;
    }
    const id = this.selectedNode;
    this.selectedNode = null;
    this.call(() => this.client.edit({ op: "remove_node", node: id }));
  }

  private beginArc(mode: "conditioning" | "what-if"): void {
    if (!this.selectedNode) {
      this.setStatus("select the source node, then choose this again");
      return;
    }
    this.arcMode = mode;
    this.pendingArcFrom = this.selectedNode;
    this.setStatus(mode === "what-if"
      ? "click a decision node to price that information"
      : "click the target node to finish the arc");
    this.renderAll();
  }

  private completeArc(from: string, to: string): void {
    const mode = this.arcMode ?? "conditioning";
    this.pendingArcFrom = null;
    this.arcMode = null;
    if (mode === "what-if") {
      void this.whatIf(from, to);
    } else {
      this.call(() => this.client.edit({ op: "add_arc", from, to }));
    }
  }

  /** Price an informational arc, then offer to keep or discard it. */
  async whatIf(from: string, to: string): Promise<void> {
    try {
      const value = await this.client.valueOfInformation(from, to);
      this.setStatus(`value of information: ${fmt(value)}`);
      const bar = document.createElement("span");
      bar.className = "what-if-actions";
      const keep = document.createElement("button");
      keep.className = "keep-arc";
      keep.textContent = "Keep arc";
      keep.addEventListener("click", () => {
        bar.remove();
        this.call(() => this.client.transform({ kind: "add_info_arc", from, to }));
      });
      const discard = document.createElement("button");
      discard.className = "discard-arc";
      discard.textContent = "Discard";
      discard.addEventListener("click", () => {
        bar.remove();
        this.setStatus("");
      });
      bar.appendChild(keep);
      bar.appendChild(discard);
      this.status.appendChild(bar);
      this.renderAll();
    } catch (exc) {
      this.showError(exc);
    }
  }

  // -- reduction steps -----------------------------------------------------

  private reduceSelected(): void {
    if (!this.selectedNode || !this.snapshot) {
      this.setStatus("select a node to remove");
      return;
    }
    const node = nodeById(this.snapshot.diagram, this.selectedNode)!;
    const barren = !this.snapshot.diagram.nodes.some((n) => n.parents.includes(node.id));
    const kind = barren ? "remove_barren"
      : node.kind === "chance" ? "remove_chance" : "remove_decision";
    this.call(() => this.client.transform({ kind, node: node.id }));
  }

  private reverseSelected(): void {
    if (!this.selectedArc) {
      this.setStatus("select an arc to reverse");
      return;
    }
    const { from, to } = this.selectedArc;
    this.call(() => this.client.transform({ kind: "reverse", from, to }));
  }

  private deleteSelectedArc(): void {
    if (!this.selectedArc) {
      this.setStatus("select an arc to delete");
      return;
    }
    const { from, to } = this.selectedArc;
    this.call(() => this.client.edit({ op: "remove_arc", from, to }));
  }

  // -- analysis ------------------------------------------------------------

  async solve(): Promise<void> {
    try {
      this.results.renderSolution(await this.client.solve());
    } catch (exc) {
      this.showError(exc);
    }
  }

  async lottery(): Promise<void> {
    try {
      this.results.renderLottery(await this.client.lottery());
    } catch (exc) {
      this.showError(exc);
    }
  }

  async saveDocument(): Promise<void> {
    try {
      const doc = await this.client.document();
      const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = "diagram.idg.json";
      link.click();
      URL.revokeObjectURL(link.href);
    } catch (exc) {
      this.showError(exc);
    }
  }
}

export function createApp(root: HTMLElement, client: SessionClient): App {
  return new App(root, client);
}
