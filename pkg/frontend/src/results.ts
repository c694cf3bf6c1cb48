/** Results panel: optimal value, policies, per-alternative (CE, EV, SD) rows
 * in that column order, and the value-lottery histogram. */

import type { LotteryView, PolicyView, Solution } from "./types.js";
import { svg } from "./shapes.js";

export function fmt(x: number): string {
  return Number(x.toPrecision(6)).toString();
}

export class ResultsPanel {
  readonly root: HTMLElement;

  constructor() {
    this.root = document.createElement("section");
    this.root.className = "results hidden";
  }

  clear(): void {
    this.root.textContent = "";
    this.root.classList.add("hidden");
  }

  renderSolution(solution: Solution): void {
    this.root.textContent = "";
    this.root.classList.remove("hidden");
    const headline = document.createElement("h2");
    headline.className = "optimal-value";
    headline.textContent = `optimal value: ${fmt(solution.optimal_value)}`;
    this.root.appendChild(headline);
    if (solution.risk_aversion > 0) {
      const gamma = document.createElement("p");
      gamma.className = "risk-note";
      gamma.textContent = `risk aversion: ${solution.risk_aversion}`;
      this.root.appendChild(gamma);
    }

    if (solution.alternative_statistics) {
      this.root.appendChild(this.statsTable(solution));
    }
    for (const policy of solution.policies) this.root.appendChild(this.policyTable(policy));
  }

  private statsTable(solution: Solution): HTMLElement {
    const table = document.createElement("table");
    table.className = "alt-stats";
    const head = table.createTHead().insertRow();
    for (const label of [solution.first_decision ?? "alternative",
                         "Certain Equivalent", "Expected Value", "Standard Deviation"]) {
      const cell = document.createElement("th");
      cell.textContent = label;
      head.appendChild(cell);
    }
    const body = table.createTBody();
    for (const row of solution.alternative_statistics!) {
      const tr = body.insertRow();
      for (const text of [row.alternative, fmt(row.certain_equivalent),
                          fmt(row.expected_value), fmt(row.standard_deviation)]) {
        tr.insertCell().textContent = text;
      }
    }
    return table;
  }

  private policyTable(policy: PolicyView): HTMLElement {
    const wrap = document.createElement("div");
    wrap.className = "policy";
    const title = document.createElement("h3");
    title.textContent = `policy for ${policy.decision}`;
    wrap.appendChild(title);
    const table = document.createElement("table");
    const body = table.createTBody();
    for (const choice of policy.choices) {
      const tr = body.insertRow();
      tr.insertCell().textContent = policy.domain.map((d) => choice.state[d]).join(", ") || "(always)";
      tr.insertCell().textContent = choice.alternative;
    }
    wrap.appendChild(table);
    return wrap;
  }

  renderLottery(view: LotteryView): void {
    this.root.classList.remove("hidden");
    const old = this.root.querySelector(".lottery");
    if (old) old.remove();
    const wrap = document.createElement("div");
    wrap.className = "lottery";
    const title = document.createElement("h3");
    title.textContent = "value lottery";
    wrap.appendChild(title);

    const chart = svg("svg", { class: "histogram", viewBox: "0 0 320 130" });
    const peak = Math.max(...view.atoms.map((a) => a.probability), 1e-12);
    const step = 320 / Math.max(view.atoms.length, 1);
    view.atoms.forEach((atom, i) => {
      const height = 100 * (atom.probability / peak);
      const bar = svg("rect", {
        class: "bar", "data-payoff": atom.payoff, "data-probability": atom.probability,
        x: i * step + step * 0.15, y: 105 - height, width: step * 0.7, height,
      });
      chart.appendChild(bar);
      const label = svg("text", { x: i * step + step / 2, y: 120, "text-anchor": "middle" });
      label.textContent = fmt(atom.payoff);
      chart.appendChild(label);
    });
    wrap.appendChild(chart);

    const s = view.statistics;
    const line = document.createElement("p");
    line.className = "lottery-stats";
    line.textContent = `CE ${fmt(s.certain_equivalent)}  EV ${fmt(s.expected_value)}  SD ${fmt(s.standard_deviation)}`;
    wrap.appendChild(line);
    this.root.appendChild(wrap);
  }
}
