import { beforeEach, describe, expect, it } from "vitest";

import { SessionClient } from "../src/api.js";
import { createApp } from "../src/app.js";
import { flush, menuClick, pointerdown, stubFetch } from "./helpers.js";
import snapshot from "./fixtures/betpass_snapshot.json";
import voi from "./fixtures/betpass_voi.json";
import solution from "./fixtures/betpass_solution.json";
import lottery from "./fixtures/betpass_lottery.json";

describe("what-if informational arcs", () => {
  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
  });

  it("dragging outcome onto the bet decision displays VOI 30 and offers keep/discard", async () => {
    const log = stubFetch([
      { method: "POST", path: /\/api\/sessions$/, reply: snapshot },
      { method: "POST", path: /\/voi$/, reply: voi },
      { method: "POST", path: /\/transforms$/, reply: snapshot },
    ]);
    const root = document.getElementById("app")!;
    const app = createApp(root, new SessionClient(""));
    await app.start();
    await flush();

    pointerdown(root.querySelector('[data-node="outcome"]')!);
    menuClick(root, "Arcs", "What-if Information");
    pointerdown(root.querySelector('[data-node="bet"]')!);
    await flush();

    const voiCall = log.find((e) => e.path.endsWith("/voi"));
    expect(voiCall?.body).toEqual({ from: "outcome", to: "bet" });
    expect(root.querySelector(".status")!.textContent).toContain("value of information: 30");

    (root.querySelector("button.keep-arc") as HTMLButtonElement).click();
    await flush();
    const kept = log.find((e) => e.path.endsWith("/transforms"));
    expect(kept?.body).toEqual({ kind: "add_info_arc", from: "outcome", to: "bet" });
  });

  it("discard leaves the diagram untouched", async () => {
    const log = stubFetch([
      { method: "POST", path: /\/api\/sessions$/, reply: snapshot },
      { method: "POST", path: /\/voi$/, reply: voi },
    ]);
    const root = document.getElementById("app")!;
    const app = createApp(root, new SessionClient(""));
    await app.start();
    await flush();

    pointerdown(root.querySelector('[data-node="outcome"]')!);
    menuClick(root, "Arcs", "What-if Information");
    pointerdown(root.querySelector('[data-node="bet"]')!);
    await flush();
    (root.querySelector("button.discard-arc") as HTMLButtonElement).click();
    await flush();

    expect(log.some((e) => e.path.endsWith("/transforms"))).toBe(false);
    expect(root.querySelector(".status")!.textContent).toBe("");
  });
});

describe("results views", () => {
  beforeEach(() => {
    document.body.innerHTML = '<div id="app"></div>';
  });

  it("solve shows the optimal value and CE/EV/SD columns in that order", async () => {
    stubFetch([
      { method: "POST", path: /\/api\/sessions$/, reply: snapshot },
      { method: "POST", path: /\/solve$/, reply: solution },
    ]);
    const root = document.getElementById("app")!;
    const app = createApp(root, new SessionClient(""));
    await app.start();
    menuClick(root, "Diagram", "Solve");
    await flush();

    expect(root.querySelector(".optimal-value")!.textContent).toBe("optimal value: 10");
    const headers = Array.from(root.querySelectorAll(".alt-stats th")).map((h) => h.textContent);
    expect(headers.slice(1)).toEqual(["Certain Equivalent", "Expected Value", "Standard Deviation"]);
    const firstRow = Array.from(root.querySelectorAll(".alt-stats tbody tr")[0].children)
      .map((c) => c.textContent);
    expect(firstRow).toEqual(["bet", "10", "10", "73.4847"]);
  });

  it("the lottery view draws one bar per payoff with the right mass", async () => {
    stubFetch([
      { method: "POST", path: /\/api\/sessions$/, reply: snapshot },
      { method: "POST", path: /\/lottery$/, reply: lottery },
    ]);
    const root = document.getElementById("app")!;
    const app = createApp(root, new SessionClient(""));
    await app.start();
    menuClick(root, "Diagram", "Value Lottery");
    await flush();

    const bars = Array.from(root.querySelectorAll(".histogram .bar"));
    expect(bars.map((b) => [b.getAttribute("data-payoff"), b.getAttribute("data-probability")]))
      .toEqual([["-50", "0.6"], ["100", "0.4"]]);
  });
});
