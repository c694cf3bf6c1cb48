/** Test plumbing: a fetch stub that replays recorded service responses. */

import { vi } from "vitest";

export type Route = {
  method: string;
  path: RegExp;
  reply: unknown | ((body: unknown) => unknown);
  status?: number;
};

export interface FetchLogEntry {
  method: string;
  path: string;
  body: unknown;
}

export function stubFetch(routes: Route[]): FetchLogEntry[] {
  const log: FetchLogEntry[] = [];
  globalThis.fetch = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input);
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    log.push({ method, path, body });
    for (const route of routes) {
      if (route.method === method && route.path.test(path)) {
        const payload = typeof route.reply === "function"
          ? (route.reply as (b: unknown) => unknown)(body)
          : route.reply;
        return new Response(JSON.stringify(payload), {
          status: route.status ?? (method === "POST" && path.endsWith("/api/sessions") ? 201 : 200),
          headers: { "content-type": "application/json" },
        });
      }
    }
    throw new Error(`no stub for ${method} ${path}`);
  }) as typeof fetch;
  return log;
}

export function pointerdown(el: Element): void {
  el.dispatchEvent(new Event("pointerdown", { bubbles: true }));
}

export function menuClick(root: HTMLElement, menu: string, item: string): void {
  const menus = Array.from(root.querySelectorAll(".menu"));
  const target = menus.find((m) => m.querySelector(".menu-name")?.textContent === menu);
  if (!target) throw new Error(`no menu ${menu}`);
  const button = Array.from(target.querySelectorAll(".menu-items button"))
    .find((b) => b.textContent === item) as HTMLButtonElement | undefined;
  if (!button) throw new Error(`no item ${item} in ${menu}`);
  button.click();
}

export async function flush(): Promise<void> {
  await new Promise((resolve) => setTimeout(resolve, 0));
  await new Promise((resolve) => setTimeout(resolve, 0));
}
