/**
 * Submission form behavior against the real service. This file boots
 * its own service instance because accepted submissions mutate it.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { Window } from "happy-dom";

import { ApiClient } from "../src/api.js";
import { App, issueLine } from "../src/app.js";
import type { ValidationIssue } from "../src/types.js";
import { startServer, type RunningServer } from "./server.js";

let server: RunningServer;
let client: ApiClient;

beforeAll(async () => {
  server = await startServer();
  client = new ApiClient(server.baseUrl);
}, 40_000);

afterAll(async () => {
  await server.stop();
});

const open: Window[] = [];

afterAll(async () => {
  await Promise.all(open.map((win) => win.happyDOM.close()));
});

interface Harness {
  win: Window;
  root: HTMLElement;
  app: App;
}

async function boot(): Promise<Harness> {
  const win = new Window({ url: "http://localhost/" });
  open.push(win);
  const doc = win.document as unknown as Document;
  const root = doc.createElement("div");
  doc.body.appendChild(root as never);
  const app = new App(doc, root, new ApiClient(server.baseUrl), { mode: "2D", seed: 7 });
  await app.init();
  return { win, root, app };
}

function fillAndSubmit(win: Window, root: HTMLElement, values: Record<string, string>): void {
  const form = root.querySelector("#mg-form") as HTMLFormElement;
  root.querySelector("#mg-add")!.dispatchEvent(new win.Event("click", { bubbles: true }) as never);
  expect(form.hidden).toBe(false);
  for (const [name, value] of Object.entries(values)) {
    const field = form.querySelector(`[name="${name}"]`) as HTMLInputElement;
    field.value = value;
  }
  form.dispatchEvent(new win.Event("submit", { bubbles: true, cancelable: true }) as never);
}

const GHOST_FIELDS = {
  title: "Phantom Methods",
  url: "https://example.org/phantom",
  authors: "Ada Lovelace; Alan Turing",
  release_date: "2024-01-15",
  venue: "arXiv",
  method_name: "Phantom Network",
  subject_area: "Generative Models",
  acronym: "ORPHAN",
  description: "Builds on a method nobody has recorded.",
  based_on: "GHOST",
  submitter: "ui-test",
};

describe("submission form", () => {
  it("surfaces the service's issue list verbatim when a submission is rejected", async () => {
    const { win, root, app } = await boot();

    // ask the service directly what it says about this exact record;
    // a rejected submission does not change the graph, so this probe
    // leaves the service in the same state
    const probe = await fetch(`${server.baseUrl}/api/submissions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        record: {
          ...GHOST_FIELDS,
          authors: ["Ada Lovelace", "Alan Turing"],
          based_on: ["GHOST"],
        },
        submitter: "probe",
      }),
    });
    expect(probe.status).toBe(422);
    const expected = (await probe.json()).submission.issues as ValidationIssue[];
    expect(expected.length).toBeGreaterThan(0);
    expect(expected.some((issue) => issue.code === "dangling_ref")).toBe(true);

    fillAndSubmit(win, root, GHOST_FIELDS);
    await app.idle();

    expect(root.querySelector("#mg-form-status")!.textContent).toContain("rejected");
    const items = Array.from(root.querySelectorAll("#mg-form-issues li"));
    expect(items.map((li) => li.textContent)).toEqual(expected.map(issueLine));
    expect(items.map((li) => li.getAttribute("data-code"))).toEqual(expected.map((i) => i.code));

    // the rejected record never entered the graph
    const health = await client.health();
    expect(health.nodes).toBe(7);
    expect(root.querySelector('circle[data-id="ORPHAN"]')).toBeNull();
  });

  it("accepts a valid record and shows the new node after the refresh", async () => {
    const { win, root, app } = await boot();
    fillAndSubmit(win, root, {
      ...GHOST_FIELDS,
      method_name: "Newcomer Network",
      acronym: "NEW",
      based_on: "GAN",
    });
    await app.idle();

    expect(root.querySelector("#mg-form-status")!.textContent).toContain("accepted: NEW");
    expect(root.querySelectorAll("#mg-form-issues li")).toHaveLength(0);
    expect(root.querySelector('circle[data-id="NEW"]')).not.toBeNull();
    expect(
      root.querySelectorAll('svg[data-role="graph-2d"] circle.node'),
    ).toHaveLength(8);

    const health = await client.health();
    expect(health.nodes).toBe(8);
  });
});
