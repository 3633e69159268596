// B2: the client renders only server-provided state.  Snapshot-diff the
// mirrored view around an induced failure: the rendered goal must be
// byte-identical, with only the non-fatal notice added.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { connectClient, startServer, type LiveServer } from "./helpers.js";
import { renderHTML, renderPanel } from "../src/render.js";
import { SessionStore, emptyView } from "../src/store.js";
import type { Response } from "../src/protocol.js";

const PORT = 17842;

let server: LiveServer;

beforeAll(async () => {
  server = await startServer(PORT);
}, 30_000);

afterAll(() => {
  server.stop();
});

describe("kernel authority (B2)", () => {
  it("mirrors state responses verbatim and nothing else", async () => {
    const client = await connectClient(PORT);
    await client.loadRules("fol");
    const resp = await client.newGoal("nil |- 0 = 0");
    expect(resp.ok).toBe(true);

    const view = client.store.view;
    // every displayed field came from the last state response
    const state = (await client.refresh()) as Response;
    expect(view.conclusion).toBe(state["conclusion"]);
    expect(view.subgoals).toEqual(state["subgoals"]);
    expect(view.history).toEqual(state["history"]);
    client.close();
  });

  it("leaves the rendered goal unchanged on TacticFailed", async () => {
    const client = await connectClient(PORT);
    await client.loadRules("fol");
    await client.newGoal("nil |- 0 = 0");

    const before = client.store.view;
    const beforeHTML = renderHTML(before);

    const resp = await client.apply("conj_intro"); // heads clash: must fail
    expect(resp.ok).toBe(false);
    expect(resp.error?.kind).toBe("TacticFailed");

    const after = client.store.view;
    expect(after.conclusion).toBe(before.conclusion);
    expect(after.subgoals).toEqual(before.subgoals);
    expect(after.history).toEqual(before.history);
    expect(after.pendingError?.kind).toBe("TacticFailed");

    // the only rendering difference is the non-fatal notice
    const afterHTML = renderHTML(after);
    expect(afterHTML).toContain('class="notice"');
    expect(afterHTML.replace(/<div class="notice">.*<\/div>\n/, "")).toBe(
      beforeHTML,
    );
    client.close();
  });

  it("exhausted backtracking is a notice, not a state change", async () => {
    const client = await connectClient(PORT);
    await client.loadRules("fol");
    await client.newGoal("nil |- (?A & ?B) --> (?B & ?A)");
    await client.apply("imp_intro"); // deterministic: one alternative only

    const before = client.store.view;
    const resp = await client.backtrack(1);
    expect(resp.ok).toBe(false);
    expect(resp.error?.kind).toBe("BacktrackExhausted");
    expect(client.store.view.subgoals).toEqual(before.subgoals);
    client.close();
  });

  it("the view is immutable from outside", () => {
    const store = new SessionStore();
    expect(() => {
      (store.view as { proved: boolean }).proved = true;
    }).toThrow();
  });
});

describe("rendering is a pure projection", () => {
  it("renders the empty view and a populated view stably", () => {
    const store = new SessionStore();
    expect(renderPanel(store.view)).toEqual({
      conclusion: null,
      subgoals: [],
      history: [],
      legend: [],
      constraints: 0,
      qedReady: false,
      theorem: null,
      notice: null,
    });

    const populated = store.applyResponse({
      ok: true,
      conclusion: "nil |- ?A",
      subgoals: [
        {
          num: 1,
          text: "nil |- ?A",
          tree: { kind: "var", name: "A", gen: 0, arity: "form" },
        },
      ],
      history: [{ step: 1, command: "imp_intro", has_more: true }],
      legend: [{ label: "all#1", text: "all[nil, %y. y = 0]" }],
      constraints: 0,
      proved: false,
    });
    const panel = renderPanel(populated);
    expect(panel.history[0].backtrackable).toBe(true);
    expect(panel.legend).toEqual(["all#1 = all[nil, %y. y = 0]"]);
    const html = renderHTML(populated);
    expect(html).toContain('data-step="1"');
    expect(html).toContain("data-goal=\"1\"");
    expect(html).toContain("all#1");
  });

  it("marks qed readiness only when the kernel says proved", () => {
    const store = new SessionStore();
    const view = store.applyResponse({
      ok: true,
      conclusion: "nil |- ?A --> ?A",
      subgoals: [],
      history: [],
      legend: [],
      constraints: 0,
      proved: true,
    });
    expect(renderPanel(view).qedReady).toBe(true);
    expect(renderHTML(view)).toContain('data-command="qed"');
  });

  it("error responses never reshape the goal", () => {
    const store = new SessionStore();
    const failed = store.applyResponse({
      ok: false,
      error: { kind: "TacticFailed", message: "no goal trees" },
    });
    expect(failed.subgoals).toEqual(emptyView().subgoals);
    expect(failed.pendingError?.kind).toBe("TacticFailed");
  });
});
