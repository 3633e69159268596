// B1: a scripted client run against a live kernel, covering
// new-goal -> apply -> backtrack -> qed on the swapped-conjunction proof;
// the final state matches the scripted-chain result of the kernel's own
// acceptance suite.

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { connectClient, schematic, startServer, type LiveServer } from "./helpers.js";
import type { ProofClient } from "../src/client.js";

const PORT = 17841;
const GOAL = "nil |- (?A & ?B) --> (?B & ?A)";
const CHAIN = [
  "conj_intro",
  "conj_elim2",
  "assume_head",
  "conj_elim1",
  "assume_head",
];

let server: LiveServer;

beforeAll(async () => {
  server = await startServer(PORT);
}, 30_000);

afterAll(() => {
  server.stop();
});

describe("protocol round trip (B1)", () => {
  let client: ProofClient;

  it("connects and loads the logic", async () => {
    client = await connectClient(PORT);
    const rules = await client.loadRules("fol");
    expect(rules).toContain("imp_intro");
  });

  it("states the goal", async () => {
    await client.newGoal(GOAL);
    const view = client.store.view;
    expect(view.subgoals).toHaveLength(1);
    expect(schematic(view.subgoals[0].text)).toBe(
      "nil |- ?A & ?B --> ?B & ?A",
    );
    expect(view.proved).toBe(false);
  });

  it("lists applicable rules for the subgoal", async () => {
    const rules = await client.applicableRules(1);
    const byName = new Map(rules.map((r) => [r.rule, r.unifiers]));
    expect(byName.get("imp_intro")).toBeGreaterThanOrEqual(1);
    expect(byName.get("conj_intro")).toBe(0);
  });

  it("applies a two-branch step and backtracks to the right branch", async () => {
    // first alternative: a conjunction elimination detour
    await client.apply("conj_elim1 APPEND imp_intro");
    const detour = client.store.view;
    expect(detour.history).toHaveLength(1);
    expect(detour.history[0].has_more).toBe(true);
    expect(detour.subgoals[0].text).toContain("&");

    await client.backtrack(1);
    const onTrack = client.store.view;
    expect(schematic(onTrack.subgoals[0].text)).toBe(
      "cons(?A & ?B, nil) |- ?B & ?A",
    );
  });

  it("finishes the proof and takes the theorem", async () => {
    for (const tactic of CHAIN) {
      await client.apply(tactic);
    }
    expect(client.store.view.proved).toBe(true);
    expect(client.store.view.subgoals).toHaveLength(0);

    const resp = await client.qed();
    expect(resp.ok).toBe(true);
    // matches the scripted-chain outcome: the schematic theorem
    expect(schematic(client.store.view.theorem)).toBe(
      "nil |- ?A & ?B --> ?B & ?A",
    );
    client.close();
  });
});

describe("unifier paging over the protocol", () => {
  it("drives the lazy stream with a more control", async () => {
    const client = await connectClient(PORT);
    const first = await client.solve("?f(C, ?x)", "A(B)", 0);
    expect(first.unifiers.length + Number(first.more) * 0).toBeGreaterThan(0);
    let all = [...first.unifiers];
    let page = 0;
    let more = first.more;
    while (more) {
      page += 1;
      const next = await client.solve("?f(C, ?x)", "A(B)", page);
      all = all.concat(next.unifiers);
      more = next.more;
    }
    expect(all).toHaveLength(3); // the worked example's three unifiers
    client.close();
  });
});

describe("command ordering", () => {
  it("serializes concurrent commands through one in-flight slot", async () => {
    const client = await connectClient(PORT);
    await client.loadRules("fol");
    await client.newGoal(GOAL);
    // issued together: the transport must not interleave their frames
    const [a, b] = await Promise.all([
      client.apply("imp_intro"),
      client.apply("conj_intro"),
    ]);
    expect(a.ok).toBe(true);
    expect(b.ok).toBe(true); // ran after imp_intro, against the new subgoal
    expect(client.store.view.history.map((h) => h.command)).toEqual([
      "imp_intro",
      "conj_intro",
    ]);
    client.close();
  });
});
