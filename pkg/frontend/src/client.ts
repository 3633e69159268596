// Command layer: every action goes to the kernel and the view is then
// refreshed from a state request, so nothing the user sees was computed
// here.  Failures like TacticFailed and BacktrackExhausted come back as
// non-fatal notices on the unchanged view.

import type { Response, Transport } from "./protocol.js";
import { SessionStore } from "./store.js";

export interface ApplicableRule {
  rule: string;
  unifiers: number;
  capped: boolean;
}

export interface SolvePage {
  unifiers: string[];
  page: number;
  more: boolean;
}

export class ProofClient {
  constructor(
    private transport: Transport,
    readonly store: SessionStore = new SessionStore(),
  ) {}

  private async command(payload: Record<string, unknown>): Promise<Response> {
    const resp = await this.transport.request(payload);
    if (!resp.ok) {
      this.store.applyResponse(resp);
      return resp;
    }
    // the kernel is authoritative: re-read the state rather than trusting
    // any locally assembled snapshot
    const state = await this.transport.request({ type: "state" });
    if (typeof resp["theorem"] === "string") {
      this.store.applyResponse(resp);
    }
    this.store.applyResponse(state);
    return resp;
  }

  async hello(): Promise<Response> {
    return this.transport.request({ type: "hello", version: 1 });
  }

  async listLogics(): Promise<string[]> {
    const resp = await this.transport.request({ type: "list-logics" });
    return (resp["logics"] as string[]) ?? [];
  }

  async loadRules(logic: string): Promise<string[]> {
    const resp = await this.transport.request({ type: "load-rules", logic });
    if (!resp.ok) this.store.applyResponse(resp);
    return (resp["rules"] as string[]) ?? [];
  }

  async newGoal(goal: string): Promise<Response> {
    return this.command({ type: "new-goal", goal });
  }

  async apply(tactic: string): Promise<Response> {
    return this.command({ type: "apply", tactic });
  }

  async backtrack(step: number): Promise<Response> {
    return this.command({ type: "backtrack", step });
  }

  async undo(): Promise<Response> {
    return this.command({ type: "undo" });
  }

  async qed(): Promise<Response> {
    return this.command({ type: "qed" });
  }

  async refresh(): Promise<Response> {
    const state = await this.transport.request({ type: "state" });
    this.store.applyResponse(state);
    return state;
  }

  /** Dry-run unifier counts per rule for one subgoal (for the palette). */
  async applicableRules(goalNum: number): Promise<ApplicableRule[]> {
    const resp = await this.transport.request({
      type: "applicable-rules",
      goal: goalNum,
    });
    if (!resp.ok) {
      this.store.applyResponse(resp);
      return [];
    }
    return resp["rules"] as ApplicableRule[];
  }

  /** One window of the lazy unifier stream; drive with increasing pages. */
  async solve(lhs: string, rhs: string, page = 0): Promise<SolvePage> {
    const resp = await this.transport.request({ type: "solve", lhs, rhs, page });
    if (!resp.ok) {
      this.store.applyResponse(resp);
      return { unifiers: [], page, more: false };
    }
    return {
      unifiers: resp["unifiers"] as string[],
      page: resp["page"] as number,
      more: resp["more"] === true,
    };
  }

  close(): void {
    this.transport.close();
  }
}
