// The session view is a verbatim mirror of the last state response; the
// client never computes logic locally, so every field here was produced
// by the kernel.  Error responses only set pendingError and leave the
// mirrored state untouched.

import type { ErrorInfo, Response } from "./protocol.js";

export type TermTree =
  | { kind: "const"; name: string; arity: string }
  | { kind: "var"; name: string; gen: number; arity: string }
  | { kind: "bound"; index: number }
  | { kind: "abs"; hint: string; arg_arity: string; body: TermTree }
  | { kind: "app"; fun: TermTree; arg: TermTree }
  | { kind: "param"; base: string; arity: string; subscripts: TermTree[] };

export interface Subgoal {
  num: number;
  text: string;
  tree: TermTree;
}

export interface HistoryEntry {
  step: number;
  command: string;
  has_more: boolean;
}

export interface LegendEntry {
  label: string;
  text: string;
}

export interface SessionView {
  conclusion: string | null;
  subgoals: Subgoal[];
  history: HistoryEntry[];
  legend: LegendEntry[];
  constraints: number;
  proved: boolean;
  theorem: string | null;
  pendingError: ErrorInfo | null;
}

export function emptyView(): SessionView {
  return {
    conclusion: null,
    subgoals: [],
    history: [],
    legend: [],
    constraints: 0,
    proved: false,
    theorem: null,
    pendingError: null,
  };
}

function isStateShaped(resp: Response): boolean {
  return resp.ok === true && Array.isArray(resp["subgoals"]);
}

export class SessionStore {
  private current: SessionView = Object.freeze(emptyView());
  private listeners: Array<(view: SessionView) => void> = [];

  get view(): SessionView {
    return this.current;
  }

  subscribe(listener: (view: SessionView) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  /** The only way the view changes: a response from the kernel. */
  applyResponse(resp: Response): SessionView {
    if (!resp.ok) {
      this.current = Object.freeze({
        ...this.current,
        pendingError: resp.error ?? { kind: "Unknown", message: "no detail" },
      });
    } else if (isStateShaped(resp)) {
      this.current = Object.freeze({
        conclusion: (resp["conclusion"] as string) ?? null,
        subgoals: resp["subgoals"] as Subgoal[],
        history: (resp["history"] as HistoryEntry[]) ?? [],
        legend: (resp["legend"] as LegendEntry[]) ?? [],
        constraints: (resp["constraints"] as number) ?? 0,
        proved: resp["proved"] === true,
        theorem: this.current.theorem,
        pendingError: null,
      });
    } else if (typeof resp["theorem"] === "string") {
      this.current = Object.freeze({
        ...this.current,
        theorem: resp["theorem"] as string,
        pendingError: null,
      });
    } else {
      // informational response (hello, list-logics, ...): clears errors only
      this.current = Object.freeze({ ...this.current, pendingError: null });
    }
    for (const listener of this.listeners) listener(this.current);
    return this.current;
  }
}
