// Minimal DOM shell: render the mirrored view into a host element and
// translate clicks and the tactic input into protocol commands.  All
// logic stays on the kernel side; this file only forwards and redraws.

import type { ProofClient } from "./client.js";
import { renderHTML } from "./render.js";

interface MinimalElement {
  innerHTML: string;
  addEventListener(type: string, handler: (ev: MinimalEvent) => void): void;
}

interface MinimalEvent {
  target: unknown;
}

interface DataElement {
  dataset?: Record<string, string | undefined>;
  closest?(selector: string): DataElement | null;
}

export interface MountOptions {
  /** Reads the tactic expression to apply when a subgoal is clicked. */
  promptTactic: (goalNum: number) => string | null;
}

export function mount(
  host: MinimalElement,
  client: ProofClient,
  options: MountOptions,
): () => void {
  const redraw = () => {
    host.innerHTML = renderHTML(client.store.view);
  };
  const unsubscribe = client.store.subscribe(redraw);
  redraw();

  host.addEventListener("click", (ev) => {
    const el = ev.target as DataElement;
    const stepButton = el.closest?.(".backtrack");
    if (stepButton?.dataset?.["step"]) {
      void client.backtrack(Number(stepButton.dataset["step"]));
      return;
    }
    const qed = el.closest?.(".qed");
    if (qed) {
      void client.qed();
      return;
    }
    const subgoal = el.closest?.(".subgoal");
    if (subgoal?.dataset?.["goal"]) {
      const tactic = options.promptTactic(Number(subgoal.dataset["goal"]));
      if (tactic) void client.apply(tactic);
    }
  });

  return unsubscribe;
}
