// Rendering is a pure projection of the mirrored view: a structural panel
// for programmatic hosts and an HTML string for a browser shell.  Nothing
// in here invents goal state.

import type { SessionView, TermTree } from "./store.js";

export interface PanelSubgoal {
  num: number;
  text: string;
  outline: string[];
}

export interface PanelStep {
  step: number;
  command: string;
  backtrackable: boolean;
}

export interface Panel {
  conclusion: string | null;
  subgoals: PanelSubgoal[];
  history: PanelStep[];
  legend: string[];
  constraints: number;
  qedReady: boolean;
  theorem: string | null;
  notice: string | null;
}

export function renderPanel(view: SessionView): Panel {
  return {
    conclusion: view.conclusion,
    subgoals: view.subgoals.map((g) => ({
      num: g.num,
      text: g.text,
      outline: treeOutline(g.tree),
    })),
    history: view.history.map((h) => ({
      step: h.step,
      command: h.command,
      backtrackable: h.has_more,
    })),
    legend: view.legend.map((e) => `${e.label} = ${e.text}`),
    constraints: view.constraints,
    qedReady: view.proved && view.conclusion !== null,
    theorem: view.theorem,
    notice: view.pendingError
      ? `${view.pendingError.kind}: ${view.pendingError.message}`
      : null,
  };
}

/** Indented structural outline of a term tree (one line per node). */
export function treeOutline(tree: TermTree, depth = 0): string[] {
  const pad = "  ".repeat(depth);
  switch (tree.kind) {
    case "const":
      return [`${pad}const ${tree.name} : ${tree.arity}`];
    case "var":
      return [`${pad}var ?${tree.name}@${tree.gen} : ${tree.arity}`];
    case "bound":
      return [`${pad}bound ${tree.index}`];
    case "abs":
      return [
        `${pad}abs ${tree.hint} : ${tree.arg_arity}`,
        ...treeOutline(tree.body, depth + 1),
      ];
    case "app":
      return [
        `${pad}app`,
        ...treeOutline(tree.fun, depth + 1),
        ...treeOutline(tree.arg, depth + 1),
      ];
    case "param":
      return [
        `${pad}param ${tree.base} : ${tree.arity}`,
        ...tree.subscripts.flatMap((s) => treeOutline(s, depth + 1)),
      ];
  }
}

function escape(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderHTML(view: SessionView): string {
  const panel = renderPanel(view);
  const parts: string[] = ['<div class="proof-panel">'];
  if (panel.notice !== null) {
    parts.push(`<div class="notice">${escape(panel.notice)}</div>`);
  }
  if (panel.conclusion !== null) {
    parts.push(`<div class="conclusion">Goal: ${escape(panel.conclusion)}</div>`);
  }
  if (panel.qedReady) {
    parts.push('<button class="qed" data-command="qed">qed</button>');
  }
  parts.push('<ol class="subgoals">');
  for (const g of panel.subgoals) {
    parts.push(
      `<li class="subgoal" data-goal="${g.num}">${escape(g.text)}</li>`,
    );
  }
  parts.push("</ol>");
  if (panel.constraints > 0) {
    parts.push(
      `<div class="constraints">${panel.constraints} flex-flex constraints</div>`,
    );
  }
  parts.push('<ul class="history">');
  for (const h of panel.history) {
    const mark = h.backtrackable
      ? ` <button class="backtrack" data-step="${h.step}">&#8617;</button>`
      : "";
    parts.push(
      `<li class="step" data-step="${h.step}">${h.step}. ${escape(h.command)}${mark}</li>`,
    );
  }
  parts.push("</ul>");
  if (panel.legend.length > 0) {
    parts.push('<ul class="legend">');
    for (const entry of panel.legend) {
      parts.push(`<li>${escape(entry)}</li>`);
    }
    parts.push("</ul>");
  }
  if (panel.theorem !== null) {
    parts.push(`<div class="theorem">&#8866; ${escape(panel.theorem)}</div>`);
  }
  parts.push("</div>");
  return parts.join("\n");
}
