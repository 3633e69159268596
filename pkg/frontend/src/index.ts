export { FrameDecoder, TcpTransport, encodeFrame } from "./protocol.js";
export type { ErrorInfo, Response, Transport } from "./protocol.js";
export { SessionStore, emptyView } from "./store.js";
export type {
  HistoryEntry,
  LegendEntry,
  SessionView,
  Subgoal,
  TermTree,
} from "./store.js";
export { ProofClient } from "./client.js";
export type { ApplicableRule, SolvePage } from "./client.js";
export { renderHTML, renderPanel, treeOutline } from "./render.js";
export type { Panel, PanelStep, PanelSubgoal } from "./render.js";
export { mount } from "./dom.js";
export type { MountOptions } from "./dom.js";
