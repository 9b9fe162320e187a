/**
 * Pure draw-list construction from the view state.
 *
 * Rendering decisions live here (boxed frozen vertices, arrow multiplicity
 * badges, frozen arrow styling, greying of unmutable frozen vertices) so
 * they are testable without a DOM; a thin SVG layer applies the list.
 */

import { frozenRole, ViewState } from "./state.js";

export interface DrawNode {
  id: number;
  name: string;
  x: number;
  y: number;
  frozen: boolean;
  greyed: boolean;
  selected: boolean;
  pending: boolean;
  error: string | null;
}

export interface DrawEdge {
  key: string;
  src: number;
  tgt: number;
  multiplicity: number;
  frozen: boolean;
  bend: number;
}

export interface DrawList {
  nodes: DrawNode[];
  edges: DrawEdge[];
  hint: string | null;
  reconnect: boolean;
}

export function buildDrawList(state: ViewState): DrawList {
  if (state.lostSession) {
    return { nodes: [], edges: [], hint: null, reconnect: true };
  }
  const snapshot = state.snapshot;
  if (!snapshot) {
    return {
      nodes: [],
      edges: [],
      hint: "connect to a session to begin",
      reconnect: false,
    };
  }
  const quiver = snapshot.current.quiver;
  if (quiver.vertices.length === 0) {
    return {
      nodes: [],
      edges: [],
      hint: "the quiver is empty; load one with vertices to explore",
      reconnect: false,
    };
  }
  const names = snapshot.current.names;
  const order = new Map(quiver.vertices.map((v, i) => [v.id, i]));
  const nodes: DrawNode[] = quiver.vertices.map((v) => {
    const point = state.layout.get(v.id) ?? { x: 0, y: 0 };
    return {
      id: v.id,
      name: names[order.get(v.id) ?? 0] ?? `v${v.id}`,
      x: point.x,
      y: point.y,
      frozen: v.frozen,
      greyed: v.frozen && frozenRole(quiver, v.id) === null,
      selected: state.selected === v.id,
      pending: state.pending && state.selected === v.id,
      error: state.vertexErrors.get(v.id) ?? null,
    };
  });

  // parallel arrows collapse into one drawn edge with a multiplicity badge;
  // opposite directions bend apart so 2-cycles stay readable
  const grouped = new Map<string, DrawEdge>();
  for (const arrow of quiver.arrows) {
    const key = `${arrow.src}>${arrow.tgt}:${arrow.frozen ? "f" : "u"}`;
    const existing = grouped.get(key);
    if (existing) {
      existing.multiplicity += 1;
      continue;
    }
    grouped.set(key, {
      key,
      src: arrow.src,
      tgt: arrow.tgt,
      multiplicity: 1,
      frozen: arrow.frozen,
      bend: 0,
    });
  }
  const edges = [...grouped.values()];
  for (const edge of edges) {
    const opposite = edges.some(
      (other) => other !== edge && other.src === edge.tgt
        && other.tgt === edge.src,
    );
    if (opposite) {
      edge.bend = edge.src < edge.tgt ? 0.25 : -0.25;
    }
  }
  edges.sort((a, b) => (a.key < b.key ? -1 : 1));
  return { nodes, edges, hint: null, reconnect: false };
}
