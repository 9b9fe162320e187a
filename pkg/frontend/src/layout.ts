/**
 * Force-directed initial placement.  Positions are computed once per session
 * and then pinned: mutation only changes arrows, and a stable picture is what
 * lets a human follow the exchange-graph walk.
 */

import type { QuiverJson } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export type Layout = Map<number, Point>;

const ITERATIONS = 250;
const REPULSION = 6000;
const SPRING = 0.02;
const SPRING_LENGTH = 130;
const STEP = 0.85;

/** Deterministic pseudo-random placement seed, so layouts are reproducible. */
function initialPositions(ids: number[], width: number, height: number): Layout {
  const layout: Layout = new Map();
  ids.forEach((id, index) => {
    const angle = (2 * Math.PI * index) / Math.max(1, ids.length);
    const jitter = ((id * 2654435761) % 97) / 97 - 0.5;
    layout.set(id, {
      x: width / 2 + (width / 3) * Math.cos(angle + jitter * 0.2),
      y: height / 2 + (height / 3) * Math.sin(angle + jitter * 0.2),
    });
  });
  return layout;
}

export function forceLayout(
  quiver: QuiverJson,
  width = 640,
  height = 480,
): Layout {
  const ids = quiver.vertices.map((v) => v.id);
  const layout = initialPositions(ids, width, height);
  if (ids.length <= 1) {
    return layout;
  }
  const edges = quiver.arrows.map((a) => [a.src, a.tgt] as const);
  for (let iter = 0; iter < ITERATIONS; iter += 1) {
    const force: Map<number, Point> = new Map(
      ids.map((id) => [id, { x: 0, y: 0 }]),
    );
    for (let i = 0; i < ids.length; i += 1) {
      for (let j = i + 1; j < ids.length; j += 1) {
        const a = layout.get(ids[i])!;
        const b = layout.get(ids[j])!;
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dist2 = Math.max(25, dx * dx + dy * dy);
        const dist = Math.sqrt(dist2);
        const push = REPULSION / dist2;
        force.get(ids[i])!.x += (dx / dist) * push;
        force.get(ids[i])!.y += (dy / dist) * push;
        force.get(ids[j])!.x -= (dx / dist) * push;
        force.get(ids[j])!.y -= (dy / dist) * push;
      }
    }
    for (const [src, tgt] of edges) {
      if (src === tgt) {
        continue;
      }
      const a = layout.get(src)!;
      const b = layout.get(tgt)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(5, Math.sqrt(dx * dx + dy * dy));
      const pull = SPRING * (dist - SPRING_LENGTH);
      force.get(src)!.x += (dx / dist) * pull;
      force.get(src)!.y += (dy / dist) * pull;
      force.get(tgt)!.x -= (dx / dist) * pull;
      force.get(tgt)!.y -= (dy / dist) * pull;
    }
    const damping = STEP * (1 - iter / ITERATIONS);
    for (const id of ids) {
      const p = layout.get(id)!;
      const f = force.get(id)!;
      p.x = Math.min(width - 30, Math.max(30, p.x + f.x * damping));
      p.y = Math.min(height - 30, Math.max(30, p.y + f.y * damping));
    }
  }
  return layout;
}
