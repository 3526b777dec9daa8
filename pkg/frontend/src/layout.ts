import { ArrowView } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

/** Deterministic force-directed layout with optional pinned positions.
 * Pinned vertices (dragged by the user) keep their coordinates; everyone
 * else relaxes around them.  A seeded generator keeps layouts stable across
 * renders of the same quiver. */

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function forceLayout(
  numVertices: number,
  arrows: ArrowView[],
  width: number,
  height: number,
  pinned: Map<number, Point> = new Map(),
  iterations = 250,
): Map<number, Point> {
  const rand = mulberry32(numVertices * 2654435761 + arrows.length);
  const pos = new Map<number, Point>();
  const radius = Math.min(width, height) * 0.36;
  for (let v = 1; v <= numVertices; v++) {
    const fixed = pinned.get(v);
    if (fixed) {
      pos.set(v, { ...fixed });
    } else {
      const angle = (2 * Math.PI * (v - 1)) / numVertices + 0.35 * (rand() - 0.5);
      pos.set(v, {
        x: width / 2 + radius * Math.cos(angle),
        y: height / 2 + radius * Math.sin(angle),
      });
    }
  }
  if (numVertices <= 1) return pos;
  const ideal = Math.min(width, height) / (1.2 + Math.sqrt(numVertices));
  for (let step = 0; step < iterations; step++) {
    const cool = 1 - step / iterations;
    const disp = new Map<number, Point>();
    for (let v = 1; v <= numVertices; v++) disp.set(v, { x: 0, y: 0 });
    for (let a = 1; a <= numVertices; a++) {
      for (let b = a + 1; b <= numVertices; b++) {
        const pa = pos.get(a)!;
        const pb = pos.get(b)!;
        let dx = pa.x - pb.x;
        let dy = pa.y - pb.y;
        let dist = Math.hypot(dx, dy);
        if (dist < 1e-6) {
          dx = rand() - 0.5;
          dy = rand() - 0.5;
          dist = Math.hypot(dx, dy);
        }
        const force = (ideal * ideal) / dist;
        disp.get(a)!.x += (dx / dist) * force;
        disp.get(a)!.y += (dy / dist) * force;
        disp.get(b)!.x -= (dx / dist) * force;
        disp.get(b)!.y -= (dy / dist) * force;
      }
    }
    for (const arrow of arrows) {
      const pa = pos.get(arrow.source)!;
      const pb = pos.get(arrow.target)!;
      const dx = pa.x - pb.x;
      const dy = pa.y - pb.y;
      const dist = Math.max(Math.hypot(dx, dy), 1e-6);
      const force = (dist * dist) / ideal;
      disp.get(arrow.source)!.x -= (dx / dist) * force;
      disp.get(arrow.source)!.y -= (dy / dist) * force;
      disp.get(arrow.target)!.x += (dx / dist) * force;
      disp.get(arrow.target)!.y += (dy / dist) * force;
    }
    const maxStep = 18 * cool;
    for (let v = 1; v <= numVertices; v++) {
      if (pinned.has(v)) continue;
      const d = disp.get(v)!;
      const len = Math.max(Math.hypot(d.x, d.y), 1e-6);
      const p = pos.get(v)!;
      p.x += (d.x / len) * Math.min(len, maxStep);
      p.y += (d.y / len) * Math.min(len, maxStep);
      p.x = Math.min(width - 30, Math.max(30, p.x));
      p.y = Math.min(height - 30, Math.max(30, p.y));
    }
  }
  return pos;
}
