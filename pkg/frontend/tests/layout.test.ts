import { describe, expect, it } from "vitest";

import { forceLayout } from "../src/layout.js";
import { arrowsOf, QuiverJson } from "../src/types.js";

const a3: QuiverJson = {
  m: 3,
  n: 3,
  matrix: [
    [0, 1, 0],
    [-1, 0, 1],
    [0, -1, 0],
  ],
};

describe("force layout", () => {
  it("is deterministic for a fixed quiver", () => {
    const arrows = arrowsOf(a3);
    const one = forceLayout(3, arrows, 600, 400);
    const two = forceLayout(3, arrows, 600, 400);
    expect([...one.entries()]).toEqual([...two.entries()]);
  });

  it("keeps pinned vertices exactly in place", () => {
    const arrows = arrowsOf(a3);
    const pin = new Map([[2, { x: 123, y: 77 }]]);
    const pos = forceLayout(3, arrows, 600, 400, pin);
    expect(pos.get(2)).toEqual({ x: 123, y: 77 });
  });

  it("stays inside the viewport", () => {
    const arrows = arrowsOf(a3);
    const pos = forceLayout(3, arrows, 300, 200);
    for (const p of pos.values()) {
      expect(p.x).toBeGreaterThanOrEqual(30);
      expect(p.x).toBeLessThanOrEqual(270);
      expect(p.y).toBeGreaterThanOrEqual(30);
      expect(p.y).toBeLessThanOrEqual(170);
    }
  });

  it("separates distinct vertices", () => {
    const arrows = arrowsOf(a3);
    const pos = forceLayout(3, arrows, 600, 400);
    const pts = [...pos.values()];
    for (let i = 0; i < pts.length; i++) {
      for (let j = i + 1; j < pts.length; j++) {
        const d = Math.hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
        expect(d).toBeGreaterThan(40);
      }
    }
  });
});

describe("arrow extraction", () => {
  it("reads principal and frozen arrows with valuations", () => {
    const ice: QuiverJson = {
      m: 3,
      n: 2,
      matrix: [
        [0, 2],
        [-1, 0],
        [-1, 1],
      ],
    };
    expect(arrowsOf(ice)).toEqual([
      { source: 1, target: 2, valuation: [2, 1] },
      { source: 1, target: 3, valuation: [1, 1] },
      { source: 3, target: 2, valuation: [1, 1] },
    ]);
  });
});
