/** Wire types for the cluster-forge session API. Every displayed value is
 * one of these strings or numbers, verbatim from the server. */

export interface QuiverJson {
  m: number;
  n: number;
  matrix: number[][];
  symmetrizer?: number[];
}

export interface HistoryNode {
  id: number;
  parent: number | null;
  vertex: number | null;
}

export interface SeedJson extends QuiverJson {
  cluster?: string[];
  coefficients?: { kind: string; values: string[] };
}

export interface SessionView {
  version: number;
  initial: SeedJson;
  quiver: QuiverJson;
  cluster: string[];
  coefficients: { kind: string; values: string[] };
  sequence: number[];
  history: { cursor: number; nodes: HistoryNode[] };
  c?: number[][];
  g?: number[][];
  f?: string[];
  tropical_error?: string;
}

export interface NeighborhoodView {
  center: number;
  depth: number;
  vertices: { id: number; distance: number; digest: string; cluster: string[] }[];
  edges: number[][];
}

export interface ApiError {
  error: string;
  version?: number;
}

export interface ArrowView {
  source: number;
  target: number;
  valuation: [number, number];
}

/** Arrows of the displayed quiver, read off the m x n matrix the same way
 * the server's DOT emitter does; no algebra, only sign inspection. */
export function arrowsOf(quiver: QuiverJson): ArrowView[] {
  const out: ArrowView[] = [];
  const { m, n, matrix } = quiver;
  for (let i = 0; i < n; i++) {
    for (let j = i + 1; j < n; j++) {
      const bij = matrix[i][j];
      if (bij > 0) out.push({ source: i + 1, target: j + 1, valuation: [bij, -matrix[j][i]] });
      else if (bij < 0) out.push({ source: j + 1, target: i + 1, valuation: [matrix[j][i], -bij] });
    }
  }
  for (let i = n; i < m; i++) {
    for (let j = 0; j < n; j++) {
      const bij = matrix[i][j];
      if (bij > 0) out.push({ source: i + 1, target: j + 1, valuation: [bij, bij] });
      else if (bij < 0) out.push({ source: j + 1, target: i + 1, valuation: [-bij, -bij] });
    }
  }
  return out;
}
