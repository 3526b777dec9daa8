import { HistoryNode } from "./types.js";

/** Pure helpers over the server's history tree; the tree itself is server
 * state and arrives with every session payload. */

export function nodeById(nodes: HistoryNode[], id: number): HistoryNode {
  const node = nodes.find((n) => n.id === id);
  if (!node) throw new Error(`history node ${id} not found`);
  return node;
}

/** Mutation sequence from the root down to the node. */
export function pathToNode(nodes: HistoryNode[], id: number): number[] {
  const out: number[] = [];
  let cur = nodeById(nodes, id);
  while (cur.parent !== null) {
    if (cur.vertex === null) throw new Error("non-root node without vertex label");
    out.push(cur.vertex);
    cur = nodeById(nodes, cur.parent);
  }
  return out.reverse();
}

export function childrenOf(nodes: HistoryNode[], id: number): HistoryNode[] {
  return nodes.filter((n) => n.parent === id);
}

export function depthOf(nodes: HistoryNode[], id: number): number {
  return pathToNode(nodes, id).length;
}

/** Walk order for rendering: depth-first from the root, children by vertex. */
export function renderOrder(nodes: HistoryNode[]): HistoryNode[] {
  const root = nodes.find((n) => n.parent === null);
  if (!root) return [];
  const out: HistoryNode[] = [];
  const visit = (node: HistoryNode) => {
    out.push(node);
    childrenOf(nodes, node.id)
      .sort((a, b) => (a.vertex ?? 0) - (b.vertex ?? 0))
      .forEach(visit);
  };
  visit(root);
  return out;
}
