// Pure bipartite layout for the net window: nodes are layered by BFS
// distance from the marked places, places and transitions alternating.
// Good enough for the small radii the stepper fetches (<= 4).

import { NetView } from './api.js';

export interface LaidOutNode {
  id: string;
  kind: 'place' | 'transition';
  x: number;
  y: number;
}

export interface LaidOutEdge {
  from: string;
  to: string;
}

export interface Layout {
  width: number;
  height: number;
  nodes: LaidOutNode[];
  edges: LaidOutEdge[];
}

const COL_W = 210;
const ROW_H = 64;
const MARGIN = 40;

export function layoutNet(view: NetView): Layout {
  // BFS layering over the bipartite graph, marked places in column 0, so
  // the current tokens sit on the left and the window unfolds rightwards
  const adjacency = new Map<string, string[]>();
  const touch = (a: string, b: string) => {
    if (!adjacency.has(a)) adjacency.set(a, []);
    adjacency.get(a)!.push(b);
  };
  for (const t of view.transitions) {
    for (const s of t.preset.concat(t.postset)) {
      touch(s, t.id);
      touch(t.id, s);
    }
  }
  const column = new Map<string, number>();
  const queue: string[] = [];
  for (const p of view.places) {
    if (p.marked) {
      column.set(p.id, 0);
      queue.push(p.id);
    }
  }
  while (queue.length > 0) {
    const cur = queue.shift()!;
    for (const next of adjacency.get(cur) ?? []) {
      if (!column.has(next)) {
        column.set(next, column.get(cur)! + 1);
        queue.push(next);
      }
    }
  }
  for (const p of view.places) {
    if (!column.has(p.id)) column.set(p.id, 0);
  }
  for (const t of view.transitions) {
    if (!column.has(t.id)) column.set(t.id, 1);
  }

  const rows = new Map<number, number>();
  const nodes: LaidOutNode[] = [];
  const put = (id: string, kind: 'place' | 'transition') => {
    const col = column.get(id) ?? 0;
    const row = rows.get(col) ?? 0;
    rows.set(col, row + 1);
    nodes.push({
      id,
      kind,
      x: MARGIN + col * COL_W,
      y: MARGIN + row * ROW_H,
    });
  };
  for (const p of [...view.places].sort((a, b) => a.id.localeCompare(b.id))) {
    put(p.id, 'place');
  }
  for (const t of [...view.transitions].sort((a, b) =>
    a.id.localeCompare(b.id),
  )) {
    put(t.id, 'transition');
  }

  const edges: LaidOutEdge[] = [];
  for (const t of view.transitions) {
    for (const s of t.preset) edges.push({ from: s, to: t.id });
    for (const s of t.postset) edges.push({ from: t.id, to: s });
  }

  const width = MARGIN * 2 + (Math.max(...[...column.values()], 0) + 1) * COL_W;
  const height =
    MARGIN * 2 + Math.max(...[...rows.values()].map((r) => r * ROW_H), ROW_H);
  return { width, height, nodes, edges };
}
