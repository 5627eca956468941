// View model derived from the latest fetched server state. The client never
// owns authoritative tree state: every mutation goes to the server and the
// model is rebuilt from the response of the next fetch.

import type { Classification, Relation, TreeEdge, TreeResponse } from "./types.js";

export interface ViewNode {
  id: string;
  text: string;
  depth: number;
  relation: Relation | null; // label of the edge to the parent; null for root
  parentId: string | null;
  children: ViewNode[];
}

export interface TreeViewModel {
  debateId: string;
  revision: number;
  title: string | null;
  domain: string | null;
  root: ViewNode;
  index: Map<string, ViewNode>;
  edges: TreeEdge[];
}

export function buildViewModel(tree: TreeResponse): TreeViewModel {
  const index = new Map<string, ViewNode>();
  for (const node of tree.nodes) {
    index.set(node.id, {
      id: node.id,
      text: node.text,
      depth: node.depth,
      relation: null,
      parentId: null,
      children: [],
    });
  }
  for (const edge of tree.edges) {
    const child = index.get(edge.child);
    const parent = index.get(edge.parent);
    if (!child || !parent) {
      throw new Error(`edge references unknown node: ${edge.child} -> ${edge.parent}`);
    }
    child.relation = edge.relation;
    child.parentId = edge.parent;
    parent.children.push(child);
  }
  const root = index.get(tree.root);
  if (!root) {
    throw new Error(`root ${tree.root} not among nodes`);
  }
  return {
    debateId: tree.debate_id,
    revision: tree.revision,
    title: tree.title,
    domain: tree.domain,
    root,
    index,
    edges: tree.edges,
  };
}

// Parent edge first (if any), then the edges from each child, matching the
// order the server reports in a PATCH worklist.
export function incidentEdges(vm: TreeViewModel, nodeId: string): TreeEdge[] {
  const node = vm.index.get(nodeId);
  if (!node) {
    return [];
  }
  const edges: TreeEdge[] = [];
  if (node.parentId !== null && node.relation !== null) {
    edges.push({ child: node.id, parent: node.parentId, relation: node.relation });
  }
  for (const child of node.children) {
    if (child.relation !== null) {
      edges.push({ child: child.id, parent: node.id, relation: child.relation });
    }
  }
  return edges;
}

export type BadgeStatus = "confirmed" | "mismatch" | "low_confidence" | "error";

export interface EdgeBadge {
  edge: TreeEdge;
  status: BadgeStatus;
  probabilityOfStored: number | null;
  predicted: Relation | null;
}

export function probabilityOf(outcome: Classification, relation: Relation): number {
  return relation === "attack" ? outcome.p_attack : outcome.p_support;
}

// Same status rule the server applies in tree-wide verification, computed
// client-side for the per-edit worklist (/classify gives the raw outcome).
export function badgeFor(
  edge: TreeEdge,
  outcome: Classification,
  confidenceFloor = 0.6,
): EdgeBadge {
  const pStored = probabilityOf(outcome, edge.relation);
  let status: BadgeStatus;
  if (outcome.predicted !== edge.relation) {
    status = "mismatch";
  } else if (pStored >= confidenceFloor) {
    status = "confirmed";
  } else {
    status = "low_confidence";
  }
  return { edge, status, probabilityOfStored: pStored, predicted: outcome.predicted };
}

export function errorBadge(edge: TreeEdge): EdgeBadge {
  return { edge, status: "error", probabilityOfStored: null, predicted: null };
}
