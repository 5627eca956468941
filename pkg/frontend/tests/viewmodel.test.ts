import { describe, expect, it } from "vitest";

import type { Classification, TreeResponse } from "../src/types.js";
import {
  badgeFor,
  buildViewModel,
  errorBadge,
  incidentEdges,
  probabilityOf,
} from "../src/viewmodel.js";

const TREE: TreeResponse = {
  debate_id: "d1",
  revision: 3,
  title: "Bikes",
  domain: "life",
  root: "a1",
  nodes: [
    { id: "a1", text: "root claim", depth: 0 },
    { id: "a2", text: "mid claim", depth: 1 },
    { id: "a3", text: "leaf one", depth: 2 },
    { id: "a4", text: "leaf two", depth: 2 },
    { id: "a5", text: "sibling", depth: 1 },
  ],
  edges: [
    { child: "a2", parent: "a1", relation: "support" },
    { child: "a3", parent: "a2", relation: "attack" },
    { child: "a4", parent: "a2", relation: "support" },
    { child: "a5", parent: "a1", relation: "attack" },
  ],
};

function classification(pAttack: number): Classification {
  return {
    p_attack: pAttack,
    p_support: 1 - pAttack,
    predicted: pAttack >= 0.5 ? "attack" : "support",
    is_tie: pAttack === 0.5,
    backend_id: "test",
    prompt_fingerprint: "f",
  };
}

describe("buildViewModel", () => {
  it("indexes nodes and attaches children in edge order", () => {
    const vm = buildViewModel(TREE);
    expect(vm.revision).toBe(3);
    expect(vm.root.id).toBe("a1");
    expect(vm.root.children.map((child) => child.id)).toEqual(["a2", "a5"]);
    expect(vm.index.get("a2")?.children.map((child) => child.id)).toEqual(["a3", "a4"]);
    expect(vm.index.get("a3")?.relation).toBe("attack");
    expect(vm.root.relation).toBeNull();
  });

  it("rejects edges to unknown nodes", () => {
    expect(() => buildViewModel({
      ...TREE,
      edges: [...TREE.edges, { child: "ghost", parent: "a1", relation: "attack" }],
    })).toThrow(/unknown node/);
  });
});

describe("incidentEdges", () => {
  it("returns parent edge plus child edges for an internal node", () => {
    const vm = buildViewModel(TREE);
    const edges = incidentEdges(vm, "a2");
    expect(edges).toHaveLength(3);
    expect(edges[0]).toEqual({ child: "a2", parent: "a1", relation: "support" });
    expect(edges.slice(1).map((edge) => edge.child)).toEqual(["a3", "a4"]);
  });

  it("returns only child edges for the root", () => {
    const vm = buildViewModel(TREE);
    expect(incidentEdges(vm, "a1")).toHaveLength(2);
  });

  it("returns one edge for a leaf", () => {
    const vm = buildViewModel(TREE);
    expect(incidentEdges(vm, "a3")).toHaveLength(1);
  });
});

describe("badgeFor", () => {
  const edge = { child: "a2", parent: "a1", relation: "support" as const };

  it("confirms when prediction matches at or above the floor", () => {
    const badge = badgeFor(edge, classification(0.1));
    expect(badge.status).toBe("confirmed");
    expect(badge.probabilityOfStored).toBeCloseTo(0.9, 12);
  });

  it("mismatches whenever the predicted label differs", () => {
    const badge = badgeFor(edge, classification(0.97), 0.6);
    expect(badge.status).toBe("mismatch");
    expect(badge.predicted).toBe("attack");
  });

  it("reports low confidence between 0.5 and the floor", () => {
    const badge = badgeFor(edge, classification(0.45), 0.6);
    expect(badge.status).toBe("low_confidence");
  });

  it("probabilityOf picks the matching side", () => {
    const outcome = classification(0.832);
    expect(probabilityOf(outcome, "attack")).toBeCloseTo(0.832, 12);
    expect(probabilityOf(outcome, "support")).toBeCloseTo(0.168, 12);
  });

  it("errorBadge carries the edge with no numbers", () => {
    const badge = errorBadge(edge);
    expect(badge.status).toBe("error");
    expect(badge.probabilityOfStored).toBeNull();
  });
});
