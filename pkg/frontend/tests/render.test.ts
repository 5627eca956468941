// DOM rendering under happy-dom: badges, gauge, and the collapsible tree.

import { describe, expect, it } from "vitest";

import { gaugeReading } from "../src/gauge.js";
import {
  badgeSlotFor,
  renderBadgeStrip,
  renderGauge,
  renderTree,
} from "../src/render.js";
import type { TreeEdge } from "../src/types.js";
import { buildViewModel, errorBadge } from "../src/viewmodel.js";
import type { EdgeBadge } from "../src/viewmodel.js";

const TREE = buildViewModel({
  debate_id: "d1",
  revision: 1,
  title: null,
  domain: null,
  root: "a1",
  nodes: [
    { id: "a1", text: "root", depth: 0 },
    { id: "a2", text: "pro child", depth: 1 },
    { id: "a3", text: "con child", depth: 1 },
  ],
  edges: [
    { child: "a2", parent: "a1", relation: "support" },
    { child: "a3", parent: "a1", relation: "attack" },
  ],
});

const HANDLERS = { onEdit() {}, onReply() {}, onDelete() {} };

function badge(child: string, status: EdgeBadge["status"]): EdgeBadge {
  const edge: TreeEdge = { child, parent: "a1", relation: "support" };
  if (status === "error") {
    return errorBadge(edge);
  }
  return { edge, status, probabilityOfStored: 0.9, predicted: "support" };
}

describe("renderBadgeStrip", () => {
  it("displays one badge element per verified edge", () => {
    for (const k of [1, 3, 5]) {
      const badges = Array.from({ length: k }, (_, i) => badge(`a${i}`, "confirmed"));
      const strip = renderBadgeStrip(badges);
      expect(strip.querySelectorAll(".badge")).toHaveLength(k);
    }
  });

  it("marks mismatches for highlighting", () => {
    const strip = renderBadgeStrip([badge("a2", "confirmed"), badge("a3", "mismatch")]);
    expect(strip.querySelectorAll(".badge.mismatch")).toHaveLength(1);
    const mismatch = strip.querySelector(".badge.mismatch") as HTMLElement;
    expect(mismatch.dataset.child).toBe("a3");
  });
});

describe("renderGauge", () => {
  it("shows the fixture probabilities at display precision", () => {
    const gauge = renderGauge(gaugeReading(0.832, "attack"));
    expect(gauge.querySelector(".gauge-label")?.textContent).toBe("83% toward attack");
    const fill = gauge.querySelector(".gauge-fill") as HTMLElement;
    expect(fill.style.width).toBe("83%");
    expect(fill.classList.contains("attack")).toBe(true);
  });

  it("renders ties as 50/50", () => {
    const gauge = renderGauge(gaugeReading(0.5, "support"));
    expect(gauge.querySelector(".gauge-label")?.textContent).toBe("50/50 (tie)");
  });
});

describe("renderTree", () => {
  it("renders every node with stance chips, support distinct from attack", () => {
    const tree = renderTree(TREE, HANDLERS);
    expect(tree.querySelectorAll("li.node")).toHaveLength(3);
    expect(tree.querySelectorAll(".chip.support")).toHaveLength(1);
    expect(tree.querySelectorAll(".chip.attack")).toHaveLength(1);
    expect(tree.querySelectorAll(".chip.thesis")).toHaveLength(1);
  });

  it("is collapsible via details elements", () => {
    const tree = renderTree(TREE, HANDLERS);
    const details = tree.querySelectorAll("details");
    expect(details.length).toBe(3);
    details.forEach((node) => expect((node as HTMLDetailsElement).open).toBe(true));
  });

  it("exposes a badge slot per node", () => {
    const tree = renderTree(TREE, HANDLERS);
    document.body.replaceChildren(tree);
    const slot = badgeSlotFor(document.body, "a2");
    expect(slot).not.toBeNull();
    slot?.replaceChildren(renderBadgeStrip([badge("a2", "confirmed")]));
    expect(document.body.querySelectorAll(".badge")).toHaveLength(1);
  });
});
