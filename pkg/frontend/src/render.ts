// DOM builders. All functions are pure over their inputs and the global
// document, so they can be exercised under a DOM test environment.

import type { Diagnostic } from "./types.js";
import type { EdgeBadge, TreeViewModel, ViewNode } from "./viewmodel.js";
import type { GaugeReading } from "./gauge.js";
import { formatGauge } from "./gauge.js";

export interface TreeHandlers {
  onEdit(nodeId: string, newText: string): void;
  onReply(nodeId: string): void;
  onDelete(nodeId: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderDiagnostics(diagnostics: Diagnostic[]): HTMLElement {
  const list = el("ul", "diagnostics");
  for (const diagnostic of diagnostics) {
    const item = el("li", `diagnostic ${diagnostic.severity}`);
    item.textContent =
      `line ${diagnostic.line_number}: ${diagnostic.severity}: ${diagnostic.message}`;
    list.appendChild(item);
  }
  return list;
}

export function renderBadge(badge: EdgeBadge): HTMLElement {
  const span = el("span", `badge ${badge.status}`);
  const probability = badge.probabilityOfStored;
  span.textContent =
    badge.status === "error"
      ? "error"
      : `${badge.status.replace("_", " ")} ${(probability ?? 0).toFixed(2)}`;
  span.dataset.child = badge.edge.child;
  span.dataset.parent = badge.edge.parent;
  if (badge.predicted) {
    span.dataset.predicted = badge.predicted;
  }
  return span;
}

// One badge per verified edge; mismatches carry the .mismatch class so the
// stylesheet can highlight them.
export function renderBadgeStrip(badges: EdgeBadge[]): HTMLElement {
  const strip = el("span", "badges");
  for (const badge of badges) {
    strip.appendChild(renderBadge(badge));
  }
  return strip;
}

export function renderGauge(reading: GaugeReading): HTMLElement {
  const gauge = el("div", "gauge");
  const bar = el("div", "gauge-bar");
  const fill = el("div", `gauge-fill ${reading.intended}`);
  fill.style.width = `${reading.percent}%`;
  bar.appendChild(fill);
  gauge.appendChild(bar);
  gauge.appendChild(el("span", "gauge-label", formatGauge(reading)));
  return gauge;
}

function renderNode(node: ViewNode, handlers: TreeHandlers): HTMLElement {
  const item = el("li", "node");
  item.dataset.id = node.id;

  const details = el("details");
  details.open = true;
  const summary = el("summary", "node-line");

  if (node.relation !== null) {
    summary.appendChild(
      el("span", `chip ${node.relation}`, node.relation === "support" ? "Pro" : "Con"));
  } else {
    summary.appendChild(el("span", "chip thesis", "Thesis"));
  }
  summary.appendChild(el("span", "node-text", node.text));
  summary.appendChild(el("span", "badge-slot"));

  const actions = el("span", "actions");
  const editButton = el("button", "edit", "edit");
  editButton.addEventListener("click", (event) => {
    event.preventDefault();
    const replacement = promptForText(node.text);
    if (replacement !== null && replacement.trim() !== "") {
      handlers.onEdit(node.id, replacement);
    }
  });
  const replyButton = el("button", "reply", "reply");
  replyButton.addEventListener("click", (event) => {
    event.preventDefault();
    handlers.onReply(node.id);
  });
  actions.appendChild(editButton);
  actions.appendChild(replyButton);
  if (node.relation !== null) {
    const deleteButton = el("button", "delete", "delete");
    deleteButton.addEventListener("click", (event) => {
      event.preventDefault();
      handlers.onDelete(node.id);
    });
    actions.appendChild(deleteButton);
  }
  summary.appendChild(actions);
  details.appendChild(summary);

  if (node.children.length > 0) {
    const childList = el("ul", "children");
    for (const child of node.children) {
      childList.appendChild(renderNode(child, handlers));
    }
    details.appendChild(childList);
  }
  item.appendChild(details);
  return item;
}

// window.prompt is fine for inline edits and trivially stubbable in tests.
function promptForText(current: string): string | null {
  return window.prompt("Edit argument text", current);
}

export function renderTree(vm: TreeViewModel, handlers: TreeHandlers): HTMLElement {
  const list = el("ul", "tree");
  list.appendChild(renderNode(vm.root, handlers));
  return list;
}

export function badgeSlotFor(container: HTMLElement, nodeId: string): HTMLElement | null {
  const node = container.querySelector(`li[data-id="${nodeId}"]`);
  return node?.querySelector(".badge-slot") ?? null;
}
