// Page controller: owns the current debate id and last-seen revision,
// routes user actions through the API client, and re-renders from fresh
// server state after every change. A 409 triggers a refetch, never a replay.

import { ApiClient, StaleRevisionError } from "./api.js";
import { LatestWins, debounce } from "./debounce.js";
import { gaugeReading } from "./gauge.js";
import {
  badgeSlotFor,
  renderBadgeStrip,
  renderDiagnostics,
  renderGauge,
  renderTree,
} from "./render.js";
import type { Relation, TreeEdge } from "./types.js";
import {
  EdgeBadge,
  TreeViewModel,
  badgeFor,
  buildViewModel,
  errorBadge,
} from "./viewmodel.js";

const ASSIST_DEBOUNCE_MS = 500;

export interface AppElements {
  tree: HTMLElement;
  notices: HTMLElement;
  assistPanel: HTMLElement;
  assistDraft: HTMLTextAreaElement;
  assistIntended: HTMLSelectElement;
  assistGauge: HTMLElement;
  assistSuggestion: HTMLElement;
  assistParentLabel: HTMLElement;
  assistCommit: HTMLButtonElement;
}

export class App {
  private vm: TreeViewModel | null = null;
  private assistParentId: string | null = null;
  private latest = new LatestWins();
  private debouncedAssist = debounce(() => void this.runAssist(), ASSIST_DEBOUNCE_MS);

  constructor(private api: ApiClient, private ui: AppElements) {}

  get viewModel(): TreeViewModel | null {
    return this.vm;
  }

  notice(message: string, kind = "info"): void {
    const line = document.createElement("div");
    line.className = `notice ${kind}`;
    line.textContent = message;
    this.ui.notices.prepend(line);
    while (this.ui.notices.childElementCount > 5) {
      this.ui.notices.lastElementChild?.remove();
    }
  }

  async importText(text: string, domain?: string): Promise<void> {
    try {
      const result = await this.api.importDebate(text, domain);
      if (result.diagnostics.length > 0) {
        this.ui.notices.prepend(renderDiagnostics(result.diagnostics));
      }
      await this.load(result.debate_id);
      this.notice(`imported debate ${result.debate_id}`);
    } catch (failure) {
      if (failure instanceof Error && "diagnostics" in failure) {
        const diagnostics = (failure as { diagnostics: never[] }).diagnostics;
        this.ui.notices.prepend(renderDiagnostics(diagnostics));
      }
      this.notice(`import failed: ${(failure as Error).message}`, "error");
    }
  }

  async load(debateId: string): Promise<void> {
    const tree = await this.api.getTree(debateId);
    this.vm = buildViewModel(tree);
    this.renderCurrentTree();
  }

  private renderCurrentTree(): void {
    if (!this.vm) {
      return;
    }
    this.ui.tree.replaceChildren(renderTree(this.vm, {
      onEdit: (nodeId, newText) => void this.editFlow(nodeId, newText),
      onReply: (nodeId) => this.openAssist(nodeId),
      onDelete: (nodeId) => void this.deleteFlow(nodeId),
    }));
  }

  private async reloadAfterConflict(): Promise<void> {
    if (this.vm) {
      this.notice("someone else changed this debate; reloaded latest state", "warn");
      await this.load(this.vm.debateId);
    }
  }

  // Edit: PATCH the text, then re-verify every edge the server returned in
  // the worklist and pin one badge per edge next to the edited node.
  async editFlow(nodeId: string, newText: string): Promise<void> {
    if (!this.vm) {
      return;
    }
    try {
      const result = await this.api.editText(
        this.vm.debateId, nodeId, newText, this.vm.revision);
      await this.load(this.vm.debateId);
      const badges = await this.verifyWorklist(result.worklist);
      const slot = badgeSlotFor(this.ui.tree, nodeId);
      slot?.replaceChildren(renderBadgeStrip(badges));
      const mismatches = badges.filter((badge) => badge.status === "mismatch");
      for (const badge of mismatches) {
        this.offerRelationFix(badge);
      }
    } catch (failure) {
      if (failure instanceof StaleRevisionError) {
        await this.reloadAfterConflict();
        return;
      }
      this.notice(`edit failed: ${(failure as Error).message}`, "error");
    }
  }

  private async verifyWorklist(worklist: TreeEdge[]): Promise<EdgeBadge[]> {
    if (!this.vm) {
      return [];
    }
    const vm = this.vm;
    return Promise.all(worklist.map(async (edge) => {
      const parent = vm.index.get(edge.parent);
      const child = vm.index.get(edge.child);
      if (!parent || !child) {
        return errorBadge(edge);
      }
      try {
        const outcome = await this.api.classify(parent.text, child.text);
        return badgeFor(edge, outcome);
      } catch {
        return errorBadge(edge);
      }
    }));
  }

  // Mismatch: offer a one-click accept that relabels via the server, or
  // dismiss (the stored relation stays untouched).
  private offerRelationFix(badge: EdgeBadge): void {
    if (!badge.predicted) {
      return;
    }
    const predicted = badge.predicted;
    const container = document.createElement("div");
    container.className = "notice warn fix-offer";
    const label = document.createElement("span");
    label.textContent =
      `stored ${badge.edge.relation} but classified ${predicted} ` +
      `(p=${(badge.probabilityOfStored ?? 0).toFixed(2)})`;
    const accept = document.createElement("button");
    accept.textContent = `accept ${predicted}`;
    accept.addEventListener("click", () => {
      container.remove();
      void this.acceptRelationFix(badge.edge.child, predicted);
    });
    const dismiss = document.createElement("button");
    dismiss.textContent = "dismiss";
    dismiss.addEventListener("click", () => container.remove());
    container.append(label, accept, dismiss);
    this.ui.notices.prepend(container);
  }

  async acceptRelationFix(childId: string, relation: Relation): Promise<void> {
    if (!this.vm) {
      return;
    }
    try {
      await this.api.setRelation(this.vm.debateId, childId, relation, this.vm.revision);
      await this.load(this.vm.debateId);
      this.notice(`relation updated to ${relation}`);
    } catch (failure) {
      if (failure instanceof StaleRevisionError) {
        await this.reloadAfterConflict();
        return;
      }
      this.notice(`relation update failed: ${(failure as Error).message}`, "error");
    }
  }

  async deleteFlow(nodeId: string): Promise<void> {
    if (!this.vm) {
      return;
    }
    try {
      const result = await this.api.removeArgument(this.vm.debateId, nodeId, this.vm.revision);
      await this.load(this.vm.debateId);
      this.notice(`removed ${result.removed} argument(s)`);
    } catch (failure) {
      if (failure instanceof StaleRevisionError) {
        await this.reloadAfterConflict();
        return;
      }
      this.notice(`delete failed: ${(failure as Error).message}`, "error");
    }
  }

  // Assist: live feedback while drafting; requests are debounced and only
  // the latest one may land. Nothing touches the tree until commit.
  openAssist(parentId: string): void {
    if (!this.vm) {
      return;
    }
    this.assistParentId = parentId;
    const parent = this.vm.index.get(parentId);
    this.ui.assistParentLabel.textContent = parent ? parent.text : parentId;
    this.ui.assistPanel.hidden = false;
    this.ui.assistDraft.value = "";
    this.ui.assistGauge.replaceChildren();
    this.ui.assistSuggestion.textContent = "";
    this.ui.assistDraft.focus();
  }

  onDraftInput(): void {
    this.debouncedAssist();
  }

  async runAssist(): Promise<void> {
    if (!this.vm || this.assistParentId === null) {
      return;
    }
    const draft = this.ui.assistDraft.value;
    if (draft.trim() === "") {
      this.ui.assistGauge.replaceChildren();
      return;
    }
    const intended = this.ui.assistIntended.value as Relation;
    try {
      const feedback = await this.api.assist(
        this.vm.debateId, this.assistParentId, draft, intended, this.latest.next());
      const reading = gaugeReading(feedback.p_intended, intended);
      this.ui.assistGauge.replaceChildren(renderGauge(reading));
      this.ui.assistSuggestion.textContent = feedback.suggestion;
      this.ui.assistCommit.disabled = false;
    } catch (failure) {
      if ((failure as Error).name === "AbortError") {
        return; // a newer draft superseded this request
      }
      this.notice(`assist failed: ${(failure as Error).message}`, "error");
    }
  }

  async commitDraft(): Promise<void> {
    if (!this.vm || this.assistParentId === null) {
      return;
    }
    const draft = this.ui.assistDraft.value;
    const intended = this.ui.assistIntended.value as Relation;
    this.debouncedAssist.cancel();
    this.latest.cancel();
    try {
      await this.api.addArgument(
        this.vm.debateId, this.assistParentId, draft, intended, this.vm.revision);
      this.ui.assistPanel.hidden = true;
      this.assistParentId = null;
      await this.load(this.vm.debateId);
      this.notice("argument added");
    } catch (failure) {
      if (failure instanceof StaleRevisionError) {
        await this.reloadAfterConflict();
        return;
      }
      this.notice(`commit failed: ${(failure as Error).message}`, "error");
    }
  }

  async exportCurrent(): Promise<string | null> {
    if (!this.vm) {
      return null;
    }
    return this.api.exportDebate(this.vm.debateId);
  }
}
