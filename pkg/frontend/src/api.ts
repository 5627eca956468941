// Thin typed client over the service HTTP API. Every mutation carries the
// last-seen revision; a 409 surfaces as StaleRevisionError so callers can
// refetch instead of silently replaying.

import type {
  AssistResponse,
  Classification,
  ImportResponse,
  Relation,
  TreeResponse,
  VerifySummary,
} from "./types.js";

export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly diagnostics: unknown[] = [],
  ) {
    super(message);
  }
}

export class StaleRevisionError extends ApiFailure {}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function raiseFailure(response: Response): Promise<never> {
  let code = "error";
  let message = `HTTP ${response.status}`;
  let diagnostics: unknown[] = [];
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    diagnostics = body.diagnostics ?? [];
  } catch {
    // non-JSON error body; keep the defaults
  }
  if (response.status === 409) {
    throw new StaleRevisionError(409, code, message);
  }
  throw new ApiFailure(response.status, code, message, diagnostics);
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchLike: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchLike(this.baseUrl + path, init);
    if (!response.ok) {
      await raiseFailure(response);
    }
    return (await response.json()) as T;
  }

  private postJson<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
    return this.requestJson<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
      signal,
    });
  }

  importDebate(text: string, domain?: string): Promise<ImportResponse> {
    const query = domain ? `?domain=${encodeURIComponent(domain)}` : "";
    return this.requestJson<ImportResponse>(`/debates/import${query}`, {
      method: "POST",
      headers: { "Content-Type": "text/plain; charset=utf-8" },
      body: text,
    });
  }

  getTree(debateId: string): Promise<TreeResponse> {
    return this.requestJson<TreeResponse>(`/debates/${debateId}`);
  }

  async exportDebate(debateId: string): Promise<string> {
    const response = await this.fetchLike(`${this.baseUrl}/debates/${debateId}/export`);
    if (!response.ok) {
      await raiseFailure(response);
    }
    return response.text();
  }

  addArgument(
    debateId: string,
    parentId: string,
    text: string,
    relation: Relation,
    ifRevision: number,
  ): Promise<{ argument_id: string; revision: number }> {
    return this.postJson(`/debates/${debateId}/arguments`, {
      parent_id: parentId,
      text,
      relation,
      if_revision: ifRevision,
    });
  }

  editText(
    debateId: string,
    argumentId: string,
    text: string,
    ifRevision: number,
  ): Promise<{ worklist: { child: string; parent: string; relation: Relation }[]; revision: number }> {
    return this.requestJson(`/debates/${debateId}/arguments/${argumentId}`, {
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, if_revision: ifRevision }),
    });
  }

  removeArgument(
    debateId: string,
    argumentId: string,
    ifRevision: number,
  ): Promise<{ removed: number; revision: number }> {
    return this.requestJson(
      `/debates/${debateId}/arguments/${argumentId}?if_revision=${ifRevision}`,
      { method: "DELETE" },
    );
  }

  setRelation(
    debateId: string,
    argumentId: string,
    relation: Relation,
    ifRevision: number,
  ): Promise<{ previous: Relation; revision: number }> {
    return this.postJson(`/debates/${debateId}/relations/${argumentId}`, {
      relation,
      if_revision: ifRevision,
    });
  }

  classify(parentText: string, childText: string, signal?: AbortSignal): Promise<Classification> {
    return this.postJson("/classify", { parent_text: parentText, child_text: childText }, signal);
  }

  verify(debateId: string, confidenceFloor?: number): Promise<VerifySummary> {
    return this.postJson(`/debates/${debateId}/verify`,
      confidenceFloor === undefined ? {} : { confidence_floor: confidenceFloor });
  }

  assist(
    debateId: string,
    parentId: string,
    draftText: string,
    intended: Relation,
    signal?: AbortSignal,
  ): Promise<AssistResponse> {
    return this.postJson(`/debates/${debateId}/assist`, {
      parent_id: parentId,
      draft_text: draftText,
      intended,
    }, signal);
  }
}
