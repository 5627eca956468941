// Bootstrap: bind the controller to the static page.

import { ApiClient } from "./api.js";
import { App, AppElements } from "./app.js";

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function defaultBaseUrl(): string {
  // Served from the API process itself (under /ui) or standalone.
  if (window.location.pathname.startsWith("/ui")) {
    return window.location.origin;
  }
  return "http://127.0.0.1:8000";
}

function start(): void {
  const serverInput = byId<HTMLInputElement>("server-url");
  serverInput.value = defaultBaseUrl();

  let app = makeApp(serverInput.value);
  serverInput.addEventListener("change", () => {
    app = makeApp(serverInput.value);
  });

  function makeApp(baseUrl: string): App {
    const ui: AppElements = {
      tree: byId("tree"),
      notices: byId("notices"),
      assistPanel: byId("assist-panel"),
      assistDraft: byId<HTMLTextAreaElement>("assist-draft"),
      assistIntended: byId<HTMLSelectElement>("assist-intended"),
      assistGauge: byId("assist-gauge"),
      assistSuggestion: byId("assist-suggestion"),
      assistParentLabel: byId("assist-parent"),
      assistCommit: byId<HTMLButtonElement>("assist-commit"),
    };
    return new App(new ApiClient(baseUrl), ui);
  }

  byId<HTMLInputElement>("import-file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) {
      return;
    }
    const text = await file.text();
    await app.importText(text);
    input.value = "";
  });

  byId<HTMLButtonElement>("export-button").addEventListener("click", async () => {
    const text = await app.exportCurrent();
    if (text === null) {
      return;
    }
    const blob = new Blob([text], { type: "text/plain;charset=utf-8" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = "debate.txt";
    anchor.click();
    URL.revokeObjectURL(anchor.href);
  });

  byId<HTMLTextAreaElement>("assist-draft").addEventListener("input", () => {
    app.onDraftInput();
  });
  byId<HTMLSelectElement>("assist-intended").addEventListener("change", () => {
    app.onDraftInput();
  });
  byId<HTMLButtonElement>("assist-commit").addEventListener("click", () => {
    void app.commitDraft();
  });
  byId<HTMLButtonElement>("assist-close").addEventListener("click", () => {
    byId("assist-panel").hidden = true;
  });
}

document.addEventListener("DOMContentLoaded", start);
