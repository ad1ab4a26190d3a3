// Semantic detail panel: one attribute's value, where it came from, and the
// edges that touch it, with accept/replace actions.

import { el } from "../dom.js";
import type { StudioStore } from "../state.js";
import type { RelationEdge } from "../types.js";
import { slotValue } from "../types.js";

function edgeRow(store: StudioStore, edge: RelationEdge, otherEnd: string): HTMLElement {
  const row = el("div", { class: `edge-row edge-row-${edge.kind}` }, [
    el("span", { class: "edge-kind" }, [edge.kind.replace("_", " ")]),
    el("button", { class: "edge-peer", "data-path": otherEnd }, [otherEnd]),
    el("p", { class: "edge-explanation" }, [edge.explanation]),
  ]);
  const peer = row.querySelector("button.edge-peer")!;
  peer.addEventListener("click", () => store.selectNode(otherEnd));
  if (edge.suggestion) {
    const accept = el("button", { class: "accept-suggestion" }, [
      `Accept "${edge.suggestion}"`,
    ]);
    accept.addEventListener("click", () => void store.acceptSuggestion(edge));
    row.append(accept);
  }
  return row;
}

export function renderDetailPanel(store: StudioStore, path: string): HTMLElement {
  const view = store.getState();
  const root = el("aside", { class: "detail-panel", "data-path": path });
  root.append(el("h2", {}, [path]));

  const value = view.state ? slotValue(view.state, path) : null;
  if (value) {
    root.append(
      el("div", { class: "detail-value" }, [
        el("span", { class: "value-text" }, [value.text]),
        el("span", { class: `provenance provenance-${value.provenance}` }, [value.provenance]),
        el("span", { class: "value-version" }, [`v${value.version}`]),
      ]),
    );
  } else {
    root.append(el("div", { class: "detail-value detail-empty" }, ["unspecified"]));
  }

  const edges = view.graph?.edges ?? [];
  const affectedBy = edges.filter((e) => e.to === path);
  const affects = edges.filter((e) => e.from === path);

  root.append(el("h3", {}, ["Affected by"]));
  root.append(
    el(
      "div",
      { class: "affected-by-list" },
      affectedBy.length
        ? affectedBy.map((e) => edgeRow(store, e, e.from))
        : [el("p", { class: "empty-list" }, ["nothing influences this attribute"])],
    ),
  );

  root.append(el("h3", {}, ["Affects"]));
  root.append(
    el(
      "div",
      { class: "affects-list" },
      affects.length
        ? affects.map((e) => edgeRow(store, e, e.to))
        : [el("p", { class: "empty-list" }, ["this attribute influences nothing"])],
    ),
  );

  if (view.notice) {
    const prompt = el("div", { class: "reanalyze-prompt" }, [view.notice, " "]);
    const button = el("button", { class: "run-relations" }, ["Re-analyze"]);
    button.addEventListener("click", () => {
      store.clearError();
      void store.runPhase("relations");
    });
    prompt.append(button);
    root.append(prompt);
  }

  const replaceInput = el("input", {
    class: "replace-input",
    type: "text",
    placeholder: "replace value…",
  }) as HTMLInputElement;
  const replaceButton = el("button", { class: "replace-value" }, ["Replace"]);
  replaceButton.addEventListener("click", () => {
    if (replaceInput.value.trim()) void store.replaceSlot(path, replaceInput.value.trim());
  });
  root.append(el("div", { class: "replace-row" }, [replaceInput, replaceButton]));
  return root;
}
