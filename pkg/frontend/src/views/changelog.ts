// The visible change log: one block per committed mutation, newest last.

import { el } from "../dom.js";
import type { LogEntry } from "../state.js";

export function renderChangeLog(entries: LogEntry[]): HTMLElement {
  const root = el("div", { class: "change-log" }, [el("h2", {}, ["Change log"])]);
  if (!entries.length) {
    root.append(el("p", { class: "empty-list" }, ["no changes yet"]));
    return root;
  }
  for (const entry of entries) {
    const block = el("div", { class: "log-entry", "data-version": String(entry.version) }, [
      el("span", { class: "log-head" }, [`v${entry.version} · ${entry.label}`]),
    ]);
    for (const line of entry.lines) {
      block.append(el("div", { class: "log-line diff-chip" }, [line]));
    }
    root.append(block);
  }
  return root;
}
