// Structure view: the four-level semantic form plus the free-text prompt box.

import { el } from "../dom.js";
import type { StudioStore } from "../state.js";
import { graphIsStale } from "../state.js";
import type { RelationEdge, SemanticState, AttributeValue } from "../types.js";
import {
  COMPONENT_ATTRS,
  FIXED_LEVELS,
  LEVEL_ATTRS,
  LEVEL_LABELS,
  attributeLabel,
} from "../types.js";

function needsValueEdge(store: StudioStore, path: string): RelationEdge | null {
  const graph = store.getState().graph;
  if (!graph) return null;
  return graph.edges.find((e) => e.kind === "needs_value" && e.to === path) ?? null;
}

function slotRow(
  store: StudioStore,
  path: string,
  label: string,
  value: AttributeValue | undefined,
): HTMLElement {
  const view = store.getState();
  const highlighted = view.highlights.includes(path);
  const dirtyText = view.dirty[path];

  const input = el("input", {
    class: "slot-input",
    type: "text",
    value: dirtyText ?? value?.text ?? "",
    placeholder: "unspecified",
    "data-path": path,
  }) as HTMLInputElement;
  input.addEventListener("input", () => store.editSlot(path, input.value));
  input.addEventListener("change", () => {
    void commit();
  });

  const commit = async () => {
    const outcome = await store.commitSlot(path);
    if (outcome.needsConfirmation) {
      const banner = el("div", { class: "confirm-edit" }, [
        `This attribute influences ${outcome.fanout} others. Apply anyway? `,
      ]);
      const yes = el("button", { class: "confirm-yes" }, ["Apply"]) as HTMLButtonElement;
      yes.addEventListener("click", () => {
        void store.commitSlot(path, true);
        banner.remove();
      });
      const no = el("button", { class: "confirm-no" }, ["Keep editing"]) as HTMLButtonElement;
      no.addEventListener("click", () => banner.remove());
      banner.append(yes, no);
      row.append(banner);
    }
  };

  const classes = ["slot-row"];
  if (highlighted) classes.push("augmented-highlight");
  const row = el("div", { class: classes.join(" "), "data-path": path }, [
    el("label", { class: "slot-label" }, [label]),
    input,
  ]);
  if (value) {
    row.append(el("span", { class: `provenance provenance-${value.provenance}` }, [value.provenance]));
  }
  const nameButton = el("button", { class: "slot-open-detail", title: "inspect relations" }, ["☰"]);
  nameButton.addEventListener("click", () => store.selectNode(path));
  row.append(nameButton);

  if (!value) {
    const edge = needsValueEdge(store, path);
    if (edge && edge.suggestion) {
      const chip = el("span", { class: "needs-value" }, [`needs value · ${edge.suggestion} `]);
      const accept = el("button", { class: "accept-suggestion", "data-path": path }, ["Accept"]);
      accept.addEventListener("click", () => void store.acceptSuggestion(edge));
      chip.append(accept);
      row.append(chip);
    }
  }
  return row;
}

function levelPanel(store: StudioStore, level: (typeof FIXED_LEVELS)[number], state: SemanticState): HTMLElement {
  const slots = state[level];
  const rows = LEVEL_ATTRS[level].map((attr) =>
    slotRow(store, `${level}.${attr}`, attributeLabel(attr), slots[attr]),
  );
  const filled = Object.keys(slots).length;
  return el("details", { class: "level-panel", "data-level": level, ...(filled ? { open: "" } : {}) }, [
    el("summary", {}, [`${LEVEL_LABELS[level]} (${filled})`]),
    el("div", { class: "panel-body" }, rows),
  ]);
}

function componentPanel(store: StudioStore, state: SemanticState): HTMLElement {
  const sections: (Node | string)[] = [];
  for (const component of state.components) {
    const rows = COMPONENT_ATTRS.map((attr) =>
      slotRow(
        store,
        `component.${component.name}.${attr}`,
        attributeLabel(attr),
        component[attr],
      ),
    );
    const remove = el("button", { class: "remove-component" }, ["remove"]);
    remove.addEventListener("click", () => {
      store.editSlot(`component.${component.name}`, "");
      void store.replaceSlot(`component.${component.name}`, "");
    });
    sections.push(
      el("section", { class: "component-spec", "data-component": component.name }, [
        el("h3", {}, [component.name, remove]),
        ...rows,
      ]),
    );
  }
  const nameInput = el("input", {
    class: "new-component-name",
    type: "text",
    placeholder: "new component name",
  }) as HTMLInputElement;
  const addButton = el("button", { class: "add-component" }, ["Add component"]);
  addButton.addEventListener("click", () => {
    const name = nameInput.value.trim();
    if (!name) return;
    void store.replaceSlot(`component.${name}`, name);
    nameInput.value = "";
  });
  sections.push(el("div", { class: "add-component-row" }, [nameInput, addButton]));
  return el(
    "details",
    { class: "level-panel", "data-level": "component", ...(state.components.length ? { open: "" } : {}) },
    [
      el("summary", {}, [`${LEVEL_LABELS.component} (${state.components.length})`]),
      el("div", { class: "panel-body" }, sections),
    ],
  );
}

export function renderStructureView(store: StudioStore): HTMLElement {
  const view = store.getState();
  const root = el("div", { class: "structure-view" });

  const promptInput = el("textarea", {
    class: "prompt-box",
    placeholder: "Describe the screen you want…",
    autofocus: "",
  }) as HTMLTextAreaElement;
  const parseButton = el("button", { class: "run-parse" }, ["Parse"]) as HTMLButtonElement;
  parseButton.addEventListener("click", () => {
    void store.runPhase("parse", { text: promptInput.value });
  });
  root.append(el("div", { class: "prompt-row" }, [promptInput, parseButton]));

  if (graphIsStale(view)) {
    const banner = el("div", { class: "stale-graph-banner" }, [
      "The relation graph is older than the current semantics. ",
    ]);
    const reanalyze = el("button", { class: "run-relations" }, ["Re-analyze"]);
    reanalyze.addEventListener("click", () => void store.runPhase("relations"));
    banner.append(reanalyze);
    root.append(banner);
  }

  if (!view.state) {
    root.append(el("p", { class: "empty-session" }, ["No session loaded."]));
    return root;
  }
  for (const level of FIXED_LEVELS) {
    root.append(levelPanel(store, level, view.state));
  }
  root.append(componentPanel(store, view.state));
  return root;
}
