import { describe, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import { StudioStore } from "../src/state.js";
import type { RelationGraph } from "../src/types.js";
import { renderChangeLog } from "../src/views/changelog.js";
import { renderDetailPanel } from "../src/views/detail.js";
import { renderPreview } from "../src/views/preview.js";
import { EDGE_STYLES, renderRelationView } from "../src/views/relations.js";
import { renderStructureView } from "../src/views/structure.js";
import { MockBackend, type MockPlan } from "./mockBackend.js";

function makeStore(plan: MockPlan = {}): { store: StudioStore; backend: MockBackend } {
  const backend = new MockBackend(plan);
  const api = new ApiClient("", backend.fetch);
  const store = new StudioStore(api, { sleep: async () => {}, intervalMs: 0 });
  return { store, backend };
}

const ALL_KINDS_GRAPH: RelationGraph = {
  subject_version: 1,
  edges: [
    {
      from: "product.target_user",
      to: "design_system.color",
      kind: "match",
      explanation: "high contrast palette suits the audience",
    },
    {
      from: "feature.content",
      to: "design_system.design_style",
      kind: "conflict",
      explanation: "dense content fights the minimalist style",
      suggestion: "progressive disclosure",
    },
    {
      from: "product.target_user",
      to: "design_system.typography",
      kind: "needs_value",
      explanation: "typography is unset",
      suggestion: "larger typography",
    },
  ],
};

describe("structure view", () => {
  test("four collapsible level panels render", async () => {
    const { store } = makeStore();
    await store.openSession("demo");
    const view = renderStructureView(store);
    const panels = view.querySelectorAll("details.level-panel");
    expect(panels).toHaveLength(4);
    const levels = [...panels].map((p) => p.getAttribute("data-level"));
    expect(levels).toEqual(["product", "design_system", "feature", "component"]);
    expect(view.querySelector("textarea.prompt-box")).not.toBeNull();
    expect(view.querySelector("button.run-parse")).not.toBeNull();
  });

  test("highlights exactly the newly inferred paths after analyze", async () => {
    const { store } = makeStore({
      generatedCode: "<main>ui</main>",
      analyzeEntries: {
        "design_system.typography": "bold type",
        "feature.information_architecture": "one column",
        "product.description": "will not be new",
      },
    });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "will not be new" });
    await store.runPhase("generate");
    await store.runPhase("analyze");

    // description was already set by parse, so exactly two paths are new
    expect(store.getState().highlights).toEqual([
      "design_system.typography",
      "feature.information_architecture",
    ]);

    const view = renderStructureView(store);
    const highlighted = [...view.querySelectorAll(".augmented-highlight")].map((node) =>
      node.getAttribute("data-path"),
    );
    expect(highlighted.sort()).toEqual(
      ["design_system.typography", "feature.information_architecture"].sort(),
    );
  });

  test("empty slots show needs-value affordances from the graph", async () => {
    const { store } = makeStore({ relationsGraph: ALL_KINDS_GRAPH });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a shopping app" });
    await store.runPhase("relations");
    const view = renderStructureView(store);
    const row = view.querySelector('[data-path="design_system.typography"]');
    expect(row?.querySelector(".needs-value")?.textContent).toContain("larger typography");
    expect(row?.querySelector("button.accept-suggestion")).not.toBeNull();
    // a filled slot gets no needs-value affordance
    const filled = view.querySelector('[data-path="product.description"]');
    expect(filled?.querySelector(".needs-value")).toBeNull();
  });

  test("stale graph shows the re-analyze banner", async () => {
    const { store } = makeStore({ relationsGraph: ALL_KINDS_GRAPH });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a shopping app" });
    await store.runPhase("relations");
    expect(renderStructureView(store).querySelector(".stale-graph-banner")).toBeNull();
    store.editSlot("product.goal", "sell more");
    await store.commitSlot("product.goal");
    expect(renderStructureView(store).querySelector(".stale-graph-banner")).not.toBeNull();
  });
});

describe("relation view", () => {
  test("renders three visually distinct edge styles", async () => {
    const { store } = makeStore({ relationsGraph: ALL_KINDS_GRAPH });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a shopping app" });
    await store.runPhase("relations");

    const view = renderRelationView(store);
    const lines = [...view.querySelectorAll("line.edge")];
    expect(lines).toHaveLength(3);
    const styles = new Set(
      lines.map(
        (line) => `${line.getAttribute("stroke")}|${line.getAttribute("stroke-dasharray") ?? ""}`,
      ),
    );
    expect(styles.size).toBe(3);
    const needsValue = view.querySelector("line.edge-needs_value");
    expect(needsValue?.getAttribute("stroke-dasharray")).toBe(EDGE_STYLES.needs_value!.dash);
    expect(view.querySelector("line.edge-match")?.getAttribute("stroke")).toBe(
      EDGE_STYLES.match!.stroke,
    );
    expect(view.querySelector("line.edge-conflict")?.getAttribute("stroke")).toBe(
      EDGE_STYLES.conflict!.stroke,
    );
  });

  test("single-kind graph renders a single style", async () => {
    const graph: RelationGraph = {
      subject_version: 1,
      edges: [
        { from: "product.goal", to: "design_system.color", kind: "match", explanation: "a" },
        { from: "product.target_user", to: "feature.content", kind: "match", explanation: "b" },
      ],
    };
    const { store } = makeStore({ relationsGraph: graph });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "x" });
    await store.runPhase("relations");
    const view = renderRelationView(store);
    const strokes = new Set(
      [...view.querySelectorAll("line.edge")].map((l) => l.getAttribute("stroke")),
    );
    expect(strokes.size).toBe(1);
  });

  test("empty graph shows the analyze call-to-action", async () => {
    const { store } = makeStore();
    await store.openSession("demo");
    const view = renderRelationView(store);
    expect(view.querySelector(".empty-graph")).not.toBeNull();
    expect(view.querySelector("button.run-relations")).not.toBeNull();
  });

  test("clicking a node selects it for the detail panel", async () => {
    const { store } = makeStore({ relationsGraph: ALL_KINDS_GRAPH });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "x" });
    await store.runPhase("relations");
    const view = renderRelationView(store);
    const node = view.querySelector('g.node[data-path="design_system.color"]') as SVGElement;
    node.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    expect(store.getState().selectedNode).toBe("design_system.color");
  });
});

describe("detail panel", () => {
  test("shows value, provenance, and both edge lists", async () => {
    const { store } = makeStore({ relationsGraph: ALL_KINDS_GRAPH });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a shopping app" });
    store.editSlot("design_system.color", "high contrast palette");
    await store.commitSlot("design_system.color");
    await store.runPhase("relations");
    store.selectNode("design_system.color");

    const panel = renderDetailPanel(store, "design_system.color");
    expect(panel.querySelector(".value-text")?.textContent).toBe("high contrast palette");
    expect(panel.querySelector(".provenance")?.textContent).toBe("user");
    const affectedBy = panel.querySelectorAll(".affected-by-list .edge-row");
    expect(affectedBy).toHaveLength(1);
    expect(affectedBy[0]?.textContent).toContain("product.target_user");
    expect(affectedBy[0]?.textContent).toContain("high contrast palette suits the audience");
    expect(panel.querySelector(".affects-list .empty-list")).not.toBeNull();
  });

  test("isolated node renders two empty lists", async () => {
    const { store } = makeStore();
    await store.openSession("demo");
    await store.runPhase("parse", { text: "x" });
    const panel = renderDetailPanel(store, "product.goal");
    expect(panel.querySelectorAll(".empty-list")).toHaveLength(2);
  });
});

describe("preview pane", () => {
  test("artifact renders in a sandboxed frame without same-origin access", async () => {
    const { store } = makeStore({ generatedCode: "<main>hello</main>" });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "x" });
    await store.runPhase("generate");
    const pane = renderPreview(store);
    const frame = pane.querySelector("iframe.preview-frame") as HTMLIFrameElement;
    expect(frame).not.toBeNull();
    expect(frame.getAttribute("sandbox")).toBe("allow-scripts");
    expect(frame.getAttribute("sandbox")).not.toContain("allow-same-origin");
    expect(frame.srcdoc).toContain("<main>hello</main>");
  });
});

describe("change log", () => {
  test("renders one block per entry with diff chips", () => {
    const log = renderChangeLog([
      { version: 1, label: "edit", lines: ['Design System · Color: → "Dark Mode"'] },
      { version: 2, label: "generate", lines: [] },
    ]);
    const blocks = log.querySelectorAll(".log-entry");
    expect(blocks).toHaveLength(2);
    expect(blocks[0]?.querySelectorAll(".diff-chip")).toHaveLength(1);
  });
});
