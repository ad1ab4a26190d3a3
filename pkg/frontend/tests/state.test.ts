import { describe, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import { StudioStore, graphIsStale, phaseEnabled } from "../src/state.js";
import type { RelationGraph } from "../src/types.js";
import { MockBackend, type MockPlan } from "./mockBackend.js";

function makeStore(plan: MockPlan = {}): { store: StudioStore; backend: MockBackend } {
  const backend = new MockBackend(plan);
  const api = new ApiClient("", backend.fetch);
  const store = new StudioStore(api, { sleep: async () => {}, intervalMs: 0 });
  return { store, backend };
}

describe("StudioStore", () => {
  test("dirty buffer empties on successful PATCH", async () => {
    const { store } = makeStore();
    await store.openSession("demo");
    store.editSlot("design_system.color", "Dark Mode");
    expect(store.getState().dirty).toEqual({ "design_system.color": "Dark Mode" });
    const outcome = await store.commitSlot("design_system.color");
    expect(outcome.committed).toBe(true);
    expect(store.getState().dirty).toEqual({});
    expect(store.getState().state?.design_system.color?.text).toBe("Dark Mode");
  });

  test("dirty buffer survives a failed PATCH", async () => {
    const { store, backend } = makeStore();
    await store.openSession("demo");
    store.editSlot("design_system.color", "Dark Mode");
    backend.intercept = (method) =>
      method === "PATCH"
        ? new Response(JSON.stringify({ error: { code: "IO_FAILURE", message: "disk" } }), {
            status: 500,
            headers: { "content-type": "application/json" },
          })
        : null;
    const outcome = await store.commitSlot("design_system.color");
    expect(outcome.committed).toBe(false);
    expect(store.getState().dirty).toEqual({ "design_system.color": "Dark Mode" });
    expect(store.getState().error?.code).toBe("IO_FAILURE");
  });

  test("state shown is byte-traceable to the API response", async () => {
    const { store, backend } = makeStore();
    await store.openSession("demo");
    store.editSlot("product.goal", "calm focus");
    await store.commitSlot("product.goal");
    const session = backend.sessions.get(store.getState().sessionId!)!;
    // the store holds exactly the backend's document, no local re-derivation
    expect(store.getState().state).toEqual(session.state);
    expect(store.getState().version).toBe(session.version);
  });

  test("parse phase appends a changelog entry and updates state", async () => {
    const { store } = makeStore();
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a recipe browser" });
    const view = store.getState();
    expect(view.state?.product.description?.text).toBe("a recipe browser");
    expect(view.changeLog).toHaveLength(1);
    expect(view.changeLog[0]?.label).toBe("parse");
    expect(view.pendingJobs).toEqual([]);
  });

  test("generate is disabled on an empty state", async () => {
    const { store, backend } = makeStore();
    await store.openSession("demo");
    expect(phaseEnabled(store.getState(), "generate").ok).toBe(false);
    await store.runPhase("generate");
    expect(store.getState().error?.code).toBe("PHASE_DISABLED");
    expect(backend.requests.some((r) => r.url.endsWith("/generate"))).toBe(false);
  });

  test("analyze is disabled before an artifact exists", async () => {
    const { store } = makeStore();
    await store.openSession("demo");
    const gate = phaseEnabled(store.getState(), "analyze");
    expect(gate.ok).toBe(false);
    expect(gate.reason).toMatch(/generate a UI/i);
  });

  test("generate then analyze happy path stores artifact and highlights", async () => {
    const { store } = makeStore({
      generatedCode: "<section>generated</section>",
      analyzeEntries: { "design_system.typography": "bold type" },
    });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a reading list" });
    await store.runPhase("generate");
    expect(store.getState().artifactCode).toBe("<section>generated</section>");
    await store.runPhase("analyze");
    expect(store.getState().highlights).toEqual(["design_system.typography"]);
    expect(store.getState().state?.design_system.typography?.provenance).toBe("augmented");
  });

  test("relations phase stores the graph; staleness tracks versions", async () => {
    const graph: RelationGraph = {
      subject_version: 0,
      edges: [
        {
          from: "product.target_user",
          to: "design_system.color",
          kind: "match",
          explanation: "palette fits audience",
        },
      ],
    };
    const { store } = makeStore({ relationsGraph: graph });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a news reader" });
    await store.runPhase("relations");
    const view = store.getState();
    expect(view.graph?.edges).toHaveLength(1);
    expect(graphIsStale(view)).toBe(false);
    store.editSlot("product.goal", "stay informed");
    await store.commitSlot("product.goal");
    expect(graphIsStale(store.getState())).toBe(true);
  });

  test("high-fanout edits ask for confirmation first", async () => {
    const graph: RelationGraph = {
      subject_version: 1,
      edges: ["design_system.color", "design_system.typography", "feature.content"].map((to) => ({
        from: "product.target_user",
        to,
        kind: "match" as const,
        explanation: "influences",
      })),
    };
    const { store, backend } = makeStore({ relationsGraph: graph });
    await store.openSession("demo");
    await store.runPhase("parse", { text: "a dashboard" });
    await store.runPhase("relations");
    store.editSlot("product.target_user", "retired hobbyists");
    const first = await store.commitSlot("product.target_user");
    expect(first).toMatchObject({ committed: false, needsConfirmation: true, fanout: 3 });
    const patches = backend.requests.filter(
      (r) => r.method === "PATCH" && (r.body as { path: string }).path === "product.target_user",
    );
    expect(patches).toHaveLength(0);
    const second = await store.commitSlot("product.target_user", true);
    expect(second.committed).toBe(true);
  });

  test("job failure surfaces the provider error code", async () => {
    const { store, backend } = makeStore();
    await store.openSession("demo");
    await store.runPhase("parse", { text: "x" });
    backend.jobs.set("doomed", {
      status: "failed",
      error: { code: "FIXTURE_MISSING", message: "no recorded fixture" },
    });
    backend.intercept = (method, path) =>
      method === "POST" && path.endsWith("/generate")
        ? new Response(JSON.stringify({ job_id: "doomed" }), {
            status: 200,
            headers: { "content-type": "application/json" },
          })
        : null;
    await store.runPhase("generate");
    expect(store.getState().error?.code).toBe("FIXTURE_MISSING");
    expect(store.getState().pendingJobs).toEqual([]);
  });
});
