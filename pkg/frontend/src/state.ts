// View-state store: the single funnel every UI transition goes through.
// The store never computes semantics — it only holds documents the API
// returned and bookkeeping around them (dirty buffer, pending jobs, log).

import { ApiClient, ApiError } from "./api.js";
import type {
  Phase,
  RelationEdge,
  RelationGraph,
  SemanticState,
  SessionSnapshot,
} from "./types.js";
import { slotValue } from "./types.js";

export interface LogEntry {
  version: number;
  label: string;
  lines: string[];
}

export type ActiveView = "structure" | "relations";

export interface ViewState {
  sessionId: string | null;
  sessionName: string;
  version: number;
  state: SemanticState | null;
  dirty: Record<string, string>;
  artifactCode: string | null;
  graph: RelationGraph | null;
  selectedNode: string | null;
  activeView: ActiveView;
  pendingJobs: Phase[];
  changeLog: LogEntry[];
  highlights: string[]; // newly inferred paths from the last analyze
  error: { code: string; message: string } | null;
  notice: string | null;
}

export function initialViewState(): ViewState {
  return {
    sessionId: null,
    sessionName: "",
    version: 0,
    state: null,
    dirty: {},
    artifactCode: null,
    graph: null,
    selectedNode: null,
    activeView: "structure",
    pendingJobs: [],
    changeLog: [],
    highlights: [],
    error: null,
    notice: null,
  };
}

export function graphIsStale(view: ViewState): boolean {
  return view.graph !== null && view.version > view.graph.subject_version;
}

export function stateHasContent(state: SemanticState | null): boolean {
  if (!state) return false;
  const fixed = [state.product, state.design_system, state.feature];
  if (fixed.some((slots) => Object.keys(slots).length > 0)) return true;
  return state.components.some((c) =>
    Boolean(c.type || c.interactivity || c.state || c.content || c.properties),
  );
}

export function phaseEnabled(view: ViewState, phase: Phase): { ok: boolean; reason?: string } {
  if (!view.sessionId) return { ok: false, reason: "no session loaded" };
  if (view.pendingJobs.length > 0) return { ok: false, reason: "a phase is already running" };
  if (phase === "generate" && !stateHasContent(view.state)) {
    return { ok: false, reason: "specify some semantics before generating" };
  }
  if (phase === "analyze" && !view.artifactCode) {
    return { ok: false, reason: "generate a UI before analyzing it" };
  }
  return { ok: true };
}

/** Edits touching a node with this many outgoing influence edges ask for
 * confirmation before committing (locality by default). */
export const HIGH_FANOUT_THRESHOLD = 3;

export function fanout(view: ViewState, path: string): number {
  if (!view.graph) return 0;
  return view.graph.edges.filter((edge) => edge.from === path).length;
}

type Listener = (view: ViewState) => void;

export interface CommitOutcome {
  committed: boolean;
  needsConfirmation?: boolean;
  fanout?: number;
}

export class StudioStore {
  private view: ViewState = initialViewState();
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ApiClient,
    private readonly pollOptions: { intervalMs?: number; sleep?: (ms: number) => Promise<void> } = {},
  ) {}

  getState(): ViewState {
    return this.view;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<ViewState>): void {
    this.view = { ...this.view, ...patch };
    for (const listener of this.listeners) listener(this.view);
  }

  private fail(error: unknown): void {
    if (error instanceof ApiError) {
      this.update({ error: { code: error.code, message: error.message } });
    } else {
      this.update({ error: { code: "CLIENT", message: String(error) } });
    }
  }

  clearError(): void {
    this.update({ error: null, notice: null });
  }

  async openSession(name: string): Promise<void> {
    const { id } = await this.api.createSession(name);
    const snapshot = await this.api.getSession(id);
    this.update({
      ...initialViewState(),
      sessionId: id,
      sessionName: snapshot.name,
      version: snapshot.version,
      state: snapshot.state,
    });
  }

  async loadSession(id: string): Promise<void> {
    const snapshot = await this.api.getSession(id);
    const [artifactCode, graph] = await Promise.all([
      this.api.currentArtifact(id),
      this.api.currentGraph(id),
    ]);
    this.update({
      ...initialViewState(),
      sessionId: id,
      sessionName: snapshot.name,
      version: snapshot.version,
      state: snapshot.state,
      artifactCode,
      graph,
    });
  }

  private async refreshSnapshot(): Promise<SessionSnapshot> {
    const snapshot = await this.api.getSession(this.requireSession());
    this.update({ version: snapshot.version, state: snapshot.state });
    return snapshot;
  }

  private requireSession(): string {
    if (!this.view.sessionId) throw new ApiError(0, "CLIENT", "no session loaded");
    return this.view.sessionId;
  }

  private appendLog(label: string, version: number, lines: string[]): void {
    this.update({ changeLog: [...this.view.changeLog, { version, label, lines }] });
  }

  // --- slot editing ------------------------------------------------------------

  editSlot(path: string, text: string): void {
    this.update({ dirty: { ...this.view.dirty, [path]: text } });
  }

  discardEdit(path: string): void {
    const dirty = { ...this.view.dirty };
    delete dirty[path];
    this.update({ dirty });
  }

  /** Commit one buffered edit. High-fan-out nodes (per the current graph)
   * need an explicit confirm=true. The dirty buffer empties only on success. */
  async commitSlot(path: string, confirm = false): Promise<CommitOutcome> {
    const text = this.view.dirty[path];
    if (text === undefined) return { committed: false };
    const influence = fanout(this.view, path);
    if (!confirm && influence >= HIGH_FANOUT_THRESHOLD) {
      return { committed: false, needsConfirmation: true, fanout: influence };
    }
    try {
      const result = await this.api.patchSemantics(
        this.requireSession(),
        path,
        text === "" ? null : text,
      );
      const dirty = { ...this.view.dirty };
      delete dirty[path];
      this.update({ dirty, version: result.version });
      this.appendLog(`edit ${path}`, result.version, result.changelog);
      await this.refreshSnapshot();
      return { committed: true };
    } catch (error) {
      this.fail(error);
      return { committed: false };
    }
  }

  async replaceSlot(path: string, text: string): Promise<void> {
    this.editSlot(path, text);
    await this.commitSlot(path, true);
  }

  selectNode(path: string | null): void {
    if (path !== null && this.view.state && slotValue(this.view.state, path) === null) {
      // selecting an empty-but-valid slot is fine; only reject paths that
      // cannot exist in the current state shape
      const known =
        !path.startsWith("component.") ||
        this.view.state.components.some((c) => path.startsWith(`component.${c.name}.`));
      if (!known) return;
    }
    this.update({ selectedNode: path });
  }

  setActiveView(view: ActiveView): void {
    this.update({ activeView: view });
  }

  // --- phases --------------------------------------------------------------------

  async runPhase(phase: Phase, input?: { text?: string; screenshotBase64?: string }): Promise<void> {
    const gate = phaseEnabled(this.view, phase);
    if (!gate.ok) {
      this.update({ error: { code: "PHASE_DISABLED", message: gate.reason ?? "unavailable" } });
      return;
    }
    const id = this.requireSession();
    try {
      let jobId: string;
      if (phase === "parse") {
        jobId = (await this.api.startParse(id, input?.text ?? "")).job_id;
      } else if (phase === "generate") {
        jobId = (await this.api.startGenerate(id)).job_id;
      } else if (phase === "analyze") {
        jobId = (await this.api.startAnalyze(id, input?.screenshotBase64)).job_id;
      } else {
        jobId = (await this.api.startRelations(id)).job_id;
      }
      this.update({ pendingJobs: [...this.view.pendingJobs, phase] });
      const job = await this.api.waitForJob(jobId, this.pollOptions);
      this.update({ pendingJobs: this.view.pendingJobs.filter((p) => p !== phase) });
      if (job.status === "failed") {
        this.update({
          error: job.error ?? { code: "JOB_FAILED", message: "phase failed" },
        });
        return;
      }
      const result = job.result;
      if (result) this.appendLog(phase, result.version, result.changelog);
      await this.refreshSnapshot();
      if (phase === "generate") {
        const artifactCode = await this.api.currentArtifact(id);
        this.update({ artifactCode });
      } else if (phase === "analyze") {
        this.update({ highlights: result?.newly_inferred ?? [] });
      } else if (phase === "relations") {
        const graph = await this.api.currentGraph(id);
        this.update({ graph });
      }
    } catch (error) {
      this.update({ pendingJobs: this.view.pendingJobs.filter((p) => p !== phase) });
      this.fail(error);
    }
  }

  async acceptSuggestion(edge: RelationEdge): Promise<void> {
    try {
      const result = await this.api.acceptEdge(this.requireSession(), edge);
      this.appendLog("accept suggestion", result.version, result.changelog);
      await this.refreshSnapshot();
    } catch (error) {
      if (error instanceof ApiError && error.code === "SLOT_OCCUPIED") {
        this.update({
          error: { code: error.code, message: error.message },
          notice: "That slot changed since the last analysis — re-analyze relations.",
        });
        return;
      }
      this.fail(error);
    }
  }

  async rollbackTo(version: number): Promise<void> {
    try {
      const result = await this.api.rollback(this.requireSession(), version);
      this.appendLog(`rollback to v${version}`, result.version, result.changelog);
      await this.refreshSnapshot();
    } catch (error) {
      this.fail(error);
    }
  }
}
