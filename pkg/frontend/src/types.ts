// Wire types mirroring the engine's canonical JSON documents.

export type Provenance = "user" | "parsed" | "augmented" | "suggestion_accepted";

export interface AttributeValue {
  text: string;
  provenance: Provenance;
  version: number;
}

export interface ComponentSpec {
  name: string;
  type?: AttributeValue;
  interactivity?: AttributeValue;
  state?: AttributeValue;
  content?: AttributeValue;
  properties?: AttributeValue;
}

export interface SemanticState {
  product: Record<string, AttributeValue>;
  design_system: Record<string, AttributeValue>;
  feature: Record<string, AttributeValue>;
  components: ComponentSpec[];
}

export type EdgeKind = "match" | "conflict" | "needs_value";

export interface RelationEdge {
  from: string;
  to: string;
  kind: EdgeKind;
  explanation: string;
  suggestion?: string;
}

export interface RelationGraph {
  subject_version: number;
  edges: RelationEdge[];
}

export interface SessionSnapshot {
  id: string;
  name: string;
  version: number;
  state: SemanticState;
}

export interface MutationResponse {
  version: number;
  changelog: string[];
  newly_inferred?: string[];
  shadow_proposals?: { path: string; text: string }[];
  evidence?: Record<string, string>;
  skipped_components?: string[];
  residue?: string;
  artifact_id?: string;
  warnings?: string[];
  edges?: number;
}

export interface HistoryRow {
  version: number;
  label: string;
  changelog: string[];
  created_at: string;
}

export type JobStatus = "pending" | "done" | "failed";

export interface JobState {
  status: JobStatus;
  result?: MutationResponse;
  error?: { code: string; message: string };
}

export type Phase = "parse" | "generate" | "analyze" | "relations";

// Fixed attribute inventory; panel layout knowledge, the engine owns semantics.
export const FIXED_LEVELS = ["product", "design_system", "feature"] as const;
export type FixedLevel = (typeof FIXED_LEVELS)[number];

export const LEVEL_ATTRS: Record<FixedLevel, readonly string[]> = {
  product: ["description", "target_user", "goal"],
  design_system: [
    "design_style",
    "color",
    "typography",
    "visual_properties",
    "visual_mood",
    "tone_of_voice",
  ],
  feature: ["function", "content", "information_architecture"],
};

export const COMPONENT_ATTRS = [
  "type",
  "interactivity",
  "state",
  "content",
  "properties",
] as const;

export const LEVEL_LABELS: Record<string, string> = {
  product: "Product",
  design_system: "Design System",
  feature: "Feature",
  component: "Component",
};

export function attributeLabel(attribute: string): string {
  return attribute
    .split("_")
    .map((word) => word.charAt(0).toUpperCase() + word.slice(1))
    .join(" ");
}

export function slotValue(state: SemanticState, path: string): AttributeValue | null {
  if (path.startsWith("component.")) {
    const rest = path.slice("component.".length);
    const lastDot = rest.lastIndexOf(".");
    if (lastDot < 0) return null;
    const name = rest.slice(0, lastDot);
    const attr = rest.slice(lastDot + 1) as (typeof COMPONENT_ATTRS)[number];
    const component = state.components.find((c) => c.name === name);
    return component ? component[attr] ?? null : null;
  }
  const dot = path.indexOf(".");
  if (dot < 0) return null;
  const level = path.slice(0, dot) as FixedLevel;
  const attr = path.slice(dot + 1);
  const slots = state[level];
  return slots ? slots[attr] ?? null : null;
}
