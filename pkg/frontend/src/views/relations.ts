// Relation view: node-link rendering of the current graph with one visual
// style per edge kind. Layout is a deterministic circle — same graph, same
// picture.

import { el, svgEl } from "../dom.js";
import type { StudioStore } from "../state.js";
import type { RelationGraph } from "../types.js";

export const EDGE_STYLES: Record<string, { stroke: string; dash: string }> = {
  match: { stroke: "#2e9e44", dash: "" },
  conflict: { stroke: "#e07a1f", dash: "" },
  needs_value: { stroke: "#2f6fe0", dash: "6 4" },
};

const WIDTH = 640;
const HEIGHT = 420;

export function graphNodes(graph: RelationGraph): string[] {
  const nodes: string[] = [];
  for (const edge of graph.edges) {
    for (const path of [edge.from, edge.to]) {
      if (!nodes.includes(path)) nodes.push(path);
    }
  }
  return nodes;
}

function circleLayout(nodes: string[]): Map<string, { x: number; y: number }> {
  const positions = new Map<string, { x: number; y: number }>();
  const cx = WIDTH / 2;
  const cy = HEIGHT / 2;
  const radius = Math.min(WIDTH, HEIGHT) / 2 - 70;
  nodes.forEach((node, i) => {
    const angle = (2 * Math.PI * i) / Math.max(nodes.length, 1) - Math.PI / 2;
    positions.set(node, {
      x: cx + radius * Math.cos(angle),
      y: cy + radius * Math.sin(angle),
    });
  });
  return positions;
}

export function renderRelationView(store: StudioStore): HTMLElement {
  const view = store.getState();
  const root = el("div", { class: "relation-view" });
  const graph = view.graph;

  if (!graph || graph.edges.length === 0) {
    const placeholder = el("div", { class: "empty-graph" }, [
      "No relation graph yet. ",
    ]);
    const cta = el("button", { class: "run-relations" }, ["Analyze relations"]);
    cta.addEventListener("click", () => void store.runPhase("relations"));
    placeholder.append(cta);
    root.append(placeholder);
    return root;
  }

  const nodes = graphNodes(graph);
  const positions = circleLayout(nodes);
  const svg = svgEl("svg", {
    class: "relation-canvas",
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: String(WIDTH),
    height: String(HEIGHT),
  });

  const marker = svgEl("defs", {}, [
    svgEl("marker", {
      id: "arrow",
      viewBox: "0 0 10 10",
      refX: "9",
      refY: "5",
      markerWidth: "7",
      markerHeight: "7",
      orient: "auto-start-reverse",
    }, [svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#5c6370" })]),
  ]);
  svg.append(marker);

  for (const edge of graph.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) continue;
    const style = EDGE_STYLES[edge.kind] ?? EDGE_STYLES.match!;
    const line = svgEl("line", {
      class: `edge edge-${edge.kind}`,
      x1: String(from.x),
      y1: String(from.y),
      x2: String(to.x),
      y2: String(to.y),
      stroke: style.stroke,
      "stroke-width": "2",
      "marker-end": "url(#arrow)",
    });
    if (style.dash) line.setAttribute("stroke-dasharray", style.dash);
    line.append(svgEl("title", {}, [edge.explanation]));
    svg.append(line);
  }

  for (const node of nodes) {
    const pos = positions.get(node)!;
    const group = svgEl("g", { class: "node", "data-path": node });
    const circle = svgEl("circle", {
      cx: String(pos.x),
      cy: String(pos.y),
      r: "9",
      fill: view.selectedNode === node ? "#30343a" : "#e8ebf0",
      stroke: "#5c6370",
    });
    const label = svgEl("text", {
      x: String(pos.x),
      y: String(pos.y - 14),
      "text-anchor": "middle",
      "font-size": "11",
    }, [node]);
    group.append(circle, label);
    group.addEventListener("click", () => store.selectNode(node));
    svg.append(group);
  }

  root.append(svg);
  root.append(
    el("div", { class: "edge-legend" }, [
      el("span", { class: "legend legend-match" }, ["values match well"]),
      el("span", { class: "legend legend-conflict" }, ["values conflict"]),
      el("span", { class: "legend legend-needs_value" }, ["needs value"]),
    ]),
  );
  return root;
}
