// Artifact preview in an isolated sandbox frame: scripts may run so the
// component is interactive, but the frame never gets same-origin access to
// the studio, so generated code cannot reach session data.

import { el } from "../dom.js";
import type { StudioStore } from "../state.js";

export function renderPreview(store: StudioStore): HTMLElement {
  const view = store.getState();
  const root = el("div", { class: "preview-pane" });
  if (!view.artifactCode) {
    root.append(el("p", { class: "empty-preview" }, ["No generated UI yet."]));
    return root;
  }
  const frame = el("iframe", {
    class: "preview-frame",
    sandbox: "allow-scripts",
    title: "generated component preview",
  }) as HTMLIFrameElement;
  frame.srcdoc = view.artifactCode;
  root.append(frame);
  return root;
}

/** Best-effort capture of the preview for analysis. Without a rendering
 * pipeline that can rasterize a sandboxed frame this returns null and the
 * analyze phase proceeds code-only. */
export async function capturePreviewScreenshot(root: HTMLElement): Promise<string | null> {
  const frame = root.querySelector("iframe.preview-frame") as HTMLIFrameElement | null;
  if (!frame) return null;
  try {
    const canvas = document.createElement("canvas");
    const context = canvas.getContext("2d");
    if (!context || typeof (context as CanvasRenderingContext2D & { drawImage: unknown }).drawImage !== "function") {
      return null;
    }
    // a sandboxed cross-origin frame cannot be drawn; toDataURL will throw or
    // produce nothing useful, in which case we fall back to code-only
    const data = canvas.toDataURL("image/png");
    const base64 = data.split(",")[1];
    return base64 && base64.length > 0 ? base64 : null;
  } catch {
    return null;
  }
}
