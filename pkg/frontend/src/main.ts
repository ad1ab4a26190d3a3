// Studio bootstrap: one store, one render loop.

import { ApiClient } from "./api.js";
import { StudioStore } from "./state.js";
import { el } from "./dom.js";
import { renderChangeLog } from "./views/changelog.js";
import { renderDetailPanel } from "./views/detail.js";
import { capturePreviewScreenshot, renderPreview } from "./views/preview.js";
import { renderRelationView } from "./views/relations.js";
import { renderStructureView } from "./views/structure.js";

export function mountStudio(root: HTMLElement, baseUrl = ""): StudioStore {
  const store = new StudioStore(new ApiClient(baseUrl));

  const render = () => {
    const view = store.getState();
    root.replaceChildren();

    const toolbar = el("header", { class: "toolbar" }, [
      el("span", { class: "session-name" }, [view.sessionName || "no session"]),
    ]);
    for (const phase of ["generate", "analyze", "relations"] as const) {
      const button = el("button", { class: `run-${phase}` }, [
        phase.charAt(0).toUpperCase() + phase.slice(1),
      ]) as HTMLButtonElement;
      button.addEventListener("click", async () => {
        if (phase === "analyze") {
          const screenshot = await capturePreviewScreenshot(root);
          void store.runPhase("analyze", { screenshotBase64: screenshot ?? undefined });
        } else {
          void store.runPhase(phase);
        }
      });
      toolbar.append(button);
    }
    const viewToggle = el("button", { class: "toggle-view" }, [
      view.activeView === "structure" ? "Relations view" : "Structure view",
    ]);
    viewToggle.addEventListener("click", () =>
      store.setActiveView(view.activeView === "structure" ? "relations" : "structure"),
    );
    toolbar.append(viewToggle);
    if (view.pendingJobs.length) {
      toolbar.append(el("span", { class: "job-spinner" }, [`running ${view.pendingJobs.join(", ")}…`]));
    }
    root.append(toolbar);

    if (view.error) {
      const alert = el("div", { class: "error-banner" }, [
        `${view.error.code}: ${view.error.message} `,
      ]);
      const dismiss = el("button", { class: "dismiss-error" }, ["dismiss"]);
      dismiss.addEventListener("click", () => store.clearError());
      alert.append(dismiss);
      root.append(alert);
    }

    const main = el("main", { class: "studio-main" });
    const left = el("section", { class: "left-pane" }, [
      view.activeView === "structure" ? renderStructureView(store) : renderRelationView(store),
    ]);
    const right = el("section", { class: "right-pane" }, [
      renderPreview(store),
      renderChangeLog(view.changeLog),
    ]);
    main.append(left, right);
    if (view.selectedNode) {
      main.append(renderDetailPanel(store, view.selectedNode));
    }
    root.append(main);
  };

  store.subscribe(render);
  render();
  return store;
}

declare global {
  interface Window {
    suifStudio?: StudioStore;
  }
}

if (typeof document !== "undefined" && document.getElementById("studio-root")) {
  const root = document.getElementById("studio-root")!;
  const base = root.dataset.apiBase ?? "";
  const store = mountStudio(root, base);
  window.suifStudio = store;
  const name = new URLSearchParams(window.location.search).get("session") ?? "studio";
  void store.openSession(name);
}
