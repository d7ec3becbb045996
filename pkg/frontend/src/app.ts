import { CbirApi } from "./api.js";
import { QueryConsole } from "./console.js";
import type { Mode } from "./types.js";

const PAGE = `
<header>
  <h1>cbir query console</h1>
  <div class="controls">
    <label>query image <input type="file" id="file" accept="image/png,image/jpeg"></label>
    <label>k <input type="number" id="k" value="10" min="1" max="100"></label>
    <label>mode
      <select id="mode">
        <option value="clustered" selected>clustered</option>
        <option value="exhaustive">exhaustive</option>
      </select>
    </label>
    <button id="back" disabled>&larr; back</button>
    <button id="stats-toggle">index stats</button>
  </div>
</header>
<div id="banner"></div>
<div id="stats" class="hidden"></div>
<main id="grid"><p class="hint">upload an image to search the index</p></main>
`;

export function mount(root: HTMLElement, api: CbirApi): QueryConsole {
  const ui = new QueryConsole(api);
  root.innerHTML = PAGE;

  const grid = root.querySelector<HTMLElement>("#grid")!;
  const banner = root.querySelector<HTMLElement>("#banner")!;
  const statsPanel = root.querySelector<HTMLElement>("#stats")!;
  const backButton = root.querySelector<HTMLButtonElement>("#back")!;
  const fileInput = root.querySelector<HTMLInputElement>("#file")!;
  const kInput = root.querySelector<HTMLInputElement>("#k")!;
  const modeSelect = root.querySelector<HTMLSelectElement>("#mode")!;

  const paint = () => {
    if (ui.gridHtml) {
      grid.innerHTML = ui.gridHtml;
    }
    banner.innerHTML = ui.bannerHtml;
    backButton.disabled = ui.session.historyDepth === 0;
  };

  const syncControls = () => {
    ui.session.k = Math.max(1, Number(kInput.value) || 10);
    ui.session.mode = modeSelect.value as Mode;
  };

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    syncControls();
    void ui.submitUpload(file, file.name).then(paint);
  });

  grid.addEventListener("click", (event) => {
    const cell = (event.target as HTMLElement).closest<HTMLElement>("[data-id]");
    if (!cell?.dataset.id) return;
    syncControls();
    void ui.requeryFromResult(cell.dataset.id).then(paint);
  });

  banner.addEventListener("click", (event) => {
    if ((event.target as HTMLElement).dataset.action === "dismiss") {
      ui.dismissBanner();
      paint();
    }
  });

  backButton.addEventListener("click", () => {
    ui.back();
    paint();
  });

  root.querySelector("#stats-toggle")!.addEventListener("click", () => {
    if (!statsPanel.classList.toggle("hidden")) {
      void ui.showStats().then((html) => {
        statsPanel.innerHTML = html;
        paint();
      });
    }
  });

  return ui;
}

declare global {
  interface Window {
    CBIR_API_BASE?: string;
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) {
    mount(root, new CbirApi(window.CBIR_API_BASE ?? ""));
  }
}
