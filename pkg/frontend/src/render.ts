import { ApiError } from "./api.js";
import type { GridState, StatsResponse } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function describeQuery(state: GridState): string {
  return state.ref.kind === "upload"
    ? `upload: ${escapeHtml(state.ref.name)}`
    : `image: ${escapeHtml(state.ref.id)}`;
}

/**
 * Result grid straight from the API response: the displayed order is the
 * response order verbatim, no client-side sorting or filtering.
 */
export function renderResultGrid(
  state: GridState,
  imageUrl: (id: string) => string,
): string {
  const badges =
    `<span class="badge">${escapeHtml(state.response.mode)}</span>` +
    `<span class="badge">candidates: ${state.response.candidates_examined}</span>` +
    `<span class="badge">query ${describeQuery(state)}</span>`;
  const cells = state.response.results
    .map(
      (r) =>
        `<figure class="cell" data-id="${escapeHtml(r.id)}" title="requery with this image">` +
        `<img src="${escapeHtml(imageUrl(r.id))}" alt="${escapeHtml(r.id)}" loading="lazy">` +
        `<figcaption>#${r.rank} &middot; ${r.distance.toFixed(6)}<br>${escapeHtml(r.id)}</figcaption>` +
        `</figure>`,
    )
    .join("");
  return `<div class="badges">${badges}</div><div class="grid">${cells}</div>`;
}

export function renderStatsPanel(stats: StatsResponse | null): string {
  if (stats === null || stats.entries === 0) {
    return `<div class="stats empty">no index loaded</div>`;
  }
  const table = (title: string, counts: Record<string, number>) =>
    `<table><caption>${escapeHtml(title)}</caption>` +
    Object.entries(counts)
      .map(([key, count]) => `<tr><td>${escapeHtml(key)}</td><td>${count}</td></tr>`)
      .join("") +
    `</table>`;
  const config = Object.entries(stats.config_echo)
    .map(([key, value]) => `<tr><td>${escapeHtml(key)}</td><td>${escapeHtml(String(value))}</td></tr>`)
    .join("");
  return (
    `<div class="stats">` +
    `<p>${stats.entries} indexed images</p>` +
    table("color groups", stats.groups) +
    table("texture classes", stats.classes) +
    `<table><caption>config</caption>${config}</table>` +
    `</div>`
  );
}

export function renderErrorBanner(error: unknown): string {
  if (error instanceof ApiError) {
    return (
      `<div class="banner error" role="alert">` +
      `<strong>${escapeHtml(error.code)}</strong> ${escapeHtml(error.message)}` +
      `<button class="dismiss" data-action="dismiss">&times;</button></div>`
    );
  }
  const message = error instanceof Error ? error.message : String(error);
  return (
    `<div class="banner error" role="alert">` +
    `<strong>request-failed</strong> ${escapeHtml(message)}` +
    `<button class="dismiss" data-action="dismiss">&times;</button></div>`
  );
}
