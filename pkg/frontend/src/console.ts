import { CbirApi } from "./api.js";
import { renderErrorBanner, renderResultGrid, renderStatsPanel } from "./render.js";
import { QuerySession } from "./session.js";
import type { GridState } from "./types.js";

/**
 * The console's behavior with the DOM stripped away: each user action maps
 * to at most one API request, failures land in the banner and leave the
 * grid untouched, and back restores the previous grid from history.
 */
export class QueryConsole {
  gridHtml = "";
  bannerHtml = "";

  constructor(
    readonly api: CbirApi,
    readonly session: QuerySession = new QuerySession(),
  ) {}

  private install(token: number, state: GridState): void {
    if (this.session.commit(token, state)) {
      this.gridHtml = renderResultGrid(state, (id) => this.api.imageUrl(id));
      this.bannerHtml = "";
    }
  }

  async submitUpload(image: Blob, name: string): Promise<void> {
    const token = this.session.begin();
    try {
      const response = await this.api.queryByUpload(image, this.session.k, this.session.mode);
      this.install(token, { ref: { kind: "upload", name }, response });
    } catch (error) {
      this.bannerHtml = renderErrorBanner(error);
    }
  }

  async requeryFromResult(id: string): Promise<void> {
    const token = this.session.begin();
    try {
      const response = await this.api.queryById(id, this.session.k, this.session.mode);
      this.install(token, { ref: { kind: "id", id }, response });
    } catch (error) {
      this.bannerHtml = renderErrorBanner(error);
    }
  }

  /** Restore the previous grid; false when the history stack is empty. */
  back(): boolean {
    const restored = this.session.back();
    if (restored === null) {
      return false;
    }
    this.gridHtml = renderResultGrid(restored, (id) => this.api.imageUrl(id));
    this.bannerHtml = "";
    return true;
  }

  async showStats(): Promise<string> {
    try {
      return renderStatsPanel(await this.api.stats());
    } catch (error) {
      this.bannerHtml = renderErrorBanner(error);
      return "";
    }
  }

  dismissBanner(): void {
    this.bannerHtml = "";
  }
}
