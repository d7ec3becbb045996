import type { GridState, Mode } from "./types.js";

/**
 * Query session state: the current grid, a history stack fed only by
 * executed queries, and an epoch counter that drops stale responses so a
 * fresh submission always wins the grid (single in-flight query).
 */
export class QuerySession {
  k = 10;
  mode: Mode = "clustered";

  private current: GridState | null = null;
  private past: GridState[] = [];
  private epoch = 0;

  /** Start a query; the returned token must accompany the commit. */
  begin(): number {
    return ++this.epoch;
  }

  /** Install a finished query's grid; stale tokens are rejected. */
  commit(token: number, state: GridState): boolean {
    if (token !== this.epoch) {
      return false;
    }
    if (this.current !== null) {
      this.past.push(this.current);
    }
    this.current = state;
    return true;
  }

  /** Pop the history stack, cancelling any in-flight query. */
  back(): GridState | null {
    const previous = this.past.pop();
    if (previous === undefined) {
      return null;
    }
    this.epoch += 1;
    this.current = previous;
    return previous;
  }

  get grid(): GridState | null {
    return this.current;
  }

  get historyDepth(): number {
    return this.past.length;
  }
}
