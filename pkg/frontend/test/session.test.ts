import { describe, expect, it } from "vitest";

import { QuerySession } from "../src/session.js";
import type { GridState } from "../src/types.js";

function grid(id: string): GridState {
  return {
    ref: { kind: "id", id },
    response: {
      results: [{ id, distance: 0, rank: 1 }],
      candidates_examined: 1,
      mode: "clustered",
    },
  };
}

describe("QuerySession", () => {
  it("starts empty with no history", () => {
    const session = new QuerySession();
    expect(session.grid).toBeNull();
    expect(session.historyDepth).toBe(0);
    expect(session.back()).toBeNull();
  });

  it("history grows only via committed queries", () => {
    const session = new QuerySession();
    session.commit(session.begin(), grid("a"));
    expect(session.historyDepth).toBe(0); // first grid has no predecessor
    session.commit(session.begin(), grid("b"));
    expect(session.historyDepth).toBe(1);
    session.begin(); // an aborted query must not touch history
    expect(session.historyDepth).toBe(1);
  });

  it("three chained requeries give depth 3 and back unwinds them in order", () => {
    const session = new QuerySession();
    for (const id of ["a", "b", "c", "d"]) {
      session.commit(session.begin(), grid(id));
    }
    expect(session.historyDepth).toBe(3);
    expect(session.back()?.ref).toEqual({ kind: "id", id: "c" });
    expect(session.back()?.ref).toEqual({ kind: "id", id: "b" });
    expect(session.back()?.ref).toEqual({ kind: "id", id: "a" });
    expect(session.back()).toBeNull();
  });

  it("drops stale commits: a newer submission wins the grid", () => {
    const session = new QuerySession();
    const slow = session.begin();
    const fast = session.begin();
    expect(session.commit(fast, grid("fresh"))).toBe(true);
    expect(session.commit(slow, grid("stale"))).toBe(false);
    expect(session.grid?.ref).toEqual({ kind: "id", id: "fresh" });
    expect(session.historyDepth).toBe(0);
  });

  it("back cancels an in-flight query", () => {
    const session = new QuerySession();
    session.commit(session.begin(), grid("a"));
    session.commit(session.begin(), grid("b"));
    const inflight = session.begin();
    session.back();
    expect(session.commit(inflight, grid("late"))).toBe(false);
    expect(session.grid?.ref).toEqual({ kind: "id", id: "a" });
  });
});
