export type Mode = "exhaustive" | "clustered";

export interface ResultEntry {
  id: string;
  distance: number;
  rank: number;
}

export interface QueryResponse {
  results: ResultEntry[];
  candidates_examined: number;
  mode: string;
}

export interface StatsResponse {
  entries: number;
  groups: Record<string, number>;
  classes: Record<string, number>;
  config_echo: Record<string, unknown>;
}

/** What produced the current grid: an uploaded file or an indexed image id. */
export type QueryRef =
  | { kind: "upload"; name: string }
  | { kind: "id"; id: string };

export interface GridState {
  ref: QueryRef;
  response: QueryResponse;
}
