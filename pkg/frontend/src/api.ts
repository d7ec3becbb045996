import type { Mode, QueryResponse, StatsResponse } from "./types.js";

/** Error carrying the API's {code, message} body and HTTP status. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let code = `http-${res.status}`;
    let message = res.statusText || "request failed";
    try {
      const body = (await res.json()) as { code?: string; message?: string };
      if (body.code) code = body.code;
      if (body.message) message = body.message;
    } catch {
      // non-JSON error body; keep the status-derived fallback
    }
    throw new ApiError(res.status, code, message);
  }
  return (await res.json()) as T;
}

/** Client for the four query-service endpoints. One request per call. */
export class CbirApi {
  constructor(readonly baseUrl: string = "") {}

  async queryByUpload(image: Blob, k: number, mode: Mode): Promise<QueryResponse> {
    const form = new FormData();
    form.append("image", image);
    const res = await fetch(`${this.baseUrl}/api/query?k=${k}&mode=${mode}`, {
      method: "POST",
      body: form,
    });
    return parseJson<QueryResponse>(res);
  }

  async queryById(id: string, k: number, mode: Mode): Promise<QueryResponse> {
    const res = await fetch(
      `${this.baseUrl}/api/query-by-id/${encodeURIComponent(id)}?k=${k}&mode=${mode}`,
    );
    return parseJson<QueryResponse>(res);
  }

  async stats(): Promise<StatsResponse> {
    const res = await fetch(`${this.baseUrl}/api/stats`);
    return parseJson<StatsResponse>(res);
  }

  imageUrl(id: string): string {
    return `${this.baseUrl}/api/image/${encodeURIComponent(id)}`;
  }
}
