/** Thin fetch wrappers over the four review endpoints.
 *
 * Every function takes an injectable fetch so tests can run without a
 * server.  Server errors surface as ApiError with the server's message.
 */

import type { Ack, LabelPayload, Metrics, ReviewItem } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type NextResult = { kind: "item"; item: ReviewItem } | { kind: "done" };

async function raise(res: Response): Promise<never> {
  let message = `HTTP ${res.status}`;
  try {
    const body: unknown = await res.json();
    if (
      typeof body === "object" &&
      body !== null &&
      typeof (body as { error?: unknown }).error === "string"
    ) {
      message = (body as { error: string }).error;
    }
  } catch {
    // non-JSON error body; keep the status message
  }
  throw new ApiError(res.status, message);
}

const defaultFetch: FetchLike = (input, init) => fetch(input, init);

export async function fetchNext(
  reviewer: string,
  fetchFn: FetchLike = defaultFetch,
): Promise<NextResult> {
  const res = await fetchFn(
    `/api/review/next?reviewer=${encodeURIComponent(reviewer)}`,
  );
  if (res.status === 204) {
    return { kind: "done" };
  }
  if (!res.ok) {
    return raise(res);
  }
  return { kind: "item", item: (await res.json()) as ReviewItem };
}

export async function submitLabel(
  payload: LabelPayload,
  fetchFn: FetchLike = defaultFetch,
): Promise<Ack> {
  const res = await fetchFn("/api/review/label", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
  if (!res.ok) {
    return raise(res);
  }
  return (await res.json()) as Ack;
}

export async function fetchMetrics(
  fetchFn: FetchLike = defaultFetch,
): Promise<Metrics> {
  const res = await fetchFn("/api/metrics");
  if (!res.ok) {
    return raise(res);
  }
  return (await res.json()) as Metrics;
}
