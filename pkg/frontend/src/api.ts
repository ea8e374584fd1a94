/** Typed client for the review service's HTTP/JSON interface. */

export type ItemKind = "demonstration" | "instance";
export type ItemStatus = "pending" | "accepted" | "rejected";
export type Verdict = "accepted" | "rejected";

export interface Decision {
  reviewer: string;
  verdict: Verdict;
  checklist: Record<string, boolean>;
  note: string;
  timestamp: number;
}

export interface ReviewItem {
  item_id: string;
  kind: ItemKind;
  payload: Record<string, unknown>;
  status: ItemStatus;
  decision: Decision | null;
  leased_to: string | null;
}

export interface KindStats {
  pending: number;
  accepted: number;
  rejected: number;
}

export type Stats = Record<ItemKind, KindStats>;

export interface QueueResponse {
  item: ReviewItem | null;
  stats: Stats;
}

export interface Criterion {
  key: string;
  label: string;
}

export type Criteria = Record<ItemKind, Criterion[]>;

export interface ExportResponse {
  count: number;
  items: ReviewItem[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`api error ${status}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ReviewApi {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail =
        typeof body === "object" && body !== null && "detail" in body
          ? String((body as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  nextItem(kind: ItemKind, reviewer: string): Promise<QueueResponse> {
    const params = new URLSearchParams({ kind, reviewer });
    return this.request<QueueResponse>(`/api/queue?${params}`);
  }

  getItem(itemId: string): Promise<ReviewItem> {
    return this.request<ReviewItem>(`/api/items/${encodeURIComponent(itemId)}`);
  }

  submitDecision(
    itemId: string,
    reviewer: string,
    verdict: Verdict,
    checklist: Record<string, boolean>,
    note = "",
  ): Promise<ReviewItem> {
    return this.request<ReviewItem>(
      `/api/items/${encodeURIComponent(itemId)}/decision`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ reviewer, verdict, checklist, note }),
      },
    );
  }

  criteria(): Promise<Criteria> {
    return this.request<Criteria>("/api/criteria");
  }

  stats(): Promise<Stats> {
    return this.request<Stats>("/api/stats");
  }

  exportAccepted(kind: ItemKind): Promise<ExportResponse> {
    return this.request<ExportResponse>(`/api/export?kind=${kind}`);
  }
}
