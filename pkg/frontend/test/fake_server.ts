/** In-memory stand-in for the review service, speaking the same HTTP/JSON
 * shapes (queue leasing, decision conflicts, export, stats). */

import {
  Criteria,
  FetchLike,
  ItemKind,
  ReviewItem,
  Stats,
  Verdict,
} from "../src/api.js";

const KINDS: ItemKind[] = ["demonstration", "instance"];

export const TEST_CRITERIA: Criteria = {
  demonstration: [
    { key: "plausible_coherent_conflict", label: "Plausible, coherent conflict" },
    { key: "appropriate_for_relation", label: "Appropriate for the relation" },
    { key: "indirect_or_multi_hop_preferred", label: "Indirect or multi-hop preferred" },
    { key: "non_redundant_pattern", label: "Non-redundant pattern" },
  ],
  instance: [
    { key: "single_hop_direct_unambiguous", label: "Single-hop edits direct and unambiguous" },
    { key: "multi_hop_reasoning_chain", label: "Multi-hop chain actually requires reasoning" },
    { key: "conflicts_independent", label: "Conflicts are independent" },
    { key: "natural_and_plausible", label: "Context is natural and plausible" },
  ],
};

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export class FakeReviewServer {
  items: ReviewItem[] = [];

  enqueue(kind: ItemKind, count: number): void {
    for (let i = 0; i < count; i++) {
      this.items.push({
        item_id: `${kind}-${String(this.items.length + 1).padStart(6, "0")}`,
        kind,
        payload: { n: i },
        status: "pending",
        decision: null,
        leased_to: null,
      });
    }
  }

  stats(): Stats {
    const out = {} as Stats;
    for (const kind of KINDS) {
      out[kind] = { pending: 0, accepted: 0, rejected: 0 };
      for (const item of this.items) {
        if (item.kind === kind) out[kind][item.status] += 1;
      }
    }
    return out;
  }

  private lease(kind: ItemKind, reviewer: string): ReviewItem | null {
    for (const item of this.items) {
      if (item.kind !== kind || item.status !== "pending") continue;
      if (item.leased_to === null) {
        item.leased_to = reviewer;
        return item;
      }
      if (item.leased_to === reviewer) return item;
    }
    return null;
  }

  private decide(
    itemId: string,
    body: { reviewer: string; verdict: Verdict; checklist: Record<string, boolean> },
  ): Response {
    const item = this.items.find((i) => i.item_id === itemId);
    if (!item) return json(404, { detail: `unknown item: ${itemId}` });
    if (item.status !== "pending") {
      return json(409, { detail: `item ${itemId} already decided (${item.status})` });
    }
    if (body.verdict !== "accepted" && body.verdict !== "rejected") {
      return json(400, { detail: `bad verdict: ${body.verdict}` });
    }
    const allowed = new Set(TEST_CRITERIA[item.kind].map((c) => c.key));
    for (const key of Object.keys(body.checklist ?? {})) {
      if (!allowed.has(key)) return json(400, { detail: `unknown checklist key: ${key}` });
    }
    item.status = body.verdict;
    item.decision = {
      reviewer: body.reviewer,
      verdict: body.verdict,
      checklist: body.checklist,
      note: "",
      timestamp: Date.now() / 1000,
    };
    return json(200, item);
  }

  fetch: FetchLike = async (input, init) => {
    const url = new URL(input, "http://fake");
    const path = url.pathname;
    if (path === "/api/criteria") return json(200, TEST_CRITERIA);
    if (path === "/api/stats") return json(200, this.stats());
    if (path === "/api/queue") {
      const kind = url.searchParams.get("kind") as ItemKind;
      const reviewer = url.searchParams.get("reviewer") ?? "";
      if (!reviewer) return json(400, { detail: "reviewer id required" });
      return json(200, { item: this.lease(kind, reviewer), stats: this.stats() });
    }
    if (path === "/api/export") {
      const kind = url.searchParams.get("kind");
      const accepted = this.items.filter((i) => i.kind === kind && i.status === "accepted");
      return json(200, { count: accepted.length, items: accepted });
    }
    const decision = path.match(/^\/api\/items\/([^/]+)\/decision$/);
    if (decision && init?.method === "POST") {
      return this.decide(decision[1], JSON.parse(String(init.body)));
    }
    const single = path.match(/^\/api\/items\/([^/]+)$/);
    if (single) {
      const item = this.items.find((i) => i.item_id === single[1]);
      return item ? json(200, item) : json(404, { detail: "unknown item" });
    }
    return json(404, { detail: `no route: ${path}` });
  };
}
