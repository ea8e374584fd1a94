/** Review session state machine, independent of any DOM.
 *
 * Invariants enforced here rather than in the UI layer:
 * - a decision cannot be submitted until every checklist entry is answered
 * - the current item is always the reviewer's own lease
 * - accept clicks are counted locally so they can be reconciled against the
 *   server's export count
 */

import {
  Criteria,
  Criterion,
  ItemKind,
  ReviewApi,
  ReviewItem,
  Stats,
  Verdict,
} from "./api.js";

export type ChecklistAnswers = Map<string, boolean>;

export interface SessionSnapshot {
  item: ReviewItem | null;
  criteria: Criterion[];
  answers: ChecklistAnswers;
  stats: Stats | null;
  accepted: number;
  rejected: number;
  exhausted: boolean;
}

export class ReviewSession {
  private item: ReviewItem | null = null;
  private answers: ChecklistAnswers = new Map();
  private allCriteria: Criteria | null = null;
  private stats: Stats | null = null;
  private acceptedCount = 0;
  private rejectedCount = 0;
  private exhausted = false;

  constructor(
    private readonly api: ReviewApi,
    readonly reviewer: string,
    readonly kind: ItemKind,
  ) {
    if (!reviewer) throw new Error("reviewer id required");
  }

  async start(): Promise<void> {
    this.allCriteria = await this.api.criteria();
    await this.advance();
  }

  /** Lease the next pending item (or re-serve the current lease). */
  async advance(): Promise<void> {
    const response = await this.api.nextItem(this.kind, this.reviewer);
    this.stats = response.stats;
    this.item = response.item;
    this.exhausted = response.item === null;
    this.answers = new Map();
  }

  criteriaForKind(): Criterion[] {
    if (!this.allCriteria) return [];
    return this.allCriteria[this.kind] ?? [];
  }

  answer(key: string, value: boolean): void {
    const known = this.criteriaForKind().some((c) => c.key === key);
    if (!known) throw new Error(`unknown checklist key: ${key}`);
    this.answers.set(key, value);
  }

  /** Keys still unanswered; submission is gated on this being empty. */
  unanswered(): string[] {
    return this.criteriaForKind()
      .map((c) => c.key)
      .filter((key) => !this.answers.has(key));
  }

  canSubmit(): boolean {
    return this.item !== null && this.unanswered().length === 0;
  }

  async submit(verdict: Verdict, note = ""): Promise<ReviewItem> {
    if (!this.item) throw new Error("no item leased");
    const missing = this.unanswered();
    if (missing.length > 0) {
      throw new Error(`checklist incomplete: ${missing.join(", ")}`);
    }
    const decided = await this.api.submitDecision(
      this.item.item_id,
      this.reviewer,
      verdict,
      Object.fromEntries(this.answers),
      note,
    );
    if (verdict === "accepted") this.acceptedCount += 1;
    else this.rejectedCount += 1;
    await this.advance();
    return decided;
  }

  snapshot(): SessionSnapshot {
    return {
      item: this.item,
      criteria: this.criteriaForKind(),
      answers: new Map(this.answers),
      stats: this.stats,
      accepted: this.acceptedCount,
      rejected: this.rejectedCount,
      exhausted: this.exhausted,
    };
  }
}
