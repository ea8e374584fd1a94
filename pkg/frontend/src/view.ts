/** DOM rendering for the review session; no framework, plain elements. */

import { Verdict } from "./api.js";
import { ReviewSession } from "./session.js";

export interface ViewHandles {
  root: HTMLElement;
  render: () => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function mountConsole(root: HTMLElement, session: ReviewSession): ViewHandles {
  const render = () => {
    const snap = session.snapshot();
    root.replaceChildren();

    const header = el("header");
    header.append(el("h1", "title", "Review queue"));
    if (snap.stats) {
      const s = snap.stats[session.kind];
      header.append(
        el(
          "p",
          "stats",
          `pending ${s.pending} / accepted ${s.accepted} / rejected ${s.rejected}` +
            ` — this session: +${snap.accepted} / -${snap.rejected}`,
        ),
      );
    }
    root.append(header);

    if (!snap.item) {
      root.append(el("p", "empty", snap.exhausted ? "Queue empty." : "Loading…"));
      return;
    }

    const card = el("section", "item-card");
    card.append(el("h2", "item-id", snap.item.item_id));
    const payload = el("pre", "payload");
    payload.textContent = JSON.stringify(snap.item.payload, null, 2);
    card.append(payload);

    const checklist = el("ul", "checklist");
    for (const criterion of snap.criteria) {
      const row = el("li");
      const label = el("label", undefined, criterion.label + " ");
      for (const value of [true, false]) {
        const button = el("button", value ? "yes" : "no", value ? "yes" : "no");
        button.dataset.key = criterion.key;
        if (snap.answers.get(criterion.key) === value) button.classList.add("selected");
        button.addEventListener("click", () => {
          session.answer(criterion.key, value);
          render();
        });
        label.append(button);
      }
      row.append(label);
      checklist.append(row);
    }
    card.append(checklist);

    const actions = el("div", "actions");
    for (const verdict of ["accepted", "rejected"] as Verdict[]) {
      const button = el(
        "button",
        `submit ${verdict}`,
        verdict === "accepted" ? "Accept" : "Reject",
      );
      button.disabled = !session.canSubmit();
      button.addEventListener("click", () => {
        void session.submit(verdict).then(render, (err: unknown) => {
          root.append(el("p", "error", String(err)));
        });
      });
      actions.append(button);
    }
    if (!session.canSubmit()) {
      actions.append(
        el("p", "gate-hint", `Answer all criteria first (${session.unanswered().length} left).`),
      );
    }
    card.append(actions);
    root.append(card);
  };

  return { root, render };
}
