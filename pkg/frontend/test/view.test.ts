import { beforeEach, describe, expect, it } from "vitest";

import { ReviewApi } from "../src/api.js";
import { ReviewSession } from "../src/session.js";
import { mountConsole } from "../src/view.js";
import { FakeReviewServer } from "./fake_server.js";

let server: FakeReviewServer;
let session: ReviewSession;
let root: HTMLElement;

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

beforeEach(async () => {
  server = new FakeReviewServer();
  server.enqueue("instance", 2);
  session = new ReviewSession(new ReviewApi("", server.fetch), "alice", "instance");
  root = document.createElement("div");
  document.body.replaceChildren(root);
  await session.start();
});

describe("console view", () => {
  it("renders the leased item, checklist, and disabled submit buttons", () => {
    const view = mountConsole(root, session);
    view.render();
    expect(root.querySelector(".item-id")?.textContent).toBe("instance-000001");
    expect(root.querySelectorAll(".checklist li")).toHaveLength(4);
    const submits = root.querySelectorAll<HTMLButtonElement>(".submit");
    expect(submits).toHaveLength(2);
    submits.forEach((b) => expect(b.disabled).toBe(true));
    expect(root.querySelector(".gate-hint")?.textContent).toContain("4 left");
  });

  it("enables submission only after clicking an answer for every row", () => {
    const view = mountConsole(root, session);
    view.render();
    const yesButtons = () => [...root.querySelectorAll<HTMLButtonElement>(".checklist .yes")];
    for (const [i, button] of yesButtons().entries()) {
      button.click();
      const enabled = [...root.querySelectorAll<HTMLButtonElement>(".submit")].every(
        (b) => !b.disabled,
      );
      expect(enabled).toBe(i === 3);
    }
    expect(root.querySelector(".gate-hint")).toBeNull();
  });

  it("accepting advances to the next item", async () => {
    const view = mountConsole(root, session);
    view.render();
    [...root.querySelectorAll<HTMLButtonElement>(".checklist .no")].forEach((b) => b.click());
    root.querySelector<HTMLButtonElement>(".submit.accepted")!.click();
    await flush();
    view.render();
    expect(root.querySelector(".item-id")?.textContent).toBe("instance-000002");
    expect(server.items[0].status).toBe("accepted");
  });

  it("shows the empty state when the queue drains", async () => {
    const view = mountConsole(root, session);
    for (let i = 0; i < 2; i++) {
      view.render();
      [...root.querySelectorAll<HTMLButtonElement>(".checklist .yes")].forEach((b) => b.click());
      root.querySelector<HTMLButtonElement>(".submit.rejected")!.click();
      await flush();
    }
    view.render();
    expect(root.querySelector(".empty")?.textContent).toBe("Queue empty.");
  });
});
