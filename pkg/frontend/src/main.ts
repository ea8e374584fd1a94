import { ItemKind, ReviewApi } from "./api.js";
import { ReviewSession } from "./session.js";
import { mountConsole } from "./view.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

async function boot(): Promise<void> {
  const reviewer = param("reviewer", "") || window.prompt("Reviewer id?") || "";
  const kind = param("kind", "instance") as ItemKind;
  const session = new ReviewSession(new ReviewApi(), reviewer, kind);
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");
  const view = mountConsole(root, session);
  await session.start();
  view.render();
}

void boot();
