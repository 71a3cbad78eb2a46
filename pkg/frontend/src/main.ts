/**
 * Browser bootstrap: realize the panel's element tree into the page and wire
 * data-action buttons/forms to panel methods. The service base URL comes
 * from the `?service=` query parameter (default: same-host port 8000).
 */

import { ApiClient } from "./api.js";
import { Panel } from "./panel.js";
import { toDom } from "./vdom.js";

function serviceUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  return fromQuery ?? `http://${window.location.hostname || "127.0.0.1"}:8000`;
}

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const panel = new Panel(new ApiClient(serviceUrl()), renderNow);

function renderNow(): void {
  root!.replaceChildren(toDom(panel.render(), document));
}

function fileOf(form: HTMLFormElement, name: string): File | null {
  const input = form.elements.namedItem(name);
  if (input instanceof HTMLInputElement && input.files && input.files.length > 0) {
    return input.files[0] ?? null;
  }
  return null;
}

root.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest("[data-action]");
  if (!(target instanceof HTMLElement) || target.tagName === "FORM") return;
  const action = target.dataset["action"];
  if (action === "apply-fix") void panel.applyFix();
  else if (action === "decline") panel.decline();
  else if (action === "toggle-chat") panel.toggleChat();
  else if (action === "toggle-issues") panel.toggleIssues();
});

root.addEventListener("submit", (event) => {
  const form = event.target as HTMLFormElement;
  const action = form.dataset["action"];
  if (!action) return;
  event.preventDefault();
  if (action === "start-session") {
    const teacher = fileOf(form, "teacher");
    const student = fileOf(form, "student");
    const description = form.elements.namedItem("description");
    if (teacher && student) {
      void panel.start(
        teacher,
        student,
        description instanceof HTMLInputElement ? description.value : undefined,
      );
    }
  } else if (action === "upload-revision") {
    const revision = fileOf(form, "revision");
    if (revision) void panel.uploadRevision(revision);
  } else if (action === "send-chat") {
    const input = form.elements.namedItem("question");
    if (input instanceof HTMLInputElement && input.value.trim()) {
      void panel.ask(input.value);
      input.value = "";
    }
  }
});

renderNow();
