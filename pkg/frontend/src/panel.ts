/**
 * The hint workflow: one hint at a time, apply it or fix it yourself,
 * re-analyze, repeat until the service declares the project complete.
 *
 * The panel holds no program-analysis logic whatsoever: every decision comes
 * from service payloads, and rendering is a pure function of the state, so
 * the whole workflow is testable against recorded responses. Action buttons
 * carry `data-action` attributes; the browser entry point wires them to the
 * methods here. At most one mutating request is in flight: buttons disable
 * while `pending` is set.
 */

import { ApiError, type TutorApi } from "./api.js";
import { renderSpecToGraphics } from "./blocks.js";
import type { HintPayload, ReportJson, SessionPayload } from "./types.js";
import { h, type VNode } from "./vdom.js";

export type Phase = "idle" | "loading" | "inProgress" | "complete" | "error";

export interface ChatEntry {
  question: string;
  reply: string;
}

export class Panel {
  phase: Phase = "idle";
  sessionId: string | null = null;
  report: ReportJson | null = null;
  hint: HintPayload | null = null;
  summativeMessage = "";
  resolved = 0;
  pending = false;
  errorMessage = "";
  chatOpen = false;
  chatLog: ChatEntry[] = [];
  issuesOpen = false;
  uploadMode = false;

  constructor(
    private api: TutorApi,
    private onChange: () => void = () => {},
  ) {}

  private notify(): void {
    this.onChange();
  }

  private absorb(payload: SessionPayload): void {
    this.sessionId = payload.sessionId;
    this.report = payload.report;
    if (payload.status === "COMPLETE") {
      this.phase = "complete";
      this.summativeMessage = payload.summativeMessage ?? "";
      this.hint = null;
    } else {
      this.phase = "inProgress";
    }
  }

  async start(teacher: Blob, student: Blob, description?: string): Promise<void> {
    this.phase = "loading";
    this.pending = true;
    this.notify();
    try {
      const payload = await this.api.createSession(teacher, student, description);
      this.absorb(payload);
      if (payload.status !== "COMPLETE") {
        await this.refreshHint();
      }
    } catch (err) {
      this.phase = "error";
      this.errorMessage = err instanceof Error ? err.message : String(err);
    } finally {
      this.pending = false;
      this.notify();
    }
  }

  async refreshHint(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.hint = await this.api.getHint(this.sessionId);
      this.uploadMode = false;
    } catch (err) {
      if (err instanceof ApiError && err.code === "SessionComplete") {
        this.phase = "complete";
        this.summativeMessage = err.message;
        this.hint = null;
      } else {
        throw err;
      }
    }
    this.notify();
  }

  async applyFix(): Promise<void> {
    if (!this.sessionId || !this.hint || this.pending) return;
    this.pending = true;
    this.notify();
    try {
      const payload = await this.api.applyFix(this.sessionId, this.hint.hintId);
      this.resolved += 1;
      this.absorb(payload);
      if (this.phase === "inProgress") {
        await this.refreshHint();
      }
    } catch (err) {
      if (err instanceof ApiError && err.code === "StaleHint") {
        await this.refreshHint(); // the hint moved on; show the fresh one
      } else {
        this.errorMessage = err instanceof Error ? err.message : String(err);
      }
    } finally {
      this.pending = false;
      this.notify();
    }
  }

  /** "I'll fix it myself": switch the card into re-upload mode. */
  decline(): void {
    this.uploadMode = true;
    this.notify();
  }

  async uploadRevision(container: Blob): Promise<void> {
    if (!this.sessionId || this.pending) return;
    this.pending = true;
    this.notify();
    try {
      const before = this.report?.items.length ?? 0;
      const payload = await this.api.submitRevision(this.sessionId, container);
      if (payload.report.items.length < before) {
        this.resolved += before - payload.report.items.length;
      }
      this.absorb(payload);
      this.uploadMode = false;
      if (this.phase === "inProgress") {
        await this.refreshHint();
      }
    } catch (err) {
      this.errorMessage = err instanceof Error ? err.message : String(err);
    } finally {
      this.pending = false;
      this.notify();
    }
  }

  async ask(question: string): Promise<void> {
    if (!this.sessionId || !question.trim() || this.pending) return;
    this.pending = true;
    this.notify();
    try {
      const { reply } = await this.api.chat(this.sessionId, question);
      this.chatLog.push({ question, reply });
    } catch (err) {
      this.errorMessage = err instanceof Error ? err.message : String(err);
    } finally {
      this.pending = false;
      this.notify();
    }
  }

  toggleChat(): void {
    this.chatOpen = !this.chatOpen;
    this.notify();
  }

  toggleIssues(): void {
    this.issuesOpen = !this.issuesOpen;
    this.notify();
  }

  progress(): { resolved: number; total: number } {
    const remaining = this.phase === "complete" ? 0 : (this.report?.items.length ?? 0);
    return { resolved: this.resolved, total: this.resolved + remaining };
  }

  // -- view ----------------------------------------------------------------

  render(): VNode {
    switch (this.phase) {
      case "idle":
        return h("div", { class: "panel panel--idle" }, this.renderStartForm());
      case "loading":
        return h("div", { class: "panel" }, h("p", { class: "panel-loading" }, "Comparing projects..."));
      case "error":
        return h(
          "div",
          { class: "panel panel--error" },
          h("p", { class: "panel-error", role: "alert" }, this.errorMessage),
          this.renderStartForm(),
        );
      case "complete":
        return h(
          "div",
          { class: "panel panel--complete" },
          this.renderProgress(),
          h("div", { class: "summative-banner", role: "status" }, this.summativeMessage),
          this.renderChat(),
        );
      default:
        return h(
          "div",
          { class: "panel panel--working" },
          this.renderProgress(),
          this.hint ? this.renderHint(this.hint) : h("p", {}, "Fetching hint..."),
          this.renderAllIssues(),
          this.renderChat(),
        );
    }
  }

  private renderStartForm(): VNode {
    return h(
      "form",
      { class: "start-form", "data-action": "start-session" },
      h("label", {}, "Teacher project (.sb3)", h("input", { type: "file", name: "teacher" })),
      h("label", {}, "Your project (.sb3)", h("input", { type: "file", name: "student" })),
      h("label", {}, "Assignment notes (optional)", h("input", { type: "text", name: "description" })),
      h("button", { type: "submit" }, "Start tutoring"),
    );
  }

  private renderProgress(): VNode {
    const { resolved, total } = this.progress();
    return h(
      "div",
      { class: "progress" },
      h("span", { class: "progress-text" }, total ? `${resolved} of ${total} issues resolved` : "No issues found"),
    );
  }

  private renderHint(hint: HintPayload): VNode {
    const disabled: Record<string, string> = this.pending ? { disabled: "disabled" } : {};
    return h(
      "section",
      { class: "hint-card", "data-hint-id": hint.hintId },
      h("p", { class: "hint-explanation" }, hint.explanation),
      h("p", { class: "hint-message" }, hint.item.message),
      hint.teacherRender
        ? h(
            "div",
            { class: "hint-blocks hint-blocks--teacher" },
            h("h4", {}, "The target does this:"),
            renderSpecToGraphics(hint.teacherRender.spec),
          )
        : null,
      hint.studentRender
        ? h(
            "div",
            { class: "hint-blocks hint-blocks--student" },
            h("h4", {}, "Your project does this:"),
            renderSpecToGraphics(hint.studentRender.spec),
          )
        : null,
      hint.patchDestructive
        ? h(
            "p",
            { class: "hint-destructive", role: "note" },
            "Applying this fix removes blocks from your project.",
          )
        : null,
      this.uploadMode
        ? h(
            "form",
            { class: "upload-form", "data-action": "upload-revision" },
            h("label", {}, "Upload your revised project", h("input", { type: "file", name: "revision" })),
            h("button", { type: "submit", ...disabled }, "Re-check"),
          )
        : h(
            "div",
            { class: "hint-actions" },
            hint.patchAvailable
              ? h("button", { "data-action": "apply-fix", ...disabled }, "Apply fix")
              : null,
            h("button", { "data-action": "decline", ...disabled }, "I'll fix it myself"),
          ),
    );
  }

  private renderAllIssues(): VNode {
    const items = this.report?.items ?? [];
    if (!this.issuesOpen) {
      return h(
        "div",
        { class: "all-issues all-issues--collapsed" },
        h("button", { "data-action": "toggle-issues" }, `All issues (${items.length})`),
      );
    }
    return h(
      "div",
      { class: "all-issues" },
      h("button", { "data-action": "toggle-issues" }, "Hide issues"),
      h(
        "ol",
        { class: "issue-list" },
        ...items.map((item) =>
          h("li", { class: "issue", "data-item-id": item.id }, `[${item.level}] ${item.message}`),
        ),
      ),
    );
  }

  private renderChat(): VNode {
    if (!this.chatOpen) {
      return h(
        "div",
        { class: "chat chat--closed" },
        h("button", { "data-action": "toggle-chat" }, "Ask a question"),
      );
    }
    return h(
      "div",
      { class: "chat" },
      h("button", { "data-action": "toggle-chat" }, "Close chat"),
      h(
        "div",
        { class: "chat-log" },
        ...this.chatLog.flatMap((entry) => [
          h("p", { class: "chat-question" }, entry.question),
          h("p", { class: "chat-reply" }, entry.reply),
        ]),
      ),
      h(
        "form",
        { class: "chat-form", "data-action": "send-chat" },
        h("input", { type: "text", name: "question", placeholder: "Why is this change needed?" }),
        h(
          "button",
          { type: "submit", ...(this.pending ? { disabled: "disabled" } : {}) } as Record<
            string,
            string
          >,
          "Send",
        ),
      ),
    );
  }
}
