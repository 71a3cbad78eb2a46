/**
 * Workflow tests against recorded service responses: the panel is a thin
 * client, so a scripted fake of the HTTP API drives every state it can reach.
 */

import { describe, expect, it } from "vitest";

import { ApiError, type TutorApi } from "../src/api.js";
import { Panel } from "../src/panel.js";
import type { HintPayload, RenderSpecJson, SessionPayload } from "../src/types.js";
import { findAll, hasClass, textOf } from "../src/vdom.js";

const SUMMATIVE = "Congratulations, your project now implements all target features.";

const stepsSpec: RenderSpecJson = {
  specVersion: 1,
  shape: "STACK",
  category: "motion",
  colorHex: "#4C97FF",
  highlighted: false,
  segments: [
    { text: "move" },
    { slot: { name: "STEPS", value: "10", kind: "number", highlighted: true } },
    { text: "steps" },
  ],
};

function sessionPayload(items: number, revision = 0): SessionPayload {
  return {
    sessionId: "s1",
    revision,
    status: items === 0 ? "COMPLETE" : "IN_PROGRESS",
    summativeMessage: items === 0 ? SUMMATIVE : undefined,
    report: {
      items: Array.from({ length: items }, (_, i) => ({
        id: `item${i}`,
        level: "PARAMETER",
        kind: "MODIFIED",
        severity: i + 1,
        message: `difference ${i}`,
        changedSlots: ["STEPS"],
      })),
      suppressed: [],
      functionallyEquivalent: items === 0,
    },
  };
}

function hintPayload(revision = 0): HintPayload {
  return {
    hintId: `r${revision}-item0`,
    item: {
      id: "item0",
      level: "PARAMETER",
      kind: "MODIFIED",
      severity: 1,
      message: "difference 0",
      changedSlots: ["STEPS"],
    },
    explanation: "Your sprite moves 3 steps but the target moves 10.",
    studentRender: { text: ["move (3) steps"], spec: stepsSpec },
    teacherRender: { text: ["move (10) steps"], spec: stepsSpec },
    patchAvailable: true,
    patchDestructive: false,
  };
}

class FakeApi implements TutorApi {
  items = 1;
  revision = 0;
  staleOnce = false;
  chatReply = "Because the target sprite travels farther each step.";

  async createSession(): Promise<SessionPayload> {
    return sessionPayload(this.items, this.revision);
  }
  async getHint(): Promise<HintPayload> {
    if (this.items === 0) {
      throw new ApiError(409, "SessionComplete", SUMMATIVE);
    }
    return hintPayload(this.revision);
  }
  async applyFix(_sid: string, hintId: string): Promise<SessionPayload> {
    if (this.staleOnce) {
      this.staleOnce = false;
      throw new ApiError(409, "StaleHint", `hint ${hintId} is stale`);
    }
    this.items -= 1;
    this.revision += 1;
    return sessionPayload(this.items, this.revision);
  }
  async submitRevision(): Promise<SessionPayload> {
    this.items = 0;
    this.revision += 1;
    return sessionPayload(this.items, this.revision);
  }
  async chat(): Promise<{ reply: string }> {
    return { reply: this.chatReply };
  }
  async getReport(): Promise<SessionPayload> {
    return sessionPayload(this.items, this.revision);
  }
}

const blob = () => new Blob([new Uint8Array([1, 2, 3])]);

describe("hint workflow", () => {
  it("walks a single-bug session to the summative banner via apply", async () => {
    const panel = new Panel(new FakeApi());
    await panel.start(blob(), blob());
    expect(panel.phase).toBe("inProgress");
    let view = panel.render();
    expect(textOf(view)).toContain("Your sprite moves 3 steps");
    const highlighted = findAll(view, (n) => hasClass(n, "slot--highlighted"));
    expect(highlighted.length).toBeGreaterThan(0);

    await panel.applyFix();
    expect(panel.phase).toBe("complete");
    view = panel.render();
    const banners = findAll(view, (n) => hasClass(n, "summative-banner"));
    expect(banners).toHaveLength(1);
    expect(textOf(banners[0]!)).toBe(SUMMATIVE);
  });

  it("tracks progress as resolved over total", async () => {
    const api = new FakeApi();
    api.items = 2;
    const panel = new Panel(api);
    await panel.start(blob(), blob());
    expect(panel.progress()).toEqual({ resolved: 0, total: 2 });
    await panel.applyFix();
    expect(panel.progress()).toEqual({ resolved: 1, total: 2 });
    await panel.applyFix();
    expect(panel.progress()).toEqual({ resolved: 2, total: 2 });
    expect(panel.phase).toBe("complete");
  });

  it("decline switches to upload mode, and a teacher-equal upload completes", async () => {
    const panel = new Panel(new FakeApi());
    await panel.start(blob(), blob());
    panel.decline();
    const view = panel.render();
    expect(findAll(view, (n) => n.attrs["data-action"] === "upload-revision")).toHaveLength(1);
    await panel.uploadRevision(blob());
    expect(panel.phase).toBe("complete");
    expect(textOf(panel.render())).toContain(SUMMATIVE);
  });

  it("auto-refreshes the hint after a stale apply", async () => {
    const api = new FakeApi();
    api.staleOnce = true;
    const panel = new Panel(api);
    await panel.start(blob(), blob());
    const before = panel.hint?.hintId;
    await panel.applyFix(); // stale: no item consumed, hint refetched
    expect(panel.phase).toBe("inProgress");
    expect(panel.hint?.hintId).toBe(before);
    await panel.applyFix();
    expect(panel.phase).toBe("complete");
  });

  it("renders chat replies in the drawer", async () => {
    const panel = new Panel(new FakeApi());
    await panel.start(blob(), blob());
    panel.toggleChat();
    await panel.ask("Why is this change needed?");
    const view = panel.render();
    const replies = findAll(view, (n) => hasClass(n, "chat-reply"));
    expect(replies).toHaveLength(1);
    expect(textOf(replies[0]!)).toContain("travels farther");
  });

  it("shows the collapsed all-issues list on demand", async () => {
    const api = new FakeApi();
    api.items = 2;
    const panel = new Panel(api);
    await panel.start(blob(), blob());
    expect(findAll(panel.render(), (n) => hasClass(n, "issue"))).toHaveLength(0);
    panel.toggleIssues();
    expect(findAll(panel.render(), (n) => hasClass(n, "issue"))).toHaveLength(2);
  });

  it("identical projects complete immediately with the banner", async () => {
    const api = new FakeApi();
    api.items = 0;
    const panel = new Panel(api);
    await panel.start(blob(), blob());
    expect(panel.phase).toBe("complete");
    expect(textOf(panel.render())).toContain(SUMMATIVE);
  });
});
