/**
 * End-to-end: spawn the real tutoring service (stub provider), drive the
 * panel against it over HTTP, and check the two shipping flows: the
 * move-(3)-steps pair shows a visually distinguished STEPS slot, and
 * applying the fix lands on the summative banner.
 */

import { spawn, execFileSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Panel } from "../src/panel.js";
import { findAll, hasClass, textOf } from "../src/vdom.js";

const PORT = 8791;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let corpusDir: string;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 60; i++) {
    try {
      const resp = await fetch(`${BASE}/sessions/none/report`);
      if (resp.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("service did not come up");
}

function loadPair(name: string): { student: Blob; teacher: Blob } {
  const dir = join(corpusDir, name);
  return {
    student: new Blob([readFileSync(join(dir, "student.sb3"))]),
    teacher: new Blob([readFileSync(join(dir, "teacher.sb3"))]),
  };
}

beforeAll(async () => {
  corpusDir = mkdtempSync(join(tmpdir(), "stitch-ui-e2e-"));
  execFileSync("stitch", ["make-corpus", corpusDir], { stdio: "ignore" });
  server = spawn(
    "stitch",
    ["serve", "--port", String(PORT), "--db", join(corpusDir, "sessions.db")],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 60_000);

afterAll(() => {
  server?.kill();
});

describe("panel against the live service", () => {
  it("completes the single-bug fixture via Apply fix and shows the banner", async () => {
    const { student, teacher } = loadPair("demo/move-steps");
    const panel = new Panel(new ApiClient(BASE));
    await panel.start(teacher, student, "move ten steps");
    expect(panel.phase).toBe("inProgress");
    expect(panel.hint).not.toBeNull();
    expect(panel.hint!.explanation.split(/\s+/).length).toBeLessThanOrEqual(30);

    await panel.applyFix();
    expect(panel.phase).toBe("complete");
    const banner = findAll(panel.render(), (n) => hasClass(n, "summative-banner"));
    expect(banner).toHaveLength(1);
    expect(textOf(banner[0]!)).toBe(
      "Congratulations, your project now implements all target features.",
    );
  }, 30_000);

  it("renders the 3-to-10 hint with the STEPS slot visually distinguished", async () => {
    const { student, teacher } = loadPair("demo/move-steps");
    const panel = new Panel(new ApiClient(BASE));
    await panel.start(teacher, student);
    const view = panel.render();

    const teacherBlocks = findAll(view, (n) => hasClass(n, "hint-blocks--teacher"));
    expect(teacherBlocks).toHaveLength(1);
    const highlighted = findAll(
      teacherBlocks[0]!,
      (n) => n.attrs["data-slot"] === "STEPS" && hasClass(n, "slot--highlighted"),
    );
    expect(highlighted).toHaveLength(1);
    expect(textOf(highlighted[0]!)).toBe("10");

    const studentBlocks = findAll(view, (n) => hasClass(n, "hint-blocks--student"));
    const studentSlot = findAll(
      studentBlocks[0]!,
      (n) => n.attrs["data-slot"] === "STEPS" && hasClass(n, "slot--highlighted"),
    );
    expect(studentSlot).toHaveLength(1);
    expect(textOf(studentSlot[0]!)).toBe("3");
  }, 30_000);

  it("decline then re-upload of the teacher copy completes the session", async () => {
    const { student, teacher } = loadPair("demo/move-steps");
    const panel = new Panel(new ApiClient(BASE));
    await panel.start(teacher, student);
    panel.decline();
    await panel.uploadRevision(teacher);
    expect(panel.phase).toBe("complete");
  }, 30_000);

  it("chat drawer returns a reply within 100 words", async () => {
    const { student, teacher } = loadPair("pairs/maze-game");
    const panel = new Panel(new ApiClient(BASE));
    await panel.start(teacher, student);
    panel.toggleChat();
    await panel.ask("Why is this change needed?");
    expect(panel.chatLog).toHaveLength(1);
    expect(panel.chatLog[0]!.reply.split(/\s+/).length).toBeLessThanOrEqual(100);
  }, 30_000);
});
