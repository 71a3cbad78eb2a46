import { describe, expect, it } from "vitest";

import { renderSpecToGraphics } from "../src/blocks.js";
import type { RenderSpecJson } from "../src/types.js";
import { findAll, hasClass, textOf } from "../src/vdom.js";

const moveSteps = (highlighted: boolean): RenderSpecJson => ({
  specVersion: 1,
  shape: "STACK",
  category: "motion",
  colorHex: "#4C97FF",
  highlighted: false,
  segments: [
    { text: "move" },
    { slot: { name: "STEPS", value: "10", kind: "number", highlighted } },
    { text: "steps" },
  ],
});

describe("renderSpecToGraphics", () => {
  it("draws a stack block with its category color", () => {
    const node = renderSpecToGraphics(moveSteps(false));
    expect(hasClass(node, "block--stack")).toBe(true);
    expect(hasClass(node, "category-motion")).toBe(true);
    expect(node.attrs["style"]).toContain("#4C97FF");
    expect(textOf(node)).toContain("move");
    expect(textOf(node)).toContain("steps");
  });

  it("marks highlighted parameter slots and only those", () => {
    const node = renderSpecToGraphics(moveSteps(true));
    const slots = findAll(node, (n) => n.attrs["data-slot"] === "STEPS");
    expect(slots).toHaveLength(1);
    expect(hasClass(slots[0]!, "slot--highlighted")).toBe(true);
    const calm = renderSpecToGraphics(moveSteps(false));
    const calmSlot = findAll(calm, (n) => n.attrs["data-slot"] === "STEPS")[0]!;
    expect(hasClass(calmSlot, "slot--highlighted")).toBe(false);
  });

  it("renders boolean and reporter silhouettes", () => {
    const boolSpec: RenderSpecJson = {
      specVersion: 1,
      shape: "BOOLEAN",
      category: "sensing",
      colorHex: "#5CB1D6",
      highlighted: false,
      segments: [{ text: "mouse down?" }],
    };
    expect(hasClass(renderSpecToGraphics(boolSpec), "block--boolean")).toBe(true);
    const reporter: RenderSpecJson = { ...boolSpec, shape: "REPORTER" };
    expect(hasClass(renderSpecToGraphics(reporter), "block--reporter")).toBe(true);
  });

  it("stitches script composites vertically in order", () => {
    const composite: RenderSpecJson = {
      specVersion: 1,
      shape: "SCRIPT",
      category: "unknown",
      colorHex: "#969696",
      highlighted: false,
      segments: [
        { nested: { ...moveSteps(false), segments: [{ text: "first" }] } },
        { nested: { ...moveSteps(false), segments: [{ text: "second" }] } },
      ],
    };
    const node = renderSpecToGraphics(composite);
    expect(hasClass(node, "block-script")).toBe(true);
    expect(textOf(node.children[0]!)).toBe("first");
    expect(textOf(node.children[1]!)).toBe("second");
  });

  it("nests substacks inside C-blocks", () => {
    const cBlock: RenderSpecJson = {
      specVersion: 1,
      shape: "C_BLOCK",
      category: "control",
      colorHex: "#FFAB19",
      highlighted: false,
      segments: [
        { text: "repeat" },
        { slot: { name: "TIMES", value: "4", kind: "number", highlighted: false } },
        { substack: [moveSteps(false)] },
      ],
    };
    const node = renderSpecToGraphics(cBlock);
    expect(hasClass(node, "block--c")).toBe(true);
    const stacks = findAll(node, (n) => hasClass(n, "block-substack"));
    expect(stacks).toHaveLength(1);
    expect(textOf(stacks[0]!)).toContain("move");
  });

  it("shows fallback nodes as monospace text", () => {
    const fallback: RenderSpecJson = {
      specVersion: 1,
      shape: "FALLBACK",
      category: "unknown",
      colorHex: "#969696",
      highlighted: false,
      segments: [{ text: "[unknown: someextension_custom] (POWER=9)" }],
    };
    const node = renderSpecToGraphics(fallback);
    expect(hasClass(node, "block--fallback")).toBe(true);
    expect(node.attrs["style"]).toContain("monospace");
    expect(textOf(node)).toContain("someextension_custom");
  });

  it("rejects unsupported spec versions with a banner", () => {
    const future = { ...moveSteps(false), specVersion: 2 };
    const node = renderSpecToGraphics(future);
    expect(hasClass(node, "spec-version-banner")).toBe(true);
    expect(textOf(node)).toContain("v2");
  });

  it("renders an empty composite as an empty region", () => {
    const empty: RenderSpecJson = {
      specVersion: 1,
      shape: "SCRIPT",
      category: "unknown",
      colorHex: "#969696",
      highlighted: false,
      segments: [],
    };
    expect(renderSpecToGraphics(empty).children).toHaveLength(0);
  });
});
