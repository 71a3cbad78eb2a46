/**
 * Turn a RenderSpec into a drawable element tree.
 *
 * Every known shape becomes a colored block silhouette (hat bump, stack,
 * pointy boolean, pill reporter, bracketed C-block, flat-bottomed cap) with
 * its category color inlined; parameter slots render as inset pills, and a
 * highlighted slot gets the `slot--highlighted` class so the stylesheet can
 * make it pop. Fallback nodes (unknown opcodes) come through as monospace
 * text, and specs from a newer protocol version render as a warning banner
 * instead of garbage.
 */

import type { RenderSpecJson, SegmentJson } from "./types.js";
import { SUPPORTED_SPEC_VERSION } from "./types.js";
import { h, type VNode } from "./vdom.js";

const SHAPE_CLASS: Record<string, string> = {
  HAT: "block--hat",
  STACK: "block--stack",
  C_BLOCK: "block--c",
  REPORTER: "block--reporter",
  BOOLEAN: "block--boolean",
  CAP: "block--cap",
  FALLBACK: "block--fallback",
  SCRIPT: "block-script",
};

export function renderSpecToGraphics(spec: RenderSpecJson): VNode {
  if (spec.specVersion !== SUPPORTED_SPEC_VERSION) {
    return h(
      "div",
      { class: "spec-version-banner", role: "alert" },
      `This hint uses block spec v${spec.specVersion}, but this panel understands v${SUPPORTED_SPEC_VERSION}. Please update.`,
    );
  }
  return renderNode(spec);
}

function renderNode(spec: RenderSpecJson): VNode {
  if (spec.shape === "SCRIPT") {
    return h(
      "div",
      { class: "block-script" },
      ...spec.segments.map((segment) =>
        "nested" in segment ? renderNode(segment.nested) : renderSegment(segment),
      ),
    );
  }
  if (spec.shape === "FALLBACK") {
    return h(
      "div",
      { class: "block block--fallback", style: "font-family: monospace;" },
      ...spec.segments.map(renderSegment),
    );
  }
  const classes = ["block", SHAPE_CLASS[spec.shape] ?? "block--stack", `category-${spec.category}`];
  if (spec.highlighted) classes.push("block--highlighted");
  const head: (VNode | string)[] = [];
  const tail: VNode[] = [];
  let substackIndex = 0;
  for (const segment of spec.segments) {
    if ("substack" in segment) {
      tail.push(
        h(
          "div",
          { class: "block-substack", "data-substack": String(substackIndex++) },
          ...segment.substack.map(renderNode),
        ),
      );
    } else if ("text" in segment && segment.text === "else" && tail.length > 0) {
      tail.push(h("div", { class: "block-else" }, "else"));
    } else {
      head.push(renderSegment(segment));
    }
  }
  return h(
    "div",
    { class: classes.join(" "), style: `background-color: ${spec.colorHex};` },
    h("div", { class: "block-head" }, ...head),
    ...tail,
  );
}

function renderSegment(segment: SegmentJson): VNode {
  if ("text" in segment) {
    return h("span", { class: "block-label" }, segment.text);
  }
  if ("slot" in segment) {
    const slot = segment.slot;
    const classes = ["slot", `slot--${slot.kind}`];
    if (slot.highlighted) classes.push("slot--highlighted");
    return h(
      "span",
      { class: classes.join(" "), "data-slot": slot.name },
      slot.value === "" ? " " : slot.value,
    );
  }
  if ("nested" in segment) {
    return renderNode(segment.nested);
  }
  // substacks are handled by the block renderer; a stray one becomes a column
  return h("div", { class: "block-substack" }, ...segment.substack.map(renderNode));
}
