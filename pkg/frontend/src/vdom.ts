/**
 * A deliberately tiny element tree: panel and block renderers emit VNodes,
 * tests inspect them directly, and the browser entry point realizes them
 * into DOM. No diffing, no state: the panel re-renders wholesale.
 */

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: (VNode | string)[];
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  ...children: (VNode | string | null | undefined)[]
): VNode {
  return {
    tag,
    attrs,
    children: children.filter((c): c is VNode | string => c !== null && c !== undefined),
  };
}

export function toDom(node: VNode | string, doc: Document): Node {
  if (typeof node === "string") {
    return doc.createTextNode(node);
  }
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  for (const child of node.children) {
    el.appendChild(toDom(child, doc));
  }
  return el;
}

/** All text content of a subtree, space-joined; handy for assertions. */
export function textOf(node: VNode | string): string {
  if (typeof node === "string") return node;
  return node.children.map(textOf).filter(Boolean).join(" ");
}

/** Depth-first search for nodes matching a predicate. */
export function findAll(node: VNode | string, match: (n: VNode) => boolean): VNode[] {
  if (typeof node === "string") return [];
  const hits: VNode[] = [];
  if (match(node)) hits.push(node);
  for (const child of node.children) {
    hits.push(...findAll(child, match));
  }
  return hits;
}

export function hasClass(node: VNode, name: string): boolean {
  return (node.attrs["class"] ?? "").split(/\s+/).includes(name);
}
