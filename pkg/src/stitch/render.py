"""Turn block fragments into plain text lines and renderer-neutral specs.

A RenderSpec carries shape, palette category and color, and an ordered list
of segments (label text, parameter slots, nested expressions, substacks).
Text rendering is the flattening of the same segments, so the two views agree
by construction: joining a spec's rendered tokens reproduces the text line.

Unknown opcodes never fail: they render as a text-only fallback node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Union

from . import catalog
from .model import BlockNode, BlockSeq, EntityRef, Literal, StitchError

SPEC_VERSION = 1

SCRIPT_SHAPE = "SCRIPT"  # composite produced by stitching blocks vertically
FALLBACK_SHAPE = "FALLBACK"

_PLACEHOLDER = re.compile(r"\{([A-Z_0-9]+)\}")
_PROC_PLACEHOLDER = ("%s", "%n", "%b")

FragPath = tuple[tuple[int, int | None], ...]
Highlights = set[tuple[FragPath, str]]


class HatNotFirst(StitchError):
    """A hat block appeared after position 0 while stitching a script."""


@dataclass
class TextSegment:
    text: str


@dataclass
class SlotSegment:
    name: str
    value: str
    kind: str  # number | string | color | menu | boolean | broadcast | field
    highlighted: bool = False


@dataclass
class NestedSegment:
    spec: "RenderSpec"


@dataclass
class SubstackSegment:
    specs: list["RenderSpec"]


Segment = Union[TextSegment, SlotSegment, NestedSegment, SubstackSegment]


@dataclass
class RenderSpec:
    shape: str
    category: str
    color_hex: str
    segments: list[Segment] = field(default_factory=list)
    highlighted: bool = False

    def to_json(self) -> dict[str, Any]:
        return {
            "specVersion": SPEC_VERSION,
            "shape": self.shape,
            "category": self.category,
            "colorHex": self.color_hex,
            "highlighted": self.highlighted,
            "segments": [_segment_to_json(s) for s in self.segments],
        }


def _segment_to_json(segment: Segment) -> dict[str, Any]:
    if isinstance(segment, TextSegment):
        return {"text": segment.text}
    if isinstance(segment, SlotSegment):
        return {
            "slot": {
                "name": segment.name,
                "value": segment.value,
                "kind": segment.kind,
                "highlighted": segment.highlighted,
            }
        }
    if isinstance(segment, NestedSegment):
        return {"nested": segment.spec.to_json()}
    return {"substack": [s.to_json() for s in segment.specs]}


# --------------------------------------------------------------------------
# spec construction
# --------------------------------------------------------------------------


def to_render_spec(
    fragment: BlockNode | BlockSeq | None, highlights: Highlights | None = None
) -> RenderSpec:
    """Render a fragment; a BlockSeq becomes a stitched composite."""
    highlights = highlights or set()
    if fragment is None:
        return RenderSpec(SCRIPT_SHAPE, "unknown", catalog.color_for("unknown"))
    if isinstance(fragment, BlockNode):
        return _block_spec(fragment, (), highlights)
    return stitch([_block_spec(b, ((i, None),), highlights) for i, b in enumerate(fragment.blocks)])


def stitch(specs: list[RenderSpec]) -> RenderSpec:
    """Compose top-level block specs vertically into one script snippet."""
    for i, spec in enumerate(specs):
        if spec.shape == catalog.HAT and i > 0:
            raise HatNotFirst(f"hat block at stitched position {i}")
    return RenderSpec(
        shape=SCRIPT_SHAPE,
        category="unknown",
        color_hex=catalog.color_for("unknown"),
        segments=[NestedSegment(s) for s in specs],
    )


def _block_spec(block: BlockNode, path: FragPath, highlights: Highlights) -> RenderSpec:
    entry = catalog.lookup(block.opcode)
    if entry is None:
        return _fallback_spec(block)
    if block.opcode in ("procedures_definition", "procedures_call"):
        segments = _procedure_segments(block, path, highlights)
    else:
        segments = _template_segments(block, entry, path, highlights)
    for i, sub in enumerate(block.substacks):
        if i == 1:
            segments.append(TextSegment("else"))
        segments.append(
            SubstackSegment(
                [
                    _block_spec(b, path + ((j, i),), highlights)
                    for j, b in enumerate(sub.blocks)
                ]
            )
        )
    return RenderSpec(
        shape=entry.shape,
        category=entry.category,
        color_hex=catalog.color_for(entry.category),
        segments=segments,
    )


def _template_segments(
    block: BlockNode, entry: catalog.CatalogEntry, path: FragPath, highlights: Highlights
) -> list[Segment]:
    segments: list[Segment] = []
    cursor = 0
    template = entry.template
    for match in _PLACEHOLDER.finditer(template):
        literal = template[cursor : match.start()].strip()
        if literal:
            segments.append(TextSegment(literal))
        cursor = match.end()
        segments.append(_slot_segment(block, entry, match.group(1), path, highlights))
    tail = template[cursor:].strip()
    if tail:
        segments.append(TextSegment(tail))
    return segments


def _slot_segment(
    block: BlockNode,
    entry: catalog.CatalogEntry,
    slot_name: str,
    path: FragPath,
    highlights: Highlights,
) -> Segment:
    spec_slot = entry.slot(slot_name)
    highlighted = (path, slot_name) in highlights
    fslot = block.field_(slot_name)
    if fslot is not None:
        return SlotSegment(slot_name, fslot.value, "field", highlighted)
    slot = block.input(slot_name)
    value = slot.value if slot else None
    kind = spec_slot.kind if spec_slot else "string"
    if value is None:
        return SlotSegment(slot_name, "", kind, highlighted)
    if isinstance(value, Literal):
        return SlotSegment(slot_name, value.text, _literal_kind(value, kind), highlighted)
    if isinstance(value, EntityRef):
        return SlotSegment(slot_name, value.name, value.kind, highlighted)
    nested = _block_spec(value, path, highlights)
    nested.highlighted = highlighted
    return NestedSegment(nested)


def _literal_kind(value: Literal, slot_kind: str) -> str:
    if value.kind in ("menu", "color"):
        return value.kind
    if slot_kind in ("number", "string", "boolean"):
        return value.kind
    return slot_kind


def _procedure_segments(block: BlockNode, path: FragPath, highlights: Highlights) -> list[Segment]:
    proccode = ""
    arg_names: list[str] = []
    for fslot in block.fields:
        if fslot.name == "PROCCODE":
            proccode = fslot.value
        elif fslot.name.startswith("ARG"):
            arg_names.append(fslot.value)
    segments: list[Segment] = [
        TextSegment("define" if block.opcode == "procedures_definition" else "run")
    ]
    arg_index = 0
    text_run: list[str] = []
    for token in proccode.split():
        if token in _PROC_PLACEHOLDER:
            if text_run:
                segments.append(TextSegment(" ".join(text_run)))
                text_run = []
            slot_name = f"ARG{arg_index}"
            if block.opcode == "procedures_definition":
                value = arg_names[arg_index] if arg_index < len(arg_names) else ""
                segments.append(
                    SlotSegment(slot_name, value, "field", (path, slot_name) in highlights)
                )
            else:
                slot = block.input(slot_name)
                segments.append(
                    _call_arg_segment(slot_name, slot.value if slot else None, path, highlights)
                )
            arg_index += 1
        else:
            text_run.append(token)
    if text_run:
        segments.append(TextSegment(" ".join(text_run)))
    return segments


def _call_arg_segment(slot_name: str, value, path: FragPath, highlights: Highlights) -> Segment:
    highlighted = (path, slot_name) in highlights
    if value is None:
        return SlotSegment(slot_name, "", "string", highlighted)
    if isinstance(value, Literal):
        return SlotSegment(slot_name, value.text, value.kind, highlighted)
    if isinstance(value, EntityRef):
        return SlotSegment(slot_name, value.name, value.kind, highlighted)
    nested = _block_spec(value, path, highlights)
    nested.highlighted = highlighted
    return NestedSegment(nested)


def _fallback_spec(block: BlockNode) -> RenderSpec:
    parts = [f"[unknown: {block.opcode}]"]
    params = []
    for slot in block.inputs:
        params.append(f"{slot.name}={_raw_value_text(slot.value)}")
    for fslot in block.fields:
        params.append(f"{fslot.name}={fslot.value}")
    if params:
        parts.append("(" + ", ".join(params) + ")")
    segments: list[Segment] = [TextSegment(" ".join(parts))]
    for i, sub in enumerate(block.substacks):
        segments.append(
            SubstackSegment([_block_spec(b, (), set()) for b in sub.blocks])
        )
    return RenderSpec(
        shape=FALLBACK_SHAPE,
        category="unknown",
        color_hex=catalog.color_for("unknown"),
        segments=segments,
    )


def _raw_value_text(value) -> str:
    if value is None:
        return "empty"
    if isinstance(value, Literal):
        return value.text
    if isinstance(value, EntityRef):
        return value.name
    return "(" + " ".join(flatten_spec(_block_spec(value, (), set()))) + ")"


# --------------------------------------------------------------------------
# text rendering (the flattening of the spec segments)
# --------------------------------------------------------------------------


def to_text(fragment: BlockNode | BlockSeq | None) -> list[str]:
    """Scratch-style text lines for a fragment; substacks indent, C-blocks
    close with 'end'."""
    if fragment is None:
        return []
    spec = to_render_spec(fragment)
    if spec.shape == SCRIPT_SHAPE:
        lines: list[str] = []
        for segment in spec.segments:
            assert isinstance(segment, NestedSegment)
            lines.extend(spec_lines(segment.spec))
        return lines
    return spec_lines(spec)


def spec_lines(spec: RenderSpec, indent: int = 0) -> list[str]:
    """Flatten one block spec into indented text lines."""
    pad = "  " * indent
    head_tokens: list[str] = []
    lines: list[str] = []
    has_substack = False
    for segment in spec.segments:
        if isinstance(segment, SubstackSegment):
            has_substack = True
            if head_tokens:
                lines.append(pad + " ".join(head_tokens))
                head_tokens = []
            for child in segment.specs:
                lines.extend(spec_lines(child, indent + 1))
        elif isinstance(segment, TextSegment) and segment.text == "else" and has_substack:
            lines.append(pad + "else")
        else:
            head_tokens.append(_segment_token(segment))
    if head_tokens:
        lines.append(pad + " ".join(head_tokens))
    if has_substack:
        lines.append(pad + "end")
    return lines


def flatten_spec(spec: RenderSpec) -> list[str]:
    """Inline token list for a single-line spec (reporters and booleans)."""
    tokens: list[str] = []
    for segment in spec.segments:
        if isinstance(segment, SubstackSegment):
            continue
        tokens.append(_segment_token(segment))
    return tokens


def _segment_token(segment: Segment) -> str:
    if isinstance(segment, TextSegment):
        return segment.text
    if isinstance(segment, SlotSegment):
        return _bracket(segment.value, segment.kind)
    if isinstance(segment, NestedSegment):
        inner = " ".join(flatten_spec(segment.spec))
        if segment.spec.shape == catalog.BOOLEAN:
            return f"<{inner}>"
        return f"({inner})"
    return ""


def _bracket(value: str, kind: str) -> str:
    if kind in ("string", "menu", "field"):
        return f"[{value}]"
    if kind == "boolean":
        return f"<{value}>"
    return f"({value})"


def label_for_event(hat: BlockNode | None) -> str:
    """One-line label for a script trigger, e.g. 'when green flag clicked'."""
    if hat is None:
        return "a free-standing script"
    lines = to_text(hat)
    return lines[0] if lines else hat.opcode
