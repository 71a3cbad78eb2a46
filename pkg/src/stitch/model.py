"""In-memory model of a Scratch project.

A project is a flat-file zip container whose core document describes targets
(one stage plus sprites), each owning variables, lists and a flat block table.
Here the block table is already resolved into scripts: ordered block sequences
rooted at a hat block (or HEADLESS for free-floating stacks).

Everything that is workspace bookkeeping rather than program structure
(block ids, x/y coordinates, comments, monitors, costumes, sounds) lives in
``meta`` dicts, which are excluded from equality. Structural equality of two
model objects therefore means "same program", not "same file".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Union

HEADLESS = "HEADLESS"

GLOBAL_SCOPE = ""


class StitchError(Exception):
    """Base class for all engine errors."""


class MalformedContainer(StitchError):
    """Input is not a zip container or has no project document entry."""


class MalformedDocument(StitchError):
    """Project document text is not parseable."""


class SchemaViolation(StitchError):
    """Project document violates the structural schema.

    ``block_id`` names the offending block when one can be identified.
    """

    def __init__(self, message: str, block_id: str | None = None):
        super().__init__(message)
        self.block_id = block_id


@dataclass(frozen=True)
class Literal:
    """A literal slot value: number, string, color, or collapsed menu choice."""

    text: str
    kind: str = "string"  # number | string | color | menu


@dataclass(frozen=True)
class EntityRef:
    """Reference to a named entity: variable, list, broadcast, or procedure.

    ``scope`` is the declaring target's name, or GLOBAL_SCOPE for stage-owned
    (global) entities. Canonicalized projects erase scope because canonical
    names are unique project-wide.
    """

    kind: str  # variable | list | broadcast | procedure
    name: str
    scope: str = GLOBAL_SCOPE


SlotValue = Union[Literal, EntityRef, "BlockNode", None]


@dataclass
class InputSlot:
    """A named input socket: literal, nested expression, entity ref, or empty."""

    name: str
    value: SlotValue = None


@dataclass
class FieldSlot:
    """A named dropdown field. ``ref`` is set when the value names an entity."""

    name: str
    value: str
    ref: EntityRef | None = None


@dataclass(frozen=True, order=True)
class EventKey:
    """What makes a script fire: hat opcode plus its distinguishing options."""

    hat_opcode: str
    discriminator: str | None = None

    def sort_key(self) -> tuple[str, str]:
        return (self.hat_opcode, self.discriminator or "")

    def is_headless(self) -> bool:
        return self.hat_opcode == HEADLESS


@dataclass
class BlockNode:
    opcode: str
    inputs: list[InputSlot] = field(default_factory=list)
    fields: list[FieldSlot] = field(default_factory=list)
    substacks: list["BlockSeq"] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def input(self, name: str) -> InputSlot | None:
        for slot in self.inputs:
            if slot.name == name:
                return slot
        return None

    def field_(self, name: str) -> FieldSlot | None:
        for slot in self.fields:
            if slot.name == name:
                return slot
        return None

    def block_count(self) -> int:
        """Number of statement blocks rooted here, substacks included."""
        return 1 + sum(s.block_count() for s in self.substacks)


@dataclass
class BlockSeq:
    blocks: list[BlockNode] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[BlockNode]:
        return iter(self.blocks)

    def block_count(self) -> int:
        return sum(b.block_count() for b in self.blocks)


@dataclass
class Script:
    """A hat block plus the stack it triggers; hat is None for HEADLESS stacks."""

    hat: BlockNode | None
    body: BlockSeq
    meta: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @property
    def trigger(self) -> EventKey:
        if self.hat is None:
            return EventKey(HEADLESS)
        return event_key_of(self.hat)

    def all_blocks(self) -> BlockSeq:
        """Hat (when present) followed by the body, for rendering whole scripts."""
        blocks = list(self.body.blocks)
        if self.hat is not None:
            blocks = [self.hat] + blocks
        return BlockSeq(blocks)


def event_key_of(hat: BlockNode) -> EventKey:
    """Derive the matching key for a hat block.

    The discriminator folds in every option that selects *which* event fires:
    dropdown fields (broadcast name, key, backdrop) and literal hat inputs.
    It is recomputed on demand so renamed entities feed through.
    """
    parts: list[str] = []
    for f in hat.fields:
        parts.append(f.value)
    for slot in hat.inputs:
        if isinstance(slot.value, Literal):
            parts.append(slot.value.text)
        elif isinstance(slot.value, EntityRef):
            parts.append(slot.value.name)
    return EventKey(hat.opcode, " ".join(parts) if parts else None)


@dataclass
class Target:
    """A stage or sprite: scripts plus its variable and list declarations.

    Declarations are keyed by name (unique within a target); source ids are
    workspace metadata and regenerate on serialization.
    """

    name: str
    is_stage: bool = False
    scripts: list[Script] = field(default_factory=list)
    variables: dict[str, Any] = field(default_factory=dict)  # name -> initial value
    lists: dict[str, list[Any]] = field(default_factory=dict)  # name -> initial items
    meta: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def variable_names(self) -> list[str]:
        return list(self.variables)

    def list_names(self) -> list[str]:
        return list(self.lists)


@dataclass
class ProjectAst:
    targets: list[Target] = field(default_factory=list)
    broadcasts: list[str] = field(default_factory=list)  # declared message names
    monitors_ignored: bool = True
    meta: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    @property
    def stage(self) -> Target:
        for t in self.targets:
            if t.is_stage:
                return t
        raise SchemaViolation("project has no stage target")

    @property
    def sprites(self) -> list[Target]:
        return [t for t in self.targets if not t.is_stage]

    def target(self, name: str) -> Target | None:
        for t in self.targets:
            if t.name == name:
                return t
        return None

    def broadcast_names(self) -> list[str]:
        return list(self.broadcasts)


def walk_blocks(seq: BlockSeq) -> Iterator[BlockNode]:
    """Yield every block in a sequence, nested expressions and substacks included."""
    for block in seq.blocks:
        yield from _walk_block(block)


def _walk_block(block: BlockNode) -> Iterator[BlockNode]:
    yield block
    for slot in block.inputs:
        if isinstance(slot.value, BlockNode):
            yield from _walk_block(slot.value)
    for sub in block.substacks:
        yield from walk_blocks(sub)


def walk_project_blocks(ast: ProjectAst) -> Iterator[BlockNode]:
    for target in ast.targets:
        for script in target.scripts:
            if script.hat is not None:
                yield from _walk_block(script.hat)
            yield from walk_blocks(script.body)


def validate_project(ast: ProjectAst) -> None:
    """Check the model invariants, raising SchemaViolation on the first break."""
    from . import catalog  # local import: catalog depends on model types

    stages = [t for t in ast.targets if t.is_stage]
    if len(stages) != 1:
        raise SchemaViolation(f"project must have exactly one stage, found {len(stages)}")
    names = [t.name for t in ast.targets]
    if len(set(names)) != len(names):
        dup = sorted({n for n in names if names.count(n) > 1})
        raise SchemaViolation(f"duplicate target names: {dup}")
    for target in ast.targets:
        var_names = target.variable_names()
        if len(set(var_names)) != len(var_names):
            raise SchemaViolation(f"duplicate variable names in target {target.name!r}")
        list_names = target.list_names()
        if len(set(list_names)) != len(list_names):
            raise SchemaViolation(f"duplicate list names in target {target.name!r}")
    for block in walk_project_blocks(ast):
        entry = catalog.lookup(block.opcode)
        if entry is None:
            continue
        if block.opcode.startswith(("procedures_", "argument_")):
            continue  # custom blocks carry caller-defined slot arity
        allowed_inputs = entry.input_names() | {"CONDITION"}
        for slot in block.inputs:
            if slot.name not in allowed_inputs:
                raise SchemaViolation(
                    f"unexpected input {slot.name!r} on {block.opcode}",
                    block_id=block.meta.get("id"),
                )
        allowed_fields = entry.field_names()
        for fslot in block.fields:
            if fslot.name not in allowed_fields:
                raise SchemaViolation(
                    f"unexpected field {fslot.name!r} on {block.opcode}",
                    block_id=block.meta.get("id"),
                )
        if len(block.substacks) > entry.substack_count:
            raise SchemaViolation(
                f"too many substacks on {block.opcode}",
                block_id=block.meta.get("id"),
            )


def normalize_number_text(text: str) -> str:
    """Canonical spelling for numeric literals: '3.0' and '03' both become '3'."""
    stripped = text.strip()
    try:
        value = float(stripped)
    except (ValueError, OverflowError):
        return text
    if value != value or value in (float("inf"), float("-inf")):
        return text
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


# -- JSON views of fragments (shared by diff reports, hints, and patches) -----


def slot_value_to_json(value: SlotValue) -> Any:
    if value is None:
        return None
    if isinstance(value, Literal):
        return {"literal": value.text, "kind": value.kind}
    if isinstance(value, EntityRef):
        return {"ref": {"kind": value.kind, "name": value.name, "scope": value.scope}}
    return {"block": block_to_json(value)}


def block_to_json(block: BlockNode) -> dict[str, Any]:
    return {
        "opcode": block.opcode,
        "inputs": [
            {"name": s.name, "value": slot_value_to_json(s.value)} for s in block.inputs
        ],
        "fields": [
            {
                "name": f.name,
                "value": f.value,
                "ref": (
                    {"kind": f.ref.kind, "name": f.ref.name, "scope": f.ref.scope}
                    if f.ref
                    else None
                ),
            }
            for f in block.fields
        ],
        "substacks": [seq_to_json(s) for s in block.substacks],
    }


def seq_to_json(seq: BlockSeq) -> list[dict[str, Any]]:
    return [block_to_json(b) for b in seq.blocks]


def fragment_to_json(fragment: Union[BlockNode, BlockSeq, None]) -> Any:
    if fragment is None:
        return None
    if isinstance(fragment, BlockNode):
        return {"block": block_to_json(fragment)}
    return {"blocks": seq_to_json(fragment)}
