"""Ergonomic constructors for building projects in code.

``blk`` assigns positional arguments to catalog slots in declared order and
coerces plain Python values: numbers become number literals, strings become
string/menu literals depending on the slot, EntityRefs pass through, and
BlockNodes nest as expressions. Substacks are given via ``sub``/``sub2``.
These are used by the fixture corpus and throughout the test suite.
"""

from __future__ import annotations

from typing import Any, Iterable

from . import catalog
from .model import (
    GLOBAL_SCOPE,
    BlockNode,
    BlockSeq,
    EntityRef,
    FieldSlot,
    InputSlot,
    Literal,
    ProjectAst,
    Script,
    Target,
    walk_project_blocks,
)


def lit(value: Any) -> Literal:
    if isinstance(value, bool):
        return Literal("true" if value else "false", "string")
    if isinstance(value, (int, float)):
        return Literal(str(value), "number")
    return Literal(str(value), "string")


def menu(value: str) -> Literal:
    return Literal(value, "menu")


def color(hex_value: str) -> Literal:
    return Literal(hex_value, "color")


def var(name: str, scope: str = GLOBAL_SCOPE) -> EntityRef:
    return EntityRef("variable", name, scope)


def lst(name: str, scope: str = GLOBAL_SCOPE) -> EntityRef:
    return EntityRef("list", name, scope)


def bcast(name: str) -> EntityRef:
    return EntityRef("broadcast", name, GLOBAL_SCOPE)


def blk(
    opcode: str,
    *args: Any,
    sub: Iterable[BlockNode] | None = None,
    sub2: Iterable[BlockNode] | None = None,
) -> BlockNode:
    entry = catalog.lookup(opcode)
    node = BlockNode(opcode=opcode)
    if entry is None:
        if args:
            raise ValueError(f"unknown opcode {opcode!r} takes no positional slot values")
    else:
        slots = [s for s in entry.slots]
        if len(args) > len(slots):
            raise ValueError(f"{opcode} takes at most {len(slots)} slot values")
        for spec, value in zip(slots, args):
            if spec.kind == "field":
                node.fields.append(_coerce_field(spec, value))
            else:
                node.inputs.append(InputSlot(spec.name, _coerce_input(spec, value)))
        for spec in slots[len(args):]:
            if spec.kind != "field":
                node.inputs.append(InputSlot(spec.name, None))
    if sub is not None or sub2 is not None or (entry and entry.substack_count):
        count = entry.substack_count if entry else (2 if sub2 is not None else 1)
        stacks = [list(sub or []), list(sub2 or [])][:count] if count else []
        node.substacks = [BlockSeq(s) for s in stacks]
    return node


def _coerce_field(spec: catalog.SlotSpec, value: Any) -> FieldSlot:
    if isinstance(value, EntityRef):
        return FieldSlot(spec.name, value.name, value)
    text = str(value)
    if spec.entity:
        return FieldSlot(spec.name, text, EntityRef(spec.entity, text, GLOBAL_SCOPE))
    return FieldSlot(spec.name, text)


def _coerce_input(spec: catalog.SlotSpec, value: Any):
    if value is None or isinstance(value, (BlockNode, Literal, EntityRef)):
        if isinstance(value, str):
            pass
        return value
    if spec.kind == "menu":
        return menu(str(value))
    if spec.kind == "color":
        return color(str(value))
    if spec.kind == "broadcast":
        return bcast(str(value))
    return lit(value)


def script(hat: BlockNode | str | None, *body: BlockNode) -> Script:
    if isinstance(hat, str):
        hat = blk(hat)
    return Script(hat=hat, body=BlockSeq(list(body)))


def on_flag(*body: BlockNode) -> Script:
    return script("event_whenflagclicked", *body)


def on_receive(message: str, *body: BlockNode) -> Script:
    return script(blk("event_whenbroadcastreceived", bcast(message)), *body)


def on_key(key: str, *body: BlockNode) -> Script:
    return script(blk("event_whenkeypressed", key), *body)


def on_clone(*body: BlockNode) -> Script:
    return script("control_start_as_clone", *body)


def sprite(
    name: str,
    *scripts: Script,
    variables: dict[str, Any] | None = None,
    lists: dict[str, list] | None = None,
) -> Target:
    return Target(
        name=name,
        is_stage=False,
        scripts=list(scripts),
        variables=dict(variables or {}),
        lists={k: list(v) for k, v in (lists or {}).items()},
    )


def stage(
    *scripts: Script,
    variables: dict[str, Any] | None = None,
    lists: dict[str, list] | None = None,
) -> Target:
    return Target(
        name="Stage",
        is_stage=True,
        scripts=list(scripts),
        variables=dict(variables or {}),
        lists={k: list(v) for k, v in (lists or {}).items()},
    )


def project(*targets: Target, broadcasts: Iterable[str] = ()) -> ProjectAst:
    """Assemble a project, auto-declaring referenced broadcasts and globals."""
    target_list = list(targets)
    if not any(t.is_stage for t in target_list):
        target_list.insert(0, stage())
    ast = ProjectAst(targets=target_list, broadcasts=list(broadcasts))
    declared_vars = set()
    declared_lists = set()
    for t in target_list:
        declared_vars.update((t.name if not t.is_stage else GLOBAL_SCOPE, n) for n in t.variables)
        declared_lists.update((t.name if not t.is_stage else GLOBAL_SCOPE, n) for n in t.lists)
    stage_target = ast.stage
    for block in walk_project_blocks(ast):
        for ref in _iter_refs(block):
            if ref.kind == "broadcast" and ref.name not in ast.broadcasts:
                ast.broadcasts.append(ref.name)
            elif ref.kind == "variable":
                if (ref.scope, ref.name) not in declared_vars and (
                    GLOBAL_SCOPE,
                    ref.name,
                ) not in declared_vars:
                    stage_target.variables[ref.name] = 0
                    declared_vars.add((GLOBAL_SCOPE, ref.name))
            elif ref.kind == "list":
                if (ref.scope, ref.name) not in declared_lists and (
                    GLOBAL_SCOPE,
                    ref.name,
                ) not in declared_lists:
                    stage_target.lists[ref.name] = []
                    declared_lists.add((GLOBAL_SCOPE, ref.name))
    return ast


def _iter_refs(block: BlockNode):
    for fslot in block.fields:
        if fslot.ref is not None:
            yield fslot.ref
    for slot in block.inputs:
        if isinstance(slot.value, EntityRef):
            yield slot.value
