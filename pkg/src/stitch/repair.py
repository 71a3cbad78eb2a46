"""Synthesize and apply patches that transplant teacher fragments.

A patch is the edit for exactly one report item. Fragments are copied from
the teacher in canonical form and back-translated into the student's own
names (falling back to teacher names, with create-entity ops, when the
student has no counterpart). Ops apply left to right against the project
state produced by their predecessors; application is atomic: either every op
lands and the result passes full validation, or the student project is
untouched.

Deletion patches (extra scripts, blocks, sprites) are marked destructive so
the hint layer can say so.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field as dc_field
from typing import Any

from . import catalog
from .diff import BLOCK, EXTRA, MISSING, MODIFIED, MODULE, PARAMETER, SCRIPT, DiffItem, DiffPath
from .model import (
    GLOBAL_SCOPE,
    BlockNode,
    BlockSeq,
    EntityRef,
    FieldSlot,
    ProjectAst,
    Script,
    StitchError,
    Target,
    fragment_to_json,
    validate_project,
    walk_blocks,
)
from .normalize import NormalizedAst, denormalize_fragment, normalize
from .sb3 import load_project, serialize_project

CREATE_SPRITE = "CREATE_SPRITE"
CREATE_ENTITY = "CREATE_ENTITY"
INSERT_SCRIPT = "INSERT_SCRIPT"
INSERT_BLOCKS = "INSERT_BLOCKS"
DELETE_BLOCKS = "DELETE_BLOCKS"
DELETE_SCRIPT = "DELETE_SCRIPT"
DELETE_SPRITE = "DELETE_SPRITE"
REPLACE_SLOT = "REPLACE_SLOT"


class UnsupportedItem(StitchError):
    """No patch can be synthesized for this item (suppressed or uncertain)."""


class AnchorNotFound(StitchError):
    """The patch's location no longer exists in the student project."""


class ConflictingEntity(StitchError):
    """An entity of another kind already owns the requested name."""


@dataclass
class PatchOp:
    kind: str
    sprite: str | None = None
    path: DiffPath | None = None
    fragment: BlockSeq | None = None
    count: int = 0
    slot: str | None = None
    value: Any = None  # replacement slot value (or (text, ref) for fields)
    entity_kind: str | None = None
    entity_name: str | None = None
    entity_scope: str = GLOBAL_SCOPE
    initial: Any = 0
    target: Target | None = None
    script: Script | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "sprite": self.sprite,
            "path": self.path.to_json() if self.path else None,
            "fragment": fragment_to_json(self.fragment),
            "count": self.count,
            "slot": self.slot,
            "entity": (
                {"kind": self.entity_kind, "name": self.entity_name, "scope": self.entity_scope}
                if self.entity_kind
                else None
            ),
        }


@dataclass
class Patch:
    target_sprite: str
    ops: list[PatchOp] = dc_field(default_factory=list)
    provenance: str = ""
    report_revision: int | None = None
    destructive: bool = False

    def to_json(self) -> dict:
        return {
            "targetSprite": self.target_sprite,
            "provenance": self.provenance,
            "reportRevision": self.report_revision,
            "destructive": self.destructive,
            "ops": [op.to_json() for op in self.ops],
        }


# --------------------------------------------------------------------------
# synthesis
# --------------------------------------------------------------------------


def synthesize_patch(
    item: DiffItem,
    student: ProjectAst,
    teacher: ProjectAst,
    student_norm: NormalizedAst | None = None,
    teacher_norm: NormalizedAst | None = None,
) -> Patch:
    """Build the patch for one kept item.

    The caller may pass the normalized forms to avoid recomputation; they must
    be the same ones the report was produced from.
    """
    student_norm = student_norm or normalize(student)
    teacher_norm = teacher_norm or normalize(teacher)
    if _fragment_has_unknown(item.student_fragment) or _fragment_has_unknown(item.teacher_fragment):
        raise UnsupportedItem("item touches opcodes outside the catalog")

    sprite = item.location.sprite_name or ""
    patch = Patch(target_sprite=sprite, provenance=item.item_id())

    def translated(fragment):
        moved, missing = denormalize_fragment(
            fragment, student_norm.rename_map, teacher_norm.rename_map
        )
        for kind, scope, name in missing:
            if kind == "procedure":
                continue
            patch.ops.append(
                PatchOp(
                    kind=CREATE_ENTITY,
                    entity_kind=kind,
                    entity_name=name,
                    entity_scope=GLOBAL_SCOPE if scope == GLOBAL_SCOPE else sprite,
                    initial=_teacher_initial(teacher, kind, scope, name),
                )
            )
        return moved

    if item.level == MODULE and item.kind == MISSING:
        target = teacher_norm.project.target(sprite)
        if target is None:
            raise AnchorNotFound(f"teacher sprite {sprite!r} not found")
        patch.ops.append(PatchOp(kind=CREATE_SPRITE, target=_translate_target(target, patch, teacher, student_norm, teacher_norm)))
    elif item.level == MODULE and item.kind == EXTRA:
        patch.destructive = True
        patch.ops.append(PatchOp(kind=DELETE_SPRITE, sprite=sprite))
    elif item.level == SCRIPT and item.kind == MISSING:
        fragment = translated(item.teacher_fragment)
        patch.ops.append(PatchOp(kind=INSERT_SCRIPT, sprite=sprite, script=_script_from_fragment(fragment)))
    elif item.level == SCRIPT and item.kind == EXTRA:
        patch.destructive = True
        patch.ops.append(PatchOp(kind=DELETE_SCRIPT, sprite=sprite, path=item.location))
    elif item.level == BLOCK and item.kind == MISSING:
        fragment = translated(item.teacher_fragment)
        patch.ops.append(PatchOp(kind=INSERT_BLOCKS, sprite=sprite, path=item.location, fragment=fragment))
    elif item.level == BLOCK and item.kind == EXTRA:
        patch.destructive = True
        count = len(item.student_fragment.blocks) if isinstance(item.student_fragment, BlockSeq) else 1
        patch.ops.append(
            PatchOp(
                kind=DELETE_BLOCKS,
                sprite=sprite,
                path=item.location,
                count=count,
                fragment=translated(item.student_fragment),
            )
        )
    elif item.level == PARAMETER and item.kind == MODIFIED:
        teacher_block = translated(item.teacher_fragment)
        assert isinstance(teacher_block, BlockNode)
        for slot in item.changed_slots:
            value = _slot_value(teacher_block, slot)
            patch.ops.append(
                PatchOp(kind=REPLACE_SLOT, sprite=sprite, path=item.location, slot=slot, value=value)
            )
    else:
        raise UnsupportedItem(f"no patch strategy for {item.level}/{item.kind}")

    # create-entity ops must land before the fragment that references them
    patch.ops.sort(key=lambda op: 0 if op.kind == CREATE_ENTITY else 1)
    _dedupe_entity_ops(patch)
    return patch


def _fragment_has_unknown(fragment) -> bool:
    if fragment is None:
        return False
    blocks = [fragment] if isinstance(fragment, BlockNode) else list(fragment.blocks)
    for root in blocks:
        for block in walk_blocks(BlockSeq([root])):
            if not catalog.is_known(block.opcode):
                return True
    return False


def _teacher_initial(teacher: ProjectAst, kind: str, scope: str, name: str) -> Any:
    target = teacher.stage if scope == GLOBAL_SCOPE else teacher.target(scope)
    if target is None:
        return 0
    if kind == "variable":
        return target.variables.get(name, 0)
    if kind == "list":
        return list(target.lists.get(name, []))
    return 0


def _slot_value(block: BlockNode, slot_name: str):
    input_slot = block.input(slot_name)
    if input_slot is not None:
        return copy.deepcopy(input_slot.value)
    field_slot = block.field_(slot_name)
    if field_slot is not None:
        return (field_slot.value, copy.deepcopy(field_slot.ref))
    return None


def _script_from_fragment(fragment: BlockSeq) -> Script:
    blocks = list(fragment.blocks)
    if blocks and catalog.is_hat(blocks[0].opcode):
        return Script(hat=blocks[0], body=BlockSeq(blocks[1:]))
    return Script(hat=None, body=BlockSeq(blocks))


def _translate_target(
    target: Target,
    patch: Patch,
    teacher: ProjectAst,
    student_norm: NormalizedAst,
    teacher_norm: NormalizedAst,
) -> Target:
    """Back-translate a whole teacher sprite, declaring its locals in place
    and queueing create-entity ops for globals the student lacks."""
    teacher_rev_vars = teacher_norm.rename_map.reverse("variables")
    teacher_rev_lists = teacher_norm.rename_map.reverse("lists")
    new = Target(name=target.name, is_stage=False)
    for canonical, value in target.variables.items():
        _, original = teacher_rev_vars.get(canonical, (GLOBAL_SCOPE, canonical))
        new.variables[original] = value
    for canonical, items in target.lists.items():
        _, original = teacher_rev_lists.get(canonical, (GLOBAL_SCOPE, canonical))
        new.lists[original] = list(items)
    local_names = {("variable", n) for n in new.variables} | {("list", n) for n in new.lists}
    for script in target.scripts:
        fragment, missing = denormalize_fragment(
            script.all_blocks(), student_norm.rename_map, teacher_norm.rename_map
        )
        for kind, scope, name in missing:
            if kind == "procedure" or (kind, name) in local_names and scope != GLOBAL_SCOPE:
                continue
            patch.ops.append(
                PatchOp(
                    kind=CREATE_ENTITY,
                    entity_kind=kind,
                    entity_name=name,
                    entity_scope=GLOBAL_SCOPE,
                    initial=_teacher_initial(teacher, kind, scope, name),
                )
            )
        new.scripts.append(_script_from_fragment(fragment))
    return new


def _dedupe_entity_ops(patch: Patch) -> None:
    seen: set[tuple] = set()
    deduped: list[PatchOp] = []
    for op in patch.ops:
        if op.kind == CREATE_ENTITY:
            key = (op.entity_kind, op.entity_scope, op.entity_name)
            if key in seen:
                continue
            seen.add(key)
        deduped.append(op)
    patch.ops = deduped


# --------------------------------------------------------------------------
# application
# --------------------------------------------------------------------------


def apply_patch(student: ProjectAst, patch: Patch) -> ProjectAst:
    """Apply every op or none; the result passes full schema validation and
    re-serializes cleanly."""
    working = copy.deepcopy(student)
    for op in patch.ops:
        _apply_op(working, op)
    validate_project(working)
    _check_references(working)
    load_project(serialize_project(working))  # proves the result round-trips
    return working


def _apply_op(project: ProjectAst, op: PatchOp) -> None:
    handler = {
        CREATE_ENTITY: _op_create_entity,
        CREATE_SPRITE: _op_create_sprite,
        DELETE_SPRITE: _op_delete_sprite,
        INSERT_SCRIPT: _op_insert_script,
        DELETE_SCRIPT: _op_delete_script,
        INSERT_BLOCKS: _op_insert_blocks,
        DELETE_BLOCKS: _op_delete_blocks,
        REPLACE_SLOT: _op_replace_slot,
    }.get(op.kind)
    if handler is None:
        raise UnsupportedItem(f"unknown patch op {op.kind!r}")
    handler(project, op)


def _op_create_entity(project: ProjectAst, op: PatchOp) -> None:
    name = op.entity_name or ""
    if op.entity_kind == "broadcast":
        if name not in project.broadcasts:
            project.broadcasts.append(name)
        return
    target = (
        project.stage if op.entity_scope == GLOBAL_SCOPE else project.target(op.entity_scope)
    )
    if target is None:
        raise AnchorNotFound(f"scope {op.entity_scope!r} for new {op.entity_kind} {name!r}")
    if op.entity_kind == "variable":
        if name in target.lists:
            raise ConflictingEntity(f"{name!r} already names a list")
        target.variables.setdefault(name, op.initial if op.initial is not None else 0)
    elif op.entity_kind == "list":
        if name in target.variables:
            raise ConflictingEntity(f"{name!r} already names a variable")
        target.lists.setdefault(name, list(op.initial) if isinstance(op.initial, list) else [])
    else:
        raise UnsupportedItem(f"cannot create entity kind {op.entity_kind!r}")


def _op_create_sprite(project: ProjectAst, op: PatchOp) -> None:
    assert op.target is not None
    if project.target(op.target.name) is not None:
        raise ConflictingEntity(f"target named {op.target.name!r} already exists")
    project.targets.append(copy.deepcopy(op.target))


def _op_delete_sprite(project: ProjectAst, op: PatchOp) -> None:
    target = project.target(op.sprite or "")
    if target is None or target.is_stage:
        raise AnchorNotFound(f"sprite {op.sprite!r} not found")
    project.targets.remove(target)


def _sprite_for(project: ProjectAst, name: str | None) -> Target:
    target = project.target(name or "")
    if target is None:
        raise AnchorNotFound(f"sprite {name!r} not found")
    return target


def _script_for(target: Target, path: DiffPath | None) -> Script:
    if path is None or path.script_index is None:
        raise AnchorNotFound("patch op lacks a script anchor")
    if not (0 <= path.script_index < len(target.scripts)):
        raise AnchorNotFound(f"script index {path.script_index} out of range")
    script = target.scripts[path.script_index]
    expected = path.event_key.hat_opcode if path.event_key else None
    if expected and script.trigger.hat_opcode != expected:
        raise AnchorNotFound(
            f"script {path.script_index} now triggers on {script.trigger.hat_opcode!r}, "
            f"expected {expected!r}"
        )
    return script


def _op_insert_script(project: ProjectAst, op: PatchOp) -> None:
    target = _sprite_for(project, op.sprite)
    assert op.script is not None
    target.scripts.append(copy.deepcopy(op.script))


def _op_delete_script(project: ProjectAst, op: PatchOp) -> None:
    target = _sprite_for(project, op.sprite)
    script = _script_for(target, op.path)
    target.scripts.remove(script)


def _resolve_seq(script: Script, block_path) -> tuple[BlockSeq, int]:
    """Walk a block path to (sequence, index). Intermediate elements descend
    into substacks; the final element is a position in the returned sequence."""
    seq = script.body
    if not block_path:
        raise AnchorNotFound("empty block path")
    for i, (index, selector) in enumerate(block_path):
        last = i == len(block_path) - 1
        if last and selector is None:
            return seq, index
        if not (0 <= index < len(seq.blocks)):
            raise AnchorNotFound(f"block index {index} out of range")
        block = seq.blocks[index]
        if selector is None or not (0 <= selector < len(block.substacks)):
            raise AnchorNotFound(f"no substack {selector} at index {index}")
        seq = block.substacks[selector]
    return seq, 0


def _op_insert_blocks(project: ProjectAst, op: PatchOp) -> None:
    target = _sprite_for(project, op.sprite)
    script = _script_for(target, op.path)
    seq, index = _resolve_seq(script, op.path.block_path if op.path else None)
    if not (0 <= index <= len(seq.blocks)):
        raise AnchorNotFound(f"insert position {index} out of range")
    assert op.fragment is not None
    seq.blocks[index:index] = [copy.deepcopy(b) for b in op.fragment.blocks]


def _op_delete_blocks(project: ProjectAst, op: PatchOp) -> None:
    target = _sprite_for(project, op.sprite)
    script = _script_for(target, op.path)
    seq, index = _resolve_seq(script, op.path.block_path if op.path else None)
    if index + op.count > len(seq.blocks):
        raise AnchorNotFound(f"cannot delete {op.count} blocks at {index}")
    if op.fragment is not None:
        expected = [b.opcode for b in op.fragment.blocks]
        actual = [b.opcode for b in seq.blocks[index : index + op.count]]
        if expected != actual:
            raise AnchorNotFound(f"blocks at {index} changed since the report: {actual}")
    del seq.blocks[index : index + op.count]


def _op_replace_slot(project: ProjectAst, op: PatchOp) -> None:
    target = _sprite_for(project, op.sprite)
    script = _script_for(target, op.path)
    seq, index = _resolve_seq(script, op.path.block_path if op.path else None)
    if not (0 <= index < len(seq.blocks)):
        raise AnchorNotFound(f"block index {index} out of range")
    block = seq.blocks[index]
    input_slot = block.input(op.slot or "")
    if input_slot is not None:
        input_slot.value = copy.deepcopy(op.value)
        return
    field_slot = block.field_(op.slot or "")
    if field_slot is not None:
        if not isinstance(op.value, tuple):
            raise AnchorNotFound(f"field {op.slot!r} needs a (value, ref) replacement")
        field_slot.value, field_slot.ref = op.value[0], copy.deepcopy(op.value[1])
        return
    raise AnchorNotFound(f"block {block.opcode} has no slot {op.slot!r}")


def _check_references(project: ProjectAst) -> None:
    """Every variable/list/broadcast reference must resolve to a declaration."""
    declared: set[tuple[str, str, str]] = set()
    for target in project.targets:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        for name in target.variables:
            declared.add(("variable", scope, name))
        for name in target.lists:
            declared.add(("list", scope, name))
    for name in project.broadcasts:
        declared.add(("broadcast", GLOBAL_SCOPE, name))

    def check_ref(ref: EntityRef, scope: str) -> None:
        if ref.kind == "procedure":
            return
        if (ref.kind, ref.scope, ref.name) in declared:
            return
        if (ref.kind, GLOBAL_SCOPE, ref.name) in declared:
            return
        if (ref.kind, scope, ref.name) in declared:
            return
        raise AnchorNotFound(f"unresolved {ref.kind} reference {ref.name!r}")

    for target in project.targets:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        for script in target.scripts:
            for block in walk_blocks(script.all_blocks()):
                for fslot in block.fields:
                    if fslot.ref is not None:
                        check_ref(fslot.ref, scope)
                for slot in block.inputs:
                    if isinstance(slot.value, EntityRef):
                        check_ref(slot.value, scope)
