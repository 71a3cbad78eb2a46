"""Canonicalization: rewrite a project so equivalent variants compare equal.

Three layers, composed by ``normalize``:

* ``strip_noise`` drops workspace bookkeeping (ids, coordinates, comments,
  monitors) and canonicalizes numeric literal spellings.
* expression rewriting: boolean simplification (double negation, De Morgan
  pushed inward) to fixpoint, then commutative operand ordering under a total
  structural key.
* ``alpha_rename`` maps variables, lists, broadcasts, and procedure names to
  canonical names (v0.., l0.., b0.., p0..) in a deterministic first-use order.

Renaming and operand ordering feed each other (ordering keys read names, the
first-use walk reads operand order), so ``normalize`` iterates the pipeline to
a fixpoint; in practice it stabilizes after two rounds.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field as dc_field

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
    StitchError,
    Target,
    normalize_number_text,
)

_NAMESPACES = ("variables", "lists", "broadcasts", "procedures")
_KIND_TO_NAMESPACE = {
    "variable": "variables",
    "list": "lists",
    "broadcast": "broadcasts",
    "procedure": "procedures",
}
_CANONICAL_PREFIX = {
    "variables": "v",
    "lists": "l",
    "broadcasts": "b",
    "procedures": "p",
}

_MAX_PIPELINE_PASSES = 8


class NameCollision(StitchError):
    """Two distinct entities landed on one canonical name (renamer bug)."""


@dataclass
class RenameMap:
    """Original-to-canonical name maps, one per namespace.

    Keys are (declaring scope, original name); canonical names are unique
    project-wide within a namespace, so reverse lookup is by name alone.
    """

    variables: dict[tuple[str, str], str] = dc_field(default_factory=dict)
    lists: dict[tuple[str, str], str] = dc_field(default_factory=dict)
    broadcasts: dict[tuple[str, str], str] = dc_field(default_factory=dict)
    procedures: dict[tuple[str, str], str] = dc_field(default_factory=dict)

    def namespace(self, name: str) -> dict[tuple[str, str], str]:
        return getattr(self, name)

    def reverse(self, namespace: str) -> dict[str, tuple[str, str]]:
        return {canon: key for key, canon in self.namespace(namespace).items()}

    def is_empty(self) -> bool:
        return not any(self.namespace(ns) for ns in _NAMESPACES)


@dataclass
class NormalizedAst:
    project: ProjectAst
    rename_map: RenameMap

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NormalizedAst):
            return NotImplemented
        return self.project == other.project


# --------------------------------------------------------------------------
# noise stripping
# --------------------------------------------------------------------------


def strip_noise(ast: ProjectAst) -> ProjectAst:
    """Comparable form: no ids/coordinates/comments/monitors, canonical numbers."""
    out = ProjectAst(
        targets=[_strip_target(t) for t in ast.targets],
        broadcasts=list(ast.broadcasts),
        monitors_ignored=True,
    )
    return out


def _strip_target(target: Target) -> Target:
    return Target(
        name=target.name,
        is_stage=target.is_stage,
        scripts=[Script(hat=_strip_opt_block(s.hat), body=_strip_seq(s.body)) for s in target.scripts],
        variables=dict(target.variables),
        lists={name: list(items) for name, items in target.lists.items()},
    )


def _strip_opt_block(block: BlockNode | None) -> BlockNode | None:
    return None if block is None else _strip_block(block)


def _strip_block(block: BlockNode) -> BlockNode:
    return BlockNode(
        opcode=block.opcode,
        inputs=[InputSlot(s.name, _strip_value(s.value)) for s in block.inputs],
        fields=[FieldSlot(f.name, f.value, f.ref) for f in block.fields],
        substacks=[_strip_seq(s) for s in block.substacks],
    )


def _strip_seq(seq: BlockSeq) -> BlockSeq:
    return BlockSeq([_strip_block(b) for b in seq.blocks])


def _strip_value(value):
    if value is None or isinstance(value, EntityRef):
        return value
    if isinstance(value, Literal):
        if value.kind in ("menu", "color"):
            return Literal(value.text, value.kind)
        canonical = normalize_number_text(value.text)
        if canonical != value.text or value.kind != "number":
            if canonical != value.text:
                return Literal(canonical, "number")
            # numeric-looking strings compare as numbers regardless of wire tag
            if normalize_number_text(value.text) == value.text and _is_numeric(value.text):
                return Literal(value.text, "number")
            return Literal(value.text, value.kind)
        return Literal(canonical, "number")
    return _strip_block(value)


def _is_numeric(text: str) -> bool:
    try:
        float(text.strip())
        return True
    except (ValueError, OverflowError):
        return False


# --------------------------------------------------------------------------
# expression rewriting
# --------------------------------------------------------------------------


def structural_key(value) -> tuple:
    """Total deterministic order over slot values: empties, then literals by
    numeric-normalized text, then entity refs, then expressions recursively."""
    if value is None:
        return ("0",)
    if isinstance(value, Literal):
        return ("1", normalize_number_text(value.text))
    if isinstance(value, EntityRef):
        return ("2", value.kind, value.name)
    key: tuple = ("3", value.opcode)
    key += tuple(f.value for f in value.fields)
    key += tuple(structural_key(s.value) for s in value.inputs)
    return key


def canonical_order(expr: BlockNode) -> BlockNode:
    """Sort operands of commutative operators by structural key, bottom-up."""
    result = _order_value(expr)
    return result if isinstance(result, BlockNode) else expr


def _order_value(value):
    if not isinstance(value, BlockNode):
        return value
    node = BlockNode(
        opcode=value.opcode,
        inputs=[InputSlot(s.name, _order_value(s.value)) for s in value.inputs],
        fields=list(value.fields),
        substacks=value.substacks,
        meta=value.meta,
    )
    slots = catalog.COMMUTATIVE_OPCODES.get(node.opcode)
    if slots:
        first, second = node.input(slots[0]), node.input(slots[1])
        if first is not None and second is not None:
            if structural_key(second.value) < structural_key(first.value):
                first.value, second.value = second.value, first.value
    return node


def algebraic_rewrite(expr: BlockNode) -> BlockNode:
    """Boolean canonical form: eliminate double negation, push De Morgan inward.

    Each rule strictly reduces negation depth, so the fixpoint loop terminates
    well inside the (node count x 2) pass bound.
    """
    current = expr
    cap = expr.block_count() * 2 + 2
    for _ in range(cap):
        rewritten, changed = _rewrite_value(current)
        if not isinstance(rewritten, BlockNode):
            return rewritten  # type: ignore[return-value]  # degenerate not(not <empty>)
        current = rewritten
        if not changed:
            break
    return current


def _rewrite_value(value):
    if not isinstance(value, BlockNode):
        return value, False
    changed = False
    new_inputs = []
    for slot in value.inputs:
        new_value, child_changed = _rewrite_value(slot.value)
        changed = changed or child_changed
        new_inputs.append(InputSlot(slot.name, new_value))
    node = BlockNode(
        opcode=value.opcode,
        inputs=new_inputs,
        fields=list(value.fields),
        substacks=value.substacks,
        meta=value.meta,
    )
    rewritten = _apply_boolean_rules(node)
    return rewritten, changed or (rewritten is not node)


def _apply_boolean_rules(node: BlockNode):
    if node.opcode != "operator_not":
        return node
    slot = node.input("OPERAND")
    operand = slot.value if slot else None
    if isinstance(operand, BlockNode):
        if operand.opcode == "operator_not":
            inner_slot = operand.input("OPERAND")
            return inner_slot.value if inner_slot else None
        if operand.opcode in ("operator_and", "operator_or"):
            dual = "operator_or" if operand.opcode == "operator_and" else "operator_and"
            left = operand.input("OPERAND1")
            right = operand.input("OPERAND2")
            return BlockNode(
                opcode=dual,
                inputs=[
                    InputSlot("OPERAND1", _negate(left.value if left else None)),
                    InputSlot("OPERAND2", _negate(right.value if right else None)),
                ],
            )
    return node


def _negate(value) -> BlockNode:
    return BlockNode(opcode="operator_not", inputs=[InputSlot("OPERAND", value)])


def rewrite_expressions(ast: ProjectAst) -> ProjectAst:
    """Apply boolean rewriting (to fixpoint) then commutative ordering to
    every expression in the project."""

    def fix(value):
        if not isinstance(value, BlockNode):
            return value
        current = value
        for _ in range(current.block_count() * 2 + 2):
            rewritten, changed = _rewrite_value(current)
            if not isinstance(rewritten, BlockNode):
                return rewritten
            current = rewritten
            if not changed:
                break
        return _order_value(current)

    out = copy.deepcopy(ast)
    for target in out.targets:
        for script in target.scripts:
            if script.hat is not None:
                _rewrite_block_slots(script.hat, fix)
            for block in _iter_statements(script.body):
                _rewrite_block_slots(block, fix)
    return out


def _iter_statements(seq: BlockSeq):
    for block in seq.blocks:
        yield block
        for sub in block.substacks:
            yield from _iter_statements(sub)


def rewrite_fragment(fragment):
    """The expression-level pass (boolean rewrites + operand ordering) applied
    to a lone fragment; used to re-check near-identical diff fragments."""

    def fix(value):
        if not isinstance(value, BlockNode):
            return value
        current = value
        for _ in range(current.block_count() * 2 + 2):
            rewritten, changed = _rewrite_value(current)
            if not isinstance(rewritten, BlockNode):
                return rewritten
            current = rewritten
            if not changed:
                break
        return _order_value(current)

    if fragment is None:
        return None
    if isinstance(fragment, BlockNode):
        seq = BlockSeq([copy.deepcopy(fragment)])
        for block in _iter_statements(seq):
            _rewrite_block_slots(block, fix)
        return seq.blocks[0]
    seq = copy.deepcopy(fragment)
    for block in _iter_statements(seq):
        _rewrite_block_slots(block, fix)
    return seq


def _rewrite_block_slots(block: BlockNode, fix) -> None:
    for slot in block.inputs:
        slot.value = fix(slot.value)


# --------------------------------------------------------------------------
# alpha renaming
# --------------------------------------------------------------------------


class _Renamer:
    def __init__(self, ast: ProjectAst):
        self.ast = ast
        # declared entity keys: (namespace, scope, name)
        self.declared: set[tuple[str, str, str]] = set()
        self.by_name: dict[tuple[str, str], list[tuple[str, str, str]]] = {}
        self.assigned: dict[tuple[str, str, str], str] = {}
        self.counters = {ns: 0 for ns in _NAMESPACES}
        self._collect_declarations()

    def _collect_declarations(self) -> None:
        for target in self.ast.targets:
            scope = GLOBAL_SCOPE if target.is_stage else target.name
            for name in target.variables:
                self._declare("variables", scope, name)
            for name in target.lists:
                self._declare("lists", scope, name)
            for script in target.scripts:
                if script.hat is not None and script.hat.opcode == "procedures_definition":
                    proc = script.hat.field_("PROCCODE")
                    if proc is not None:
                        self._declare("procedures", target.name, proc.value)
        for name in self.ast.broadcast_names():
            self._declare("broadcasts", GLOBAL_SCOPE, name)

    def _declare(self, namespace: str, scope: str, name: str) -> None:
        key = (namespace, scope, name)
        self.declared.add(key)
        self.by_name.setdefault((namespace, name), []).append(key)

    def resolve(self, namespace: str, scope: str, name: str) -> tuple[str, str, str]:
        """Identity of a reference: exact scope, then global, then unique name."""
        if (namespace, scope, name) in self.declared:
            return (namespace, scope, name)
        if (namespace, GLOBAL_SCOPE, name) in self.declared:
            return (namespace, GLOBAL_SCOPE, name)
        candidates = self.by_name.get((namespace, name), [])
        if len(candidates) == 1:
            return candidates[0]
        return (namespace, scope, name)

    def assign(self, key: tuple[str, str, str]) -> str:
        if key not in self.assigned:
            namespace = key[0]
            if namespace == "procedures":
                canonical = self._canonical_proccode(key[2])
            else:
                canonical = f"{_CANONICAL_PREFIX[namespace]}{self.counters[namespace]}"
            self.counters[namespace] += 1
            self.assigned[key] = canonical
        return self.assigned[key]

    def _canonical_proccode(self, proccode: str) -> str:
        placeholders = [tok for tok in proccode.split() if tok in ("%s", "%n", "%b")]
        head = f"p{self.counters['procedures']}"
        return " ".join([head] + placeholders)

    # -- walk ---------------------------------------------------------------

    def run(self) -> tuple[ProjectAst, RenameMap]:
        for target in self._walk_targets():
            for script in self._walk_scripts(target):
                self._visit_script(target, script)
        self._assign_unreferenced()
        self._check_collisions()
        project = self._rewrite()
        rename_map = RenameMap()
        for (namespace, scope, name), canonical in self.assigned.items():
            rename_map.namespace(namespace)[(scope, name)] = canonical
        return project, rename_map

    def _walk_targets(self) -> list[Target]:
        stage = [t for t in self.ast.targets if t.is_stage]
        sprites = sorted((t for t in self.ast.targets if not t.is_stage), key=lambda t: t.name)
        return stage + sprites

    def _walk_scripts(self, target: Target) -> list[Script]:
        # Name-blind structural ordering keeps the walk stable across renames
        # of the very entities being canonicalized; original trigger text only
        # breaks ties between structurally identical scripts.
        indexed = list(enumerate(target.scripts))
        indexed.sort(
            key=lambda pair: (
                _script_walk_key(pair[1]),
                pair[1].trigger.sort_key(),
                pair[0],
            )
        )
        return [script for _, script in indexed]

    def _visit_script(self, target: Target, script: Script) -> None:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        if script.hat is not None:
            self._visit_block(script.hat, scope)
        for block in _iter_statements(script.body):
            self._visit_block(block, scope)

    def _visit_block(self, block: BlockNode, scope: str) -> None:
        for fslot in block.fields:
            if fslot.ref is not None:
                namespace = _KIND_TO_NAMESPACE[fslot.ref.kind]
                self.assign(self.resolve(namespace, _ref_scope(fslot.ref, scope), fslot.ref.name))
        for slot in block.inputs:
            self._visit_value(slot.value, scope)

    def _visit_value(self, value, scope: str) -> None:
        if isinstance(value, EntityRef):
            namespace = _KIND_TO_NAMESPACE[value.kind]
            self.assign(self.resolve(namespace, value.scope, value.name))
        elif isinstance(value, BlockNode):
            self._visit_block(value, scope)

    def _assign_unreferenced(self) -> None:
        for target in self._walk_targets():
            scope = GLOBAL_SCOPE if target.is_stage else target.name
            for name in sorted(target.variables):
                self.assign(("variables", scope, name))
            for name in sorted(target.lists):
                self.assign(("lists", scope, name))
        for name in sorted(self.ast.broadcast_names()):
            self.assign(("broadcasts", GLOBAL_SCOPE, name))

    def _check_collisions(self) -> None:
        for namespace in _NAMESPACES:
            seen: dict[str, tuple[str, str, str]] = {}
            for key, canonical in self.assigned.items():
                if key[0] != namespace:
                    continue
                if canonical in seen and seen[canonical] != key:
                    raise NameCollision(
                        f"{namespace}: {seen[canonical]} and {key} both map to {canonical!r}"
                    )
                seen[canonical] = key

    # -- rewriting ------------------------------------------------------------

    def canonical_for(self, kind: str, scope: str, name: str) -> str:
        namespace = _KIND_TO_NAMESPACE[kind]
        key = self.resolve(namespace, scope, name)
        return self.assigned.get(key, name)

    def _rewrite(self) -> ProjectAst:
        out = ProjectAst(monitors_ignored=True)
        for target in self.ast.targets:
            out.targets.append(self._rewrite_target(target))
        out.broadcasts = sorted(
            self.canonical_for("broadcast", GLOBAL_SCOPE, name)
            for name in self.ast.broadcast_names()
        )
        return out

    def _rewrite_target(self, target: Target) -> Target:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        new = Target(name=target.name, is_stage=target.is_stage)
        for name, value in sorted(target.variables.items()):
            new.variables[self.canonical_for("variable", scope, name)] = value
        for name, items in sorted(target.lists.items()):
            new.lists[self.canonical_for("list", scope, name)] = list(items)
        for script in target.scripts:
            arg_map = _definition_arg_map(script)
            new.scripts.append(
                Script(
                    hat=(
                        self._rewrite_block(script.hat, scope, arg_map)
                        if script.hat is not None
                        else None
                    ),
                    body=self._rewrite_seq(script.body, scope, arg_map),
                )
            )
        return new

    def _rewrite_seq(self, seq: BlockSeq, scope: str, arg_map: dict[str, str]) -> BlockSeq:
        return BlockSeq([self._rewrite_block(b, scope, arg_map) for b in seq.blocks])

    def _rewrite_block(self, block: BlockNode, scope: str, arg_map: dict[str, str]) -> BlockNode:
        new_fields = []
        arg_index = 0
        for fslot in block.fields:
            if fslot.ref is not None:
                canonical = self.canonical_for(
                    fslot.ref.kind, _ref_scope(fslot.ref, scope), fslot.ref.name
                )
                new_fields.append(
                    FieldSlot(fslot.name, canonical, EntityRef(fslot.ref.kind, canonical))
                )
            elif block.opcode == "procedures_definition" and fslot.name.startswith("ARG"):
                new_fields.append(FieldSlot(fslot.name, f"a{arg_index}"))
                arg_index += 1
            elif block.opcode.startswith("argument_reporter") and fslot.name == "VALUE":
                new_fields.append(FieldSlot(fslot.name, arg_map.get(fslot.value, fslot.value)))
            else:
                new_fields.append(FieldSlot(fslot.name, fslot.value))
        return BlockNode(
            opcode=block.opcode,
            inputs=[
                InputSlot(s.name, self._rewrite_value(s.value, scope, arg_map))
                for s in block.inputs
            ],
            fields=new_fields,
            substacks=[self._rewrite_seq(s, scope, arg_map) for s in block.substacks],
        )

    def _rewrite_value(self, value, scope: str, arg_map: dict[str, str]):
        if isinstance(value, EntityRef):
            canonical = self.canonical_for(value.kind, value.scope, value.name)
            return EntityRef(value.kind, canonical)
        if isinstance(value, BlockNode):
            return self._rewrite_block(value, scope, arg_map)
        return value


def _ref_scope(ref: EntityRef, enclosing: str) -> str:
    # procedures are target-local; hand-built refs may omit the scope
    if ref.kind == "procedure" and not ref.scope:
        return enclosing
    return ref.scope


def _definition_arg_map(script: Script) -> dict[str, str]:
    if script.hat is None or script.hat.opcode != "procedures_definition":
        return {}
    args = [f.value for f in script.hat.fields if f.name.startswith("ARG")]
    return {name: f"a{i}" for i, name in enumerate(args)}


def _script_walk_key(script: Script) -> tuple:
    hat_part: tuple = (script.trigger.hat_opcode,)
    if script.hat is not None:
        hat_part += (_blind_fingerprint_block(script.hat),)
    return hat_part + tuple(_blind_fingerprint_block(b) for b in script.body.blocks)


def _blind_fingerprint_block(block: BlockNode) -> tuple:
    fields = tuple(
        f"<{f.ref.kind}>" if f.ref is not None else f.value for f in block.fields
    )
    inputs = tuple(_blind_fingerprint_value(s.value) for s in block.inputs)
    subs = tuple(
        tuple(_blind_fingerprint_block(b) for b in sub.blocks) for sub in block.substacks
    )
    return (block.opcode, fields, inputs, subs)


def _blind_fingerprint_value(value) -> tuple:
    if value is None:
        return ("0",)
    if isinstance(value, Literal):
        return ("1", normalize_number_text(value.text))
    if isinstance(value, EntityRef):
        return ("2", value.kind)
    return ("3",) + _blind_fingerprint_block(value)


def alpha_rename(ast: ProjectAst) -> NormalizedAst:
    """Canonical entity names in deterministic first-use order."""
    project, rename_map = _Renamer(ast).run()
    return NormalizedAst(project, rename_map)


# --------------------------------------------------------------------------
# the full pipeline
# --------------------------------------------------------------------------


def normalize(ast: ProjectAst) -> NormalizedAst:
    """strip_noise + expression rewriting + alpha renaming, to a fixpoint."""
    current = strip_noise(ast)
    combined: RenameMap | None = None
    result = current
    for _ in range(_MAX_PIPELINE_PASSES):
        rewritten = rewrite_expressions(current)
        renamed = alpha_rename(rewritten)
        combined = _compose_maps(combined, renamed.rename_map)
        result = renamed.project
        if result == current:
            break
        current = result
    return NormalizedAst(result, combined or RenameMap())


def _compose_maps(first: RenameMap | None, second: RenameMap) -> RenameMap:
    if first is None or first.is_empty():
        return second
    out = RenameMap()
    for namespace in _NAMESPACES:
        second_by_name = {key[1]: canon for key, canon in second.namespace(namespace).items()}
        composed = out.namespace(namespace)
        for key, canonical in first.namespace(namespace).items():
            composed[key] = second_by_name.get(canonical, canonical)
    return out


def denormalize_fragment(fragment, primary: RenameMap, fallback: RenameMap | None = None):
    """Translate canonical names in a fragment back to original names.

    Uses the primary map's originals where the entity exists there, otherwise
    the fallback's (e.g. teacher names for entities the student lacks).
    Returns the rewritten fragment plus the (kind, scope, name) entities that
    only resolved through the fallback.
    """
    reverse: dict[tuple[str, str], tuple[str, str]] = {}
    fallback_only: list[tuple[str, str, str]] = []
    for namespace in _NAMESPACES:
        kind = [k for k, ns in _KIND_TO_NAMESPACE.items() if ns == namespace][0]
        primary_rev = primary.reverse(namespace)
        fallback_rev = fallback.reverse(namespace) if fallback else {}
        for canonical in set(primary_rev) | set(fallback_rev):
            if canonical in primary_rev:
                reverse[(kind, canonical)] = primary_rev[canonical]
            else:
                reverse[(kind, canonical)] = fallback_rev[canonical]

    missing: list[tuple[str, str, str]] = []

    def translate_ref(kind: str, name: str) -> tuple[str, str]:
        hit = reverse.get((kind, name))
        if hit is None:
            return (GLOBAL_SCOPE, name)
        namespace = _KIND_TO_NAMESPACE[kind]
        if fallback and name not in primary.reverse(namespace):
            entity = (kind, hit[0], hit[1])
            if entity not in missing:
                missing.append(entity)
        return hit

    def walk_value(value):
        if isinstance(value, EntityRef):
            scope, name = translate_ref(value.kind, value.name)
            return EntityRef(value.kind, name, scope)
        if isinstance(value, BlockNode):
            return walk_block(value)
        return value

    def walk_block(block: BlockNode) -> BlockNode:
        fields = []
        for fslot in block.fields:
            if fslot.ref is not None:
                scope, name = translate_ref(fslot.ref.kind, fslot.ref.name)
                fields.append(FieldSlot(fslot.name, name, EntityRef(fslot.ref.kind, name, scope)))
            else:
                fields.append(FieldSlot(fslot.name, fslot.value))
        return BlockNode(
            opcode=block.opcode,
            inputs=[InputSlot(s.name, walk_value(s.value)) for s in block.inputs],
            fields=fields,
            substacks=[BlockSeq([walk_block(b) for b in sub.blocks]) for sub in block.substacks],
        )

    if fragment is None:
        return None, []
    if isinstance(fragment, BlockNode):
        return walk_block(fragment), missing
    if isinstance(fragment, BlockSeq):
        return BlockSeq([walk_block(b) for b in fragment.blocks]), missing
    return walk_value(fragment), missing
