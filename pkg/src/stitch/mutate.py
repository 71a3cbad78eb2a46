"""Project mutators for fixtures and property tests.

The equivalence-preserving family (rename, commute, boolean rewrites, noise)
produces variants that must compare clean against the original; the
structural family makes arbitrary edits and is used to fuzz invariants that
must hold for any project (e.g. normalization idempotence).
"""

from __future__ import annotations

import copy
import random

from . import catalog
from .build import blk, lit, var
from .model import (
    GLOBAL_SCOPE,
    BlockNode,
    BlockSeq,
    EntityRef,
    InputSlot,
    Literal,
    ProjectAst,
)

_WORDS = (
    "sunny", "crimson", "mighty", "pixel", "turbo", "cosmic", "bouncy",
    "fuzzy", "silver", "lucky", "rapid", "gentle", "neon", "hidden",
)


def _iter_statement_blocks(ast: ProjectAst):
    def walk_seq(seq: BlockSeq):
        for block in seq.blocks:
            yield block
            for sub in block.substacks:
                yield from walk_seq(sub)

    for target in ast.targets:
        for script in target.scripts:
            if script.hat is not None:
                yield script.hat
            yield from walk_seq(script.body)


def _iter_expression_slots(ast: ProjectAst):
    """Every input slot across the project, nested expression slots included."""

    def walk_block(block: BlockNode):
        for slot in block.inputs:
            yield slot
            if isinstance(slot.value, BlockNode):
                yield from walk_block(slot.value)

    for block in _iter_statement_blocks(ast):
        yield from walk_block(block)


# --------------------------------------------------------------------------
# equivalence-preserving mutators
# --------------------------------------------------------------------------


def rename_entities(ast: ProjectAst, rng: random.Random) -> ProjectAst:
    """Consistently rename every variable, list, and broadcast."""
    out = copy.deepcopy(ast)
    mapping: dict[tuple[str, str, str], str] = {}
    taken: set[tuple[str, str]] = set()

    def fresh(kind: str, scope: str, name: str) -> str:
        key = (kind, scope, name)
        if key not in mapping:
            while True:
                candidate = f"{rng.choice(_WORDS)}_{rng.choice(_WORDS)}"
                if (kind, candidate) not in taken:
                    taken.add((kind, candidate))
                    mapping[key] = candidate
                    break
        return mapping[key]

    declared: set[tuple[str, str, str]] = set()
    for target in out.targets:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        for name in target.variables:
            declared.add(("variable", scope, name))
        for name in target.lists:
            declared.add(("list", scope, name))
    for name in out.broadcasts:
        declared.add(("broadcast", GLOBAL_SCOPE, name))

    def resolved(kind: str, scope: str, name: str) -> tuple[str, str, str]:
        if (kind, scope, name) in declared:
            return (kind, scope, name)
        return (kind, GLOBAL_SCOPE, name)

    for target in out.targets:
        scope = GLOBAL_SCOPE if target.is_stage else target.name
        target.variables = {
            fresh("variable", scope, name): value for name, value in target.variables.items()
        }
        target.lists = {fresh("list", scope, name): items for name, items in target.lists.items()}
    out.broadcasts = [fresh("broadcast", GLOBAL_SCOPE, name) for name in out.broadcasts]

    for block in _iter_statement_blocks(out):
        for fslot in block.fields:
            if fslot.ref is not None and fslot.ref.kind in ("variable", "list", "broadcast"):
                kind, scope, name = resolved(fslot.ref.kind, fslot.ref.scope, fslot.ref.name)
                new_name = fresh(kind, scope, name)
                fslot.value = new_name
                fslot.ref = EntityRef(kind, new_name, fslot.ref.scope)
    for slot in _iter_expression_slots(out):
        value = slot.value
        if isinstance(value, EntityRef) and value.kind in ("variable", "list", "broadcast"):
            kind, scope, name = resolved(value.kind, value.scope, value.name)
            slot.value = EntityRef(kind, fresh(kind, scope, name), value.scope)
    return out


def commute_operands(ast: ProjectAst, rng: random.Random) -> ProjectAst:
    """Swap operands of commutative operators at random."""
    out = copy.deepcopy(ast)
    for slot in _iter_expression_slots(out):
        node = slot.value
        if not isinstance(node, BlockNode):
            continue
        names = catalog.COMMUTATIVE_OPCODES.get(node.opcode)
        if names and rng.random() < 0.7:
            first, second = node.input(names[0]), node.input(names[1])
            if first is not None and second is not None:
                first.value, second.value = second.value, first.value
    return out


def rewrite_booleans(ast: ProjectAst, rng: random.Random) -> ProjectAst:
    """Equivalent boolean reshaping: fold De Morgan forms and add double
    negations; normalization must undo all of it."""
    out = copy.deepcopy(ast)
    # snapshot before mutating so freshly inserted negations are not revisited
    for slot in list(_iter_expression_slots(out)):
        value = slot.value
        if not isinstance(value, BlockNode):
            continue
        entry = catalog.lookup(value.opcode)
        if entry is None or entry.shape != catalog.BOOLEAN:
            continue
        folded = _fold_demorgan(value)
        if folded is not None and rng.random() < 0.8:
            slot.value = folded
            value = folded
        if rng.random() < 0.4:
            slot.value = blk("operator_not", blk("operator_not", value))
    return out


def _fold_demorgan(node: BlockNode) -> BlockNode | None:
    """(not A) or (not B) -> not (A and B); dually for 'and'."""
    if node.opcode not in ("operator_or", "operator_and"):
        return None
    left = node.input("OPERAND1")
    right = node.input("OPERAND2")
    if left is None or right is None:
        return None
    if not (
        isinstance(left.value, BlockNode)
        and left.value.opcode == "operator_not"
        and isinstance(right.value, BlockNode)
        and right.value.opcode == "operator_not"
    ):
        return None
    dual = "operator_and" if node.opcode == "operator_or" else "operator_or"
    inner_left = left.value.input("OPERAND")
    inner_right = right.value.input("OPERAND")
    return blk(
        "operator_not",
        BlockNode(
            opcode=dual,
            inputs=[
                InputSlot("OPERAND1", inner_left.value if inner_left else None),
                InputSlot("OPERAND2", inner_right.value if inner_right else None),
            ],
        ),
    )


def add_noise(ast: ProjectAst, rng: random.Random) -> ProjectAst:
    """Workspace-only churn: coordinates, id strings, literal respellings,
    script/sprite ordering, declaration ordering."""
    out = copy.deepcopy(ast)
    for block in _iter_statement_blocks(out):
        block.meta["id"] = f"noise-{rng.randrange(1 << 30):x}"
        if rng.random() < 0.5:
            block.meta["x"] = rng.randrange(-200, 600)
            block.meta["y"] = rng.randrange(-200, 600)
    for slot in _iter_expression_slots(out):
        value = slot.value
        if isinstance(value, Literal) and value.kind == "number" and rng.random() < 0.5:
            try:
                as_float = float(value.text)
            except ValueError:
                continue
            if as_float == int(as_float):
                slot.value = Literal(f"{int(as_float)}.0", "number")
    for target in out.targets:
        rng.shuffle(target.scripts)
        items = list(target.variables.items())
        rng.shuffle(items)
        target.variables = dict(items)
    stage_targets = [t for t in out.targets if t.is_stage]
    sprites = [t for t in out.targets if not t.is_stage]
    rng.shuffle(sprites)
    out.targets = stage_targets + sprites
    rng.shuffle(out.broadcasts)
    return out


EQUIVALENCE_MUTATORS = (rename_entities, commute_operands, rewrite_booleans, add_noise)


# --------------------------------------------------------------------------
# structural (non-equivalent) mutations
# --------------------------------------------------------------------------

_RANDOM_BLOCKS = (
    lambda rng: blk("motion_movesteps", rng.randrange(-20, 20)),
    lambda rng: blk("looks_say", rng.choice(_WORDS)),
    lambda rng: blk("control_wait", round(rng.uniform(0.1, 2.0), 1)),
    lambda rng: blk("data_changevariableby", var(rng.choice(_WORDS)), 1),
    lambda rng: blk("sound_play", rng.choice(_WORDS)),
    lambda rng: blk(
        "control_if",
        blk("operator_equals", var(rng.choice(_WORDS)), rng.randrange(5)),
        sub=[blk("looks_hide")],
    ),
)


def mutate_structurally(ast: ProjectAst, rng: random.Random) -> ProjectAst:
    """Arbitrary behavioral edit: insert, delete, or retune a random block."""
    out = copy.deepcopy(ast)
    bodies: list[BlockSeq] = []

    def collect(seq: BlockSeq):
        bodies.append(seq)
        for block in seq.blocks:
            for sub in block.substacks:
                collect(sub)

    for target in out.targets:
        for script in target.scripts:
            collect(script.body)
    if not bodies:
        return out
    action = rng.choice(("insert", "delete", "retune"))
    seq = rng.choice(bodies)
    if action == "insert" or (action == "delete" and not seq.blocks):
        seq.blocks.insert(rng.randrange(len(seq.blocks) + 1), rng.choice(_RANDOM_BLOCKS)(rng))
    elif action == "delete":
        seq.blocks.pop(rng.randrange(len(seq.blocks)))
    else:
        literals = [
            slot
            for slot in _iter_expression_slots(out)
            if isinstance(slot.value, Literal) and slot.value.kind == "number"
        ]
        if literals:
            slot = rng.choice(literals)
            slot.value = lit(rng.randrange(-50, 50))
        else:
            seq.blocks.insert(0, rng.choice(_RANDOM_BLOCKS)(rng))
    return out


def random_variant(ast: ProjectAst, rng: random.Random) -> ProjectAst:
    """A random pile of mutations, equivalence-preserving or not; used where
    a property must hold for arbitrary projects."""
    out = ast
    for _ in range(rng.randrange(1, 4)):
        mutator = rng.choice(EQUIVALENCE_MUTATORS + (mutate_structurally,))
        out = mutator(out, rng)
    return out
