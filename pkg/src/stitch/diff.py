"""Compare two normalized projects and emit a severity-ordered report.

The pipeline: match sprite rosters (exact name, then script-set similarity),
match scripts within a pair by triggering event, align matched script bodies
with a minimum-cost edit script (match only between equal opcodes, so block
edits stay either insert/delete or same-opcode parameter changes), recurse
into matching C-blocks, filter out semantically equivalent or uncertain
items, and rank what is left.

The teacher project is taken as the reference: missing functionality outranks
extra code at every level.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace

from . import catalog
from . import render
from .model import (
    BlockNode,
    BlockSeq,
    EventKey,
    ProjectAst,
    Target,
    fragment_to_json,
    walk_blocks,
)
from .normalize import NormalizedAst, denormalize_fragment, normalize, rewrite_fragment

MODULE = "MODULE"
SCRIPT = "SCRIPT"
BLOCK = "BLOCK"
PARAMETER = "PARAMETER"

MISSING = "MISSING"
EXTRA = "EXTRA"
MODIFIED = "MODIFIED"

REASON_EQUIVALENT = "EQUIVALENT"
REASON_UNCERTAIN = "UNCERTAIN"

_TIER = {
    (MODULE, MISSING): 0,
    (MODULE, EXTRA): 1,
    (SCRIPT, MISSING): 2,
    (SCRIPT, EXTRA): 3,
    (BLOCK, MISSING): 4,
    (BLOCK, EXTRA): 5,
    (PARAMETER, MODIFIED): 6,
}

_SUBSTACK_SLOTS = ("SUBSTACK", "SUBSTACK2")

BlockPath = tuple[tuple[int, int | None], ...]


@dataclass(frozen=True)
class DiffConfig:
    """Tunables for the comparison; the defaults are the shipped behavior."""

    sprite_similarity_threshold: float = 0.5


@dataclass(frozen=True)
class DiffPath:
    """Where a difference lives: sprite, then event, then block path.

    Block path elements are (sequence index, substack selector): the selector
    descends into that substack of the block at the index; None addresses the
    sequence position itself. ``script_index`` anchors student-side locations
    by position in the sprite's script list (normalization preserves script
    order, so the index is valid in the raw project too).
    """

    sprite_name: str | None = None
    event_key: EventKey | None = None
    block_path: BlockPath | None = None
    script_index: int | None = None

    def sort_key(self) -> tuple:
        return (
            self.sprite_name or "",
            self.event_key.sort_key() if self.event_key else ("", ""),
            self.block_path or (),
        )

    def to_json(self) -> dict:
        return {
            "sprite": self.sprite_name,
            "event": (
                {
                    "hatOpcode": self.event_key.hat_opcode,
                    "discriminator": self.event_key.discriminator,
                }
                if self.event_key
                else None
            ),
            "blockPath": (
                [[i, sub] for i, sub in self.block_path] if self.block_path is not None else None
            ),
            "scriptIndex": self.script_index,
        }


@dataclass
class DiffItem:
    level: str
    kind: str
    location: DiffPath
    teacher_fragment: BlockNode | BlockSeq | None = None
    student_fragment: BlockNode | BlockSeq | None = None
    severity: int = 0
    message: str = ""
    changed_slots: tuple[str, ...] = ()

    def fragment_size(self) -> int:
        size = 0
        for fragment in (self.teacher_fragment, self.student_fragment):
            if isinstance(fragment, BlockNode):
                size = max(size, fragment.block_count())
            elif isinstance(fragment, BlockSeq):
                size = max(size, fragment.block_count())
        return size

    def item_id(self) -> str:
        payload = json.dumps(
            {
                "level": self.level,
                "kind": self.kind,
                "location": self.location.to_json(),
                "teacher": fragment_to_json(self.teacher_fragment),
                "student": fragment_to_json(self.student_fragment),
                "slots": list(self.changed_slots),
            },
            sort_keys=True,
        )
        return hashlib.sha1(payload.encode()).hexdigest()[:12]

    def to_json(self) -> dict:
        return {
            "id": self.item_id(),
            "level": self.level,
            "kind": self.kind,
            "severity": self.severity,
            "location": self.location.to_json(),
            "message": self.message,
            "studentFragment": fragment_to_json(self.student_fragment),
            "teacherFragment": fragment_to_json(self.teacher_fragment),
            "changedSlots": list(self.changed_slots),
        }


@dataclass
class DiffReport:
    items: list[DiffItem] = field(default_factory=list)
    suppressed: list[tuple[DiffItem, str]] = field(default_factory=list)

    @property
    def functionally_equivalent(self) -> bool:
        return not self.items

    def to_json(self) -> dict:
        return {
            "items": [item.to_json() for item in self.items],
            "suppressed": [
                {"item": item.to_json(), "reason": reason} for item, reason in self.suppressed
            ],
            "functionallyEquivalent": self.functionally_equivalent,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# --------------------------------------------------------------------------
# block-sequence alignment
# --------------------------------------------------------------------------

INSERT = "INSERT"
DELETE = "DELETE"
MODIFY = "MODIFY"


@dataclass
class EditOp:
    kind: str
    student_index: int
    teacher_index: int
    student_block: BlockNode | None = None
    teacher_block: BlockNode | None = None
    changed_slots: tuple[str, ...] = ()


@dataclass
class EditScript:
    ops: list[EditOp] = field(default_factory=list)

    def op_count(self) -> int:
        return len(self.ops)

    def replay(self, student_blocks: list[BlockNode]) -> list[BlockNode]:
        """Apply the ops to the student sequence; must yield the teacher's."""
        result: list[BlockNode] = []
        cursor = 0
        for op in self.ops:
            while cursor < op.student_index:
                result.append(student_blocks[cursor])
                cursor += 1
            if op.kind == DELETE:
                cursor += 1
            elif op.kind == INSERT:
                result.append(op.teacher_block)  # type: ignore[arg-type]
            else:
                result.append(op.teacher_block)  # type: ignore[arg-type]
                cursor += 1
        result.extend(student_blocks[cursor:])
        return result


def changed_slots_between(student: BlockNode, teacher: BlockNode) -> tuple[str, ...]:
    """Names of slots that differ between two same-opcode blocks; substack
    differences surface as SUBSTACK/SUBSTACK2."""
    changed: list[str] = []
    s_inputs = {s.name: s.value for s in student.inputs}
    t_inputs = {s.name: s.value for s in teacher.inputs}
    for name in list(s_inputs) + [n for n in t_inputs if n not in s_inputs]:
        if s_inputs.get(name) != t_inputs.get(name):
            changed.append(name)
    s_fields = {f.name: (f.value, f.ref) for f in student.fields}
    t_fields = {f.name: (f.value, f.ref) for f in teacher.fields}
    for name in list(s_fields) + [n for n in t_fields if n not in s_fields]:
        if s_fields.get(name) != t_fields.get(name):
            changed.append(name)
    for i in range(max(len(student.substacks), len(teacher.substacks))):
        s_sub = student.substacks[i] if i < len(student.substacks) else BlockSeq()
        t_sub = teacher.substacks[i] if i < len(teacher.substacks) else BlockSeq()
        if s_sub != t_sub:
            changed.append(_SUBSTACK_SLOTS[i] if i < 2 else f"SUBSTACK{i + 1}")
    return tuple(changed)


def align_blocks_lcs(student: BlockSeq, teacher: BlockSeq) -> EditScript:
    """Minimum-cost alignment under insert=delete=modify=1, match=0.

    Blocks may only pair when opcodes are equal; an exactly equal pair is a
    free match, a same-opcode pair with differing slots is a MODIFY.
    """
    s, t = student.blocks, teacher.blocks
    m, n = len(s), len(t)
    INF = m + n + 1
    cost = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        cost[i][0] = i
    for j in range(1, n + 1):
        cost[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            best = min(cost[i - 1][j] + 1, cost[i][j - 1] + 1)
            if s[i - 1].opcode == t[j - 1].opcode:
                diag = cost[i - 1][j - 1] + (0 if s[i - 1] == t[j - 1] else 1)
                best = min(best, diag)
            cost[i][j] = min(best, INF)

    ops: list[EditOp] = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and s[i - 1].opcode == t[j - 1].opcode:
            sub = 0 if s[i - 1] == t[j - 1] else 1
            if cost[i][j] == cost[i - 1][j - 1] + sub:
                if sub:
                    ops.append(
                        EditOp(
                            MODIFY,
                            i - 1,
                            j - 1,
                            s[i - 1],
                            t[j - 1],
                            changed_slots_between(s[i - 1], t[j - 1]),
                        )
                    )
                i, j = i - 1, j - 1
                continue
        if i > 0 and cost[i][j] == cost[i - 1][j] + 1:
            ops.append(EditOp(DELETE, i - 1, j, student_block=s[i - 1]))
            i -= 1
            continue
        ops.append(EditOp(INSERT, i, j - 1, teacher_block=t[j - 1]))
        j -= 1
    ops.reverse()
    return EditScript(ops)


# --------------------------------------------------------------------------
# sprite and script matching
# --------------------------------------------------------------------------


def _event_key_set(target: Target) -> set[tuple[str, str]]:
    return {s.trigger.sort_key() for s in target.scripts}


def _jaccard(a: set, b: set) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union) if union else 1.0


def _opcode_trace(script) -> list[str]:
    trace = [script.trigger.hat_opcode]
    trace.extend(b.opcode for b in walk_blocks(script.body))
    return trace


def _lcs_len(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        row = [0]
        for j, y in enumerate(b, 1):
            row.append(prev[j - 1] + 1 if x == y else max(prev[j], row[j - 1]))
        prev = row
    return prev[-1]


def _body_similarity(script_a, script_b) -> float:
    a, b = _opcode_trace(script_a), _opcode_trace(script_b)
    longest = max(len(a), len(b))
    return _lcs_len(a, b) / longest if longest else 1.0


def _target_body_ratio(a: Target, b: Target) -> float:
    """Fraction of shared event keys whose scripts compare equal."""
    a_by_key: dict[tuple, list] = {}
    for s in a.scripts:
        a_by_key.setdefault(s.trigger.sort_key(), []).append(s)
    shared = 0
    equal = 0
    for s in b.scripts:
        bucket = a_by_key.get(s.trigger.sort_key(), [])
        if bucket:
            shared += 1
            if any(other == s for other in bucket):
                equal += 1
    return equal / shared if shared else 0.0


def match_sprites(
    student: NormalizedAst, teacher: NormalizedAst, config: DiffConfig | None = None
) -> list[tuple[Target, Target]]:
    """Pair student and teacher targets: stages always, sprites by exact name,
    then leftovers greedily by event-set similarity above the threshold."""
    config = config or DiffConfig()
    pairs: list[tuple[Target, Target]] = [(student.project.stage, teacher.project.stage)]
    student_left = {t.name: t for t in student.project.sprites}
    teacher_left = {t.name: t for t in teacher.project.sprites}
    for name in sorted(set(student_left) & set(teacher_left)):
        pairs.append((student_left.pop(name), teacher_left.pop(name)))
    candidates = []
    for s_name, s_target in sorted(student_left.items()):
        for t_name, t_target in sorted(teacher_left.items()):
            jaccard = _jaccard(_event_key_set(s_target), _event_key_set(t_target))
            if jaccard >= config.sprite_similarity_threshold:
                ratio = _target_body_ratio(s_target, t_target)
                candidates.append((-jaccard, -ratio, s_name, t_name))
    for _, _, s_name, t_name in sorted(candidates):
        if s_name in student_left and t_name in teacher_left:
            pairs.append((student_left.pop(s_name), teacher_left.pop(t_name)))
    return pairs


def compare_modules(
    student: NormalizedAst, teacher: NormalizedAst, config: DiffConfig | None = None
) -> list[DiffItem]:
    """MODULE items for the sprite roster: teacher-only sprites are missing,
    student-only sprites are extra; the stage always matches."""
    pairs = match_sprites(student, teacher, config)
    matched_students = {id(s) for s, _ in pairs}
    matched_teachers = {id(t) for _, t in pairs}
    items: list[DiffItem] = []
    for target in teacher.project.sprites:
        if id(target) not in matched_teachers:
            items.append(
                DiffItem(
                    level=MODULE,
                    kind=MISSING,
                    location=DiffPath(sprite_name=target.name),
                    teacher_fragment=_target_fragment(target),
                )
            )
    for target in student.project.sprites:
        if id(target) not in matched_students:
            items.append(
                DiffItem(
                    level=MODULE,
                    kind=EXTRA,
                    location=DiffPath(sprite_name=target.name),
                    student_fragment=_target_fragment(target),
                )
            )
    return items


def _target_fragment(target: Target) -> BlockSeq:
    if target.scripts:
        return target.scripts[0].all_blocks()
    return BlockSeq()


def match_scripts_by_event(pair: tuple[Target, Target]):
    """Pair scripts on equal event keys; same-key duplicates pair greedily by
    body similarity. Returns (matched pairs, teacher-only, student-only)."""
    student, teacher = pair
    s_by_key: dict[tuple, list] = {}
    for s in student.scripts:
        s_by_key.setdefault(s.trigger.sort_key(), []).append(s)
    t_by_key: dict[tuple, list] = {}
    for t in teacher.scripts:
        t_by_key.setdefault(t.trigger.sort_key(), []).append(t)

    matched: list[tuple] = []
    missing: list = []
    extra: list = []
    for key in sorted(set(s_by_key) | set(t_by_key)):
        s_bucket = s_by_key.get(key, [])
        t_bucket = t_by_key.get(key, [])
        if len(s_bucket) == 1 and len(t_bucket) == 1:
            matched.append((s_bucket[0], t_bucket[0]))
            continue
        scored = []
        for si, s in enumerate(s_bucket):
            for ti, t in enumerate(t_bucket):
                scored.append((-_body_similarity(s, t), si, ti))
        used_s: set[int] = set()
        used_t: set[int] = set()
        for _, si, ti in sorted(scored):
            if si not in used_s and ti not in used_t:
                matched.append((s_bucket[si], t_bucket[ti]))
                used_s.add(si)
                used_t.add(ti)
        extra.extend(s for si, s in enumerate(s_bucket) if si not in used_s)
        missing.extend(t for ti, t in enumerate(t_bucket) if ti not in used_t)
    return matched, missing, extra


# --------------------------------------------------------------------------
# item generation
# --------------------------------------------------------------------------


def _shallow_block(block: BlockNode) -> BlockNode:
    return BlockNode(
        opcode=block.opcode,
        inputs=list(block.inputs),
        fields=list(block.fields),
        substacks=[],
    )


def _items_for_pair(student: Target, teacher: Target, items: list[DiffItem]) -> None:
    script_index = {id(script): i for i, script in enumerate(student.scripts)}
    matched, missing, extra = match_scripts_by_event((student, teacher))
    for t_script in missing:
        items.append(
            DiffItem(
                level=SCRIPT,
                kind=MISSING,
                location=DiffPath(sprite_name=student.name, event_key=t_script.trigger),
                teacher_fragment=t_script.all_blocks(),
            )
        )
    for s_script in extra:
        items.append(
            DiffItem(
                level=SCRIPT,
                kind=EXTRA,
                location=DiffPath(
                    sprite_name=student.name,
                    event_key=s_script.trigger,
                    script_index=script_index[id(s_script)],
                ),
                student_fragment=s_script.all_blocks(),
            )
        )
    for s_script, t_script in matched:
        _items_for_seq(
            s_script.body,
            t_script.body,
            sprite=student.name,
            event=s_script.trigger,
            prefix=(),
            items=items,
            script_index=script_index[id(s_script)],
        )


def _items_for_seq(
    student: BlockSeq,
    teacher: BlockSeq,
    sprite: str,
    event: EventKey,
    prefix: BlockPath,
    items: list[DiffItem],
    script_index: int | None = None,
) -> None:
    script = align_blocks_lcs(student, teacher)
    runs = _group_ops(script.ops)
    for run in runs:
        first = run[0]
        if first.kind == INSERT:
            items.append(
                DiffItem(
                    level=BLOCK,
                    kind=MISSING,
                    location=DiffPath(
                        sprite, event, prefix + ((first.student_index, None),), script_index
                    ),
                    teacher_fragment=BlockSeq([op.teacher_block for op in run]),
                )
            )
        elif first.kind == DELETE:
            items.append(
                DiffItem(
                    level=BLOCK,
                    kind=EXTRA,
                    location=DiffPath(
                        sprite, event, prefix + ((first.student_index, None),), script_index
                    ),
                    student_fragment=BlockSeq([op.student_block for op in run]),
                )
            )
        else:
            op = first
            scalar_slots = tuple(s for s in op.changed_slots if s not in _SUBSTACK_SLOTS)
            if scalar_slots:
                items.append(
                    DiffItem(
                        level=PARAMETER,
                        kind=MODIFIED,
                        location=DiffPath(
                            sprite, event, prefix + ((op.student_index, None),), script_index
                        ),
                        teacher_fragment=_shallow_block(op.teacher_block),
                        student_fragment=_shallow_block(op.student_block),
                        changed_slots=scalar_slots,
                    )
                )
            for slot in op.changed_slots:
                if slot in _SUBSTACK_SLOTS:
                    k = _SUBSTACK_SLOTS.index(slot)
                    s_sub = (
                        op.student_block.substacks[k]
                        if k < len(op.student_block.substacks)
                        else BlockSeq()
                    )
                    t_sub = (
                        op.teacher_block.substacks[k]
                        if k < len(op.teacher_block.substacks)
                        else BlockSeq()
                    )
                    _items_for_seq(
                        s_sub,
                        t_sub,
                        sprite,
                        event,
                        prefix + ((op.student_index, k),),
                        items,
                        script_index,
                    )


def _group_ops(ops: list[EditOp]) -> list[list[EditOp]]:
    """Group consecutive same-kind inserts/deletes into one run per location."""
    runs: list[list[EditOp]] = []
    for op in ops:
        if op.kind == MODIFY:
            runs.append([op])
            continue
        if runs and runs[-1][0].kind == op.kind:
            last = runs[-1][-1]
            if op.kind == INSERT and op.student_index == last.student_index and op.teacher_index == last.teacher_index + 1:
                runs[-1].append(op)
                continue
            if op.kind == DELETE and op.student_index == last.student_index + 1:
                runs[-1].append(op)
                continue
        runs.append([op])
    return runs


# --------------------------------------------------------------------------
# filtering and ranking
# --------------------------------------------------------------------------


def _fragment_blocks(fragment: BlockNode | BlockSeq | None):
    if fragment is None:
        return
    if isinstance(fragment, BlockNode):
        yield fragment
        for sub in fragment.substacks:
            yield from walk_blocks(sub)
        for slot in fragment.inputs:
            if isinstance(slot.value, BlockNode):
                yield from walk_blocks(BlockSeq([slot.value]))
    else:
        yield from walk_blocks(fragment)


def _has_unknown_opcode(item: DiffItem) -> bool:
    for fragment in (item.student_fragment, item.teacher_fragment):
        for block in _fragment_blocks(fragment):
            if not catalog.is_known(block.opcode):
                return True
    return False


def filter_semantic_equivalences(
    items: list[DiffItem],
) -> tuple[list[DiffItem], list[tuple[DiffItem, str]]]:
    """Drop items whose fragments agree after a local rewrite pass, and items
    the engine cannot judge (unknown opcodes): no suggestion beats a wrong one."""
    kept: list[DiffItem] = []
    suppressed: list[tuple[DiffItem, str]] = []
    for item in items:
        if _has_unknown_opcode(item):
            suppressed.append((item, REASON_UNCERTAIN))
            continue
        if item.student_fragment is not None and item.teacher_fragment is not None:
            student = rewrite_fragment(item.student_fragment)
            teacher = rewrite_fragment(item.teacher_fragment)
            if student == teacher:
                suppressed.append((item, REASON_EQUIVALENT))
                continue
        kept.append(item)
    return kept, suppressed


def rank_severity(
    items: list[DiffItem], suppressed: list[tuple[DiffItem, str]] | None = None
) -> DiffReport:
    """Total order: missing modules, then missing scripts, then block edits,
    then parameter tweaks; extras rank below missing at the same level."""
    ordered = sorted(
        items,
        key=lambda item: (
            _TIER[(item.level, item.kind)],
            -item.fragment_size(),
            item.location.sort_key(),
        ),
    )
    for rank, item in enumerate(ordered, start=1):
        item.severity = rank
    return DiffReport(items=ordered, suppressed=list(suppressed or []))


# --------------------------------------------------------------------------
# whole-project comparison
# --------------------------------------------------------------------------


def diff_normalized(
    student: NormalizedAst, teacher: NormalizedAst, config: DiffConfig | None = None
) -> DiffReport:
    items = compare_modules(student, teacher, config)
    for s_target, t_target in match_sprites(student, teacher, config):
        _items_for_pair(s_target, t_target, items)
    kept, suppressed = filter_semantic_equivalences(items)
    report = rank_severity(kept, suppressed)
    for item in report.items:
        item.message = _build_message(item, student, teacher)
    return report


def diff_projects(
    student: ProjectAst, teacher: ProjectAst, config: DiffConfig | None = None
) -> DiffReport:
    """Full pipeline from raw ASTs; deterministic for fixed inputs."""
    return diff_normalized(normalize(student), normalize(teacher), config)


# --------------------------------------------------------------------------
# messages
# --------------------------------------------------------------------------


def _display_fragment(
    fragment, student: NormalizedAst, teacher: NormalizedAst
):
    """Fragments carry canonical names; messages show the student's own names
    (teacher names for entities the student lacks)."""
    translated, _ = denormalize_fragment(fragment, student.rename_map, teacher.rename_map)
    return translated


def _sprite_phrase(name: str | None, student: NormalizedAst) -> str:
    if name is None:
        return "the project"
    target = student.project.target(name)
    if target is not None and target.is_stage:
        return "the stage"
    return f"the character {name}"


def _event_phrase(item: DiffItem, student: NormalizedAst, teacher: NormalizedAst) -> str:
    key = item.location.event_key
    if key is None:
        return ""
    if key.is_headless():
        return "a free-standing script"
    fragment = item.teacher_fragment if item.kind == MISSING else item.student_fragment
    hat = None
    if isinstance(fragment, BlockSeq) and fragment.blocks and catalog.is_hat(fragment.blocks[0].opcode):
        hat = _display_fragment(fragment.blocks[0], student, teacher)
    if hat is not None:
        return '"' + render.label_for_event(hat) + '"'
    entry = catalog.lookup(key.hat_opcode)
    label = entry.template.split("{")[0].strip() if entry else key.hat_opcode
    if key.discriminator:
        label += f" [{key.discriminator}]"
    return '"' + label + '"'


def _first_line(fragment) -> str:
    lines = render.to_text(fragment)
    return lines[0] if lines else ""


def _build_message(item: DiffItem, student: NormalizedAst, teacher: NormalizedAst) -> str:
    where = _sprite_phrase(item.location.sprite_name, student)
    where_cap = where[0].upper() + where[1:]
    if item.level == MODULE:
        if item.kind == MISSING:
            return f"The project is missing the character {item.location.sprite_name}."
        return (
            f"{where_cap} is not part of the target project; it may be leftover work."
        )
    if item.level == SCRIPT:
        event = _event_phrase(item, student, teacher)
        if item.kind == MISSING:
            return f"{where_cap} is missing the script {event}."
        return f"{where_cap} has an extra script {event} that the target does not have."
    script_where = _script_location_phrase(item, student, teacher)
    if item.level == BLOCK:
        count = item.fragment_size()
        noun = "a block" if count == 1 else f"{count} blocks"
        if item.kind == MISSING:
            first = _first_line(_display_fragment(item.teacher_fragment, student, teacher))
            return f'{script_where} is missing {noun} starting with "{first}".'
        first = _first_line(_display_fragment(item.student_fragment, student, teacher))
        return f'{script_where} has an extra {noun} starting with "{first}".'
    student_line = _first_line(_display_fragment(item.student_fragment, student, teacher))
    teacher_line = _first_line(_display_fragment(item.teacher_fragment, student, teacher))
    slots = ", ".join(item.changed_slots)
    return (
        f'{script_where} uses "{student_line}" where the target uses '
        f'"{teacher_line}" (differs in {slots}).'
    )


def _script_location_phrase(item: DiffItem, student: NormalizedAst, teacher: NormalizedAst) -> str:
    where = _sprite_phrase(item.location.sprite_name, student)
    key = item.location.event_key
    if key is None:
        return f"A script in {where}"
    if key.is_headless():
        return f"A free-standing script in {where}"
    entry = catalog.lookup(key.hat_opcode)
    label = entry.template.split("{")[0].strip() if entry else key.hat_opcode
    if key.discriminator:
        disc = key.discriminator
        rev = student.rename_map.reverse("broadcasts")
        alt = teacher.rename_map.reverse("broadcasts")
        if disc in rev:
            disc = rev[disc][1]
        elif disc in alt:
            disc = alt[disc][1]
        label += f" [{disc}]"
    return f'The script "{label}" in {where}'
