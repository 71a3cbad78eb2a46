"""Comparison pipeline: matching, alignment (with brute-force oracle), ranking."""

import copy
import functools
import random

from stitch.build import blk, lit, on_flag, on_key, on_receive, project, sprite, var
from stitch.corpus import build_equivalence_variants, build_pairs
from stitch.diff import (
    BLOCK,
    EXTRA,
    MISSING,
    MODIFIED,
    MODULE,
    PARAMETER,
    SCRIPT,
    DiffItem,
    DiffPath,
    align_blocks_lcs,
    compare_modules,
    diff_projects,
    filter_semantic_equivalences,
    match_scripts_by_event,
    match_sprites,
    rank_severity,
)
from stitch.model import BlockNode, BlockSeq, InputSlot, Literal
from stitch.normalize import normalize


# --------------------------------------------------------------------------
# independent minimal-edit oracle: exhaustive enumeration over edit choices
# (delete / insert / same-opcode substitute), memoized on position only
# --------------------------------------------------------------------------


def brute_force_min_ops(student, teacher):
    s = student.blocks
    t = teacher.blocks

    @functools.lru_cache(maxsize=None)
    def best(i, j):
        if i == len(s) and j == len(t):
            return 0
        options = []
        if i < len(s):
            options.append(1 + best(i + 1, j))  # delete student block
        if j < len(t):
            options.append(1 + best(i, j + 1))  # insert teacher block
        if i < len(s) and j < len(t) and s[i].opcode == t[j].opcode:
            options.append((0 if s[i] == t[j] else 1) + best(i + 1, j + 1))
        return min(options)

    return best(0, 0)


_OPCODE_POOL = (
    "motion_movesteps",
    "looks_say",
    "control_wait",
    "looks_show",
    "looks_hide",
    "sound_stopallsounds",
)


def random_block(rng):
    opcode = rng.choice(_OPCODE_POOL)
    if opcode in ("motion_movesteps", "control_wait"):
        return blk(opcode, rng.randrange(4))
    if opcode == "looks_say":
        return blk(opcode, rng.choice("abc"))
    return blk(opcode)


def random_seq(rng, max_len=8):
    return BlockSeq([random_block(rng) for _ in range(rng.randrange(max_len + 1))])


class TestAlignment:
    def test_delete_in_the_middle(self):
        a, b, c = blk("looks_show"), blk("motion_movesteps", 1), blk("looks_hide")
        script_ = align_blocks_lcs(BlockSeq([a, b, c]), BlockSeq([a, c]))
        assert [op.kind for op in script_.ops] == ["DELETE"]
        assert script_.ops[0].student_index == 1

    def test_parameter_change_is_modify(self):
        s = BlockSeq([blk("motion_movesteps", 3)])
        t = BlockSeq([blk("motion_movesteps", 10)])
        script_ = align_blocks_lcs(s, t)
        assert [op.kind for op in script_.ops] == ["MODIFY"]
        assert script_.ops[0].changed_slots == ("STEPS",)

    def test_different_opcodes_never_modify(self):
        s = BlockSeq([blk("looks_show")])
        t = BlockSeq([blk("looks_hide")])
        script_ = align_blocks_lcs(s, t)
        assert sorted(op.kind for op in script_.ops) == ["DELETE", "INSERT"]

    def test_matches_brute_force_on_random_sequences(self):
        rng = random.Random(2024)
        for _ in range(300):
            s, t = random_seq(rng), random_seq(rng)
            assert align_blocks_lcs(s, t).op_count() == brute_force_min_ops(s, t)

    def test_replay_reproduces_teacher(self):
        rng = random.Random(99)
        for _ in range(300):
            s, t = random_seq(rng), random_seq(rng)
            script_ = align_blocks_lcs(s, t)
            assert script_.replay(s.blocks) == t.blocks


class TestSpriteMatching:
    def test_same_names_match(self):
        a = normalize(project(sprite("Cat", on_flag(blk("looks_show")))))
        b = normalize(project(sprite("Cat", on_flag(blk("looks_show")))))
        pairs = match_sprites(a, b)
        assert [(s.name, t.name) for s, t in pairs] == [("Stage", "Stage"), ("Cat", "Cat")]

    def test_renamed_sprite_matches_by_similarity(self):
        scripts = lambda: (
            on_flag(blk("looks_show"), blk("motion_movesteps", 5)),
            on_key("space", blk("motion_changeyby", 10)),
        )
        a = normalize(project(sprite("Kitty", *scripts())))
        b = normalize(project(sprite("Cat", *scripts())))
        pairs = match_sprites(a, b)
        assert ("Kitty", "Cat") in [(s.name, t.name) for s, t in pairs]
        assert compare_modules(a, b) == []

    def test_disjoint_sprites_do_not_match(self):
        a = normalize(project(sprite("Rock", on_key("a", blk("looks_show")))))
        b = normalize(project(sprite("Paper", on_flag(blk("motion_movesteps", 1)))))
        items = compare_modules(a, b)
        kinds = {(i.level, i.kind, i.location.sprite_name) for i in items}
        assert (MODULE, MISSING, "Paper") in kinds
        assert (MODULE, EXTRA, "Rock") in kinds

    def test_missing_sprite_reported(self):
        base = project(sprite("Cat", on_flag(blk("looks_show"))))
        both = project(
            sprite("Cat", on_flag(blk("looks_show"))),
            sprite("Dog", on_flag(blk("looks_hide"))),
        )
        items = compare_modules(normalize(base), normalize(both))
        assert [(i.level, i.kind, i.location.sprite_name) for i in items] == [
            (MODULE, MISSING, "Dog")
        ]


class TestScriptMatching:
    def test_matched_by_event_key(self):
        s = normalize(project(sprite("Cat", on_flag(blk("looks_show")))))
        t = normalize(project(sprite("Cat", on_flag(blk("looks_show")))))
        matched, missing, extra = match_scripts_by_event(
            (s.project.target("Cat"), t.project.target("Cat"))
        )
        assert len(matched) == 1 and not missing and not extra

    def test_teacher_only_event_is_missing(self):
        s = normalize(project(sprite("Cat", on_flag(blk("looks_show")))))
        t = normalize(
            project(
                sprite(
                    "Cat",
                    on_flag(blk("looks_show")),
                    on_key("space", blk("motion_changeyby", 10)),
                )
            )
        )
        _, missing, extra = match_scripts_by_event(
            (s.project.target("Cat"), t.project.target("Cat"))
        )
        assert len(missing) == 1 and not extra
        assert missing[0].trigger.hat_opcode == "event_whenkeypressed"

    def test_message_mismatch_yields_missing_plus_extra(self):
        sender = sprite("Bell", on_flag(blk("event_broadcast", "start")))
        t = project(sender, sprite("Cat", on_receive("start", blk("looks_show"))))
        s = copy.deepcopy(t)
        receiver = s.target("Cat").scripts[0]
        receiver.hat.fields[0].value = "begin"
        from stitch.build import bcast

        receiver.hat.fields[0].ref = bcast("begin")
        s.broadcasts.append("begin")
        report = diff_projects(s, t)
        kinds = [(i.level, i.kind) for i in report.items]
        assert (SCRIPT, MISSING) in kinds and (SCRIPT, EXTRA) in kinds


class TestFiltering:
    def test_demorgan_fragments_suppressed(self):
        a = blk("sensing_mousedown")
        b = blk("sensing_keypressed", "space")
        student = blk("control_if", blk("operator_not", blk("operator_and", a, b)))
        teacher = blk(
            "control_if",
            blk("operator_or", blk("operator_not", a), blk("operator_not", b)),
        )
        item = DiffItem(
            level=PARAMETER,
            kind=MODIFIED,
            location=DiffPath("Cat"),
            student_fragment=student,
            teacher_fragment=teacher,
            changed_slots=("CONDITION",),
        )
        kept, suppressed = filter_semantic_equivalences([item])
        assert kept == []
        assert suppressed[0][1] == "EQUIVALENT"

    def test_unknown_opcode_suppressed_uncertain(self):
        weird = BlockNode("someextension_custom", inputs=[InputSlot("X", Literal("1", "number"))])
        item = DiffItem(
            level=BLOCK,
            kind=EXTRA,
            location=DiffPath("Cat"),
            student_fragment=BlockSeq([weird]),
        )
        kept, suppressed = filter_semantic_equivalences([item])
        assert kept == []
        assert suppressed[0][1] == "UNCERTAIN"

    def test_genuine_extra_block_kept(self):
        item = DiffItem(
            level=BLOCK,
            kind=EXTRA,
            location=DiffPath("Cat"),
            student_fragment=BlockSeq([blk("sound_play", "meow")]),
        )
        kept, suppressed = filter_semantic_equivalences([item])
        assert len(kept) == 1 and not suppressed


class TestRanking:
    def test_tier_order(self):
        module_item = DiffItem(MODULE, MISSING, DiffPath("A"), teacher_fragment=BlockSeq())
        param_item = DiffItem(
            PARAMETER,
            MODIFIED,
            DiffPath("B"),
            teacher_fragment=blk("motion_movesteps", 1),
            student_fragment=blk("motion_movesteps", 2),
        )
        report = rank_severity([param_item, module_item])
        assert report.items[0] is module_item
        assert report.items[0].severity == 1

    def test_empty_items_is_equivalent(self):
        report = rank_severity([])
        assert report.functionally_equivalent

    def test_severities_contiguous(self):
        items = [
            DiffItem(BLOCK, MISSING, DiffPath("A"), teacher_fragment=BlockSeq([blk("looks_show")])),
            DiffItem(BLOCK, EXTRA, DiffPath("B"), student_fragment=BlockSeq([blk("looks_hide")])),
            DiffItem(
                PARAMETER,
                MODIFIED,
                DiffPath("C"),
                teacher_fragment=blk("motion_movesteps", 1),
                student_fragment=blk("motion_movesteps", 2),
            ),
        ]
        report = rank_severity(items)
        assert [i.severity for i in report.items] == [1, 2, 3]


class TestDiffProjects:
    def test_identity_is_empty(self):
        for pair, _, teacher in build_pairs()[:3]:
            report = diff_projects(teacher, teacher)
            assert report.functionally_equivalent, pair.name

    def test_seeded_bug_is_severity_one(self):
        for pair, student, teacher in build_pairs():
            report = diff_projects(student, teacher)
            assert report.items, pair.name
            assert pair.expected.matches(report.items[0]), pair.name

    def test_equivalence_mutations_diff_clean(self):
        for name, variant, original in build_equivalence_variants():
            report = diff_projects(variant, original)
            assert report.functionally_equivalent, name

    def test_deterministic_serialization(self):
        pair, student, teacher = build_pairs()[1]
        first = diff_projects(student, teacher).serialize()
        second = diff_projects(student, teacher).serialize()
        assert first.encode() == second.encode()

    def test_missing_script_message_form(self):
        t = project(sprite("Cat", on_flag(blk("motion_movesteps", 10))))
        s = project(sprite("Cat"))
        report = diff_projects(s, t)
        assert report.items[0].message == (
            'The character Cat is missing the script "when green flag clicked".'
        )
