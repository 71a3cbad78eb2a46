"""Text and RenderSpec generation, agreement between the two, fallbacks."""

import pytest

from stitch import catalog, render
from stitch.build import blk, on_flag, project, sprite, var
from stitch.corpus import build_pairs
from stitch.diff import diff_projects
from stitch.model import BlockNode, BlockSeq, FieldSlot, InputSlot, Literal


class TestToText:
    def test_move_steps(self):
        assert render.to_text(blk("motion_movesteps", 3)) == ["move (3) steps"]

    def test_flag_hat(self):
        assert render.to_text(blk("event_whenflagclicked")) == ["when green flag clicked"]

    def test_unknown_opcode_falls_back(self):
        node = BlockNode(
            "someextension_custom",
            inputs=[InputSlot("POWER", Literal("9", "number"))],
        )
        lines = render.to_text(node)
        assert lines == ["[unknown: someextension_custom] (POWER=9)"]

    def test_substacks_indent_and_close(self):
        node = blk(
            "control_repeat",
            4,
            sub=[blk("looks_say", "hi")],
        )
        assert render.to_text(node) == ["repeat (4)", "  say [hi]", "end"]

    def test_nested_booleans_use_angle_brackets(self):
        node = blk("control_wait_until", blk("operator_gt", var("score"), 5))
        assert render.to_text(node) == ["wait until <(score) > (5)>"]


class TestRenderSpec:
    def test_highlighted_parameter_slot(self):
        spec = render.to_render_spec(blk("motion_movesteps", 10), {((), "STEPS")})
        assert spec.shape == catalog.STACK
        assert spec.category == "motion"
        assert spec.color_hex == "#4C97FF"
        slots = [s for s in spec.segments if isinstance(s, render.SlotSegment)]
        assert slots[0].name == "STEPS"
        assert slots[0].value == "10"
        assert slots[0].highlighted

    def test_unhighlighted_without_flag(self):
        spec = render.to_render_spec(blk("motion_movesteps", 10))
        slots = [s for s in spec.segments if isinstance(s, render.SlotSegment)]
        assert not slots[0].highlighted

    def test_boolean_shape(self):
        spec = render.to_render_spec(blk("operator_and", None, None))
        assert spec.shape == catalog.BOOLEAN

    def test_empty_sequence_is_empty_composite(self):
        spec = render.to_render_spec(BlockSeq())
        assert spec.shape == render.SCRIPT_SHAPE
        assert spec.segments == []

    def test_json_is_versioned(self):
        payload = render.to_render_spec(blk("looks_show")).to_json()
        assert payload["specVersion"] == 1
        assert payload["shape"] == "STACK"


class TestStitch:
    def test_vertical_composition(self):
        specs = [
            render.to_render_spec(blk("event_whenflagclicked")),
            render.to_render_spec(blk("looks_show")),
            render.to_render_spec(blk("motion_movesteps", 1)),
        ]
        composite = render.stitch(specs)
        assert composite.shape == render.SCRIPT_SHAPE
        assert len(composite.segments) == 3

    def test_empty_composite(self):
        assert render.stitch([]).segments == []

    def test_hat_after_first_is_error(self):
        specs = [
            render.to_render_spec(blk("looks_show")),
            render.to_render_spec(blk("event_whenflagclicked")),
        ]
        with pytest.raises(render.HatNotFirst):
            render.stitch(specs)


class TestAgreementAndCoverage:
    def test_spec_flattening_reproduces_text_lines(self):
        samples = [
            blk("motion_movesteps", 3),
            blk("looks_sayforsecs", "hello", 2),
            blk("data_setvariableto", var("score"), 0),
            blk("control_wait_until", blk("sensing_touchingobject", "edge")),
        ]
        for block in samples:
            spec = render.to_render_spec(block)
            assert [" ".join(render.flatten_spec(spec))] == render.to_text(block)

    def test_every_corpus_diff_fragment_renders(self):
        for pair, student, teacher in build_pairs():
            report = diff_projects(student, teacher)
            for item in report.items:
                for fragment in (item.student_fragment, item.teacher_fragment):
                    if fragment is None:
                        continue
                    lines = render.to_text(fragment)
                    spec = render.to_render_spec(fragment)
                    assert spec is not None
                    if (isinstance(fragment, BlockSeq) and fragment.blocks) or isinstance(
                        fragment, BlockNode
                    ):
                        assert lines, f"empty text for fragment in {pair.name}"


class TestProcedureRendering:
    def test_definition_shows_argument_names(self):
        from stitch.model import EntityRef

        definition = BlockNode(
            "procedures_definition",
            fields=[
                FieldSlot("PROCCODE", "jump %s high", EntityRef("procedure", "jump %s high", "Cat")),
                FieldSlot("WARP", "false"),
                FieldSlot("ARG0", "height"),
            ],
        )
        assert render.to_text(definition) == ["define jump [height] high"]

    def test_call_shows_argument_values(self):
        from stitch.model import EntityRef

        call = BlockNode(
            "procedures_call",
            inputs=[InputSlot("ARG0", Literal("7", "number"))],
            fields=[FieldSlot("PROCCODE", "jump %s high", EntityRef("procedure", "jump %s high", "Cat"))],
        )
        assert render.to_text(call) == ["run jump (7) high"]
