"""Tutoring loop orchestration: sessions, hints, fixes, persistence, batch."""

import copy

import pytest

from stitch.corpus import build_pairs, write_corpus
from stitch.llm import word_count
from stitch.sb3 import pack_project, serialize_project
from stitch.session import (
    COMPLETE,
    IN_PROGRESS,
    SUMMATIVE_MESSAGE,
    SessionComplete,
    SessionLoadError,
    SessionNotFound,
    SessionStore,
    StaleHint,
    TutorEngine,
    run_batch,
)


@pytest.fixture()
def engine(tmp_path):
    return TutorEngine(SessionStore(tmp_path / "sessions.db"))


def containers(index=3):
    pair, student, teacher = build_pairs()[index]
    return pair, pack_project(student), pack_project(teacher)


class TestCreateSession:
    def test_identical_projects_complete_immediately(self, engine):
        _, _, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, teacher_bytes)
        assert state.status == COMPLETE
        assert state.report.functionally_equivalent

    def test_seeded_pair_in_progress(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        assert state.status == IN_PROGRESS
        assert len(state.report.items) >= 1

    def test_malformed_student_names_side(self, engine):
        _, _, teacher_bytes = containers()
        with pytest.raises(SessionLoadError) as excinfo:
            engine.create_session(teacher_bytes, b"not a project at all")
        assert excinfo.value.side == "student"


class TestHints:
    def test_hint_targets_seeded_bug(self, engine):
        pair, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        hint = engine.next_hint(state.session_id)
        assert pair.expected.matches(hint.item)
        assert word_count(hint.explanation) <= 30
        assert hint.patch_available

    def test_repeated_calls_return_same_hint(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        first = engine.next_hint(state.session_id)
        second = engine.next_hint(state.session_id)
        assert first.hint_id == second.hint_id

    def test_complete_session_raises(self, engine):
        _, _, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, teacher_bytes)
        with pytest.raises(SessionComplete):
            engine.next_hint(state.session_id)

    def test_unknown_session(self, engine):
        with pytest.raises(SessionNotFound):
            engine.next_hint("nope")

    def test_parameter_hint_highlights_changed_slots(self, engine):
        _, student_bytes, teacher_bytes = containers(3)  # maze respawn bug
        state = engine.create_session(teacher_bytes, student_bytes)
        hint = engine.next_hint(state.session_id)
        spec = hint.teacher_render["spec"]
        highlighted = [
            seg["slot"]["name"]
            for seg in spec["segments"]
            if "slot" in seg and seg["slot"]["highlighted"]
        ]
        assert set(highlighted) == set(hint.item.changed_slots)


class TestApplyFix:
    def test_single_bug_completes_with_summative_message(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        hint = engine.next_hint(state.session_id)
        after = engine.apply_fix(state.session_id, hint.hint_id)
        assert after.status == COMPLETE
        assert SUMMATIVE_MESSAGE == "Congratulations, your project now implements all target features."

    def test_multi_bug_item_count_decreases(self, engine):
        pair, student_bytes, teacher_bytes = containers(8)  # message mismatch: 2 items
        state = engine.create_session(teacher_bytes, student_bytes)
        before = len(state.report.items)
        hint = engine.next_hint(state.session_id)
        after = engine.apply_fix(state.session_id, hint.hint_id)
        assert len(after.report.items) < before

    def test_stale_hint_rejected(self, engine):
        _, student_bytes, teacher_bytes = containers(8)
        state = engine.create_session(teacher_bytes, student_bytes)
        hint = engine.next_hint(state.session_id)
        engine.apply_fix(state.session_id, hint.hint_id)
        with pytest.raises((StaleHint, SessionComplete)):
            engine.apply_fix(state.session_id, hint.hint_id)

    def test_loop_reaches_fixed_point_within_budget(self, engine):
        for index in range(len(build_pairs())):
            pair, student_bytes, teacher_bytes = containers(index)
            state = engine.create_session(teacher_bytes, student_bytes)
            budget = len(state.report.items) + 2
            rounds = 0
            while state.status == IN_PROGRESS and rounds <= budget:
                hint = engine.next_hint(state.session_id)
                state = engine.apply_fix(state.session_id, hint.hint_id)
                rounds += 1
            assert state.status == COMPLETE, pair.name
            assert rounds <= budget, pair.name


class TestRevisions:
    def test_uploading_teacher_completes(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        after = engine.submit_revision(state.session_id, teacher_bytes)
        assert after.status == COMPLETE

    def test_unchanged_upload_same_items_new_revision(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        revision = state.report_revision
        items = [i.item_id() for i in state.report.items]
        after = engine.submit_revision(state.session_id, student_bytes)
        assert after.report_revision == revision + 1
        assert [i.item_id() for i in after.report.items] == items

    def test_revision_invalidates_hints(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        hint = engine.next_hint(state.session_id)
        engine.submit_revision(state.session_id, student_bytes)
        with pytest.raises(StaleHint):
            engine.apply_fix(state.session_id, hint.hint_id)


class TestChat:
    def test_reply_within_limit_and_in_transcript(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        reply = engine.chat(state.session_id, "Why is this change needed?")
        assert word_count(reply) <= 100
        state = engine.get_report(state.session_id)
        assert state.transcript[-1]["kind"] == "chat"


class TestTranscript:
    def test_each_transition_appends_one_entry(self, engine):
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        assert [e["kind"] for e in state.transcript] == ["session_created"]
        hint = engine.next_hint(state.session_id)
        engine.next_hint(state.session_id)  # no state change: no new entry
        state = engine.get_report(state.session_id)
        assert [e["kind"] for e in state.transcript] == ["session_created", "hint_shown"]
        state = engine.apply_fix(state.session_id, hint.hint_id)
        kinds = [e["kind"] for e in state.transcript]
        assert kinds == ["session_created", "hint_shown", "patch_applied"]


class TestPersistence:
    def test_sessions_survive_store_reload(self, tmp_path):
        db = tmp_path / "sessions.db"
        engine = TutorEngine(SessionStore(db))
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        hint = engine.next_hint(state.session_id)

        reopened = TutorEngine(SessionStore(db))
        restored = reopened.get_report(state.session_id)
        assert restored.report_revision == state.report_revision
        assert [i.item_id() for i in restored.report.items] == [
            i.item_id() for i in state.report.items
        ]
        hint_again = reopened.next_hint(state.session_id)
        assert hint_again.hint_id == hint.hint_id

    def test_expired_sessions_purged(self, tmp_path):
        store = SessionStore(tmp_path / "s.db", ttl_seconds=0.0)
        engine = TutorEngine(store)
        _, student_bytes, teacher_bytes = containers()
        state = engine.create_session(teacher_bytes, student_bytes)
        import time

        time.sleep(0.02)
        with pytest.raises(SessionNotFound):
            engine.get_report(state.session_id)


class TestRunBatch:
    def test_ten_pair_corpus_rows(self, tmp_path):
        write_corpus(tmp_path)
        rows = run_batch(tmp_path / "pairs")
        assert len(rows) == 10
        for row in rows:
            assert "error" not in row, row
            assert row["itemCount"] >= 1
            assert row["seededPresent"]
            assert row["reachedFixedPoint"]
            assert row["diffLatencyMs"] < 500
        assert sum(row["topMatchesSeeded"] for row in rows) >= 9

    def test_equivalence_corpus_all_zero(self, tmp_path):
        write_corpus(tmp_path)
        rows = run_batch(tmp_path / "variants")
        assert len(rows) == 10
        for row in rows:
            assert "error" not in row, row
            assert row["itemCount"] == 0
            assert row["functionallyEquivalent"]
