"""Prompt bundles, word-limit enforcement, providers and fallbacks."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stitch import llm
from stitch.corpus import build_pairs
from stitch.diff import diff_projects
from stitch.llm import (
    CHAT_WORD_LIMIT,
    REASONING_WORD_LIMIT,
    EmptyQuestion,
    Gateway,
    ProviderConfig,
    ProviderError,
    StubProvider,
    build_chat_prompt,
    build_reasoning_prompt,
    enforce_word_limit,
    word_count,
)


def report_and_projects():
    pair, student, teacher = build_pairs()[3]
    return diff_projects(student, teacher), student, teacher


class TestBundles:
    def test_reasoning_bundle_carries_inputs_and_rules(self):
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0], "fix the respawn")
        assert bundle.max_words == REASONING_WORD_LIMIT
        assert bundle.question is None
        rendered = bundle.render()
        assert "Explorer" in bundle.diff_context
        assert "TEACHER NOTES:" in rendered
        assert "Supportive and non-authoritative; avoid negativity." in rendered
        assert "Write in the user's language (fallback English)." in rendered
        assert "within 30 words" in rendered

    def test_description_absent_omits_section(self):
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0])
        assert "TEACHER NOTES:" not in bundle.render()

    def test_parameter_item_cites_changed_slots(self):
        report, student, teacher = report_and_projects()
        item = report.items[0]
        bundle = build_reasoning_prompt(teacher, student, item)
        assert "Changed slots: X, Y" in bundle.diff_context

    def test_chat_bundle(self):
        report, student, teacher = report_and_projects()
        bundle = build_chat_prompt(
            "Why is this change needed?", teacher=teacher, student=student, report=report
        )
        assert bundle.max_words == CHAT_WORD_LIMIT
        assert bundle.question == "Why is this change needed?"
        assert "no code dumps or json patches" in bundle.render().lower()

    def test_alternative_solutions_question(self):
        report, student, teacher = report_and_projects()
        bundle = build_chat_prompt(
            "Are there alternative solutions?", teacher=teacher, student=student, report=report
        )
        assert "Are there alternative solutions?" in bundle.render()

    def test_empty_question_rejected(self):
        report, student, teacher = report_and_projects()
        with pytest.raises(EmptyQuestion):
            build_chat_prompt("", teacher=teacher, student=student, report=report)
        with pytest.raises(EmptyQuestion):
            build_chat_prompt("   ", teacher=teacher, student=student, report=report)


class TestWordLimit:
    def test_short_text_untouched(self):
        assert enforce_word_limit("two words", 30) == "two words"

    def test_sentence_boundary_preferred(self):
        text = ("one two three four five. " * 10).strip()
        out = enforce_word_limit(text, 12)
        assert out.endswith("five.")
        assert word_count(out) == 10

    def test_hard_cut_terminates_with_period(self):
        text = "word " * 50
        out = enforce_word_limit(text, 7)
        assert word_count(out) == 7
        assert out.endswith(".")

    @given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=2000))
    @settings(max_examples=300, deadline=None)
    def test_never_exceeds_limit(self, text):
        for limit in (REASONING_WORD_LIMIT, CHAT_WORD_LIMIT):
            assert word_count(enforce_word_limit(text, limit)) <= limit


class _FixedProvider:
    def __init__(self, text):
        self.text = text
        self.calls = 0

    def complete(self, prompt):
        self.calls += 1
        return self.text


class _FailingProvider:
    def complete(self, prompt):
        raise ProviderError("boom")


class TestGeneration:
    def test_stub_explanation_mentions_sprite_and_event(self):
        pair, student, teacher = build_pairs()[2]  # missing movement script
        report = diff_projects(student, teacher)
        bundle = build_reasoning_prompt(teacher, student, report.items[0])
        text = llm.generate_explanation(bundle)
        assert word_count(text) <= REASONING_WORD_LIMIT
        assert "PaddleR" in text

    def test_stub_is_deterministic(self):
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0])
        assert llm.generate_explanation(bundle) == llm.generate_explanation(bundle)

    def test_long_output_enforced(self):
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0])
        gateway = Gateway(provider=_FixedProvider("word " * 80))
        assert word_count(gateway.generate(bundle)) <= REASONING_WORD_LIMIT

    def test_overlong_output_triggers_one_rerequest(self):
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0])
        provider = _FixedProvider("word " * (REASONING_WORD_LIMIT * 3))
        Gateway(provider=provider).generate(bundle)
        assert provider.calls == 2

    def test_provider_failure_falls_back_to_item_message(self):
        report, student, teacher = report_and_projects()
        item = report.items[0]
        bundle = build_reasoning_prompt(teacher, student, item)
        text = Gateway(provider=_FailingProvider()).generate(bundle)
        assert text == enforce_word_limit(item.message, REASONING_WORD_LIMIT)

    def test_chat_fallback_phrase(self):
        report, student, teacher = report_and_projects()
        bundle = build_chat_prompt("Why?", teacher=teacher, student=student, report=report)
        text = Gateway(provider=_FailingProvider()).generate(bundle)
        assert text.startswith("I can explain the current hint:")
        assert word_count(text) <= CHAT_WORD_LIMIT

    def test_chat_reply_within_limit(self):
        report, student, teacher = report_and_projects()
        bundle = build_chat_prompt(
            "Why is this change needed?", teacher=teacher, student=student, report=report
        )
        reply = llm.generate_chat_reply(bundle)
        assert word_count(reply) <= CHAT_WORD_LIMIT

    def test_fuzzed_outputs_always_within_limits(self):
        report, student, teacher = report_and_projects()
        reasoning = build_reasoning_prompt(teacher, student, report.items[0])
        chat = build_chat_prompt("Why?", teacher=teacher, student=student, report=report)
        rng = random.Random(5)
        alphabet = "abcdefg. !?\n\t"
        for _ in range(200):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 600)))
            gateway = Gateway(provider=_FixedProvider(text))
            assert word_count(gateway.generate(reasoning)) <= REASONING_WORD_LIMIT
            assert word_count(gateway.generate(chat)) <= CHAT_WORD_LIMIT


class TestCredentialHygiene:
    def test_prompt_never_contains_credential(self, monkeypatch):
        secret = "super-secret-token-1234"
        monkeypatch.setenv("STITCH_PROVIDER_KEY", secret)
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0], "notes")
        assert secret not in bundle.render()
        chat = build_chat_prompt("Why?", teacher=teacher, student=student, report=report)
        assert secret not in chat.render()

    def test_stub_requires_no_credential(self, monkeypatch):
        monkeypatch.delenv("STITCH_PROVIDER_KEY", raising=False)
        config = ProviderConfig()
        assert config.is_stub
        report, student, teacher = report_and_projects()
        bundle = build_reasoning_prompt(teacher, student, report.items[0])
        assert llm.generate_explanation(bundle, config)
