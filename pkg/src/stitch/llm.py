"""Prompt construction and text generation behind the tutoring loop.

Two prompt families: short reasoning explanations capped at 30 words, and
chat replies capped at 100 words. The caps are enforced here regardless of
what the provider returns, and every generation has a deterministic template
fallback so the loop keeps working with no provider at all.

Providers are pluggable: the in-tree stub is deterministic and default for
tests and offline use; the remote provider posts the rendered prompt to a
configured HTTP endpoint with a credential taken from the environment (the
credential never enters the prompt).
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass, field

from .diff import DiffItem, DiffReport
from .model import ProjectAst, StitchError
from .sb3 import serialize_project

REASONING_WORD_LIMIT = 30
CHAT_WORD_LIMIT = 100

_REASONING_ROLE = (
    "You are a Scratch programming teacher helping students improve their projects."
)
_REASONING_GOAL = "Explain the detected difference and why it matters."
_REASONING_RULES = (
    "Supportive and non-authoritative; avoid negativity.",
    "No full code or long edits.",
    'Name Scratch blocks in quotes (e.g., "When green flag clicked").',
    "Kid-safe and reliable.",
    "If uncertain, do not guess.",
)

_CHAT_ROLE = "You are an experienced, patient Scratch tutor answering a student's question."
_CHAT_GOAL = (
    "Answer the student's question; you may explain why the change is needed, "
    "offer one or two viable alternatives and when to use them, or connect it "
    "to broader patterns."
)
_CHAT_RULES = (
    "Clear and kid-safe.",
    "No code dumps or JSON patches.",
    "Avoid long step-by-step edits.",
    "Encourage reflection without overwhelming the student.",
    "Handle follow-up questions gracefully.",
)

_LANGUAGE_DIRECTIVE = "Write in the user's language (fallback English)."

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")


class EmptyQuestion(StitchError):
    """Chat requires a non-empty question."""


class ProviderError(StitchError):
    """One provider call failed (network, timeout, bad response)."""


class ProviderUnavailable(StitchError):
    """Provider and fallback both failed; should not happen for valid items."""


@dataclass(frozen=True)
class ProviderConfig:
    """Where generations come from. An empty endpoint selects the stub."""

    endpoint: str = ""
    credential_env: str = "STITCH_PROVIDER_KEY"
    model: str = "gemini-2.5-flash-lite"
    timeout_s: float = 10.0
    retries: int = 2
    max_inflight: int = 4

    @property
    def is_stub(self) -> bool:
        return self.endpoint in ("", "stub")


@dataclass
class PromptBundle:
    role_preamble: str
    teacher_document: str
    student_document: str
    diff_context: str
    rules: tuple[str, ...]
    language_directive: str = _LANGUAGE_DIRECTIVE
    max_words: int = REASONING_WORD_LIMIT
    output_format: str = "plain text"
    goal: str = ""
    description: str | None = None
    question: str | None = None
    fallback_text: str = ""

    def render(self) -> str:
        lines = [
            f"ROLE: {self.role_preamble}",
            f"GOAL: {self.goal}",
            "",
            "TEACHER PROJECT (reference):",
            self.teacher_document,
            "",
            "STUDENT PROJECT:",
            self.student_document,
            "",
            "DETECTED DIFFERENCE:",
            self.diff_context,
        ]
        if self.description:
            lines += ["", "TEACHER NOTES:", self.description]
        if self.question is not None:
            lines += ["", "STUDENT QUESTION:", self.question]
        lines += ["", "RULES:"]
        lines += [f"- {rule}" for rule in self.rules]
        lines += [
            f"LANGUAGE: {self.language_directive}",
            f"OUTPUT: {self.output_format}, within {self.max_words} words.",
        ]
        return "\n".join(lines)


def _document_text(source: ProjectAst | str) -> str:
    if isinstance(source, str):
        return source
    return serialize_project(source)


def _item_context(item: DiffItem) -> str:
    lines = [f"[severity {item.severity}] {item.message}"]
    if item.changed_slots:
        lines.append("Changed slots: " + ", ".join(item.changed_slots))
    return "\n".join(lines)


def build_reasoning_prompt(
    teacher: ProjectAst | str,
    student: ProjectAst | str,
    item: DiffItem,
    description: str | None = None,
) -> PromptBundle:
    """Bundle for one ≤30-word explanation of a kept diff item."""
    return PromptBundle(
        role_preamble=_REASONING_ROLE,
        goal=_REASONING_GOAL,
        teacher_document=_document_text(teacher),
        student_document=_document_text(student),
        diff_context=_item_context(item),
        rules=_REASONING_RULES,
        max_words=REASONING_WORD_LIMIT,
        description=description or None,
        fallback_text=item.message,
    )


def build_chat_prompt(
    question: str,
    *,
    teacher: ProjectAst | str,
    student: ProjectAst | str,
    report: DiffReport,
    description: str | None = None,
) -> PromptBundle:
    """Bundle for one ≤100-word chat reply grounded in the current report."""
    if not question or not question.strip():
        raise EmptyQuestion("chat question must be non-empty")
    top = report.items[0].message if report.items else "No differences remain."
    context_lines = [top] + [item.message for item in report.items[1:4]]
    return PromptBundle(
        role_preamble=_CHAT_ROLE,
        goal=_CHAT_GOAL,
        teacher_document=_document_text(teacher),
        student_document=_document_text(student),
        diff_context="\n".join(context_lines),
        rules=_CHAT_RULES,
        max_words=CHAT_WORD_LIMIT,
        description=description or None,
        question=question.strip(),
        fallback_text="I can explain the current hint: " + top,
    )


# --------------------------------------------------------------------------
# word-limit enforcement
# --------------------------------------------------------------------------


def word_count(text: str) -> int:
    return len(text.split())


def enforce_word_limit(text: str, max_words: int) -> str:
    """Guarantee at most max_words whitespace-delimited tokens.

    Prefers cutting at the last sentence boundary that fits; otherwise hard
    cut with a terminal period.
    """
    stripped = " ".join(text.split())
    words = stripped.split()
    if len(words) <= max_words:
        return stripped
    sentences = _SENTENCE_SPLIT.split(stripped)
    kept: list[str] = []
    used = 0
    for sentence in sentences:
        n = word_count(sentence)
        if used + n > max_words:
            break
        kept.append(sentence)
        used += n
    if kept:
        return " ".join(kept)
    cut = " ".join(words[:max_words]).rstrip(".,;:!? ")
    return cut + "."


# --------------------------------------------------------------------------
# providers
# --------------------------------------------------------------------------


class StubProvider:
    """Deterministic offline provider: phrases the detected difference.

    It only reads the rendered prompt, the same surface a remote model sees.
    """

    def complete(self, prompt: str) -> str:
        difference = _prompt_section(prompt, "DETECTED DIFFERENCE:")
        question = _prompt_section(prompt, "STUDENT QUESTION:")
        first = difference.splitlines()[0] if difference else "your project matches the target"
        first = re.sub(r"^\[severity \d+\] ", "", first)
        if question is not None:
            return (
                f"Good question! Right now the key difference is this: {first} "
                "Look at that spot, think about what the program does there, and "
                "try a small change. You can ask again after you try."
            )
        return f"Check this difference: {first} Fixing it makes your project behave like the target."


def _prompt_section(prompt: str, header: str) -> str | None:
    lines = prompt.splitlines()
    try:
        start = lines.index(header) + 1
    except ValueError:
        return None
    collected: list[str] = []
    for line in lines[start:]:
        if line.strip() == "" or line.endswith(":") and line.isupper():
            break
        collected.append(line)
    return "\n".join(collected)


class RemoteProvider:
    """POSTs the rendered prompt to an HTTP endpoint.

    Request body: {"model": ..., "prompt": ...}; expected response body:
    {"text": ...}. The credential comes from the configured environment
    variable and travels only in the Authorization header.
    """

    def __init__(self, config: ProviderConfig):
        self.config = config

    def complete(self, prompt: str) -> str:
        import httpx

        headers = {}
        credential = os.environ.get(self.config.credential_env, "")
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        try:
            response = httpx.post(
                self.config.endpoint,
                json={"model": self.config.model, "prompt": prompt},
                headers=headers,
                timeout=self.config.timeout_s,
            )
            response.raise_for_status()
            payload = response.json()
        except Exception as exc:
            raise ProviderError(f"provider call failed: {exc}") from exc
        text = payload.get("text") if isinstance(payload, dict) else None
        if not isinstance(text, str):
            raise ProviderError("provider response has no text field")
        return text


def make_provider(config: ProviderConfig):
    return StubProvider() if config.is_stub else RemoteProvider(config)


class Gateway:
    """Runs generations against one provider with an in-flight cap."""

    def __init__(self, config: ProviderConfig | None = None, provider=None):
        self.config = config or ProviderConfig()
        self.provider = provider if provider is not None else make_provider(self.config)
        self._gate = threading.BoundedSemaphore(max(1, self.config.max_inflight))

    def _call(self, prompt: str) -> str:
        with self._gate:
            return self.provider.complete(prompt)

    def generate(self, bundle: PromptBundle) -> str:
        """Provider output under the bundle's word cap, or the fallback."""
        prompt = bundle.render()
        text: str | None = None
        for _ in range(max(1, self.config.retries + 1)):
            try:
                text = self._call(prompt)
                break
            except ProviderError:
                text = None
        if text is not None and word_count(text) > 2 * bundle.max_words:
            # one re-request before truncating a wildly long answer
            try:
                retry = self._call(
                    prompt + f"\nREMINDER: answer in fewer than {bundle.max_words} words."
                )
                if word_count(retry) < word_count(text):
                    text = retry
            except ProviderError:
                pass
        if text is None or not text.strip():
            text = bundle.fallback_text
        if not text.strip():
            raise ProviderUnavailable("no provider output and no fallback text")
        return enforce_word_limit(text, bundle.max_words)


def generate_explanation(bundle: PromptBundle, provider: ProviderConfig | None = None) -> str:
    """≤30-word explanation for a reasoning bundle."""
    return Gateway(provider or ProviderConfig()).generate(bundle)


def generate_chat_reply(bundle: PromptBundle, provider: ProviderConfig | None = None) -> str:
    """≤100-word reply for a chat bundle."""
    return Gateway(provider or ProviderConfig()).generate(bundle)
