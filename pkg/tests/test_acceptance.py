"""Acceptance suite: every shipping criterion at its stated tolerance.

Each test prints one [ACCEPTANCE] line on success; a failing criterion fails
its test. The suite runs offline with the deterministic stub provider and
never touches the UI.
"""

import functools
import random
import statistics
import time

from stitch.corpus import build_equivalence_variants, build_pairs
from stitch.diff import align_blocks_lcs, diff_normalized, diff_projects
from stitch.llm import (
    CHAT_WORD_LIMIT,
    REASONING_WORD_LIMIT,
    Gateway,
    build_chat_prompt,
    build_reasoning_prompt,
    enforce_word_limit,
    word_count,
)
from stitch.model import BlockSeq, walk_project_blocks
from stitch.mutate import random_variant
from stitch.normalize import normalize
from stitch.sb3 import load_project, pack_project, serialize_project
from stitch.session import COMPLETE, IN_PROGRESS, SessionStore, TutorEngine

PASS = "[ACCEPTANCE] {name}: PASS ({detail})"


def _report(name, detail):
    print(PASS.format(name=name, detail=detail))


def test_seeded_bug_detection():
    """Severity-1 matches the seeded bug in >=9/10 pairs; present in 10/10."""
    top_matches = 0
    present = 0
    for pair, student, teacher in build_pairs():
        report = diff_projects(student, teacher)
        assert report.items, f"{pair.name}: empty report"
        if pair.expected.matches(report.items[0]):
            top_matches += 1
        if any(pair.expected.matches(item) for item in report.items):
            present += 1
    assert present == 10, f"seeded bug present in only {present}/10"
    assert top_matches >= 9, f"severity-1 match in only {top_matches}/10"
    _report("seeded-bug detection", f"top={top_matches}/10, present={present}/10")


def test_equivalence_blindness():
    """Renamed/commuted/rewritten/noisy variants diff clean in 10/10."""
    clean = 0
    variants = build_equivalence_variants()
    for name, variant, original in variants:
        report = diff_projects(variant, original)
        assert report.functionally_equivalent, f"{name}: {len(report.items)} items"
        clean += 1
    assert clean == 10
    _report("equivalence blindness", f"{clean}/10 functionally equivalent")


def test_latency_p95_under_half_second():
    """diff_projects p95 < 500 ms over 50 runs at ~150-block scale."""
    pairs = build_pairs()
    blocks = [sum(1 for _ in walk_project_blocks(t)) for _, _, t in pairs]
    assert statistics.mean(blocks) >= 120, "corpus below the intended scale"
    timings = []
    for i in range(50):
        _, student, teacher = pairs[i % len(pairs)]
        start = time.perf_counter()
        diff_projects(student, teacher)
        timings.append(time.perf_counter() - start)
    timings.sort()
    p95 = timings[int(len(timings) * 0.95) - 1]
    assert p95 < 0.5, f"p95 {p95 * 1000:.1f} ms"
    _report(
        "latency",
        f"p95={p95 * 1000:.1f} ms over 50 runs, avg project {statistics.mean(blocks):.0f} blocks",
    )


def _brute_force_min_ops(student, teacher):
    s, t = student.blocks, teacher.blocks

    @functools.lru_cache(maxsize=None)
    def best(i, j):
        if i == len(s) and j == len(t):
            return 0
        options = []
        if i < len(s):
            options.append(1 + best(i + 1, j))
        if j < len(t):
            options.append(1 + best(i, j + 1))
        if i < len(s) and j < len(t) and s[i].opcode == t[j].opcode:
            options.append((0 if s[i] == t[j] else 1) + best(i + 1, j + 1))
        return min(options)

    return best(0, 0)


def test_lcs_matches_brute_force_on_1000_pairs():
    """Alignment op count equals the enumerated minimum in 100% of cases."""
    from stitch.build import blk

    pool = ("motion_movesteps", "looks_say", "control_wait", "looks_show", "looks_hide")

    def random_block(rng):
        opcode = rng.choice(pool)
        if opcode in ("motion_movesteps", "control_wait"):
            return blk(opcode, rng.randrange(3))
        if opcode == "looks_say":
            return blk(opcode, rng.choice("ab"))
        return blk(opcode)

    rng = random.Random(20240)
    agreements = 0
    for _ in range(1000):
        s = BlockSeq([random_block(rng) for _ in range(rng.randrange(9))])
        t = BlockSeq([random_block(rng) for _ in range(rng.randrange(9))])
        if align_blocks_lcs(s, t).op_count() == _brute_force_min_ops(s, t):
            agreements += 1
    assert agreements == 1000, f"only {agreements}/1000 matched the oracle"
    _report("LCS oracle", "1000/1000 minimal")


def test_fixed_point_repair():
    """next_hint + apply_fix empties every report within (#items + 2) rounds
    and the final project reloads with zero schema errors."""
    engine = TutorEngine(SessionStore())
    for pair, student, teacher in build_pairs():
        state = engine.create_session(pack_project(teacher), pack_project(student))
        budget = len(state.report.items) + 2
        rounds = 0
        while state.status == IN_PROGRESS and rounds <= budget:
            hint = engine.next_hint(state.session_id)
            state = engine.apply_fix(state.session_id, hint.hint_id)
            rounds += 1
        assert state.status == COMPLETE, f"{pair.name}: not complete in {rounds}"
        assert rounds <= budget, f"{pair.name}: {rounds} rounds > budget {budget}"
        reloaded = load_project(pack_project(state.student))
        assert reloaded == state.student
    _report("fixed-point repair", "10/10 pairs converge and reload")


def test_normalization_idempotence():
    """normalize(normalize(x)) == normalize(x) on corpus + 500 mutants."""
    checked = 0
    bases = []
    for pair, student, teacher in build_pairs():
        for ast in (student, teacher):
            once = normalize(ast)
            assert normalize(once.project).project == once.project, pair.name
            checked += 1
            bases.append(ast)
    rng = random.Random(77)
    for i in range(500):
        variant = random_variant(bases[i % len(bases)], rng)
        once = normalize(variant)
        assert normalize(once.project).project == once.project, f"mutant {i}"
        checked += 1
    _report("normalization idempotence", f"{checked} projects (incl. 500 mutants)")


def test_word_limits_and_stub_determinism():
    """Fuzzed provider outputs stay within 30/100 words; the stub pipeline is
    byte-identical across two runs."""
    pair, student, teacher = build_pairs()[3]
    report = diff_projects(student, teacher)
    reasoning = build_reasoning_prompt(teacher, student, report.items[0])
    chat = build_chat_prompt("Why?", teacher=teacher, student=student, report=report)

    class Fixed:
        def __init__(self, text):
            self.text = text

        def complete(self, prompt):
            return self.text

    rng = random.Random(31337)
    alphabet = "abcdefghij .!?\n\t'"
    for i in range(1000):
        text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 800)))
        gateway = Gateway(provider=Fixed(text))
        assert word_count(gateway.generate(reasoning)) <= REASONING_WORD_LIMIT, i
        assert word_count(gateway.generate(chat)) <= CHAT_WORD_LIMIT, i

    def run_pipeline() -> bytes:
        engine = TutorEngine(SessionStore())
        state = engine.create_session(pack_project(teacher), pack_project(student))
        hint = engine.next_hint(state.session_id)
        reply = engine.chat(state.session_id, "Why is this change needed?")
        state = engine.apply_fix(state.session_id, hint.hint_id)
        blob = (
            state.report.serialize()
            + "|" + hint.hint_id
            + "|" + hint.explanation
            + "|" + str(hint.to_json())
            + "|" + reply
            + "|" + serialize_project(state.student)
        )
        return blob.encode()

    assert run_pipeline() == run_pipeline()
    _report("word limits + stub determinism", "1000 fuzz cases; two runs byte-identical")


def test_report_determinism():
    """Serialized reports are byte-identical across repeated runs."""
    for pair, student, teacher in build_pairs()[:5]:
        student_bytes = pack_project(student)
        teacher_bytes = pack_project(teacher)
        first = diff_projects(
            load_project(student_bytes), load_project(teacher_bytes)
        ).serialize().encode()
        second = diff_projects(
            load_project(student_bytes), load_project(teacher_bytes)
        ).serialize().encode()
        assert first == second, pair.name
    _report("report determinism", "5 pairs, byte-identical re-runs")
