"""Command-line interface behavior over real container files."""

import json

from stitch.cli import main
from stitch.corpus import build_pairs, write_corpus
from stitch.sb3 import load_project, pack_project


def _write_pair(tmp_path, index=3):
    pair, student, teacher = build_pairs()[index]
    student_path = tmp_path / "student.sb3"
    teacher_path = tmp_path / "teacher.sb3"
    student_path.write_bytes(pack_project(student))
    teacher_path.write_bytes(pack_project(teacher))
    return pair, student_path, teacher_path


def test_diff_writes_report(tmp_path, capsys):
    pair, student_path, teacher_path = _write_pair(tmp_path)
    out = tmp_path / "report.json"
    code = main(["diff", str(student_path), str(teacher_path), "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["functionallyEquivalent"] is False
    assert report["items"][0]["severity"] == 1


def test_hint_prints_explanation(tmp_path, capsys):
    pair, student_path, teacher_path = _write_pair(tmp_path)
    code = main(["hint", str(student_path), str(teacher_path)])
    assert code == 0
    output = capsys.readouterr().out
    assert "explanation:" in output
    assert "Explorer" in output


def test_fix_all_reaches_equivalence(tmp_path, capsys):
    pair, student_path, teacher_path = _write_pair(tmp_path)
    fixed_path = tmp_path / "fixed.sb3"
    code = main(
        ["fix", str(student_path), str(teacher_path), "--all", "--out", str(fixed_path)]
    )
    assert code == 0
    fixed = load_project(fixed_path.read_bytes())
    from stitch.diff import diff_projects

    teacher = load_project(teacher_path.read_bytes())
    assert diff_projects(fixed, teacher).functionally_equivalent


def test_eval_over_generated_corpus(tmp_path, capsys):
    corpus_dir = tmp_path / "corpus"
    write_corpus(corpus_dir)
    out = tmp_path / "rows.json"
    code = main(["eval", str(corpus_dir / "pairs"), "--out", str(out)])
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 10


def test_make_corpus(tmp_path, capsys):
    code = main(["make-corpus", str(tmp_path / "c")])
    assert code == 0
    assert (tmp_path / "c" / "pairs" / "clone-wars" / "teacher.sb3").exists()
    assert (tmp_path / "c" / "variants").is_dir()
