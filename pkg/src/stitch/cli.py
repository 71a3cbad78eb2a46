"""Command line front door: diff, hint, fix, eval, serve, make-corpus."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, llm
from .diff import diff_projects
from .normalize import normalize
from .repair import apply_patch, synthesize_patch
from .sb3 import load_project, pack_project
from .session import SessionStore, TutorEngine, run_batch


def _load(path: str):
    return load_project(Path(path).read_bytes())


def _provider_config(args) -> llm.ProviderConfig:
    if getattr(args, "provider", "stub") == "remote":
        return llm.ProviderConfig(
            endpoint=args.endpoint or "",
            model=args.model,
            credential_env=args.credential_env,
        )
    return llm.ProviderConfig()


def _cmd_diff(args) -> int:
    report = diff_projects(_load(args.student), _load(args.teacher))
    serialized = report.serialize()
    if args.out:
        Path(args.out).write_text(serialized)
    else:
        print(serialized)
    if report.functionally_equivalent:
        print("functionally equivalent: no differences found", file=sys.stderr)
    else:
        print(f"{len(report.items)} difference(s) found", file=sys.stderr)
    return 0


def _cmd_hint(args) -> int:
    engine = TutorEngine(SessionStore(), provider=_provider_config(args))
    state = engine.create_session(
        Path(args.teacher).read_bytes(), Path(args.student).read_bytes()
    )
    if state.status == "COMPLETE":
        print("Congratulations, your project now implements all target features.")
        return 0
    hint = engine.next_hint(state.session_id)
    print(f"hint {hint.hint_id} (severity {hint.item.severity})")
    print(f"  {hint.item.message}")
    print(f"  explanation: {hint.explanation}")
    if hint.teacher_render:
        print("  target blocks:")
        for line in hint.teacher_render["text"]:
            print(f"    {line}")
    if hint.student_render:
        print("  your blocks:")
        for line in hint.student_render["text"]:
            print(f"    {line}")
    return 0


def _cmd_fix(args) -> int:
    student = _load(args.student)
    teacher = _load(args.teacher)
    teacher_norm = normalize(teacher)
    from .diff import diff_normalized

    report = diff_normalized(normalize(student), teacher_norm)
    budget = len(report.items) + 2
    applied = 0
    while report.items and (args.all or applied == 0) and applied < budget:
        patch = synthesize_patch(report.items[0], student, teacher, normalize(student), teacher_norm)
        student = apply_patch(student, patch)
        applied += 1
        report = diff_normalized(normalize(student), teacher_norm)
    out = args.out or "fixed.sb3"
    Path(out).write_bytes(pack_project(student))
    print(f"applied {applied} patch(es); remaining items: {len(report.items)}; wrote {out}")
    return 0 if report.functionally_equivalent or not args.all else 1


def _cmd_eval(args) -> int:
    rows = run_batch(args.corpus)
    text = json.dumps(rows, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    errors = [r for r in rows if "error" in r]
    print(f"{len(rows)} pair(s), {len(errors)} error(s)", file=sys.stderr)
    return 1 if errors else 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    store = SessionStore(args.db) if args.db else SessionStore()
    engine = TutorEngine(store, provider=_provider_config(args))
    uvicorn.run(create_app(engine), host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_make_corpus(args) -> int:
    summary = corpus.write_corpus(args.dir)
    print(json.dumps(summary, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="stitch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_diff = sub.add_parser("diff", help="compare a student project against a teacher project")
    p_diff.add_argument("student")
    p_diff.add_argument("teacher")
    p_diff.add_argument("--out", help="write the JSON report to a file")
    p_diff.set_defaults(func=_cmd_diff)

    p_hint = sub.add_parser("hint", help="print the most critical hint for a project pair")
    p_hint.add_argument("student")
    p_hint.add_argument("teacher")
    _provider_flags(p_hint)
    p_hint.set_defaults(func=_cmd_hint)

    p_fix = sub.add_parser("fix", help="apply suggested patches to the student project")
    p_fix.add_argument("student")
    p_fix.add_argument("teacher")
    p_fix.add_argument("--all", action="store_true", help="repeat until no differences remain")
    p_fix.add_argument("--out", help="output container path (default fixed.sb3)")
    p_fix.set_defaults(func=_cmd_fix)

    p_eval = sub.add_parser("eval", help="run the batch evaluation over a corpus directory")
    p_eval.add_argument("corpus")
    p_eval.add_argument("--out", help="write results JSON to a file")
    p_eval.set_defaults(func=_cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP tutoring service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--db", help="sqlite session store path (default: in-memory)")
    _provider_flags(p_serve)
    p_serve.set_defaults(func=_cmd_serve)

    p_corpus = sub.add_parser("make-corpus", help="write the fixture corpus to a directory")
    p_corpus.add_argument("dir")
    p_corpus.set_defaults(func=_cmd_make_corpus)

    args = parser.parse_args(argv)
    return args.func(args)


def _provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--provider", choices=("stub", "remote"), default="stub")
    parser.add_argument("--endpoint", default="", help="remote provider URL")
    parser.add_argument("--model", default="gemini-2.5-flash-lite")
    parser.add_argument(
        "--credential-env",
        dest="credential_env",
        default="STITCH_PROVIDER_KEY",
        help="environment variable holding the provider credential",
    )


if __name__ == "__main__":
    sys.exit(main())
