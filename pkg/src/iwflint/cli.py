"""``iwf`` command line: lint, judge, eval and compare.

Exit status: 0 success, 1 usage or I/O error, 2 invalid input data,
3 judge run left some questions incomplete.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import corpus as cio
from .detectors import DetectorConfig, load_config, parse_criteria_list, lint_corpus
from .judge import POLICIES, POLICY_RETRY, BackendConfig, BackendError, judge_corpus, make_backend
from .metrics import compare, evaluate
from .model import CRITERIA, AlignmentError, LabelMatrix

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INCOMPLETE = 3

log = logging.getLogger("iwflint")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(data: bytes, out: str | None) -> None:
    if out:
        cio.write_atomic(out, data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _threshold(value: str) -> int:
    n = int(value)
    if not 1 <= n <= len(CRITERIA) + 1:
        raise argparse.ArgumentTypeError(f"threshold must be in 1..{len(CRITERIA) + 1}")
    return n


def cmd_lint(args) -> int:
    cfg = DetectorConfig()
    try:
        if args.config:
            cfg = load_config(args.config, cfg)
        if args.rules:
            cfg = DetectorConfig.from_mapping({"enabled": args.rules}, cfg)
        if args.threshold is not None:
            cfg = DetectorConfig.from_mapping({"verdict_threshold": str(args.threshold)}, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    questions = cio.load_corpus(args.corpus)
    reports = lint_corpus(questions, cfg)
    _emit(cio.emit_report(reports, args.format), args.out)
    print(cio.lint_summary(reports), file=sys.stderr)
    return EXIT_OK


def cmd_judge(args) -> int:
    try:
        criteria = parse_criteria_list(args.criteria) if args.criteria else frozenset(CRITERIA)
        cfg = BackendConfig(
            endpoint=args.endpoint,
            model=args.model,
            timeout=args.timeout,
            concurrency=args.concurrency,
            max_attempts=args.max_attempts,
            backoff_base=args.backoff,
            cache_dir=Path(args.cache) if args.cache else None,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ordered = [c for c in CRITERIA if c in criteria]
    questions = cio.load_corpus(args.corpus)
    try:
        backend = make_backend(cfg)
    except BackendError as exc:
        raise UsageError(str(exc)) from None
    run = judge_corpus(questions, backend, cfg, ordered, policy=args.indeterminate)
    extra = {}
    if len(ordered) < len(CRITERIA):
        extra = {qid: {"judged": [c.value for c in ordered]} for qid in (q.id for q in questions)}
    for j in run.judgements:
        if not j.complete:
            extra.setdefault(j.question_id, {})["missing"] = [c.value for c in j.missing]
    audit = args.audit or (f"{args.out}.audit.jsonl" if args.out else None)
    if audit:
        cio.write_atomic(audit, cio.dump_jsonl(run.audit_records()))
    _emit(cio.dump_labels(run.matrix(), extra), args.out)
    calls = getattr(backend, "calls", None)
    print(
        f"judged {len(questions)} questions x {len(ordered)} criteria; "
        f"incomplete: {len(run.incomplete)}" + (f"; backend calls: {calls}" if calls is not None else ""),
        file=sys.stderr,
    )
    for qid in run.incomplete:
        print(f"incomplete: {qid}", file=sys.stderr)
    return EXIT_INCOMPLETE if run.incomplete else EXIT_OK


def _load_matrix(path: str, source: str) -> LabelMatrix:
    m = cio.load_labels(path, source)
    if m.incomplete:
        raise cio.CorpusError(path, [f"incomplete judge rows: {', '.join(sorted(m.incomplete))}"])
    return m


def _domains(args) -> dict[str, str | None] | None:
    if args.by_domain and not args.corpus:
        raise UsageError("--by-domain needs --corpus to read domain tags")
    if not args.corpus:
        return None
    questions = cio.load_corpus(args.corpus)
    return {q.id: q.domain for q in questions} if args.by_domain else None


def _source_name(path: str) -> str:
    return Path(path).stem


def cmd_eval(args) -> int:
    domains = _domains(args)
    pred = _load_matrix(args.pred, _source_name(args.pred))
    gold = _load_matrix(args.gold, _source_name(args.gold))
    summary = evaluate(pred, gold, domains, args.threshold)
    data = cio.dump_json(summary.to_json()) if args.format == "json" else cio.render_summary(summary).encode("utf-8")
    _emit(data, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    domains = _domains(args)
    a = _load_matrix(args.a, _source_name(args.a))
    b = _load_matrix(args.b, _source_name(args.b))
    gold = _load_matrix(args.gold, _source_name(args.gold))
    result = compare(a, b, gold, domains, args.threshold)
    data = cio.dump_json(result.to_json()) if args.format == "json" else cio.render_comparison(result).encode("utf-8")
    _emit(data, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="iwf", description="Detect item-writing flaws in multiple-choice questions.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="apply the rule-based detectors to a corpus")
    lint.add_argument("corpus")
    lint.add_argument("--rules", help="comma-separated criteria to enable (default: all)")
    lint.add_argument("--threshold", type=_threshold, help="flaw count at which a question is unacceptable (default 2)")
    lint.add_argument("--config", help="key = value detector settings file")
    lint.add_argument("--format", choices=("json", "jsonl", "tsv", "table"), default="json")
    lint.add_argument("--out")
    lint.set_defaults(func=cmd_lint)

    judge = sub.add_parser("judge", help="ask an LLM about each criterion for every question")
    judge.add_argument("corpus")
    judge.add_argument("--endpoint", required=True, help="chat completions URL, or mock://yes|no|hash")
    judge.add_argument("--model", default="gpt-4")
    judge.add_argument("--concurrency", type=int, default=4)
    judge.add_argument("--cache", help="response cache directory")
    judge.add_argument("--criteria", help="comma-separated criteria to judge (default: all)")
    judge.add_argument("--out", help="label file to write (default: stdout)")
    judge.add_argument("--audit", help="audit log path (default: <out>.audit.jsonl)")
    judge.add_argument("--timeout", type=float, default=60.0)
    judge.add_argument("--max-attempts", type=int, default=3)
    judge.add_argument("--backoff", type=float, default=1.0, help="base seconds for exponential backoff")
    judge.add_argument("--indeterminate", choices=POLICIES, default=POLICY_RETRY)
    judge.set_defaults(func=cmd_judge)

    for name, func, helptext in (
        ("eval", cmd_eval, "score one label file against gold labels"),
        ("compare", cmd_compare, "score two label files against gold and against each other"),
    ):
        sp = sub.add_parser(name, help=helptext)
        if name == "eval":
            sp.add_argument("--pred", required=True)
        else:
            sp.add_argument("--a", required=True)
            sp.add_argument("--b", required=True)
        sp.add_argument("--gold", required=True)
        sp.add_argument("--corpus", help="corpus file supplying domain tags")
        sp.add_argument("--by-domain", action="store_true")
        sp.add_argument("--threshold", type=_threshold, default=2)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out")
        sp.set_defaults(func=func)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"iwf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cio.CorpusError as exc:
        print(f"iwf: invalid input {exc.path}:", file=sys.stderr)
        for e in exc.errors:
            print(f"  {e}", file=sys.stderr)
        return EXIT_INVALID
    except AlignmentError as exc:
        print(f"iwf: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"iwf: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
