"""Corpus and label files (JSONL) and the report / summary renderers.

All output is UTF-8 with LF line endings and a stable key and column order.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .metrics import Comparison, EvalSummary, StatTestResult
from .model import CRITERIA, Criterion, FlawReport, FlawSet, LabelMatrix, Question, question_errors, validate_question

REQUIRED_FIELDS = ("id", "stem", "options", "answer_index")


class CorpusError(ValueError):
    """Input file problems, one message per offending line."""

    def __init__(self, path: str | Path, errors: Sequence[str]):
        self.path = str(path)
        self.errors = list(errors)
        super().__init__(f"{self.path}: " + "; ".join(self.errors))


def _read_records(path: str | Path) -> list[tuple[int, object]]:
    text = Path(path).read_text(encoding="utf-8-sig")
    stripped = text.lstrip()
    if stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CorpusError(path, [f"line {exc.lineno}: malformed JSON ({exc.msg})"]) from None
        return [(i + 1, rec) for i, rec in enumerate(data)]
    records, errors = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            records.append((lineno, json.loads(line)))
        except json.JSONDecodeError as exc:
            errors.append(f"line {lineno}: malformed JSON ({exc.msg})")
    if errors:
        raise CorpusError(path, errors)
    return records


def _duplicate_errors(seen: dict[str, list[int]], what: str = "id") -> list[str]:
    return [
        f"duplicate {what} {qid!r} on lines {', '.join(map(str, lines))}"
        for qid, lines in seen.items()
        if len(lines) > 1
    ]


def load_corpus(path: str | Path) -> list[Question]:
    """Read one question per line; every problem is reported with its line number."""
    questions, errors = [], []
    seen: dict[str, list[int]] = {}
    for lineno, rec in _read_records(path):
        if not isinstance(rec, dict):
            errors.append(f"line {lineno}: expected a JSON object")
            continue
        missing = [f for f in REQUIRED_FIELDS if f not in rec]
        if missing:
            errors.append(f"line {lineno}: missing field(s) {', '.join(missing)}")
            continue
        fields = dict(
            id=rec["id"], stem=rec["stem"], options=rec["options"],
            answer_index=rec["answer_index"], domain=rec.get("domain"),
        )
        problems = question_errors(**fields)
        if problems:
            errors.extend(f"line {lineno}: {p}" for p in problems)
            continue
        seen.setdefault(rec["id"], []).append(lineno)
        questions.append(validate_question(**fields))
    errors.extend(_duplicate_errors(seen))
    if errors:
        raise CorpusError(path, errors)
    return questions


def load_labels(path: str | Path, source: str = "other") -> LabelMatrix:
    """Read {"id", "flaws": [...]} records. Flaw entries may be names or report evidence objects."""
    ids, rows, errors = [], [], []
    incomplete = set()
    seen: dict[str, list[int]] = {}
    for lineno, rec in _read_records(path):
        if not isinstance(rec, dict) or not isinstance(rec.get("id"), str):
            errors.append(f"line {lineno}: expected an object with a string id")
            continue
        names = []
        for entry in rec.get("flaws") or []:
            name = entry.get("criterion") if isinstance(entry, dict) else entry
            try:
                names.append(Criterion.parse(str(name)))
            except ValueError:
                errors.append(f"line {lineno}: unknown criterion {name!r}")
        seen.setdefault(rec["id"], []).append(lineno)
        if len(seen[rec["id"]]) == 1:
            ids.append(rec["id"])
            rows.append(FlawSet.from_criteria(names))
            if rec.get("incomplete"):
                incomplete.add(rec["id"])
    errors.extend(_duplicate_errors(seen))
    if errors:
        raise CorpusError(path, errors)
    return LabelMatrix(tuple(ids), tuple(rows), source, frozenset(incomplete))


def dump_labels(m: LabelMatrix, extra: dict[str, dict] | None = None) -> bytes:
    lines = []
    for qid, row in zip(m.ids, m.rows):
        rec = {"id": qid, "flaws": [c.value for c in row.criteria]}
        if qid in m.incomplete:
            rec["incomplete"] = True
        if extra and qid in extra:
            rec.update(extra[qid])
        lines.append(json.dumps(rec, ensure_ascii=False))
    return "".join(line + "\n" for line in lines).encode("utf-8")


def dump_jsonl(records: Iterable[dict]) -> bytes:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records).encode("utf-8")


def write_atomic(path: str | Path, data: bytes) -> None:
    """Replace ``path`` in one rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


# --- rendering --------------------------------------------------------------


def format_table(headers: Sequence[str], rows: Sequence[Sequence[object]], left: int = 1) -> str:
    """Plain aligned table; the first ``left`` columns are left-aligned, the rest right-aligned."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    out = []
    for r in cells:
        parts = [c.ljust(w) if i < left else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))]
        out.append("  ".join(parts).rstrip())
    return "\n".join(out) + "\n"


def report_record(r: FlawReport) -> dict:
    return {
        "id": r.question_id,
        "flaws": [e.to_json() for e in r.evidence if r.flaws[e.criterion]],
        "flaw_count": r.flaw_count,
        "verdict": r.verdict,
    }


def emit_report(reports: Sequence[FlawReport], fmt: str = "json") -> bytes:
    if fmt == "json":
        body = json.dumps([report_record(r) for r in reports], ensure_ascii=False, indent=2)
        return (body + "\n").encode("utf-8")
    if fmt == "jsonl":
        return dump_jsonl(report_record(r) for r in reports)
    if fmt == "tsv":
        lines = ["\t".join(["id", *(c.value for c in CRITERIA), "flaw_count", "verdict"])]
        for r in reports:
            lines.append("\t".join([r.question_id, *("1" if b else "0" for b in r.flaws), str(r.flaw_count), r.verdict]))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "table":
        rows = [
            (r.question_id, r.flaw_count, r.verdict, ", ".join(c.value for c in r.flaws.criteria) or "-")
            for r in reports
        ]
        return format_table(["id", "flaws", "verdict", "criteria"], rows, left=1).encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def lint_summary(reports: Sequence[FlawReport]) -> str:
    counts = [0] * len(CRITERIA)
    hist: dict[int, int] = {}
    acceptable = 0
    for r in reports:
        for i, b in enumerate(r.flaws):
            counts[i] += b
        hist[r.flaw_count] = hist.get(r.flaw_count, 0) + 1
        acceptable += r.verdict == "acceptable"
    per = " ".join(f"{c.value}={n}" for c, n in zip(CRITERIA, counts) if n)
    histo = " ".join(f"{k}:{hist[k]}" for k in sorted(hist))
    return (
        f"summary: questions={len(reports)} acceptable={acceptable} "
        f"unacceptable={len(reports) - acceptable} histogram=[{histo}] criteria=[{per}]"
    )


def fmt_f1(v: float | None) -> str:
    return "-" if v is None else f"{v:.2f}"


def _histogram_block(named: Sequence[tuple[str, list[int]]]) -> str:
    top = max([i for _, h in named for i, n in enumerate(h) if n] + [0])
    headers = ["Number of flaws", *map(str, range(top + 1))]
    return format_table(headers, [(name, *h[: top + 1]) for name, h in named])


def _confusion_block(confusion: list[list[int]]) -> str:
    rows = [
        ("gold acceptable", confusion[0][0], confusion[0][1]),
        ("gold unacceptable", confusion[1][0], confusion[1][1]),
    ]
    n = sum(map(sum, confusion))
    agree = confusion[0][0] + confusion[1][1]
    pct = f"{100 * agree / n:.2f}%" if n else "n/a"
    return format_table(["", "pred acceptable", "pred unacceptable"], rows) + f"verdict agreement: {agree}/{n} ({pct})\n"


def _stat_line(label: str, r: StatTestResult | None, err: str | None) -> str:
    if r is None:
        return f"{label}: n/a ({err})"
    sym = {"pearson": "r", "paired_t": "t", "chi_square": "chi2"}[r.name]
    return f"{label}: {sym}({r.df}) = {r.statistic:.4f}, p = {r.p_value:.4g}"


def render_summary(s: EvalSummary) -> str:
    out = [
        f"pred: {s.pred_source}  gold: {s.gold_source}  questions: {s.n}",
        f"match percent:      {100 * s.match_percent:.2f}%",
        f"exact-match ratio:  {s.exact_match_ratio:.4f}",
        f"Hamming loss:       {s.hamming_loss:.4f}",
        f"micro-average F1:   {fmt_f1(s.micro_f1)}",
        "",
        "Per-criterion flaw counts (N) and F1",
    ]
    rows = []
    for m, (k, a) in zip(s.per_criterion, s.kappas):
        rows.append((m.criterion.value, m.support, m.predicted, fmt_f1(m.f1), f"{k:.2f}", f"{100 * a:.2f}%"))
    rows.append(("micro-avg", "", "", fmt_f1(s.micro_f1), "", ""))
    rows.append(("totals", sum(m.support for m in s.per_criterion), sum(m.predicted for m in s.per_criterion), "", "", ""))
    out.append(format_table(["criterion", "N gold", "N pred", "F1", "kappa", "agreement"], rows).rstrip("\n"))
    if s.domain_counts:
        domains = sorted(s.domain_counts)
        headers = ["criterion"]
        for d in domains:
            headers += [f"{d} N gold", f"{d} N pred", f"{d} F1"]
        rows = []
        for c in CRITERIA:
            row = [c.value]
            for d in domains:
                ng, npred, f1 = s.domain_counts[d][c.value]
                row += [ng, npred, fmt_f1(f1)]
            rows.append(row)
        micro = ["micro-avg"]
        for d in domains:
            micro += ["", "", fmt_f1(s.micro_f1_by_domain[d])]
        rows.append(micro)
        out += ["", "By domain", format_table(headers, rows).rstrip("\n")]
    out += [
        "",
        "Flaw counts per question",
        _histogram_block([(s.gold_source or "gold", s.gold_histogram), (s.pred_source or "pred", s.pred_histogram)]).rstrip("\n"),
        "",
        f"Quality verdicts (unacceptable at >= {s.threshold} flaws)",
        _confusion_block(s.confusion).rstrip("\n"),
    ]
    return "\n".join(out) + "\n"


def render_comparison(c: Comparison) -> str:
    out = ["== A vs gold ==", render_summary(c.a_vs_gold), "== B vs gold ==", render_summary(c.b_vs_gold)]
    out.append("== A vs B ==")
    out.append(f"match percent: {100 * c.a_vs_b_match:.2f}%")
    out.append("")
    out.append("== Per-criterion flaw-count correlation with gold ==")
    for key in sorted(c.pearson):
        out.append(_stat_line(key, c.pearson[key], c.pearson_errors.get(key)))
    out.append("")
    out.append("== Per-question flaw counts, paired t-test (gold vs method) ==")
    for key in sorted(c.paired):
        r = c.paired[key]
        line = _stat_line(key, r, c.paired_errors.get(key))
        if r is not None:
            d = r.details
            line += f"  (gold M={d['mean_x']:.2f} SD={d['sd_x']:.2f}; {key} M={d['mean_y']:.2f} SD={d['sd_y']:.2f})"
        out.append(line)
    out.append("")
    out.append(_stat_line("quality x source chi-square (gold, a, b)", c.quality_chi_square, c.quality_chi_square_error))
    return "\n".join(out) + "\n"


def dump_json(obj) -> bytes:
    return (json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=False) + "\n").encode("utf-8")
