"""Agreement and classification metrics between label matrices, plus the significance tests.

Flaw is the positive class throughout. The t and chi-square tail probabilities
use the regularized incomplete beta and gamma functions, evaluated by power
series and Lentz continued fractions to about 1e-14 relative error.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .model import (
    CRITERIA,
    DEFAULT_THRESHOLD,
    N_CRITERIA,
    UNACCEPTABLE,
    Criterion,
    LabelMatrix,
    verdict_of,
)


class StatsError(ValueError):
    """Raised when a test is undefined for the data (zero variance, empty expected cell)."""


# --- special functions ------------------------------------------------------

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


def _betacf(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c, d = 1.0, 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must be in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def gammaincc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x)."""
    if x < 0 or a <= 0:
        raise ValueError("need a > 0 and x >= 0")
    if x == 0:
        return 1.0
    ln_front = -x + a * math.log(x) - math.lgamma(a)
    if x < a + 1.0:
        term = total = 1.0 / a
        ap = a
        for _ in range(_MAX_ITER):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                return max(0.0, 1.0 - total * math.exp(ln_front))
        raise ArithmeticError("incomplete gamma series did not converge")
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = b + an / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(ln_front) * h
    raise ArithmeticError("incomplete gamma continued fraction did not converge")


def t_two_sided_p(t: float, df: float) -> float:
    if math.isinf(t):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + t * t))


def chi2_sf(x: float, df: float) -> float:
    return gammaincc(df / 2.0, x / 2.0)


# --- tests ------------------------------------------------------------------


@dataclass(frozen=True)
class StatTestResult:
    name: str
    statistic: float
    df: int
    p_value: float
    details: Mapping[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "test": self.name,
            "statistic": self.statistic,
            "df": self.df,
            "p_value": self.p_value,
            **{k: v for k, v in sorted(self.details.items())},
        }


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def _sd(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.sqrt(math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1))


def pearson_r(x: Sequence[float], y: Sequence[float]) -> StatTestResult:
    """Product-moment correlation; df = n - 2, two-tailed p from the t transform."""
    n = len(x)
    if n != len(y):
        raise ValueError("x and y differ in length")
    if n < 3:
        raise StatsError("pearson_r needs at least 3 pairs")
    mx, my = _mean(x), _mean(y)
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    if sxx == 0 or syy == 0:
        raise StatsError("zero variance: correlation undefined")
    r = sxy / math.sqrt(sxx * syy)
    if abs(abs(r) - 1.0) <= 8 * sys.float_info.epsilon:
        r = math.copysign(1.0, r)  # exact (anti)linear data; only rounding separates it from +/-1
    df = n - 2
    if abs(r) == 1.0:
        p = 0.0
    else:
        p = t_two_sided_p(r * math.sqrt(df / (1.0 - r * r)), df)
    return StatTestResult("pearson", r, df, p)


def paired_t(x: Sequence[float], y: Sequence[float]) -> StatTestResult:
    """Paired t on d = x - y. All-zero differences give t = 0, p = 1."""
    n = len(x)
    if n != len(y):
        raise ValueError("x and y differ in length")
    if n < 2:
        raise StatsError("paired_t needs at least 2 pairs")
    d = [a - b for a, b in zip(x, y)]
    details = {"mean_x": _mean(x), "mean_y": _mean(y), "sd_x": _sd(x), "sd_y": _sd(y), "mean_diff": _mean(d)}
    sd = _sd(d)
    if sd == 0:
        if all(v == 0 for v in d):
            return StatTestResult("paired_t", 0.0, n - 1, 1.0, details)
        raise StatsError("differences have zero variance")
    t = _mean(d) / (sd / math.sqrt(n))
    return StatTestResult("paired_t", t, n - 1, t_two_sided_p(t, n - 1), details)


def chi_square(table: Sequence[Sequence[float]]) -> StatTestResult:
    """Pearson chi-square test of independence, df = (rows - 1)(cols - 1)."""
    rows = [list(map(float, r)) for r in table]
    if len(rows) < 2 or len({len(r) for r in rows}) != 1 or len(rows[0]) < 2:
        raise ValueError("need a rectangular table with at least 2 rows and 2 columns")
    total = math.fsum(map(math.fsum, rows))
    row_sums = [math.fsum(r) for r in rows]
    col_sums = [math.fsum(col) for col in zip(*rows)]
    terms = []
    for i, r in enumerate(rows):
        for j, obs in enumerate(r):
            exp = row_sums[i] * col_sums[j] / total if total else 0.0
            if exp <= 0:
                raise StatsError("an expected count is zero")
            terms.append((obs - exp) ** 2 / exp)
    stat = math.fsum(terms)
    df = (len(rows) - 1) * (len(rows[0]) - 1)
    return StatTestResult("chi_square", stat, df, chi2_sf(stat, df), {"n": total})


# --- label-matrix metrics ---------------------------------------------------


def _aligned(pred: LabelMatrix, gold: LabelMatrix) -> tuple[LabelMatrix, LabelMatrix]:
    return pred.aligned_to(gold), gold


def _cells(pred: LabelMatrix, gold: LabelMatrix) -> tuple[int, int]:
    p, g = _aligned(pred, gold)
    agree = sum(a == b for rp, rg in zip(p.rows, g.rows) for a, b in zip(rp.bits, rg.bits))
    return agree, len(g) * N_CRITERIA


def match_percent(a: LabelMatrix, b: LabelMatrix) -> float:
    """Fraction of agreeing cells (a ratio in [0, 1])."""
    agree, total = _cells(a, b)
    if not total:
        raise ValueError("empty matrices")
    return agree / total


def hamming_loss(a: LabelMatrix, b: LabelMatrix) -> float:
    agree, total = _cells(a, b)
    if not total:
        raise ValueError("empty matrices")
    return (total - agree) / total


def exact_match_ratio(a: LabelMatrix, b: LabelMatrix) -> float:
    p, g = _aligned(a, b)
    if not len(g):
        raise ValueError("empty matrices")
    return sum(rp == rg for rp, rg in zip(p.rows, g.rows)) / len(g)


@dataclass(frozen=True)
class CriterionMetrics:
    criterion: Criterion
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def support(self) -> int:
        return self.tp + self.fn

    @property
    def predicted(self) -> int:
        return self.tp + self.fp

    @property
    def f1(self) -> float | None:
        """2TP / (2TP + FP + FN); None (a dash) when neither side has a positive."""
        denom = 2 * self.tp + self.fp + self.fn
        return None if denom == 0 else 2 * self.tp / denom

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "support": self.support,
            "predicted": self.predicted,
            "f1": self.f1,
        }


def _confusion(pred_col: Iterable[bool], gold_col: Iterable[bool]) -> tuple[int, int, int, int]:
    tp = fp = fn = tn = 0
    for p, g in zip(pred_col, gold_col):
        if p and g:
            tp += 1
        elif p:
            fp += 1
        elif g:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def criterion_f1(pred: LabelMatrix, gold: LabelMatrix, criterion: Criterion, ids: Iterable[str] | None = None) -> CriterionMetrics:
    p, g = _aligned(pred, gold)
    if ids is not None:
        keep = list(ids)
        p, g = p.subset(keep), g.subset(keep)
    return CriterionMetrics(criterion, *_confusion(p.column(criterion), g.column(criterion)))


def micro_f1(
    pred: LabelMatrix,
    gold: LabelMatrix,
    criteria: Iterable[Criterion] | None = None,
    ids: Iterable[str] | None = None,
) -> float | None:
    """F1 from TP/FP/FN pooled over the chosen criteria and questions; None if no positives at all."""
    crit = list(CRITERIA if criteria is None else criteria)
    if not crit:
        raise ValueError("empty criterion subset")
    p, g = _aligned(pred, gold)
    if ids is not None:
        keep = list(ids)
        if not keep:
            raise ValueError("empty id subset")
        p, g = p.subset(keep), g.subset(keep)
    tp = fp = fn = 0
    for c in crit:
        a, b, d, _ = _confusion(p.column(c), g.column(c))
        tp, fp, fn = tp + a, fp + b, fn + d
    denom = 2 * tp + fp + fn
    return None if denom == 0 else 2 * tp / denom


def cohen_kappa(a: Sequence[bool], b: Sequence[bool]) -> tuple[float, float]:
    """Return (kappa, observed agreement) for two binary raters."""
    n = len(a)
    if n != len(b):
        raise ValueError("columns differ in length")
    if n == 0:
        raise ValueError("empty columns")
    po = sum(bool(x) == bool(y) for x, y in zip(a, b)) / n
    pa, pb = sum(map(bool, a)) / n, sum(map(bool, b)) / n
    pe = pa * pb + (1 - pa) * (1 - pb)
    if pe == 1.0:
        return 1.0, po
    return (po - pe) / (1 - pe), po


def flaw_count_histogram(m: LabelMatrix) -> list[int]:
    """Bin i counts the questions with exactly i flaws, for i = 0..19."""
    bins = [0] * (N_CRITERIA + 1)
    for n in m.flaw_counts():
        bins[n] += 1
    return bins


def verdict_confusion(pred: LabelMatrix, gold: LabelMatrix, threshold: int = DEFAULT_THRESHOLD) -> list[list[int]]:
    """2x2 counts, rows = gold verdict, columns = predicted verdict, order (acceptable, unacceptable)."""
    p, g = _aligned(pred, gold)
    out = [[0, 0], [0, 0]]
    for rp, rg in zip(p.rows, g.rows):
        gi = int(verdict_of(rg.count, threshold) == UNACCEPTABLE)
        pi = int(verdict_of(rp.count, threshold) == UNACCEPTABLE)
        out[gi][pi] += 1
    return out


def verdict_agreement(confusion: Sequence[Sequence[int]]) -> float:
    total = sum(map(sum, confusion))
    return (confusion[0][0] + confusion[1][1]) / total if total else 0.0


def verdict_counts(m: LabelMatrix, threshold: int = DEFAULT_THRESHOLD) -> tuple[int, int]:
    unacc = sum(verdict_of(n, threshold) == UNACCEPTABLE for n in m.flaw_counts())
    return len(m) - unacc, unacc


# --- summaries --------------------------------------------------------------


def _safe(fn, *args):
    try:
        return fn(*args), None
    except StatsError as exc:
        return None, str(exc)


@dataclass
class EvalSummary:
    pred_source: str
    gold_source: str
    n: int
    match_percent: float
    exact_match_ratio: float
    hamming_loss: float
    per_criterion: list[CriterionMetrics]
    kappas: list[tuple[float, float]]
    micro_f1: float | None
    micro_f1_by_domain: dict[str, float | None]
    pred_histogram: list[int]
    gold_histogram: list[int]
    confusion: list[list[int]]
    threshold: int = DEFAULT_THRESHOLD
    domain_counts: dict[str, dict[str, tuple[int, int, float | None]]] = field(default_factory=dict)

    @property
    def verdict_agreement(self) -> float:
        return verdict_agreement(self.confusion)

    def to_json(self) -> dict:
        return {
            "pred_source": self.pred_source,
            "gold_source": self.gold_source,
            "n_questions": self.n,
            "match_percent": self.match_percent,
            "exact_match_ratio": self.exact_match_ratio,
            "hamming_loss": self.hamming_loss,
            "micro_f1": self.micro_f1,
            "micro_f1_by_domain": dict(sorted(self.micro_f1_by_domain.items())),
            "per_criterion": [
                {**m.to_json(), "kappa": k, "agreement": a}
                for m, (k, a) in zip(self.per_criterion, self.kappas)
            ],
            "flaw_count_histogram": {"pred": self.pred_histogram, "gold": self.gold_histogram},
            "verdict_threshold": self.threshold,
            "verdict_confusion": {
                "rows": "gold (acceptable, unacceptable)",
                "columns": "pred (acceptable, unacceptable)",
                "counts": self.confusion,
                "agreement": self.verdict_agreement,
            },
        }


def evaluate(
    pred: LabelMatrix,
    gold: LabelMatrix,
    domains: Mapping[str, str | None] | None = None,
    threshold: int = DEFAULT_THRESHOLD,
) -> EvalSummary:
    """Every comparison statistic between a labeling and the gold labels."""
    p, g = _aligned(pred, gold)
    per = [criterion_f1(p, g, c) for c in CRITERIA]
    kappas = [cohen_kappa(p.column(c), g.column(c)) for c in CRITERIA]
    by_domain: dict[str, float | None] = {}
    domain_counts: dict[str, dict[str, tuple[int, int, float | None]]] = {}
    if domains:
        groups: dict[str, list[str]] = {}
        for qid in g.ids:
            d = domains.get(qid)
            if d:
                groups.setdefault(d, []).append(qid)
        for d, ids in sorted(groups.items()):
            by_domain[d] = micro_f1(p, g, CRITERIA, ids)
            domain_counts[d] = {}
            for c in CRITERIA:
                m = criterion_f1(p, g, c, ids)
                domain_counts[d][c.value] = (m.support, m.predicted, m.f1)
    return EvalSummary(
        pred_source=p.source,
        gold_source=g.source,
        n=len(g),
        match_percent=match_percent(p, g),
        exact_match_ratio=exact_match_ratio(p, g),
        hamming_loss=hamming_loss(p, g),
        per_criterion=per,
        kappas=kappas,
        micro_f1=micro_f1(p, g),
        micro_f1_by_domain=by_domain,
        pred_histogram=flaw_count_histogram(p),
        gold_histogram=flaw_count_histogram(g),
        confusion=verdict_confusion(p, g, threshold),
        threshold=threshold,
        domain_counts=domain_counts,
    )


@dataclass
class Comparison:
    a_vs_gold: EvalSummary
    b_vs_gold: EvalSummary
    a_vs_b_match: float
    a_vs_b_kappas: list[tuple[float, float]]
    pearson: dict[str, StatTestResult | None]
    pearson_errors: dict[str, str]
    paired: dict[str, StatTestResult | None]
    paired_errors: dict[str, str]
    quality_chi_square: StatTestResult | None
    quality_chi_square_error: str | None

    def to_json(self) -> dict:
        def res(r, err):
            return r.to_json() if r is not None else {"error": err}

        return {
            "a_vs_gold": self.a_vs_gold.to_json(),
            "b_vs_gold": self.b_vs_gold.to_json(),
            "a_vs_b": {
                "match_percent": self.a_vs_b_match,
                "kappa": {c.value: k for c, (k, _) in zip(CRITERIA, self.a_vs_b_kappas)},
            },
            "criterion_count_pearson": {k: res(v, self.pearson_errors.get(k)) for k, v in self.pearson.items()},
            "flaw_count_paired_t": {k: res(v, self.paired_errors.get(k)) for k, v in self.paired.items()},
            "quality_chi_square": res(self.quality_chi_square, self.quality_chi_square_error),
        }


def compare(
    a: LabelMatrix,
    b: LabelMatrix,
    gold: LabelMatrix,
    domains: Mapping[str, str | None] | None = None,
    threshold: int = DEFAULT_THRESHOLD,
) -> Comparison:
    a, b = a.aligned_to(gold), b.aligned_to(gold)
    gold_counts = gold.criterion_counts()
    pearson, pearson_err, paired, paired_err = {}, {}, {}, {}
    for name, m in (("a", a), ("b", b)):
        pearson[name], err = _safe(pearson_r, m.criterion_counts(), gold_counts)
        if err:
            pearson_err[name] = err
        paired[name], err = _safe(paired_t, gold.flaw_counts(), m.flaw_counts())
        if err:
            paired_err[name] = err
    if domains:
        groups: dict[str, list[str]] = {}
        for qid in gold.ids:
            if domains.get(qid):
                groups.setdefault(domains[qid], []).append(qid)
        for d, ids in sorted(groups.items()):
            g_counts = gold.subset(ids).criterion_counts()
            for name, m in (("a", a), ("b", b)):
                key = f"{name}:{d}"
                pearson[key], err = _safe(pearson_r, m.subset(ids).criterion_counts(), g_counts)
                if err:
                    pearson_err[key] = err
    table = [list(col) for col in zip(*(verdict_counts(m, threshold) for m in (gold, a, b)))]
    chi, chi_err = _safe(chi_square, table)
    return Comparison(
        a_vs_gold=evaluate(a, gold, domains, threshold),
        b_vs_gold=evaluate(b, gold, domains, threshold),
        a_vs_b_match=match_percent(a, b),
        a_vs_b_kappas=[cohen_kappa(a.column(c), b.column(c)) for c in CRITERIA],
        pearson=pearson,
        pearson_errors=pearson_err,
        paired=paired,
        paired_errors=paired_err,
        quality_chi_square=chi,
        quality_chi_square_error=chi_err,
    )
