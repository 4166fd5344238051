"""Deterministic text primitives used by the detectors.

Nothing here is trained: tokens come from one regular expression, sentences from
a punctuation rule with an abbreviation list, and word forms from a small
suffix-stripping stemmer whose rules are listed in ``STEM_RULES``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

WORD = "word"
NUMBER = "number"
PUNCT = "punctuation"

_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?(?![^\W_]))"
    r"|(?P<word>[^\W_]+(?:['’\-][^\W_]+)*)"
    r"|(?P<punct>\S)"
)


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: str

    @property
    def norm(self) -> str:
        return self.text.lower()

    @property
    def key(self) -> str:
        """Lowercase form with typographic apostrophes folded, for lexicon lookups."""
        return self.norm.replace("’", "'")

    @property
    def stem(self) -> str:
        return stem(self.key)

    @property
    def is_wordlike(self) -> bool:
        return self.kind != PUNCT


@lru_cache(maxsize=65536)
def tokenize(text: str) -> tuple[Token, ...]:
    """Split text into word, number and single-character punctuation tokens.

    A number is a digit run (optionally with thousands commas and a decimal part)
    not followed by a letter; "H2O" and "1990s" are words.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        tokens.append(Token(m.group(), m.start(), m.end(), m.lastgroup if m.lastgroup != "punct" else PUNCT))
    return tuple(tokens)


def words(text: str) -> list[Token]:
    return [t for t in tokenize(text) if t.is_wordlike]


# --- lexicons ---------------------------------------------------------------

LEXICON_ENV = "IWF_LEXICON_DIR"


@lru_cache(maxsize=None)
def load_lexicon(name: str) -> frozenset[str]:
    """Read ``<name>.txt`` (one entry per line, ``#`` comments) from IWF_LEXICON_DIR or the package."""
    override = os.environ.get(LEXICON_ENV)
    path = Path(override) / f"{name}.txt" if override else None
    if path is not None and path.is_file():
        raw = path.read_text(encoding="utf-8")
    else:
        raw = resources.files("iwflint.resources").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    entries = frozenset(
        " ".join(line.strip().lower().split())
        for line in raw.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    )
    if not entries:
        raise ValueError(f"lexicon {name!r} is empty")
    return entries


def clear_caches() -> None:
    """Forget loaded lexicons and memoized analyses (after changing IWF_LEXICON_DIR)."""
    load_lexicon.cache_clear()
    tokenize.cache_clear()
    stem.cache_clear()
    content_words.cache_clear()
    parse_numeric.cache_clear()


def stopwords() -> frozenset[str]:
    return load_lexicon("stopwords")


# --- stemmer ----------------------------------------------------------------

_VOWELS = set("aeiou")

# (suffix, replacement, minimum length of what remains). Within a step only the
# first matching rule fires; steps run in order.
STEM_RULES: tuple[tuple[tuple[str, str, int], ...], ...] = (
    # possessives
    (("'s", "", 1), ("'", "", 1)),
    # plurals
    (
        ("sses", "ss", 1),
        ("ies", "y", 2),
        ("xes", "x", 1),
        ("ches", "ch", 1),
        ("shes", "sh", 1),
        ("zes", "z", 2),
        ("ss", "ss", 0),
        ("us", "us", 0),
        ("is", "is", 0),
        ("s", "", 3),
    ),
    # verb inflections; the remainder must contain a vowel
    (("ingly", "", 3), ("edly", "", 3), ("ing", "", 3), ("ed", "", 3)),
    # adverbs
    (("ly", "", 3),),
    # -tion family and other derivations
    (
        ("ization", "ize", 3),
        ("isation", "ize", 3),
        ("ational", "ate", 2),
        ("ation", "ate", 2),
        ("tional", "tion", 2),
        ("iveness", "ive", 2),
        ("ness", "", 3),
    ),
)


def _undouble(s: str) -> str:
    if len(s) >= 3 and s[-1] == s[-2] and s[-1] not in _VOWELS and s[-1] not in "lsz":
        return s[:-1]
    return s


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    """Strip inflectional and a few derivational suffixes from a lowercase word.

    After the rule steps, a final "y" after a consonant becomes "i" and a final
    "e" is dropped, so "body"/"bodies" -> "bodi" and "increase"/"increases"/
    "increased" -> "increas".
    """
    w = word.lower().replace("’", "'")
    if not any(ch.isalpha() for ch in w):
        return w
    for step_no, rules in enumerate(STEM_RULES):
        for suffix, repl, min_rest in rules:
            if not w.endswith(suffix):
                continue
            rest = w[: len(w) - len(suffix)]
            if len(rest) < min_rest:
                break
            if step_no == 2:
                if not _VOWELS & set(rest):
                    break
                w = _undouble(rest)
            else:
                w = rest + repl
            break
    if len(w) > 2 and w.endswith("y") and w[-2] not in _VOWELS:
        w = w[:-1] + "i"
    if len(w) > 3 and w.endswith("e"):
        w = w[:-1]
    return w


@lru_cache(maxsize=65536)
def content_words(text: str) -> frozenset[str]:
    """Stemmed forms of the non-stopword word and number tokens of ``text``."""
    stop = stopwords()
    return frozenset(t.stem for t in tokenize(text) if t.is_wordlike and t.key not in stop)


def overlap_similarity(a: str, b: str) -> float:
    """Jaccard overlap of content words; 0.0 when both sides are empty."""
    return jaccard(content_words(a), content_words(b))


def jaccard(a: frozenset[str] | set[str], b: frozenset[str] | set[str]) -> float:
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


# --- sentences --------------------------------------------------------------

ABBREVIATIONS = frozenset(
    "e.g i.e etc vs cf approx dr mr mrs ms prof st fig eq al ca jr sr".split()
)
_BOUNDARY_RE = re.compile(r"[.?!]+[\"'’”)\]]*(?=\s+[\"'“(\[]?[A-Z0-9])")


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Partition ``text`` into sentence spans.

    A boundary is sentence-final punctuation followed by whitespace and a capital
    letter or digit, unless the word before a period is a known abbreviation.
    Trailing whitespace belongs to the preceding sentence.
    """
    if not text:
        return []
    spans = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if m.group().startswith(".") and _ends_with_abbreviation(text[start : m.start()]):
            continue
        end = m.end()
        while end < len(text) and text[end].isspace():
            end += 1
        spans.append((start, end))
        start = end
    spans.append((start, len(text)))
    return spans


def _ends_with_abbreviation(prefix: str) -> bool:
    m = re.search(r"([A-Za-z.]+)$", prefix)
    return bool(m) and m.group(1).lower().strip(".") in ABBREVIATIONS


def sentences(text: str) -> list[str]:
    return [text[a:b] for a, b in split_sentences(text)]


# --- numbers ----------------------------------------------------------------


@dataclass(frozen=True)
class Quantity:
    kind: str  # "number" or "date"
    value: float


_NUM = r"[-+−]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?(?:[eE][-+]?\d+)?|[-+−]?\.\d+"
_NUMERIC_RE = re.compile(
    rf"^(?:[~≈<>≤≥]\s*)?[$€£]?\s*(?P<num>{_NUM})\s*"
    r"(?P<unit>%|°\s*[CFK]?|[A-Za-zµμΩ][A-Za-zµμΩ0-9/·^²³\-]{0,9}(?:\s+[A-Za-zµμΩ][A-Za-z0-9/·^²³\-]{0,9})?)?"
    r"\s*\.?$"
)
_YEAR_RE = re.compile(r"^(?:(?:in|year)\s+)?(?P<year>\d{3,4})\s*(?P<era>BCE|BC|CE|AD|B\.C\.|A\.D\.)?\.?$", re.I)
_ISO_DATE_RE = re.compile(r"^(?P<y>\d{4})-(?P<m>\d{2})-(?P<d>\d{2})$")
_UNIT_STOP = frozenset({"and", "or", "of", "the", "to", "than", "but", "not"})


@lru_cache(maxsize=65536)
def parse_numeric(option_text: str) -> Quantity | None:
    """Read an option that is predominantly one number or date.

    Accepts integers, decimals, thousands separators, percentages, a unit of
    at most two short words ("5 mol", "9.8 m/s"), four-digit years with an
    optional era and ISO dates. Years become kind "date". Anything else,
    including numbers written as words, gives None.
    """
    s = " ".join(option_text.strip().split())
    if not s:
        return None
    m = _ISO_DATE_RE.match(s)
    if m:
        y, mo, d = int(m["y"]), int(m["m"]), int(m["d"])
        if 1 <= mo <= 12 and 1 <= d <= 31:
            return Quantity("date", y + (mo - 1) / 12 + (d - 1) / 372)
        return None
    m = _YEAR_RE.match(s)
    if m and (m["era"] or len(m["year"]) == 4):
        year = int(m["year"])
        era = (m["era"] or "").upper().replace(".", "")
        if era in ("BC", "BCE"):
            return Quantity("date", float(-year))
        if era or 1000 <= year <= 2999:
            return Quantity("date", float(year))
    m = _NUMERIC_RE.match(s)
    if not m:
        return None
    unit = m["unit"] or ""
    if any(w.lower() in _UNIT_STOP for w in unit.split()):
        return None
    return Quantity("number", float(m["num"].replace(",", "").replace("−", "-")))


# --- fuzzy phrase matching --------------------------------------------------


def edit_distance(a: str, b: str, limit: int | None = None) -> int:
    """Levenshtein distance; with ``limit`` the result is capped at ``limit + 1``."""
    if a == b:
        return 0
    if limit is not None and abs(len(a) - len(b)) > limit:
        return limit + 1
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        if limit is not None and min(cur) > limit:
            return limit + 1
        prev = cur
    d = prev[-1]
    return d if limit is None else min(d, limit + 1)


def _edge_filters(target: str):
    """Windows start and end on word tokens unless the phrase itself starts/ends with punctuation."""
    def any_token(t: Token) -> bool:
        return True

    def wordlike(t: Token) -> bool:
        return t.is_wordlike

    first = tokenize(target)
    if not first:
        return any_token, any_token
    return (wordlike if first[0].is_wordlike else any_token), (wordlike if first[-1].is_wordlike else any_token)


def fuzzy_find(text: str, phrase: str, max_edits: int) -> tuple[int, int] | None:
    """Best token-aligned window of ``text`` within ``max_edits`` of ``phrase``.

    Windows start and end on word tokens (see ``_edge_filters``); comparison is
    case-insensitive on the raw slice. Ties go to the smallest distance, then
    the earliest start, then the shortest window.
    """
    if max_edits < 0:
        raise ValueError("max_edits must be >= 0")
    target = phrase.strip().lower()
    if not target:
        return None
    toks = tokenize(text)
    low = text.lower()
    edge_start, edge_end = _edge_filters(target)
    best = None
    for i, ti in enumerate(toks):
        if not edge_start(ti):
            continue
        for tj in toks[i:]:
            if not edge_end(tj):
                continue
            length = tj.end - ti.start
            if length > len(target) + max_edits:
                break
            if length < len(target) - max_edits:
                continue
            d = edit_distance(low[ti.start : tj.end], target, max_edits)
            if d <= max_edits and (best is None or d < best[0]):
                best = (d, ti.start, tj.end)
                if d == 0:
                    return ti.start, tj.end
    return None if best is None else (best[1], best[2])


def fuzzy_find_all(text: str, phrase: str, max_edits: int) -> list[tuple[int, int]]:
    """Leftmost non-overlapping fuzzy matches of ``phrase``."""
    target = phrase.strip().lower()
    toks = tokenize(text)
    low = text.lower()
    edge_start, edge_end = _edge_filters(target)
    found = []
    i = 0
    while i < len(toks) and target:
        if not edge_start(toks[i]):
            i += 1
            continue
        best = None
        for tj in toks[i:]:
            if not edge_end(tj):
                continue
            length = tj.end - toks[i].start
            if length > len(target) + max_edits:
                break
            if length < len(target) - max_edits:
                continue
            d = edit_distance(low[toks[i].start : tj.end], target, max_edits)
            if d <= max_edits and (best is None or d < best[0]):
                best = (d, tj.end)
        if best is None:
            i += 1
            continue
        found.append((toks[i].start, best[1]))
        while i < len(toks) and toks[i].start < best[1]:
            i += 1
    return found


def fuzzy_contains(text: str, phrase: str, max_edits: int) -> tuple[bool, tuple[int, int] | None]:
    span = fuzzy_find(text, phrase, max_edits)
    return span is not None, span
