"""Rule implementations for the 19 item-writing flaws.

Every detector has the signature ``detect(q, cfg, scorers) -> (flag, evidence)``
where ``flag`` is True when the criterion is violated. Detectors are pure; the
three model-backed criteria go through a ``Scorers`` object so a language model
can replace the offline heuristics.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping, Protocol, Sequence, Union

from . import text as tk
from .model import (
    CRITERIA,
    DEFAULT_THRESHOLD,
    N_CRITERIA,
    STEM,
    Criterion,
    Evidence,
    FlawReport,
    FlawSet,
    Question,
    TextSpan,
)

Answer = Union[int, str]  # option index, "multiple" or "unknown"
MULTIPLE = "multiple"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class DetectorConfig:
    enabled: frozenset[Criterion] = frozenset(CRITERIA)
    fuzzy_edits: int = 2
    cue_margin: float = 0.34
    ambiguity_threshold: float = 0.5
    plausibility_threshold: float = 0.25
    max_stem_tokens: int = 60
    verdict_threshold: int = DEFAULT_THRESHOLD

    def __post_init__(self):
        if not 0 <= self.fuzzy_edits <= 5:
            raise ValueError("fuzzy_edits must be in 0..5")
        for name in ("cue_margin", "ambiguity_threshold", "plausibility_threshold"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.max_stem_tokens < 1:
            raise ValueError("max_stem_tokens must be >= 1")
        if not 1 <= self.verdict_threshold <= N_CRITERIA + 1:
            raise ValueError(f"verdict_threshold must be in 1..{N_CRITERIA + 1}")
        object.__setattr__(self, "enabled", frozenset(Criterion(c) for c in self.enabled))

    @classmethod
    def from_mapping(cls, values: Mapping[str, str], base: "DetectorConfig | None" = None) -> "DetectorConfig":
        """Apply string key/value settings (as read from a config file) on top of ``base``."""
        base = base or cls()
        types = {f.name: f.type for f in fields(cls)}
        updates = {}
        for key, raw in values.items():
            key = key.strip().replace("-", "_")
            if key in ("enabled", "rules"):
                updates["enabled"] = parse_criteria_list(raw)
            elif key in types:
                conv = int if types[key] in ("int", int) else float
                try:
                    updates[key] = conv(raw)
                except ValueError:
                    raise ValueError(f"bad value for {key}: {raw!r}") from None
            else:
                raise ValueError(f"unknown config key: {key}")
        return replace(base, **updates)


def parse_criteria_list(raw: str) -> frozenset[Criterion]:
    names = [n for n in re.split(r"[,\s]+", raw.strip()) if n]
    if names == ["all"]:
        return frozenset(CRITERIA)
    if names == ["none"]:
        return frozenset()
    return frozenset(Criterion.parse(n) for n in names)


def load_config(path: str | Path, base: DetectorConfig | None = None) -> DetectorConfig:
    """Read ``key = value`` lines, optionally under a ``[detectors]`` section."""
    body = Path(path).read_text(encoding="utf-8")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if not re.search(r"^\s*\[", body, re.M):
        body = "[detectors]\n" + body
    parser.read_string(body)
    section = parser["detectors"] if parser.has_section("detectors") else parser.defaults()
    return DetectorConfig.from_mapping(dict(section), base)


class Scorers(Protocol):
    """Model-backed judgements. Scores are in [0, 1]."""

    deterministic: bool

    def acceptability(self, text: str) -> float: ...

    def plausibility(self, question: Question, option_index: int) -> float: ...

    def answer(self, question: Question) -> Answer: ...


_INTERROGATIVE_OPENERS = frozenset(
    "which what who whom whose when where why how is are was were do does did can could "
    "will would should has have".split()
)
_BRACKETS = (("(", ")"), ("[", "]"), ("{", "}"), ("“", "”"))


@dataclass(frozen=True)
class HeuristicScorers:
    """Offline stand-ins for the acceptability model and the question-answering model.

    ``acceptability`` starts at 1.0 and subtracts one constant per problem found.
    """

    max_stem_tokens: int = 60
    deterministic: bool = True

    PENALTY_NO_VERB = 0.6
    PENALTY_MISSING_QUESTION_MARK = 0.3
    PENALTY_TOO_LONG = 0.3
    PENALTY_LEADING_PRONOUN = 0.3
    PENALTY_UNBALANCED = 0.3

    @classmethod
    def from_config(cls, cfg: DetectorConfig) -> "HeuristicScorers":
        return cls(max_stem_tokens=cfg.max_stem_tokens)

    def acceptability_penalties(self, text: str) -> list[tuple[str, float]]:
        toks = tk.words(text)
        out = []
        if not toks:
            return [("no words", 1.0)]
        if not any(is_verb_like(t) for t in toks):
            out.append(("no verb-like word", self.PENALTY_NO_VERB))
        if toks[0].key in _INTERROGATIVE_OPENERS and not text.rstrip().endswith("?"):
            out.append(("question without a question mark", self.PENALTY_MISSING_QUESTION_MARK))
        if len(toks) > self.max_stem_tokens:
            out.append((f"longer than {self.max_stem_tokens} words", self.PENALTY_TOO_LONG))
        if toks[0].key in tk.load_lexicon("unresolved_pronouns"):
            out.append((f"opens with unresolved pronoun {toks[0].text!r}", self.PENALTY_LEADING_PRONOUN))
        if _unbalanced(text):
            out.append(("unbalanced brackets or quotes", self.PENALTY_UNBALANCED))
        return out

    def acceptability(self, text: str) -> float:
        return max(0.0, 1.0 - sum(p for _, p in self.acceptability_penalties(text)))

    def plausibility(self, question: Question, option_index: int) -> float:
        option = question.options[option_index]
        if tk.parse_numeric(option) is not None and tk.parse_numeric(question.key) is not None:
            return 1.0
        if len(option.strip()) < 2:
            return 0.0
        return max(
            tk.overlap_similarity(option, question.stem),
            tk.overlap_similarity(option, question.key),
        )

    def answer(self, question: Question) -> Answer:
        return UNKNOWN


def _unbalanced(text: str) -> bool:
    if any(text.count(a) != text.count(b) for a, b in _BRACKETS):
        return True
    return text.count('"') % 2 == 1


def is_verb_like(tok: tk.Token) -> bool:
    """Closed-list verbs plus words with verbal morphology (-ed, -ing, -s, -ize, -ate, -ify)."""
    w = tok.key
    if tok.kind != tk.WORD:
        return False
    if w in tk.load_lexicon("verbs"):
        return True
    if len(w) > 4 and w.endswith(("ed", "ing", "ize", "ise", "ate", "ify")):
        return True
    return len(w) > 3 and w.endswith("s") and not w.endswith(("ss", "us", "is", "'s"))


Result = tuple[bool, list[Evidence]]
Detector = Callable[[Question, DetectorConfig, Scorers], Result]

DETECTORS: dict[Criterion, Detector] = {}


def detector(criterion: Criterion):
    def register(fn: Detector) -> Detector:
        DETECTORS[criterion] = fn
        fn.criterion = criterion
        return fn

    return register


def _ok() -> Result:
    return False, []


def _flag(c: Criterion, message: str, *spans: TextSpan) -> Result:
    return True, [Evidence(c, message, tuple(spans))]


def _phrase_spans(text: str, lexicon: str, edits: int) -> list[tuple[int, int]]:
    spans = []
    for phrase in sorted(tk.load_lexicon(lexicon)):
        spans.extend(tk.fuzzy_find_all(text, phrase, edits))
    merged: list[tuple[int, int]] = []
    for a, b in sorted(spans):
        if merged and a < merged[-1][1]:
            merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
        else:
            merged.append((a, b))
    return merged


def _inside(span: tuple[int, int], blocks: Iterable[tuple[int, int]]) -> bool:
    return any(a <= span[0] and span[1] <= b for a, b in blocks)


def _lexicon_hits(text: str, lexicon: str, exclude: Sequence[tuple[int, int]] = ()) -> list[tuple[int, int, str]]:
    """Word-boundary occurrences of lexicon entries (single words or phrases)."""
    entries = tk.load_lexicon(lexicon)
    toks = tk.words(text)
    keys = [t.key for t in toks]
    hits = []
    for entry in sorted(entries):
        parts = entry.split()
        for i in range(len(toks) - len(parts) + 1):
            if keys[i : i + len(parts)] == parts:
                span = (toks[i].start, toks[i + len(parts) - 1].end)
                if not _inside(span, exclude):
                    hits.append((span[0], span[1], entry))
    return sorted(hits)


def _aota_nota_spans(text: str, edits: int) -> list[tuple[int, int]]:
    return _phrase_spans(text, "none_of_the_above", edits) + _phrase_spans(text, "all_of_the_above", edits)


# --- phrase and lexicon detectors -------------------------------------------


def _phrase_option_detector(c: Criterion, lexicon: str, label: str) -> Detector:
    def detect(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
        found = [(i, a, b) for i, opt in enumerate(q.options) for a, b in _phrase_spans(opt, lexicon, cfg.fuzzy_edits)]
        if not found:
            return _ok()
        quoted = ", ".join(f"option {i} {q.options[i][a:b]!r}" for i, a, b in found)
        return _flag(c, f"reads like {label!r}: {quoted}", *(TextSpan(i, a, b) for i, a, b in found))

    return detect


detect_none_of_the_above = detector(Criterion.NONE_OF_THE_ABOVE)(
    _phrase_option_detector(Criterion.NONE_OF_THE_ABOVE, "none_of_the_above", "none of the above")
)
detect_all_of_the_above = detector(Criterion.ALL_OF_THE_ABOVE)(
    _phrase_option_detector(Criterion.ALL_OF_THE_ABOVE, "all_of_the_above", "all of the above")
)


def _option_lexicon_detector(c: Criterion, lexicon: str, label: str) -> Detector:
    def detect(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
        spans, words = [], []
        for i, opt in enumerate(q.options):
            for a, b, entry in _lexicon_hits(opt, lexicon, _aota_nota_spans(opt, cfg.fuzzy_edits)):
                spans.append(TextSpan(i, a, b))
                words.append(entry)
        if spans:
            return _flag(c, f"{label} in options: {', '.join(sorted(set(words)))}", *spans)
        return _ok()

    return detect


detect_absolute_terms = detector(Criterion.ABSOLUTE_TERMS)(
    _option_lexicon_detector(Criterion.ABSOLUTE_TERMS, "absolute_terms", "absolute terms")
)
detect_vague_terms = detector(Criterion.VAGUE_TERMS)(
    _option_lexicon_detector(Criterion.VAGUE_TERMS, "vague_terms", "vague terms")
)


@detector(Criterion.NEGATIVE_WORDED)
def detect_negative_worded(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    hits = _lexicon_hits(q.stem, "negative_terms", _aota_nota_spans(q.stem, cfg.fuzzy_edits))
    if not hits:
        return _ok()
    words = sorted({h[2] for h in hits})
    return _flag(
        Criterion.NEGATIVE_WORDED,
        f"negative wording in stem: {', '.join(words)}",
        *(TextSpan(STEM, a, b) for a, b, _ in hits),
    )


# --- structural detectors ---------------------------------------------------


@detector(Criterion.LONGEST_OPTION_CORRECT)
def detect_longest_option_correct(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    key_chars = len(q.key.strip())
    key_words = len(tk.words(q.key))
    for d in q.distractors:
        if len(d.strip()) >= key_chars or len(tk.words(d)) > key_words:
            return _ok()
    longest_other = max(len(d.strip()) for d in q.distractors)
    return _flag(
        Criterion.LONGEST_OPTION_CORRECT,
        f"correct option is the longest ({key_chars} chars vs at most {longest_other})",
        TextSpan(q.answer_index, 0, len(q.key)),
    )


_TF_WORDS = frozenset({"true", "false", "yes", "no", "t", "f"})


def _is_negation(tok: tk.Token) -> bool:
    return tok.key in ("not", "no", "never", "cannot") or tok.key.endswith("n't")


@detector(Criterion.TRUE_FALSE_QUESTION)
def detect_true_false_question(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    normalized = {o.strip().rstrip(".!").strip().lower() for o in q.options}
    if normalized <= _TF_WORDS:
        return _flag(Criterion.TRUE_FALSE_QUESTION, "options are true/false or yes/no answers")
    negated = [any(_is_negation(t) for t in tk.words(o)) for o in q.options]
    cws = [tk.content_words(o) for o in q.options]
    for i in range(len(q.options)):
        for j in range(i + 1, len(q.options)):
            if cws[i] and cws[i] == cws[j] and negated[i] != negated[j]:
                return _flag(
                    Criterion.TRUE_FALSE_QUESTION,
                    f"options {i} and {j} are a statement and its negation",
                    TextSpan(i, 0, len(q.options[i])),
                    TextSpan(j, 0, len(q.options[j])),
                )
    return _ok()


_BLANK_RE = re.compile(r"_{3,}|\[blank\]|\.\.\.+|…", re.I)


@detector(Criterion.FILL_IN_BLANK)
def detect_fill_in_blank(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    for m in _BLANK_RE.finditer(q.stem):
        if any(t.is_wordlike for t in tk.tokenize(q.stem[m.end() :])):
            return _flag(
                Criterion.FILL_IN_BLANK,
                "blank in the middle of the stem",
                TextSpan(STEM, m.start(), m.end()),
            )
    return _ok()


_LABEL = r"(?:[A-H]|[1-9]|I{1,3}|IV|VI{0,3})"
_K_TYPE_PATTERNS = (
    re.compile(rf"\b{_LABEL}\b(?:\s*,\s*{_LABEL}\b)*\s*,?\s*(?:and|&|or)\s+{_LABEL}\b"),
    re.compile(r"\b[Bb]oth\b.+\band\b"),
    re.compile(rf"\b{_LABEL}\s+only\b|\bonly\s+{_LABEL}\b"),
    re.compile(rf"\b[Aa]ll\s+(?:of\s+the\s+above\s+)?(?:except|but)\s+{_LABEL}\b"),
    re.compile(rf"\b[Nn]either\s+{_LABEL}\s+nor\s+{_LABEL}\b"),
)


@detector(Criterion.COMPLEX_K_TYPE)
def detect_complex_k_type(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    for i, opt in enumerate(q.options):
        for pat in _K_TYPE_PATTERNS:
            m = pat.search(opt)
            if m:
                return _flag(
                    Criterion.COMPLEX_K_TYPE,
                    f"option {i} combines other options: {m.group()!r}",
                    TextSpan(i, m.start(), m.end()),
                )
    return _ok()


@detector(Criterion.LOST_SEQUENCE)
def detect_lost_sequence(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    parsed = [tk.parse_numeric(o) for o in q.options]
    if any(p is None for p in parsed):
        return _ok()
    values = [p.value for p in parsed]
    pairs = list(zip(values, values[1:]))
    if all(a <= b for a, b in pairs) or all(a >= b for a, b in pairs):
        return _ok()
    return _flag(
        Criterion.LOST_SEQUENCE,
        "numeric options are not in order: " + ", ".join(o.strip() for o in q.options),
    )


# --- word-overlap detectors -------------------------------------------------


def repeated_words(q: Question) -> frozenset[str]:
    """Stemmed content words shared by the stem and the key but absent from every distractor."""
    in_distractors = frozenset().union(*(tk.content_words(d) for d in q.distractors))
    return (tk.content_words(q.stem) & tk.content_words(q.key)) - in_distractors


def _word_spans(location, text: str, stems: frozenset[str]) -> list[TextSpan]:
    return [TextSpan(location, t.start, t.end) for t in tk.words(text) if t.stem in stems and t.key not in tk.stopwords()]


@detector(Criterion.WORD_REPEATS)
def detect_word_repeats(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    rep = repeated_words(q)
    if not rep:
        return _ok()
    return _flag(
        Criterion.WORD_REPEATS,
        f"stem and correct option share words no distractor uses: {', '.join(sorted(rep))}",
        *_word_spans(STEM, q.stem, rep),
        *_word_spans(q.answer_index, q.key, rep),
    )


def convergence_scores(q: Question) -> list[int]:
    cws = [tk.content_words(o) for o in q.options]
    return [
        sum(sum(1 for j, other in enumerate(cws) if j != i and w in other) for w in mine)
        for i, mine in enumerate(cws)
    ]


@detector(Criterion.CONVERGENCE_CUES)
def detect_convergence_cues(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    scores = convergence_scores(q)
    key_score = scores[q.answer_index]
    if any(scores[i] >= key_score for i in q.distractor_indices):
        return _ok()
    cws = [tk.content_words(o) for o in q.options]
    shared = sorted(w for w in cws[q.answer_index] if sum(w in c for c in cws) >= 2)
    if len(shared) < 2:
        return _ok()
    return _flag(
        Criterion.CONVERGENCE_CUES,
        f"correct option combines the most repeated components ({', '.join(shared)}; score {key_score})",
        TextSpan(q.answer_index, 0, len(q.key)),
    )


@detector(Criterion.LOGICAL_CUES)
def detect_logical_cues(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    rep = repeated_words(q)
    stem_w = tk.content_words(q.stem) - rep
    key_sim = tk.jaccard(stem_w, tk.content_words(q.key) - rep)
    best = max(tk.jaccard(stem_w, tk.content_words(d)) for d in q.distractors)
    gap = key_sim - best
    if gap > cfg.cue_margin:
        return _flag(
            Criterion.LOGICAL_CUES,
            f"correct option overlaps the stem far more than any distractor ({key_sim:.2f} vs {best:.2f})",
        )
    return _ok()


_GENERIC_RE = re.compile(r"\bwhich\s+(?:of\s+the\s+following|statements?|of\s+these)\b", re.I)
_GENERIC_END_RE = re.compile(r"\b(?:is\s+true|is\s+correct|is\s+false|applies)\s*[?.:!]*\s*$", re.I)


@detector(Criterion.UNFOCUSED_STEM)
def detect_unfocused_stem(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    rest = _GENERIC_RE.sub(" ", q.stem)
    n = len(tk.content_words(rest))
    if n < 2:
        return _flag(Criterion.UNFOCUSED_STEM, f"stem has {n} content word(s) beyond generic wording")
    if _GENERIC_RE.search(q.stem) and _GENERIC_END_RE.search(rest):
        if not tk.content_words(_GENERIC_END_RE.sub(" ", rest)):
            return _flag(Criterion.UNFOCUSED_STEM, "stem only asks which option is true/correct")
    return _ok()


@detector(Criterion.GRATUITOUS_INFORMATION)
def detect_gratuitous_information(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    spans = [s for s in tk.split_sentences(q.stem) if tk.words(q.stem[s[0] : s[1]])]
    if len(spans) < 2:
        return _ok()
    final = tk.content_words(q.stem[spans[-1][0] : spans[-1][1]])
    option_words = [tk.content_words(o) for o in q.options]
    for a, b in spans[:-1]:
        cw = tk.content_words(q.stem[a:b])
        if not cw & final and not any(cw & ow for ow in option_words):
            end = a + len(q.stem[a:b].rstrip())
            return _flag(
                Criterion.GRATUITOUS_INFORMATION,
                "stem sentence unrelated to the question and the options",
                TextSpan(STEM, a, end),
            )
    return _ok()


# --- grammatical cues -------------------------------------------------------

_CONSONANT_SOUND_PREFIXES = ("uni", "use", "usu", "uti", "ure", "eu", "one", "once", "ewe")
_VOWEL_SOUND_PREFIXES = ("hour", "honest", "honor", "honour", "heir")
_VOWEL_LETTER_NAMES = set("AEFHILMNORSX")
_IRREGULAR_PLURALS = frozenset(
    "people children men women mice teeth feet geese data bacteria criteria phenomena cacti fungi nuclei".split()
)


def starts_with_vowel_sound(option: str) -> bool | None:
    toks = tk.words(option)
    if not toks:
        return None
    first = toks[0]
    if first.kind == tk.NUMBER:
        return first.text.startswith("8") or first.text in ("11", "18")
    w = first.text
    if len(w) > 1 and w.isupper() and w.isalpha():
        return w[0] in _VOWEL_LETTER_NAMES
    low = w.lower()
    if low.startswith(_VOWEL_SOUND_PREFIXES):
        return True
    if low.startswith(_CONSONANT_SOUND_PREFIXES):
        return False
    return low[0] in "aeiou"


def is_plural_phrase(option: str) -> bool:
    toks = tk.words(option)
    if not toks:
        return False
    keys = [t.key for t in toks]
    if "and" in keys[1:-1]:
        return True
    head = keys[keys.index("of") - 1] if "of" in keys[1:] else keys[-1]
    if head in _IRREGULAR_PLURALS:
        return True
    return len(head) > 3 and head.endswith("s") and not head.endswith(("ss", "us", "is", "'s"))


def _style(option: str) -> tuple[str, bool | None]:
    s = option.strip()
    terminal = s[-1] if s[-1] in ".!?;:" else ""
    first_alpha = next((ch for ch in s if ch.isalpha()), None)
    lead = None
    if first_alpha is not None and s[0].isalpha():
        lead = first_alpha.isupper()
    return terminal, lead


@detector(Criterion.GRAMMATICAL_CUES)
def detect_grammatical_cues(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    c = Criterion.GRAMMATICAL_CUES
    stem_words = tk.words(q.stem)
    if stem_words and stem_words[-1].key in ("a", "an"):
        want_vowel = stem_words[-1].key == "an"
        agree = [starts_with_vowel_sound(o) == want_vowel for o in q.options]
        if agree[q.answer_index] and not any(agree[i] for i in q.distractor_indices):
            return _flag(
                c,
                f"only the correct option agrees with the article {stem_words[-1].text!r}",
                TextSpan(STEM, stem_words[-1].start, stem_words[-1].end),
            )
    verbs = [t for t in stem_words if t.key in ("is", "are", "was", "were")]
    if verbs:
        plural_verb = verbs[-1].key in ("are", "were")
        agree = [is_plural_phrase(o) == plural_verb for o in q.options]
        if agree[q.answer_index] and not any(agree[i] for i in q.distractor_indices):
            return _flag(
                c,
                f"only the correct option agrees in number with {verbs[-1].text!r}",
                TextSpan(STEM, verbs[-1].start, verbs[-1].end),
            )
    if len(q.distractors) >= 2:
        styles = [_style(o) for o in q.options]
        other = {styles[i] for i in q.distractor_indices}
        if len(other) == 1 and styles[q.answer_index] not in other:
            return _flag(c, "correct option alone breaks the punctuation/capitalization pattern of the distractors")
    return _ok()


# --- model-backed detectors -------------------------------------------------


@detector(Criterion.AMBIGUOUS_INFORMATION)
def detect_ambiguous_information(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    score = scorers.acceptability(q.stem)
    if score < cfg.ambiguity_threshold:
        why = ""
        if isinstance(scorers, HeuristicScorers):
            why = ": " + "; ".join(m for m, _ in scorers.acceptability_penalties(q.stem))
        return _flag(
            Criterion.AMBIGUOUS_INFORMATION,
            f"stem acceptability {score:.2f} below {cfg.ambiguity_threshold}{why}",
        )
    return _ok()


def _is_phrase_option(option: str, edits: int) -> bool:
    """True when every word of the option lies inside a NOTA/AOTA phrase match."""
    blocks = _aota_nota_spans(option, edits)
    toks = tk.words(option)
    return bool(blocks) and all(_inside((t.start, t.end), blocks) for t in toks)


@detector(Criterion.IMPLAUSIBLE_DISTRACTORS)
def detect_implausible_distractors(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    weak = []
    for i in q.distractor_indices:
        if _is_phrase_option(q.options[i], cfg.fuzzy_edits):
            continue  # judged by none_of_the_above / all_of_the_above instead
        score = scorers.plausibility(q, i)
        if score < cfg.plausibility_threshold:
            weak.append((i, score))
    if not weak:
        return _ok()
    listed = ", ".join(f"option {i} ({s:.2f})" for i, s in weak)
    return True, [
        Evidence(
            Criterion.IMPLAUSIBLE_DISTRACTORS,
            f"implausible distractors: {listed}",
            tuple(TextSpan(i, 0, len(q.options[i])) for i, _ in weak),
        )
    ]


def _normalized_sequence(option: str) -> tuple[str, ...]:
    return tuple(t.stem for t in tk.words(option))


@detector(Criterion.MORE_THAN_ONE_CORRECT)
def detect_more_than_one_correct(q: Question, cfg: DetectorConfig, scorers: Scorers) -> Result:
    c = Criterion.MORE_THAN_ONE_CORRECT
    key = q.key.strip().casefold()
    key_seq = _normalized_sequence(q.key)
    for i in q.distractor_indices:
        opt = q.options[i]
        if opt.strip().casefold() == key or (key_seq and _normalized_sequence(opt) == key_seq):
            return _flag(c, f"option {i} duplicates the correct option", TextSpan(i, 0, len(opt)))
    ans = scorers.answer(q)
    if ans == MULTIPLE:
        return _flag(c, "answer model found more than one correct option")
    if isinstance(ans, int) and not isinstance(ans, bool) and ans != q.answer_index:
        return _flag(c, f"answer model chose option {ans}, key is option {q.answer_index}")
    return _ok()


assert set(DETECTORS) == set(CRITERIA)


def run_all(q: Question, cfg: DetectorConfig | None = None, scorers: Scorers | None = None) -> FlawReport:
    """Apply every enabled detector and assemble the question's FlawReport."""
    cfg = cfg or DetectorConfig()
    scorers = scorers or HeuristicScorers.from_config(cfg)
    bits = []
    evidence: list[Evidence] = []
    for c in CRITERIA:
        if c not in cfg.enabled:
            bits.append(False)
            evidence.append(Evidence(c, "disabled"))
            continue
        flag, ev = DETECTORS[c](q, cfg, scorers)
        bits.append(bool(flag))
        if flag:
            evidence.extend(ev)
    return FlawReport(q.id, FlawSet(tuple(bits)), tuple(evidence), cfg.verdict_threshold)


def lint_corpus(
    questions: Iterable[Question], cfg: DetectorConfig | None = None, scorers: Scorers | None = None
) -> list[FlawReport]:
    cfg = cfg or DetectorConfig()
    scorers = scorers or HeuristicScorers.from_config(cfg)
    return [run_all(q, cfg, scorers) for q in questions]
