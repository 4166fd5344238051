"""Domain types shared across the linter: questions, criteria, flaw sets and label matrices."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class Criterion(str, enum.Enum):
    """The 19 item-writing flaws, in canonical label-vector order."""

    AMBIGUOUS_INFORMATION = "ambiguous_information"
    IMPLAUSIBLE_DISTRACTORS = "implausible_distractors"
    NONE_OF_THE_ABOVE = "none_of_the_above"
    LONGEST_OPTION_CORRECT = "longest_option_correct"
    GRATUITOUS_INFORMATION = "gratuitous_information"
    TRUE_FALSE_QUESTION = "true_false_question"
    CONVERGENCE_CUES = "convergence_cues"
    LOGICAL_CUES = "logical_cues"
    ALL_OF_THE_ABOVE = "all_of_the_above"
    FILL_IN_BLANK = "fill_in_blank"
    ABSOLUTE_TERMS = "absolute_terms"
    WORD_REPEATS = "word_repeats"
    UNFOCUSED_STEM = "unfocused_stem"
    COMPLEX_K_TYPE = "complex_k_type"
    GRAMMATICAL_CUES = "grammatical_cues"
    LOST_SEQUENCE = "lost_sequence"
    VAGUE_TERMS = "vague_terms"
    MORE_THAN_ONE_CORRECT = "more_than_one_correct"
    NEGATIVE_WORDED = "negative_worded"

    @property
    def index(self) -> int:
        return _INDEX[self]

    @classmethod
    def from_index(cls, i: int) -> "Criterion":
        return CRITERIA[i]

    @classmethod
    def parse(cls, name: str) -> "Criterion":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown criterion: {name!r}") from None

    def __str__(self) -> str:
        return self.value


CRITERIA: tuple[Criterion, ...] = tuple(Criterion)
_INDEX = {c: i for i, c in enumerate(CRITERIA)}
N_CRITERIA = len(CRITERIA)

ACCEPTABLE = "acceptable"
UNACCEPTABLE = "unacceptable"
DEFAULT_THRESHOLD = 2


def verdict_of(flaw_count: int, threshold: int = DEFAULT_THRESHOLD) -> str:
    """Questions with fewer than ``threshold`` flaws are acceptable."""
    if isinstance(flaw_count, bool) or not isinstance(flaw_count, int):
        raise TypeError(f"flaw_count must be an int, got {flaw_count!r}")
    if not 0 <= flaw_count <= N_CRITERIA:
        raise ValueError(f"flaw_count out of range 0..{N_CRITERIA}: {flaw_count}")
    if not 1 <= threshold <= N_CRITERIA + 1:
        raise ValueError(f"threshold out of range 1..{N_CRITERIA + 1}: {threshold}")
    return ACCEPTABLE if flaw_count < threshold else UNACCEPTABLE


@dataclass(frozen=True)
class Question:
    id: str
    stem: str
    options: tuple[str, ...]
    answer_index: int
    domain: str | None = None

    @property
    def key(self) -> str:
        return self.options[self.answer_index]

    @property
    def distractor_indices(self) -> list[int]:
        return [i for i in range(len(self.options)) if i != self.answer_index]

    @property
    def distractors(self) -> list[str]:
        return [self.options[i] for i in self.distractor_indices]


class QuestionError(ValueError):
    """Raised when raw fields do not form a valid question; carries every violation."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def question_errors(
    id: object, stem: object, options: object, answer_index: object, domain: object = None
) -> list[str]:
    errors = []
    if not isinstance(id, str) or not id.strip():
        errors.append("id must be a nonempty string")
    if not isinstance(stem, str):
        errors.append("stem must be a string")
    elif not stem.strip():
        errors.append("empty stem")
    if domain is not None and not isinstance(domain, str):
        errors.append("domain must be a string")
    n_options = None
    if not isinstance(options, (list, tuple)):
        errors.append("options must be a list of strings")
    else:
        n_options = len(options)
        if n_options < 2:
            errors.append("fewer than 2 options")
        for i, opt in enumerate(options):
            if not isinstance(opt, str):
                errors.append(f"option {i} must be a string")
            elif not opt.strip():
                errors.append(f"empty option at index {i}")
    if isinstance(answer_index, bool) or not isinstance(answer_index, int):
        errors.append("answer_index must be an integer")
    elif n_options is not None and not 0 <= answer_index < n_options:
        errors.append("answer_index out of range")
    return errors


def validate_question(
    id: object, stem: object, options: object, answer_index: object, domain: object = None
) -> Question:
    """Build a Question, raising QuestionError with the complete list of violations."""
    errors = question_errors(id, stem, options, answer_index, domain)
    if errors:
        raise QuestionError(errors)
    return Question(
        id=id, stem=stem, options=tuple(options), answer_index=answer_index, domain=domain
    )


@dataclass(frozen=True)
class FlawSet:
    """19-element boolean vector indexed by Criterion; True means the criterion is violated."""

    bits: tuple[bool, ...] = (False,) * N_CRITERIA

    def __post_init__(self):
        if len(self.bits) != N_CRITERIA:
            raise ValueError(f"FlawSet needs {N_CRITERIA} bits, got {len(self.bits)}")
        if not all(isinstance(b, bool) for b in self.bits):
            object.__setattr__(self, "bits", tuple(bool(b) for b in self.bits))

    @classmethod
    def from_criteria(cls, criteria: Iterable[Criterion | str]) -> "FlawSet":
        on = {Criterion.parse(c) if isinstance(c, str) else c for c in criteria}
        return cls(tuple(c in on for c in CRITERIA))

    def __getitem__(self, c: Criterion | int) -> bool:
        return self.bits[c.index if isinstance(c, Criterion) else c]

    def __iter__(self) -> Iterator[bool]:
        return iter(self.bits)

    def __len__(self) -> int:
        return N_CRITERIA

    @property
    def count(self) -> int:
        return sum(self.bits)

    @property
    def criteria(self) -> list[Criterion]:
        return [c for c, b in zip(CRITERIA, self.bits) if b]

    def with_bit(self, c: Criterion, value: bool) -> "FlawSet":
        bits = list(self.bits)
        bits[c.index] = value
        return FlawSet(tuple(bits))


STEM = "stem"


@dataclass(frozen=True)
class TextSpan:
    """Character range in the stem (location "stem") or in option ``location``."""

    location: str | int
    start: int
    end: int

    def to_json(self) -> dict:
        return {"location": self.location, "start": self.start, "end": self.end}


@dataclass(frozen=True)
class Evidence:
    criterion: Criterion
    message: str
    spans: tuple[TextSpan, ...] = ()

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "message": self.message,
            "spans": [s.to_json() for s in self.spans],
        }


@dataclass(frozen=True)
class FlawReport:
    question_id: str
    flaws: FlawSet
    evidence: tuple[Evidence, ...] = ()
    threshold: int = DEFAULT_THRESHOLD

    @property
    def flaw_count(self) -> int:
        return self.flaws.count

    @property
    def verdict(self) -> str:
        return verdict_of(self.flaw_count, self.threshold)


class AlignmentError(ValueError):
    def __init__(self, only_a: Iterable[str], only_b: Iterable[str]):
        self.only_a = sorted(only_a)
        self.only_b = sorted(only_b)
        super().__init__(
            f"question ids differ: only in first {self.only_a}, only in second {self.only_b}"
        )


@dataclass(frozen=True)
class LabelMatrix:
    """Corpus x 19 binary labels from one source (human, rules, llm, ...)."""

    ids: tuple[str, ...]
    rows: tuple[FlawSet, ...]
    source: str = "other"
    incomplete: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if len(self.ids) != len(self.rows):
            raise ValueError("ids and rows differ in length")
        if len(set(self.ids)) != len(self.ids):
            seen, dups = set(), []
            for i in self.ids:
                if i in seen:
                    dups.append(i)
                seen.add(i)
            raise ValueError(f"duplicate question ids: {sorted(set(dups))}")

    @classmethod
    def from_reports(cls, reports: Iterable[FlawReport], source: str = "rules") -> "LabelMatrix":
        reports = list(reports)
        return cls(tuple(r.question_id for r in reports), tuple(r.flaws for r in reports), source)

    def __len__(self) -> int:
        return len(self.ids)

    def row(self, qid: str) -> FlawSet:
        return self.rows[self.ids.index(qid)]

    def column(self, c: Criterion) -> list[bool]:
        return [r[c] for r in self.rows]

    def flaw_counts(self) -> list[int]:
        return [r.count for r in self.rows]

    def criterion_counts(self) -> list[int]:
        return [sum(col) for col in zip(*(r.bits for r in self.rows))] if self.rows else [0] * N_CRITERIA

    def aligned_to(self, other: "LabelMatrix") -> "LabelMatrix":
        """Reorder rows to follow ``other``'s id order; id sets must match exactly."""
        mine, theirs = set(self.ids), set(other.ids)
        if mine != theirs:
            raise AlignmentError(mine - theirs, theirs - mine)
        lookup = dict(zip(self.ids, self.rows))
        return LabelMatrix(other.ids, tuple(lookup[i] for i in other.ids), self.source, self.incomplete)

    def subset(self, ids: Iterable[str]) -> "LabelMatrix":
        lookup = dict(zip(self.ids, self.rows))
        keep = tuple(i for i in ids)
        return LabelMatrix(keep, tuple(lookup[i] for i in keep), self.source, self.incomplete & set(keep))
