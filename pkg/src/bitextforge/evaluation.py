"""Measurement machinery: aligner agreement, annotation accuracy, combined
precision estimates, corpus splitting and a tokenized BLEU scorer.

All functions here are pure; reports serialize to JSON for the CLI.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)


class EvaluationError(Exception):
    pass


@dataclass(frozen=True)
class AgreementReport:
    """Precision/recall/F1 of one pair set against another taken as gold."""

    precision: float
    recall: float
    f1: float
    hyp_size: int
    gold_size: int
    overlap: int

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "hyp_size": self.hyp_size,
            "gold_size": self.gold_size,
            "overlap": self.overlap,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AgreementReport":
        return cls(
            precision=float(data["precision"]),
            recall=float(data["recall"]),
            f1=float(data["f1"]),
            hyp_size=int(data.get("hyp_size", 0)),
            gold_size=int(data.get("gold_size", 0)),
            overlap=int(data.get("overlap", 0)),
        )


def agreement(hyp: set[T], gold: set[T]) -> AgreementReport:
    """Set-overlap precision, recall and balanced F1."""
    overlap = len(hyp & gold)
    if not hyp:
        logger.warning("empty hypothesis set: precision undefined, reported as 0")
    if not gold:
        logger.warning("empty gold set: recall undefined, reported as 0")
    p = overlap / len(hyp) if hyp else 0.0
    r = overlap / len(gold) if gold else 0.0
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return AgreementReport(
        precision=p, recall=r, f1=f1, hyp_size=len(hyp), gold_size=len(gold), overlap=overlap
    )


class AnnotationCategory(Enum):
    """The seven-way validation scheme used for human judgment of pairs."""

    VALID_TRANSLATION = "valid_translation"
    WRONG_LANGUAGE = "wrong_language"
    INCORRECT_ALIGNMENT = "incorrect_alignment"
    WRONG_TOKENISATION = "wrong_tokenisation"
    MT_TRANSLATION = "mt_translation"
    TRANSLATION_ERROR = "translation_error"
    FREE_TRANSLATION = "free_translation"


class Stratum(Enum):
    """Which aligner(s) proposed a pair."""

    ONLY_A = "only_a"
    ONLY_B = "only_b"
    BOTH = "both"


class AccuracyMode(Enum):
    CONSERVATIVE = "conservative"
    LIBERAL = "liberal"


@dataclass
class StratumTally:
    stratum: Stratum
    counts: dict[AnnotationCategory, int] = field(
        default_factory=lambda: {c: 0 for c in AnnotationCategory}
    )

    def __post_init__(self) -> None:
        for category in AnnotationCategory:
            self.counts.setdefault(category, 0)
        if any(v < 0 for v in self.counts.values()):
            raise EvaluationError("tally counts must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_json(self) -> dict:
        return {
            "stratum": self.stratum.value,
            "counts": {c.value: self.counts[c] for c in AnnotationCategory},
            "total": self.total,
        }

    @classmethod
    def from_json(cls, data: dict) -> "StratumTally":
        counts = {AnnotationCategory(k): int(v) for k, v in data["counts"].items()}
        return cls(stratum=Stratum(data["stratum"]), counts=counts)


def accuracy(tally: StratumTally, mode: AccuracyMode) -> float:
    """Fraction of an annotated sample counted as correct.

    Conservative counts only valid translations; liberal counts everything
    not judged an incorrect alignment or wrong tokenisation.
    """
    total = tally.total
    if total == 0:
        raise EvaluationError("cannot compute accuracy of an empty tally")
    if mode is AccuracyMode.CONSERVATIVE:
        return tally.counts[AnnotationCategory.VALID_TRANSLATION] / total
    bad = (
        tally.counts[AnnotationCategory.INCORRECT_ALIGNMENT]
        + tally.counts[AnnotationCategory.WRONG_TOKENISATION]
    )
    return (total - bad) / total


def method_precision(
    overlap: AgreementReport,
    both_tally: StratumTally,
    only_tally: StratumTally,
    mode: AccuracyMode,
    overlap_from: str = "recall",
) -> float:
    """Combined precision of one aligner from stratified annotation.

    A method's pairs split into those shared with the other aligner and
    those it alone produced; its precision is the overlap-weighted mix of
    the two stratum accuracies:

        precision = f * acc(both) + (1 - f) * acc(only)

    where f is the method's overlap fraction, read from the agreement
    report (``overlap_from``: its "precision" or "recall" field, whichever
    denominator is the evaluated method's own set).
    """
    if overlap_from == "recall":
        f_both = overlap.recall
    elif overlap_from == "precision":
        f_both = overlap.precision
    else:
        raise EvaluationError(f"overlap_from must be 'precision' or 'recall', got {overlap_from!r}")
    return f_both * accuracy(both_tally, mode) + (1.0 - f_both) * accuracy(only_tally, mode)


def stratify_sample(
    pairs_a: set[T], pairs_b: set[T], n_per_stratum: int, seed: int
) -> dict[Stratum, list[T]]:
    """Seeded uniform samples (without replacement) of the three strata."""
    strata = {
        Stratum.ONLY_A: sorted(pairs_a - pairs_b, key=repr),
        Stratum.ONLY_B: sorted(pairs_b - pairs_a, key=repr),
        Stratum.BOTH: sorted(pairs_a & pairs_b, key=repr),
    }
    rng = random.Random(seed)
    samples: dict[Stratum, list[T]] = {}
    for stratum, members in strata.items():
        if len(members) < n_per_stratum:
            logger.warning(
                "stratum %s has only %d pairs (requested %d)",
                stratum.value,
                len(members),
                n_per_stratum,
            )
            samples[stratum] = list(members)
        else:
            samples[stratum] = rng.sample(members, n_per_stratum)
    return samples


def split_corpus(
    pairs: Sequence[T], n_dev: int, n_test: int, seed: int
) -> tuple[list[T], list[T], list[T]]:
    """Seeded random (train, dev, test) partition with exact split sizes."""
    if n_dev < 0 or n_test < 0:
        raise EvaluationError("split sizes must be non-negative")
    if n_dev + n_test >= len(pairs):
        raise EvaluationError(
            f"need more than {n_dev + n_test} pairs to split, got {len(pairs)}"
        )
    shuffled = list(pairs)
    random.Random(seed).shuffle(shuffled)
    dev = shuffled[:n_dev]
    test = shuffled[n_dev : n_dev + n_test]
    train = shuffled[n_dev + n_test :]
    return train, dev, test


def _ngrams(tokens: Sequence[str], n: int) -> Iterable[tuple[str, ...]]:
    return (tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(
    hypotheses: Sequence[Sequence[str] | str],
    references: Sequence[Sequence[str] | str],
) -> float:
    """Corpus-level BLEU-4 on pre-tokenized text, no smoothing.

    Geometric mean of clipped n-gram precisions (n=1..4) times the brevity
    penalty exp(min(0, 1 - ref_len/hyp_len)), scaled to [0, 100]. Any
    all-zero n-gram precision yields 0, matching the standard unsmoothed
    script behaviour. Single reference per hypothesis.
    """
    if len(hypotheses) != len(references):
        raise EvaluationError(
            f"hypothesis/reference count mismatch: {len(hypotheses)} vs {len(references)}"
        )
    if not hypotheses:
        raise EvaluationError("cannot score an empty corpus")

    matched = [0] * 4
    total = [0] * 4
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = hyp.split() if isinstance(hyp, str) else list(hyp)
        ref_tokens = ref.split() if isinstance(ref, str) else list(ref)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, 5):
            hyp_counts = Counter(_ngrams(hyp_tokens, n))
            ref_counts = Counter(_ngrams(ref_tokens, n))
            total[n - 1] += sum(hyp_counts.values())
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())

    if hyp_len == 0 or any(m == 0 for m in matched):
        return 0.0
    log_precision = sum(math.log(m / t) for m, t in zip(matched, total)) / 4.0
    brevity = min(0.0, 1.0 - ref_len / hyp_len)
    return 100.0 * math.exp(log_precision + brevity)
