"""Length-and-dictionary sentence aligner.

The cost model is Gale-Church flavoured: a quadratic penalty on the
normalized deviation of the target block's character count from its
expectation under a per-language length ratio, minus a reward for
bilingual-dictionary token matches. Character counts are Unicode scalar
values on both sides, so abugida scripts are not skewed by byte lengths.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass
from typing import Sequence

from .corpus import AlignMethod, AlignmentLink, BilingualDictionary
from .dp import DEFAULT_SHAPES, best_monotone_alignment

DEFAULT_SKIP_PENALTY = 3.0
DEFAULT_LEX_WEIGHT = 2.0


class AlignmentError(Exception):
    pass


@dataclass(frozen=True)
class LengthModel:
    """Expected target/source character ratio and its variance."""

    mean_ratio: float = 1.0
    variance: float = 6.8

    def __post_init__(self) -> None:
        if self.mean_ratio <= 0 or self.variance <= 0:
            raise ValueError("mean_ratio and variance must be positive")


def _strip_punct(token: str) -> str:
    # Trim punctuation/symbols from both ends; combining marks inside
    # abugida words must survive, so no character-class regex here.
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start])[0] in ("P", "S"):
        start += 1
    while end > start and unicodedata.category(token[end - 1])[0] in ("P", "S"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> list[str]:
    """Case-folded word tokens, split on whitespace and punctuation."""
    tokens = (_strip_punct(t) for t in text.casefold().split())
    return [t for t in tokens if t]


@dataclass(frozen=True)
class LexicalScorer:
    """Fraction of source tokens whose dictionary translation occurs in the target."""

    dictionary: BilingualDictionary

    def score(self, src_block: Sequence[str], tgt_block: Sequence[str]) -> float:
        src_tokens = tokenize(" ".join(src_block))
        tgt_tokens = set(tokenize(" ".join(tgt_block)))
        matched = sum(1 for t in src_tokens if self.dictionary.lookup(t) in tgt_tokens)
        return matched / max(1, len(src_tokens))


def link_cost(
    src_block: Sequence[str],
    tgt_block: Sequence[str],
    model: LengthModel,
    lex: LexicalScorer | None = None,
    skip_penalty: float = DEFAULT_SKIP_PENALTY,
    lex_weight: float = DEFAULT_LEX_WEIGHT,
) -> float:
    """Cost of linking the two sentence blocks (lower is better).

    Insertions/deletions pay ``skip_penalty`` per skipped sentence. For
    substitutions the cost is delta^2 / (2 * variance * n) where delta is
    the normalized character-count deviation and n the total number of
    sentences in the block pair, minus ``lex_weight`` times the dictionary
    match fraction when a dictionary is available.
    """
    if not src_block and not tgt_block:
        raise AlignmentError("link must cover at least one sentence")
    if not src_block or not tgt_block:
        return skip_penalty * (len(src_block) + len(tgt_block))
    src_chars = sum(len(s) for s in src_block)
    tgt_chars = sum(len(s) for s in tgt_block)
    c = model.mean_ratio
    delta = (tgt_chars - c * src_chars) / math.sqrt(max(src_chars, 1) * c)
    n_total = len(src_block) + len(tgt_block)
    cost = (delta * delta) / (2.0 * model.variance * n_total)
    if lex is not None:
        cost -= lex_weight * lex.score(src_block, tgt_block)
    return cost


def align_length(
    src_sentences: Sequence[str],
    tgt_sentences: Sequence[str],
    model: LengthModel | None = None,
    lex: LexicalScorer | None = None,
    skip_penalty: float = DEFAULT_SKIP_PENALTY,
    lex_weight: float = DEFAULT_LEX_WEIGHT,
) -> list[AlignmentLink]:
    """Minimum-cost monotone alignment of two sentence lists.

    Link shapes are 1-0, 0-1, 1-1, 1-2, 2-1 and 2-2; every sentence is
    covered exactly once. Scores on the returned links are negated costs.
    """
    if not src_sentences or not tgt_sentences:
        raise AlignmentError("cannot align empty sentence lists")
    model = model or LengthModel()

    def cost_fn(i: int, j: int, di: int, dj: int) -> float:
        return link_cost(
            src_sentences[i : i + di],
            tgt_sentences[j : j + dj],
            model,
            lex,
            skip_penalty,
            lex_weight,
        )

    _, raw_links = best_monotone_alignment(
        len(src_sentences), len(tgt_sentences), DEFAULT_SHAPES, cost_fn
    )
    return [
        AlignmentLink(src=src, tgt=tgt, score=-cost, method=AlignMethod.LENGTH_DICT)
        for src, tgt, cost in raw_links
    ]
