"""Turn per-document alignment links into the released corpus.

Only 1-1 links are released. When a language has links from both aligners
the release is the intersection of the two unique-pair sets; otherwise the
length-dictionary pairs are released as-is. Pair identity is exact string
equality after whitespace normalization, and released pairs keep document
order (first occurrence wins on duplicates).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .corpus import (
    AlignMethod,
    AlignmentLink,
    DocumentPair,
    SentencePair,
    normalize_ws,
    write_corpus,
)

logger = logging.getLogger(__name__)


def retain_one_to_one(links: Iterable[AlignmentLink]) -> list[AlignmentLink]:
    """Exactly the links pairing one source sentence with one target sentence."""
    return [link for link in links if link.is_one_to_one]


def links_to_pairs(doc_pair: DocumentPair, links: Iterable[AlignmentLink]) -> list[SentencePair]:
    """Materialize 1-1 links as sentence pairs (whitespace-normalized)."""
    en_sents = doc_pair.en_doc.body_sentences
    xx_sents = doc_pair.xx_doc.body_sentences
    pairs: list[SentencePair] = []
    for link in retain_one_to_one(links):
        en = normalize_ws(en_sents[link.src[0]])
        xx = normalize_ws(xx_sents[link.tgt[0]])
        if not en or not xx:
            continue
        pairs.append(SentencePair(en=en, xx=xx, origin=(doc_pair.xx_doc.id, link.src[0])))
    return pairs


def dedup(pairs: Iterable[SentencePair]) -> list[SentencePair]:
    """Drop exact (en, xx) duplicates, keeping first occurrence order."""
    seen: set[SentencePair] = set()
    out: list[SentencePair] = []
    for pair in pairs:
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def intersect(pairs_a: set[SentencePair], pairs_b: set[SentencePair]) -> set[SentencePair]:
    """Pairs produced by both methods (exact string identity)."""
    return pairs_a & pairs_b


@dataclass(frozen=True)
class LanguageCounts:
    """Per-method and released unique-pair counts for one language pair."""

    pair_name: str
    length_dict: int
    embedding: int | None
    intersection: int | None
    released: int

    def to_json(self) -> dict:
        return {
            "pair": self.pair_name,
            "length_dict": self.length_dict,
            "embedding": self.embedding,
            "intersection": self.intersection,
            "released": self.released,
        }


@dataclass
class ReleaseResult:
    corpora: dict[str, list[SentencePair]]
    counts: list[LanguageCounts]

    def write(self, out_dir: str | Path) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for lang, pairs in sorted(self.corpora.items()):
            write_corpus(pairs, out_dir / f"{lang}-en.tsv")
        report = {"pairs": [c.to_json() for c in sorted(self.counts, key=lambda c: c.pair_name)]}
        with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")


def build_release(
    doc_pairs: Iterable[DocumentPair],
    links_by_doc: Mapping[str, Mapping[AlignMethod, list[AlignmentLink]]],
) -> ReleaseResult:
    """Assemble the released corpus and its count report.

    ``links_by_doc`` maps the local-language document id to that pair's
    links per method. A language releases the intersection when any of its
    documents have embedding links, and the length-dictionary pairs
    otherwise.
    """
    by_lang: dict[str, list[DocumentPair]] = {}
    for dp in doc_pairs:
        by_lang.setdefault(dp.xx_doc.lang, []).append(dp)

    corpora: dict[str, list[SentencePair]] = {}
    counts: list[LanguageCounts] = []
    for lang, pairs_for_lang in sorted(by_lang.items()):
        length_pairs: list[SentencePair] = []
        embed_pairs: list[SentencePair] = []
        has_embedding = False
        for dp in pairs_for_lang:
            links = links_by_doc.get(dp.xx_doc.id, {})
            length_pairs.extend(links_to_pairs(dp, links.get(AlignMethod.LENGTH_DICT, [])))
            if AlignMethod.EMBEDDING in links:
                has_embedding = True
                embed_pairs.extend(links_to_pairs(dp, links[AlignMethod.EMBEDDING]))

        length_unique = dedup(length_pairs)
        if has_embedding:
            embed_unique = dedup(embed_pairs)
            both = intersect(set(length_unique), set(embed_unique))
            released = [p for p in length_unique if p in both]
            counts.append(
                LanguageCounts(
                    pair_name=f"{lang}-en",
                    length_dict=len(length_unique),
                    embedding=len(embed_unique),
                    intersection=len(released),
                    released=len(released),
                )
            )
        else:
            released = length_unique
            counts.append(
                LanguageCounts(
                    pair_name=f"{lang}-en",
                    length_dict=len(length_unique),
                    embedding=None,
                    intersection=None,
                    released=len(released),
                )
            )
        if not released:
            logger.warning("no released pairs for language %s", lang)
        corpora[lang] = released
    return ReleaseResult(corpora=corpora, counts=counts)
