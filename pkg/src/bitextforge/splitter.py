"""Sentence segmentation for English and Indic-script paragraph text.

The splitter follows the classic rule-based recipe: break after sentence
terminators followed by whitespace and a plausible sentence start, with a
non-breaking-prefix list guarding periods after abbreviations. It extends
the usual Latin-only behaviour in three ways needed here:

* the danda / double danda and the Urdu full stop count as terminators;
* a sentence may start with a letter from any Indian script block (these
  scripts have no case, so the uppercase test is useless for them);
* boundaries never fall inside an extended grapheme cluster, which in
  abugida scripts would detach vowel signs from their consonants.

Itemised lists are handled before sentence splitting: a paragraph that
starts with a bullet or an enumeration marker is one sentence unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .scripts import (
    INDIC_SCRIPTS,
    blocks_for,
    cluster_count,
    in_blocks,
    is_letter,
)

DEFAULT_TERMINATORS = frozenset({".", "!", "?", "।", "॥", "۔"})

_OPENERS = "\"'“‘«¿¡([{"
_CLOSERS = "\"'”’»)]}"

# Paragraph-initial list markers: bullet glyphs, "(i)"/"(a)"/"(1)" and
# "1." / "1)" style enumerators (\d also matches Indic digits).
_BULLET_RE = re.compile(r"^[•●▪‣◦⁃∙*–—-]\s+")
_PAREN_MARKER_RE = re.compile(r"^\(([0-9]+|[ivxlcdm]+|[a-z])\)\s+", re.IGNORECASE)
_NUMBER_MARKER_RE = re.compile(r"^\d{1,3}[.)]\s+")


@dataclass(frozen=True)
class SplitterConfig:
    """Per-language segmentation settings."""

    lang: str
    prefixes: frozenset[str] = frozenset()
    numeric_only_prefixes: frozenset[str] = frozenset()
    terminators: frozenset[str] = DEFAULT_TERMINATORS
    script_blocks: tuple[tuple[int, int], ...] = field(
        default_factory=lambda: blocks_for(INDIC_SCRIPTS)
    )

    def __post_init__(self) -> None:
        if not self.terminators:
            raise ValueError("terminators must be non-empty")


def read_prefix_file(path: str | Path) -> tuple[frozenset[str], frozenset[str]]:
    """Parse a non-breaking prefix file (one prefix per line, '#' comments).

    A ``#NUMERIC_ONLY#`` suffix marks prefixes that only protect a following
    number. Prefixes are stored without their trailing period.
    """
    plain: set[str] = set()
    numeric: set[str] = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "#NUMERIC_ONLY#" in line:
            numeric.add(line.split("#", 1)[0].strip().rstrip("."))
        else:
            plain.add(line.rstrip("."))
    plain.discard("")
    numeric.discard("")
    return frozenset(plain), frozenset(numeric)


def default_config(lang: str, prefix_file: str | Path | None = None) -> SplitterConfig:
    """Build the shipped config for ``lang``, optionally overriding prefixes."""
    if prefix_file is not None:
        plain, numeric = read_prefix_file(prefix_file)
    else:
        plain, numeric = _packaged_prefixes(lang)
    return SplitterConfig(lang=lang, prefixes=plain, numeric_only_prefixes=numeric)


def _packaged_prefixes(lang: str) -> tuple[frozenset[str], frozenset[str]]:
    pkg = resources.files("bitextforge.data.nonbreaking_prefixes")
    candidate = pkg / f"prefixes.{lang}.txt"
    if not candidate.is_file():
        candidate = pkg / "prefixes.en.txt"
    with resources.as_file(candidate) as path:
        return read_prefix_file(path)


def is_list_item(paragraph: str) -> bool:
    return bool(
        _BULLET_RE.match(paragraph)
        or _PAREN_MARKER_RE.match(paragraph)
        or _NUMBER_MARKER_RE.match(paragraph)
    )


def strip_list_marker(paragraph: str) -> str:
    for pattern in (_BULLET_RE, _PAREN_MARKER_RE, _NUMBER_MARKER_RE):
        m = pattern.match(paragraph)
        if m:
            return paragraph[m.end():].strip()
    return paragraph


def split_list_items(paragraphs: list[str]) -> list[str]:
    """Strip enumeration markers from list-item paragraphs.

    Each marked paragraph becomes exactly one unit (never merged with its
    neighbours); other paragraphs pass through unchanged.
    """
    return [strip_list_marker(p) if is_list_item(p) else p for p in paragraphs]


def split_sentences(text: str, cfg: SplitterConfig) -> list[str]:
    """Segment one paragraph into sentences.

    The concatenation of the output equals the input modulo inter-sentence
    whitespace. Splits happen after a terminator run (plus optional closing
    quotes/brackets) followed by whitespace and an eligible sentence-start
    letter, unless blocked by non-breaking prefix rules.
    """
    if not text.strip():
        return []
    term_class = "".join(re.escape(t) for t in sorted(cfg.terminators))
    closer_class = re.escape(_CLOSERS)
    boundary = re.compile(rf"[{term_class}]+[{closer_class}]*\s+")

    cuts: list[int] = []
    for m in boundary.finditer(text):
        start_pos = _start_letter_pos(text, m.end())
        if start_pos is None:
            continue
        if not _eligible_start(text[start_pos], cfg):
            continue
        run = m.group(0)
        terminator_run = re.match(rf"[{term_class}]+", run).group(0)
        if terminator_run == "." and _prefix_blocks_split(text, m.start(), text[start_pos], cfg):
            continue
        cuts.append(m.end())

    pieces: list[str] = []
    prev = 0
    for cut in cuts:
        pieces.append(text[prev:cut].strip())
        prev = cut
    pieces.append(text[prev:].strip())
    return [p for p in pieces if p]


def segment_paragraphs(paragraphs: list[str], cfg: SplitterConfig) -> list[str]:
    """Turn extracted paragraphs into a flat sentence list.

    List items are emitted as single units; everything else goes through
    ``split_sentences``.
    """
    sentences: list[str] = []
    for paragraph in paragraphs:
        if is_list_item(paragraph):
            item = strip_list_marker(paragraph)
            if item:
                sentences.append(item)
        else:
            sentences.extend(split_sentences(paragraph, cfg))
    return sentences


def _start_letter_pos(text: str, pos: int) -> int | None:
    """Position of the would-be first letter of the next sentence."""
    while pos < len(text) and text[pos] in _OPENERS:
        pos += 1
    return pos if pos < len(text) else None


def _eligible_start(ch: str, cfg: SplitterConfig) -> bool:
    if ch.isupper():
        return True
    return is_letter(ch) and in_blocks(ch, cfg.script_blocks)


def _prefix_blocks_split(text: str, term_pos: int, next_char: str, cfg: SplitterConfig) -> bool:
    """Decide whether the word before a period is a non-breaking prefix."""
    m = re.search(r"(\S+)$", text[:term_pos])
    if m is None:
        return False
    word = m.group(1).strip(_OPENERS + _CLOSERS)
    if not word:
        return False
    if word in cfg.prefixes:
        return True
    if word in cfg.numeric_only_prefixes:
        return next_char.isdigit()
    # "U.S." style acronyms: letters with internal periods never end a sentence.
    if "." in word and any(is_letter(c) for c in word):
        return True
    # Single letters (one grapheme cluster) are initials: "A. B. Vajpayee".
    if is_letter(word[0]) and cluster_count(word) == 1:
        return True
    return False
