"""Core data types and on-disk formats shared by every pipeline stage.

Text fields never contain tabs or newlines (offending characters are
replaced by a single space before a value is stored), which keeps every
file format a plain UTF-8 TSV with LF line endings.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

_LANG_RE = re.compile(r"^[a-z]{2,3}$")
_WS_RE = re.compile(r"\s+")


class CorpusError(Exception):
    """Fatal error in corpus data or file handling."""


def validate_lang(code: str) -> str:
    """Validate a language tag: 2-3 ASCII lowercase letters."""
    if not _LANG_RE.match(code):
        raise CorpusError(f"invalid language code: {code!r}")
    return code


def clean_field(text: str) -> str:
    """Replace tab/newline characters with a single space (TSV safety)."""
    return re.sub(r"[\t\r\n]", " ", text)


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs and trim; the canonical pair identity form."""
    return _WS_RE.sub(" ", text).strip()


class AlignMethod(Enum):
    """Which aligner produced a link."""

    LENGTH_DICT = "length_dict"
    EMBEDDING = "embedding"


@dataclass(frozen=True)
class Document:
    """One article in one language, after extraction and splitting."""

    id: str
    lang: str
    url: str
    title: str
    body_sentences: tuple[str, ...]
    en_link: str | None = None  # id of the English version, parsed from the html

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("document id must be non-empty")
        validate_lang(self.lang)
        for s in self.body_sentences:
            if "\t" in s or "\n" in s or "\r" in s:
                raise CorpusError(f"sentence contains tab/newline in doc {self.id}")


@dataclass(frozen=True)
class DocumentPair:
    """An (English, local-language) article pair discovered via hyperlink."""

    en_doc: Document
    xx_doc: Document

    def __post_init__(self) -> None:
        if self.en_doc.lang != "en":
            raise CorpusError("en_doc must have lang 'en'")
        if self.xx_doc.lang == "en":
            raise CorpusError("xx_doc must not be English")
        if self.xx_doc.en_link != self.en_doc.id:
            raise CorpusError(
                f"pair link mismatch: {self.xx_doc.id} links to "
                f"{self.xx_doc.en_link!r}, not {self.en_doc.id!r}"
            )


@dataclass(frozen=True)
class AlignmentLink:
    """A monotone alignment unit between source and target sentence indices.

    Insertions/deletions have exactly one empty side; all other links have
    strictly increasing indices on both sides.
    """

    src: tuple[int, ...]
    tgt: tuple[int, ...]
    score: float
    method: AlignMethod

    def __post_init__(self) -> None:
        if not self.src and not self.tgt:
            raise CorpusError("alignment link cannot be empty on both sides")
        for side in (self.src, self.tgt):
            if any(b <= a for a, b in zip(side, side[1:])):
                raise CorpusError(f"link indices not strictly increasing: {side}")
            if any(i < 0 for i in side):
                raise CorpusError(f"negative link index: {side}")

    @property
    def is_one_to_one(self) -> bool:
        return len(self.src) == 1 and len(self.tgt) == 1


@dataclass(frozen=True)
class SentencePair:
    """A released (English, foreign) sentence pair.

    Equality and hashing use only the two sentence strings, so sets of
    pairs implement the "unique sentence pairs" semantics directly;
    ``origin`` is provenance metadata.
    """

    en: str
    xx: str
    origin: tuple[str, int] = field(default=("", 0), compare=False)

    def __post_init__(self) -> None:
        for side in (self.en, self.xx):
            if not side.strip():
                raise CorpusError("sentence pair has an empty side")
            if "\t" in side or "\n" in side or "\r" in side:
                raise CorpusError("sentence pair contains tab/newline")


@dataclass
class BilingualDictionary:
    """English-to-foreign token dictionary, one translation per headword."""

    entries: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, token: str) -> str | None:
        return self.entries.get(token.casefold())


def read_dictionary(path: str | Path) -> BilingualDictionary:
    """Read a UTF-8 TSV dictionary, one ``english<TAB>foreign`` per line.

    Comment lines start with '#'. When a headword occurs more than once the
    first translation wins; malformed lines are skipped with a warning.
    """
    entries: dict[str, str] = {}
    skipped = 0
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read dictionary {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2 or not cols[0].strip() or not cols[1].strip():
            logger.warning("%s:%d: malformed dictionary line, skipped", path, lineno)
            skipped += 1
            continue
        head = cols[0].strip().casefold()
        if head not in entries:
            entries[head] = cols[1].strip()
    logger.info("read %d dictionary entries from %s (%d skipped)", len(entries), path, skipped)
    return BilingualDictionary(entries)


def write_corpus(pairs: Sequence[SentencePair], path: str | Path) -> int:
    """Write pairs as ``en<TAB>xx`` lines, order preserved. Returns the count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for pair in pairs:
            fh.write(f"{pair.en}\t{pair.xx}\n")
    return len(pairs)


def read_corpus(path: str | Path) -> list[SentencePair]:
    """Read a corpus TSV back into pairs; origin records the file and line."""
    path = Path(path)
    pairs: list[SentencePair] = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise CorpusError(f"{path}:{i + 1}: expected 2 columns, got {len(cols)}")
            pairs.append(SentencePair(en=cols[0], xx=cols[1], origin=(path.name, i)))
    return pairs


def write_links(links: Iterable[AlignmentLink], path: str | Path) -> int:
    """Write alignment links as ``src<TAB>tgt<TAB>score<TAB>method`` TSV.

    Index lists are comma-separated; an empty side is written as ``-``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for link in links:
            src = ",".join(map(str, link.src)) if link.src else "-"
            tgt = ",".join(map(str, link.tgt)) if link.tgt else "-"
            fh.write(f"{src}\t{tgt}\t{link.score!r}\t{link.method.value}\n")
            n += 1
    return n


def read_links(path: str | Path) -> list[AlignmentLink]:
    path = Path(path)
    links: list[AlignmentLink] = []
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise CorpusError(f"{path}:{i + 1}: expected 4 columns, got {len(cols)}")
            src = tuple(int(x) for x in cols[0].split(",")) if cols[0] != "-" else ()
            tgt = tuple(int(x) for x in cols[1].split(",")) if cols[1] != "-" else ()
            links.append(
                AlignmentLink(src=src, tgt=tgt, score=float(cols[2]), method=AlignMethod(cols[3]))
            )
    return links
