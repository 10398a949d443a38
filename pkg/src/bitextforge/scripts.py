"""Unicode script blocks and grapheme-cluster helpers for Indic text.

The languages handled by this toolkit are written in Brahmic abugida
scripts (plus Arabic script for Urdu), where a single visual letter may
span several code points: a base consonant, vowel signs, nukta, virama
and joiners. Everything that needs to reason about "letters" (title
language detection, sentence-start tests, initials) goes through the
block tables and the cluster iterator defined here.
"""

from __future__ import annotations

import unicodedata

# Primary Unicode block per script, as (lo, hi) inclusive code point ranges.
SCRIPT_BLOCKS: dict[str, tuple[tuple[int, int], ...]] = {
    "latin": ((0x0041, 0x005A), (0x0061, 0x007A), (0x00C0, 0x024F)),
    "arabic": ((0x0600, 0x06FF), (0x0750, 0x077F), (0x08A0, 0x08FF)),
    "devanagari": ((0x0900, 0x097F), (0xA8E0, 0xA8FF)),
    "bengali": ((0x0980, 0x09FF),),
    "gurmukhi": ((0x0A00, 0x0A7F),),
    "gujarati": ((0x0A80, 0x0AFF),),
    "oriya": ((0x0B00, 0x0B7F),),
    "tamil": ((0x0B80, 0x0BFF),),
    "telugu": ((0x0C00, 0x0C7F),),
    "kannada": ((0x0C80, 0x0CFF),),
    "malayalam": ((0x0D00, 0x0D7F),),
    "meetei_mayek": ((0xABC0, 0xABFF), (0xAAE0, 0xAAFF)),
}

# Scripts used by each supported language code. Manipuri (mni) is published
# in Bengali script on the source site historically, so both are accepted;
# override via config if that changes.
LANGUAGE_SCRIPTS: dict[str, tuple[str, ...]] = {
    "en": ("latin",),
    "hi": ("devanagari",),
    "mr": ("devanagari",),
    "bn": ("bengali",),
    "as": ("bengali",),
    "pa": ("gurmukhi",),
    "gu": ("gujarati",),
    "or": ("oriya",),
    "ta": ("tamil",),
    "te": ("telugu",),
    "kn": ("kannada",),
    "ml": ("malayalam",),
    "ur": ("arabic",),
    "mni": ("bengali", "meetei_mayek"),
}

#: Every non-Latin script block in one set, used for sentence-start tests
#: (these scripts are unicameral, so there is no uppercase signal).
INDIC_SCRIPTS: tuple[str, ...] = (
    "devanagari",
    "bengali",
    "gurmukhi",
    "gujarati",
    "oriya",
    "tamil",
    "telugu",
    "kannada",
    "malayalam",
    "arabic",
    "meetei_mayek",
)

ZWNJ = "‌"
ZWJ = "‍"


def blocks_for(scripts: tuple[str, ...] | list[str]) -> tuple[tuple[int, int], ...]:
    """Flatten the (lo, hi) ranges of the named scripts into one tuple."""
    out: list[tuple[int, int]] = []
    for name in scripts:
        out.extend(SCRIPT_BLOCKS[name])
    return tuple(out)


def in_blocks(ch: str, blocks: tuple[tuple[int, int], ...]) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in blocks)


def is_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L")


def is_combining(ch: str) -> bool:
    """True for marks that extend the preceding base character."""
    if ch in (ZWJ, ZWNJ):
        return True
    return unicodedata.category(ch) in ("Mn", "Mc", "Me")


def is_virama(ch: str) -> bool:
    # Canonical combining class 9 is the virama class across Indic blocks.
    return unicodedata.combining(ch) == 9


def grapheme_clusters(text: str):
    """Yield extended grapheme clusters of ``text``.

    This is a pragmatic segmenter tuned for abugida safety rather than a
    full UAX #29 implementation: combining marks (Mn/Mc/Me), ZWJ/ZWNJ and
    CRLF attach to the preceding cluster, and a virama glues the following
    letter into the same cluster so conjuncts stay whole.
    """
    cluster = ""
    pending_join = False
    for ch in text:
        if not cluster:
            cluster = ch
        elif cluster.endswith("\r") and ch == "\n":
            cluster += ch
        elif is_combining(ch):
            cluster += ch
        elif pending_join and is_letter(ch):
            cluster += ch
        else:
            yield cluster
            cluster = ch
        pending_join = is_virama(ch) or (pending_join and ch in (ZWJ, ZWNJ))
    if cluster:
        yield cluster


def cluster_count(text: str) -> int:
    return sum(1 for _ in grapheme_clusters(text))
