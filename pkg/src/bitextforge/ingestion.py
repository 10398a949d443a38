"""Archive ingestion: article listings, page fetching and document pairing.

A source is either a live HTTP archive or a local fixture directory; both
use the same layout, so a fixture served by any static file server is a
valid live source:

    listing/<lang>/page-<n>.json   JSON list of {id, url, title} records,
                                   paginated from 1 until an empty page
    html/<lang>/<id>.html          the article markup

Local-language pages carry a hyperlink to their English version, which is
what drives document alignment. Pages without a real translation are
served with an English title, so a title-script test filters them out.
"""

from __future__ import annotations

import json
import logging
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from html.parser import HTMLParser
from pathlib import Path

import requests

from .corpus import Document, DocumentPair, validate_lang
from .scripts import LANGUAGE_SCRIPTS, blocks_for, in_blocks, is_letter

logger = logging.getLogger(__name__)

#: Minimum fraction of title letters in the expected script.
TITLE_SCRIPT_THRESHOLD = 0.5

RETRY_ATTEMPTS = 3


class IngestionError(Exception):
    """Unrecoverable fetch or listing failure."""


@dataclass(frozen=True)
class ArticleRef:
    id: str
    lang: str
    url: str
    title: str


@dataclass(frozen=True)
class ArchiveSource:
    """Where articles come from: a base URL or a fixture directory."""

    kind: str  # "http" | "fixture"
    location: str
    politeness_delay_ms: int = 200
    max_concurrent: int = 4

    def __post_init__(self) -> None:
        if self.kind not in ("http", "fixture"):
            raise ValueError(f"unknown source kind: {self.kind}")
        if self.politeness_delay_ms < 0:
            raise ValueError("politeness_delay_ms must be >= 0")
        if self.max_concurrent < 1:
            raise ValueError("max_concurrent must be >= 1")

    @classmethod
    def from_spec(cls, spec: str, **kwargs) -> "ArchiveSource":
        if spec.startswith(("http://", "https://")):
            return cls(kind="http", location=spec.rstrip("/"), **kwargs)
        return cls(kind="fixture", location=spec, **kwargs)


class _Throttle:
    """Global per-host politeness: a minimum interval between request starts."""

    def __init__(self, delay_ms: int):
        self._delay = delay_ms / 1000.0
        self._lock = threading.Lock()
        self._next_ok = 0.0

    def wait(self):
        with self._lock:
            now = time.monotonic()
            wait_for = self._next_ok - now
            self._next_ok = max(now, self._next_ok) + self._delay
        if wait_for > 0:
            time.sleep(wait_for)


class _HttpFetcher:
    def __init__(self, source: ArchiveSource):
        self.base = source.location
        self.throttle = _Throttle(source.politeness_delay_ms)
        self.backoff_base = max(source.politeness_delay_ms, 50) / 1000.0
        self.session = requests.Session()

    def get(self, path: str) -> bytes | None:
        """GET with retries; returns None on 404 (page past end of listing)."""
        url = f"{self.base}/{path}"
        last_error: Exception | None = None
        for attempt in range(RETRY_ATTEMPTS):
            self.throttle.wait()
            try:
                resp = self.session.get(url, timeout=30)
                if resp.status_code == 404:
                    return None
                resp.raise_for_status()
                return resp.content
            except requests.RequestException as exc:
                last_error = exc
                if attempt + 1 < RETRY_ATTEMPTS:
                    time.sleep(self.backoff_base * (2**attempt))
        raise IngestionError(f"failed to fetch {url} after {RETRY_ATTEMPTS} attempts: {last_error}")


def _parse_listing_page(payload: bytes, lang: str, page_name: str) -> list[ArticleRef] | None:
    """Decode one listing page; None signals a malformed page (skipped)."""
    try:
        records = json.loads(payload.decode("utf-8"))
        if not isinstance(records, list):
            raise ValueError("listing page is not a JSON list")
    except (ValueError, UnicodeDecodeError) as exc:
        logger.warning("malformed listing page %s: %s", page_name, exc)
        return None
    refs = []
    for rec in records:
        try:
            refs.append(
                ArticleRef(id=str(rec["id"]), lang=lang, url=str(rec["url"]), title=str(rec["title"]))
            )
        except (TypeError, KeyError) as exc:
            logger.warning("malformed listing record in %s: %s", page_name, exc)
    return refs


def list_articles(source: ArchiveSource, lang: str) -> list[ArticleRef]:
    """All article refs for a language, in archive order."""
    validate_lang(lang)
    refs: list[ArticleRef] = []
    fetcher = _HttpFetcher(source) if source.kind == "http" else None
    page = 1
    while True:
        rel = f"listing/{lang}/page-{page}.json"
        if fetcher is not None:
            payload = fetcher.get(rel)
            if payload is None:
                break
        else:
            path = Path(source.location) / rel
            if not path.is_file():
                break
            payload = path.read_bytes()
        parsed = _parse_listing_page(payload, lang, rel)
        if parsed is not None:
            if not parsed:
                break  # explicit empty page terminates the listing
            refs.extend(parsed)
        page += 1
    seen: set[str] = set()
    for ref in refs:
        if ref.id in seen:
            raise IngestionError(f"duplicate article id in {lang} listing: {ref.id}")
        seen.add(ref.id)
    return refs


def fetch_html(source: ArchiveSource, ref: ArticleRef, fetcher: _HttpFetcher | None = None) -> bytes:
    rel = f"html/{ref.lang}/{ref.id}.html"
    if source.kind == "http":
        fetcher = fetcher or _HttpFetcher(source)
        payload = fetcher.get(rel)
        if payload is None:
            raise IngestionError(f"article page missing: {rel}")
        return payload
    path = Path(source.location) / rel
    try:
        return path.read_bytes()
    except OSError as exc:
        raise IngestionError(f"cannot read fixture page {path}: {exc}") from exc


def fetch_all(source: ArchiveSource, refs: list[ArticleRef]) -> dict[str, bytes]:
    """Fetch article pages, concurrently for HTTP sources."""
    if source.kind == "fixture" or source.max_concurrent == 1:
        return {ref.id: fetch_html(source, ref) for ref in refs}
    fetcher = _HttpFetcher(source)
    out: dict[str, bytes] = {}
    with ThreadPoolExecutor(max_workers=source.max_concurrent) as pool:
        futures = {ref.id: pool.submit(fetch_html, source, ref, fetcher) for ref in refs}
        for ref_id, fut in futures.items():
            out[ref_id] = fut.result()
    return out


def is_translated(
    ref: ArticleRef, expected_lang: str, threshold: float = TITLE_SCRIPT_THRESHOLD
) -> bool:
    """True when the title is mostly written in the expected language's script.

    The archive serves the English page when no translation exists, so a
    Latin-script title on a local-language ref means "not translated".
    """
    scripts = LANGUAGE_SCRIPTS.get(expected_lang)
    if scripts is None:
        raise IngestionError(f"no script mapping for language {expected_lang!r}")
    blocks = blocks_for(scripts)
    letters = [ch for ch in ref.title if is_letter(ch)]
    if not letters:
        return False
    matching = sum(1 for ch in letters if in_blocks(ch, blocks))
    return matching / len(letters) > threshold


class _EnLinkParser(HTMLParser):
    """Find the hyperlink to the English version of a page."""

    def __init__(self):
        super().__init__()
        self.en_href: str | None = None

    def handle_starttag(self, tag, attrs):
        if tag != "a" or self.en_href is not None:
            return
        attrs = dict(attrs)
        href = attrs.get("href") or ""
        if attrs.get("hreflang") == "en" or re.search(r"(?:^|/)en/", href):
            self.en_href = href


def parse_en_link(html: str) -> str | None:
    """Extract the English-version article id from page markup, if any."""
    parser = _EnLinkParser()
    parser.feed(html)
    parser.close()
    if not parser.en_href:
        return None
    tail = parser.en_href.rstrip("/").rsplit("/", 1)[-1]
    return re.sub(r"\.html?$", "", tail) or None


def pair_documents(
    en_docs: list[Document], xx_docs: list[Document]
) -> tuple[list[DocumentPair], list[str]]:
    """Join local-language documents to English ones via their stored link.

    Returns the resolved pairs plus the ids of documents whose link
    dangles (no fetched English article with that id).
    """
    by_id = {doc.id: doc for doc in en_docs}
    pairs: list[DocumentPair] = []
    dangling: list[str] = []
    for xx in xx_docs:
        en = by_id.get(xx.en_link) if xx.en_link else None
        if en is None:
            dangling.append(xx.id)
            logger.warning("dangling English link for %s/%s: %r", xx.lang, xx.id, xx.en_link)
            continue
        pairs.append(DocumentPair(en_doc=en, xx_doc=xx))
    return pairs, dangling
