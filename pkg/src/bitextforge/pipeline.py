"""End-to-end pipeline: crawl, extract, split, align twice, release.

Every stage writes its artifacts under the output directory in formats the
standalone subcommands can read back:

    documents/<lang>/<id>.html     fetched markup
    documents/<lang>/index.json    article refs with pairing links
    sentences/<lang>/<id>.txt      one sentence per line
    links/<lang>/<en>__<xx>.<method>.tsv
    release/<lang>-en.tsv          released corpus + report.json
    reports/crawl.json             article counts, filter/dangling stats

Given a fixture source and fixed seeds the whole tree is byte-for-byte
reproducible.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import ingestion
from .align_embed import EmbedAlignParams, EmbeddingMatrix, align_embed, load_embeddings, stub_embeddings
from .align_length import LengthModel, LexicalScorer, align_length
from .config import PipelineConfig
from .corpus import (
    AlignMethod,
    Document,
    DocumentPair,
    read_dictionary,
    read_links,
    write_corpus,
    write_links,
)
from .evaluation import split_corpus
from .extraction import extract_paragraphs, strip_tweets
from .ingestion import ArticleRef
from .release import build_release
from .splitter import default_config, segment_paragraphs

logger = logging.getLogger(__name__)


class PipelineError(Exception):
    pass


@dataclass
class PipelineReport:
    articles: dict[str, int] = field(default_factory=dict)
    untranslated: dict[str, int] = field(default_factory=dict)
    dropped_empty: dict[str, int] = field(default_factory=dict)
    dangling_links: dict[str, list[str]] = field(default_factory=dict)
    pairs: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "articles": self.articles,
            "untranslated": self.untranslated,
            "dropped_empty": self.dropped_empty,
            "dangling_links": self.dangling_links,
            "pairs": self.pairs,
        }


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def crawl(cfg: PipelineConfig, report: PipelineReport) -> dict[str, list[ArticleRef]]:
    """Fetch listings and pages for English plus every configured language."""
    out = cfg.out_dir
    refs_by_lang: dict[str, list[ArticleRef]] = {}
    for lang in ["en"] + list(cfg.langs):
        refs = ingestion.list_articles(cfg.source, lang)
        report.articles[lang] = len(refs)
        if lang != "en":
            translated = [r for r in refs if ingestion.is_translated(r, lang, cfg.title_threshold)]
            report.untranslated[lang] = len(refs) - len(translated)
            refs = translated
        html_dir = out / "documents" / lang
        html_dir.mkdir(parents=True, exist_ok=True)
        to_fetch = [r for r in refs if not (html_dir / f"{r.id}.html").exists()]
        fetched = ingestion.fetch_all(cfg.source, to_fetch)
        for ref_id, payload in fetched.items():
            (html_dir / f"{ref_id}.html").write_bytes(payload)
        index = [{"id": r.id, "url": r.url, "title": r.title} for r in refs]
        _write_json(html_dir / "index.json", {"lang": lang, "articles": index})
        refs_by_lang[lang] = refs
    return refs_by_lang


def extract_and_split(
    cfg: PipelineConfig, refs_by_lang: dict[str, list[ArticleRef]], report: PipelineReport
) -> dict[str, list[Document]]:
    """Produce per-article sentence files and in-memory documents."""
    out = cfg.out_dir
    docs_by_lang: dict[str, list[Document]] = {}
    for lang, refs in refs_by_lang.items():
        prefix_file = None
        if cfg.prefix_dir is not None:
            candidate = cfg.prefix_dir / f"prefixes.{lang}.txt"
            prefix_file = candidate if candidate.is_file() else None
        splitter_cfg = default_config(lang, prefix_file)
        docs: list[Document] = []
        dropped = 0
        for ref in refs:
            html_path = out / "documents" / lang / f"{ref.id}.html"
            html = html_path.read_text(encoding="utf-8")
            html = strip_tweets(html)
            en_link = ingestion.parse_en_link(html) if lang != "en" else None
            paragraphs = extract_paragraphs(
                html, ref.id, cfg.min_paragraph_chars, cfg.max_link_ratio
            )
            sentences = segment_paragraphs(paragraphs, splitter_cfg)
            if not sentences:
                logger.warning("empty body for %s/%s, dropped", lang, ref.id)
                dropped += 1
                continue
            sent_path = out / "sentences" / lang / f"{ref.id}.txt"
            sent_path.parent.mkdir(parents=True, exist_ok=True)
            sent_path.write_text("\n".join(sentences) + "\n", encoding="utf-8")
            docs.append(
                Document(
                    id=ref.id,
                    lang=lang,
                    url=ref.url,
                    title=ref.title,
                    body_sentences=tuple(sentences),
                    en_link=en_link,
                )
            )
        report.dropped_empty[lang] = dropped
        docs_by_lang[lang] = docs
    return docs_by_lang


def _embeddings_for(cfg: PipelineConfig, doc: Document) -> EmbeddingMatrix | None:
    settings = cfg.embed
    if settings.provider == "none":
        return None
    if settings.provider == "stub":
        return stub_embeddings(list(doc.body_sentences), dim=settings.stub_dim, seed=settings.seed)
    emb_path = Path(settings.dir) / doc.lang / f"{doc.id}.emb"
    if not emb_path.is_file():
        return None
    text_path = cfg.out_dir / "sentences" / doc.lang / f"{doc.id}.txt"
    return load_embeddings(text_path, emb_path)


def align_pair(cfg: PipelineConfig, pair: DocumentPair, lex: LexicalScorer | None) -> dict[AlignMethod, Path]:
    """Run both aligners on one document pair and write their link files."""
    out = cfg.out_dir
    model = LengthModel(mean_ratio=cfg.length.mean_ratio, variance=cfg.length.variance)
    src = list(pair.en_doc.body_sentences)
    tgt = list(pair.xx_doc.body_sentences)
    stem = f"{pair.en_doc.id}__{pair.xx_doc.id}"
    links_dir = out / "links" / pair.xx_doc.lang
    written: dict[AlignMethod, Path] = {}

    links = align_length(
        src, tgt, model, lex, skip_penalty=cfg.length.skip_penalty, lex_weight=cfg.length.lex_weight
    )
    path = links_dir / f"{stem}.{AlignMethod.LENGTH_DICT.value}.tsv"
    write_links(links, path)
    written[AlignMethod.LENGTH_DICT] = path

    src_embs = _embeddings_for(cfg, pair.en_doc)
    tgt_embs = _embeddings_for(cfg, pair.xx_doc)
    if src_embs is not None and tgt_embs is not None:
        params = EmbedAlignParams(
            max_block=cfg.embed.max_block,
            skip_cost=cfg.embed.skip_cost,
            window=cfg.embed.window,
            norm_samples=cfg.embed.norm_samples,
            seed=cfg.embed.seed,
        )
        links = align_embed(src, tgt, src_embs, tgt_embs, params)
        path = links_dir / f"{stem}.{AlignMethod.EMBEDDING.value}.tsv"
        write_links(links, path)
        written[AlignMethod.EMBEDDING] = path
    return written


def run_pipeline(cfg: PipelineConfig) -> PipelineReport:
    report = PipelineReport()
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)

    refs_by_lang = crawl(cfg, report)
    _write_json(
        out / "reports" / "crawl.json",
        {
            "articles": report.articles,
            "untranslated": report.untranslated,
        },
    )

    docs_by_lang = extract_and_split(cfg, refs_by_lang, report)

    en_docs = docs_by_lang.get("en", [])
    all_pairs: list[DocumentPair] = []
    for lang in cfg.langs:
        pairs, dangling = ingestion.pair_documents(en_docs, docs_by_lang.get(lang, []))
        report.pairs[lang] = len(pairs)
        report.dangling_links[lang] = dangling
        all_pairs.extend(pairs)

    scorers: dict[str, LexicalScorer | None] = {}
    for lang in cfg.langs:
        dict_path = cfg.length.dictionaries.get(lang)
        scorers[lang] = LexicalScorer(read_dictionary(dict_path)) if dict_path else None

    links_by_doc: dict[str, dict[AlignMethod, list]] = {}

    def run_one(pair: DocumentPair):
        return pair, align_pair(cfg, pair, scorers[pair.xx_doc.lang])

    if cfg.workers > 1 and len(all_pairs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run_one, all_pairs))
    else:
        results = [run_one(p) for p in all_pairs]
    for pair, link_files in results:
        links_by_doc[pair.xx_doc.id] = {
            method: read_links(path) for method, path in link_files.items()
        }

    result = build_release(all_pairs, links_by_doc)
    result.write(out / "release")

    if cfg.split.dev or cfg.split.test:
        for lang, released in sorted(result.corpora.items()):
            train, dev, test = split_corpus(released, cfg.split.dev, cfg.split.test, cfg.split.seed)
            write_corpus(train, out / "release" / f"{lang}-en.train.tsv")
            write_corpus(dev, out / "release" / f"{lang}-en.dev.tsv")
            write_corpus(test, out / "release" / f"{lang}-en.test.tsv")

    _write_json(out / "reports" / "pipeline.json", report.to_json())
    return report
