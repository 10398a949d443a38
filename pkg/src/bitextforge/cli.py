"""`forge` command line: every pipeline stage as a subcommand.

Exit codes: 0 on success, 1 on a fatal processing error, 2 on a
configuration/usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .align_embed import AlignmentError, EmbedAlignParams, align_embed, load_embeddings
from .align_length import LengthModel, LexicalScorer, align_length
from .config import ConfigError, load_config
from .corpus import (
    CorpusError,
    read_corpus,
    read_dictionary,
    read_links,
    write_corpus,
    write_links,
)
from .evaluation import (
    AccuracyMode,
    AgreementReport,
    EvaluationError,
    Stratum,
    StratumTally,
    agreement,
    bleu,
    method_precision,
    split_corpus,
    stratify_sample,
)
from .extraction import ExtractionError, extract_paragraphs, strip_tweets
from .ingestion import ArchiveSource, IngestionError
from .pipeline import PipelineError, run_pipeline
from .release import build_release
from .splitter import default_config, split_sentences
from .corpus import AlignMethod, Document, DocumentPair

logger = logging.getLogger("forge")

_FATAL_ERRORS = (
    CorpusError,
    IngestionError,
    ExtractionError,
    AlignmentError,
    EvaluationError,
    PipelineError,
    OSError,
)


def _dump_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_crawl(args) -> int:
    from .config import PipelineConfig
    from .pipeline import PipelineReport, crawl

    source = ArchiveSource.from_spec(
        args.source, politeness_delay_ms=args.delay_ms, max_concurrent=args.max_concurrent
    )
    cfg = PipelineConfig(
        source=source,
        langs=args.langs.split(","),
        out_dir=Path(args.out),
        title_threshold=args.title_threshold,
    )
    report = PipelineReport()
    crawl(cfg, report)
    _dump_json({"articles": report.articles, "untranslated": report.untranslated}, None)
    return 0


def cmd_extract(args) -> int:
    in_dir = Path(args.in_dir)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for html_path in sorted(in_dir.glob("*.html")):
        html = strip_tweets(html_path.read_text(encoding="utf-8"))
        paragraphs = extract_paragraphs(
            html, html_path.stem, args.min_paragraph_chars, args.max_link_ratio
        )
        if not paragraphs:
            logger.warning("empty body for %s, skipped", html_path.name)
            continue
        (out_dir / f"{html_path.stem}.txt").write_text(
            "\n\n".join(paragraphs) + "\n", encoding="utf-8"
        )
    return 0


def cmd_split(args) -> int:
    cfg = default_config(args.lang, args.prefixes)
    text = sys.stdin.read()
    paragraphs = [p.strip() for p in text.split("\n\n")]
    blocks = []
    for paragraph in paragraphs:
        if not paragraph:
            continue
        sentences = split_sentences(" ".join(paragraph.splitlines()), cfg)
        if sentences:
            blocks.append("\n".join(sentences))
    sys.stdout.write("\n\n".join(blocks) + ("\n" if blocks else ""))
    return 0


def _read_sentences(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def cmd_align_length(args) -> int:
    src = _read_sentences(args.src)
    tgt = _read_sentences(args.tgt)
    lex = LexicalScorer(read_dictionary(args.dict)) if args.dict else None
    model = LengthModel(mean_ratio=args.mean_ratio, variance=args.variance)
    links = align_length(
        src, tgt, model, lex, skip_penalty=args.skip_penalty, lex_weight=args.lex_weight
    )
    write_links(links, args.out)
    return 0


def cmd_align_embed(args) -> int:
    src = _read_sentences(args.src)
    tgt = _read_sentences(args.tgt)
    src_embs = load_embeddings(args.src, args.src_emb)
    tgt_embs = load_embeddings(args.tgt, args.tgt_emb)
    params = EmbedAlignParams(
        max_block=args.max_block,
        skip_cost=args.skip_cost,
        window=args.window,
        norm_samples=args.norm_samples,
        seed=args.seed,
    )
    links = align_embed(src, tgt, src_embs, tgt_embs, params)
    write_links(links, args.out)
    return 0


def cmd_release(args) -> int:
    links_root = Path(args.links)
    sentences_root = Path(args.sentences) if args.sentences else links_root.parent / "sentences"
    doc_pairs: list[DocumentPair] = []
    links_by_doc: dict[str, dict[AlignMethod, list]] = {}
    seen: set[tuple[str, str]] = set()
    for link_file in sorted(links_root.glob("*/*.tsv")):
        lang = link_file.parent.name
        stem, method_name = link_file.stem.rsplit(".", 1)
        en_id, xx_id = stem.split("__", 1)
        if (lang, stem) not in seen:
            seen.add((lang, stem))
            en_sents = tuple(_read_sentences(str(sentences_root / "en" / f"{en_id}.txt")))
            xx_sents = tuple(_read_sentences(str(sentences_root / lang / f"{xx_id}.txt")))
            doc_pairs.append(
                DocumentPair(
                    en_doc=Document(id=en_id, lang="en", url="", title="", body_sentences=en_sents),
                    xx_doc=Document(
                        id=xx_id, lang=lang, url="", title="", body_sentences=xx_sents, en_link=en_id
                    ),
                )
            )
        links_by_doc.setdefault(xx_id, {})[AlignMethod(method_name)] = read_links(link_file)
    result = build_release(doc_pairs, links_by_doc)
    result.write(args.out)
    return 0


def cmd_eval_agreement(args) -> int:
    a = set(read_corpus(args.a))
    b = set(read_corpus(args.b))
    report = agreement(a, b)
    _dump_json(report.to_json(), args.json)
    return 0


def cmd_eval_precision(args) -> int:
    overlap = AgreementReport.from_json(json.loads(Path(args.agreement).read_text(encoding="utf-8")))
    tallies_raw = json.loads(Path(args.tallies).read_text(encoding="utf-8"))
    strata = tallies_raw.get("strata", tallies_raw)
    both = StratumTally.from_json(strata[Stratum.BOTH.value])
    only = StratumTally.from_json(strata[args.only_stratum])
    value = method_precision(
        overlap, both, only, AccuracyMode(args.mode), overlap_from=args.overlap_from
    )
    _dump_json({"mode": args.mode, "precision": value}, None)
    return 0


def cmd_eval_bleu(args) -> int:
    with open(args.hyp, encoding="utf-8") as fh:
        hyp = [line.rstrip("\n") for line in fh]
    with open(args.ref, encoding="utf-8") as fh:
        ref = [line.rstrip("\n") for line in fh]
    score = bleu(hyp, ref)
    sys.stdout.write(f"{score:.2f}\n")
    return 0


def cmd_eval_sample(args) -> int:
    a = set(read_corpus(args.a))
    b = set(read_corpus(args.b))
    samples = stratify_sample(a, b, args.n, args.seed)
    out = Path(args.out)
    for stratum, pairs in samples.items():
        write_corpus(pairs, out / f"{stratum.value}.tsv")
    _dump_json({s.value: len(p) for s, p in samples.items()}, None)
    return 0


def cmd_split_corpus(args) -> int:
    pairs = read_corpus(args.pairs)
    train, dev, test = split_corpus(pairs, args.dev, args.test, args.seed)
    out = Path(args.out)
    stem = Path(args.pairs).stem
    for name, chunk in (("train", train), ("dev", dev), ("test", test)):
        write_corpus(chunk, out / f"{stem}.{name}.tsv")
    return 0


def cmd_annotate(args) -> int:
    from .annotation import serve

    serve(args.samples, port=args.port, sessions_dir=args.sessions, ui_dir=args.ui)
    return 0


def cmd_pipeline(args) -> int:
    cfg = load_config(args.config)
    report = run_pipeline(cfg)
    _dump_json(report.to_json(), None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge", description="parallel corpus construction toolkit"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crawl", help="fetch article listings and pages")
    p.add_argument("--source", required=True, help="base URL or fixture directory")
    p.add_argument("--langs", required=True, help="comma-separated language codes (without en)")
    p.add_argument("--out", required=True)
    p.add_argument("--title-threshold", type=float, default=0.5)
    p.add_argument("--delay-ms", type=int, default=200)
    p.add_argument("--max-concurrent", type=int, default=4)
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("extract", help="extract article bodies from html files")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-paragraph-chars", type=int, default=25)
    p.add_argument("--max-link-ratio", type=float, default=0.5)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("split", help="split stdin paragraphs into sentences")
    p.add_argument("--lang", required=True)
    p.add_argument("--prefixes", help="non-breaking prefix file override")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("align-length", help="length+dictionary sentence alignment")
    p.add_argument("--dict", help="bilingual dictionary TSV")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mean-ratio", type=float, default=1.0)
    p.add_argument("--variance", type=float, default=6.8)
    p.add_argument("--skip-penalty", type=float, default=3.0)
    p.add_argument("--lex-weight", type=float, default=2.0)
    p.set_defaults(func=cmd_align_length)

    p = sub.add_parser("align-embed", help="embedding-based sentence alignment")
    p.add_argument("--src", required=True)
    p.add_argument("--src-emb", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--tgt-emb", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-block", type=int, default=2)
    p.add_argument("--skip-cost", type=float, default=1.0)
    p.add_argument("--window", type=int, default=40)
    p.add_argument("--norm-samples", type=int, default=128)
    p.add_argument("--seed", type=int, default=1234)
    p.set_defaults(func=cmd_align_embed)

    p = sub.add_parser("release", help="build the released corpus from link files")
    p.add_argument("--links", required=True, help="links directory (per-language subdirs)")
    p.add_argument("--sentences", help="sentences directory (default: sibling of links)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_release)

    p = sub.add_parser("eval", help="evaluation utilities")
    esub = p.add_subparsers(dest="eval_command", required=True)

    e = esub.add_parser("agreement", help="precision/recall/f1 of corpus A against B")
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--json", help="write the report to this path")
    e.set_defaults(func=cmd_eval_agreement)

    e = esub.add_parser("precision", help="combined precision from agreement + tallies")
    e.add_argument("--agreement", required=True)
    e.add_argument("--tallies", required=True)
    e.add_argument("--mode", choices=[m.value for m in AccuracyMode], required=True)
    e.add_argument("--only-stratum", choices=["only_a", "only_b"], required=True)
    e.add_argument("--overlap-from", choices=["precision", "recall"], default="recall")
    e.set_defaults(func=cmd_eval_precision)

    e = esub.add_parser("bleu", help="corpus BLEU on tokenized text")
    e.add_argument("--hyp", required=True)
    e.add_argument("--ref", required=True)
    e.set_defaults(func=cmd_eval_bleu)

    e = esub.add_parser("sample", help="stratified samples for annotation")
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--n", type=int, default=100)
    e.add_argument("--seed", type=int, default=1)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_eval_sample)

    p = sub.add_parser("split-corpus", help="random train/dev/test split")
    p.add_argument("--pairs", required=True)
    p.add_argument("--dev", type=int, required=True)
    p.add_argument("--test", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split_corpus)

    p = sub.add_parser("annotate", help="serve the annotation UI and API")
    p.add_argument("--samples", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--sessions", help="session log directory")
    p.add_argument("--ui", help="UI bundle directory")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("pipeline", help="run crawl through release from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _FATAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
