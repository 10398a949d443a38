"""Pipeline configuration: every tunable the stages expose, in one file.

Config files are TOML or JSON (by extension). All knobs have defaults, so
a minimal config is just a source, the language list and an output
directory.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ingestion import TITLE_SCRIPT_THRESHOLD, ArchiveSource
from .extraction import MAX_LINK_RATIO, MIN_PARAGRAPH_CHARS
from .scripts import LANGUAGE_SCRIPTS


class ConfigError(Exception):
    pass


@dataclass
class LengthAlignSettings:
    mean_ratio: float = 1.0
    variance: float = 6.8
    skip_penalty: float = 3.0
    lex_weight: float = 2.0
    dictionaries: dict[str, str] = field(default_factory=dict)  # lang -> TSV path


@dataclass
class EmbedAlignSettings:
    provider: str = "none"  # "files" | "stub" | "none"
    dir: str = ""
    max_block: int = 2
    skip_cost: float = 1.0
    window: int = 40
    norm_samples: int = 128
    seed: int = 1234
    stub_dim: int = 32

    def __post_init__(self) -> None:
        if self.provider not in ("files", "stub", "none"):
            raise ConfigError(f"unknown embedding provider {self.provider!r}")
        if self.provider == "files" and not self.dir:
            raise ConfigError("embedding provider 'files' requires a dir")


@dataclass
class SplitSettings:
    dev: int = 0
    test: int = 0
    seed: int = 1


@dataclass
class PipelineConfig:
    source: ArchiveSource
    langs: list[str]
    out_dir: Path
    title_threshold: float = TITLE_SCRIPT_THRESHOLD
    min_paragraph_chars: int = MIN_PARAGRAPH_CHARS
    max_link_ratio: float = MAX_LINK_RATIO
    prefix_dir: Path | None = None
    length: LengthAlignSettings = field(default_factory=LengthAlignSettings)
    embed: EmbedAlignSettings = field(default_factory=EmbedAlignSettings)
    split: SplitSettings = field(default_factory=SplitSettings)
    workers: int = 4

    def __post_init__(self) -> None:
        for lang in self.langs:
            if lang == "en":
                raise ConfigError("langs lists the non-English languages only")
            if lang not in LANGUAGE_SCRIPTS:
                raise ConfigError(f"unknown language code {lang!r}")
        if not self.langs:
            raise ConfigError("langs must not be empty")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def _load_raw(path: Path) -> dict:
    try:
        if path.suffix == ".json":
            return json.loads(path.read_text(encoding="utf-8"))
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    raw = _load_raw(path)
    try:
        source_raw = raw["source"]
        source = ArchiveSource.from_spec(
            source_raw["location"],
            politeness_delay_ms=int(source_raw.get("politeness_delay_ms", 200)),
            max_concurrent=int(source_raw.get("max_concurrent", 4)),
        )
        base = path.parent

        def resolve(p: str) -> str:
            q = Path(p)
            return str(q if q.is_absolute() else base / q)

        if source.kind == "fixture":
            source = ArchiveSource(
                kind="fixture",
                location=resolve(source.location),
                politeness_delay_ms=source.politeness_delay_ms,
                max_concurrent=source.max_concurrent,
            )

        length_raw = dict(raw.get("length_align", {}))
        length_raw["dictionaries"] = {
            lang: resolve(p) for lang, p in length_raw.get("dictionaries", {}).items()
        }
        embed_raw = dict(raw.get("embed_align", {}))
        if embed_raw.get("dir"):
            embed_raw["dir"] = resolve(embed_raw["dir"])

        return PipelineConfig(
            source=source,
            langs=list(raw["langs"]),
            out_dir=Path(resolve(raw["out_dir"])),
            title_threshold=float(raw.get("title_threshold", TITLE_SCRIPT_THRESHOLD)),
            min_paragraph_chars=int(raw.get("min_paragraph_chars", MIN_PARAGRAPH_CHARS)),
            max_link_ratio=float(raw.get("max_link_ratio", MAX_LINK_RATIO)),
            prefix_dir=Path(resolve(raw["prefix_dir"])) if raw.get("prefix_dir") else None,
            length=LengthAlignSettings(**length_raw),
            embed=EmbedAlignSettings(**embed_raw),
            split=SplitSettings(**raw.get("split", {})),
            workers=int(raw.get("workers", 4)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc
