"""HTTP service for human annotation of sampled sentence pairs.

Annotators work through three stratified samples (pairs proposed by only
one aligner or by both), labelling each pair with one of the seven
validation categories. Judgments append to a JSON-lines session log which
is replayed on restart, so a crash never loses acknowledged work; the
resulting per-stratum tallies feed the evaluation module's accuracy and
combined-precision arithmetic.

Endpoints (JSON):
    GET  /session/{id}/next?stratum=only_a|only_b|both
    POST /session/{id}/judgment   {"pair_id": ..., "category": ...}
    GET  /session/{id}/tally
    GET  /session/{id}/judgments
    GET  /                        the annotation UI bundle
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import read_corpus
from .evaluation import AnnotationCategory, Stratum, StratumTally

_STRATUM_FILES = {
    Stratum.ONLY_A: "only_a.tsv",
    Stratum.ONLY_B: "only_b.tsv",
    Stratum.BOTH: "both.tsv",
}


@dataclass(frozen=True)
class SamplePair:
    pair_id: str
    stratum: Stratum
    index: int
    en: str
    xx: str

    def to_json(self) -> dict:
        return {
            "pair_id": self.pair_id,
            "stratum": self.stratum.value,
            "english": self.en,
            "foreign": self.xx,
        }


def load_samples(samples_dir: str | Path) -> dict[Stratum, list[SamplePair]]:
    """Read the stratified sample TSVs written by ``forge eval sample``."""
    samples_dir = Path(samples_dir)
    samples: dict[Stratum, list[SamplePair]] = {}
    for stratum, filename in _STRATUM_FILES.items():
        path = samples_dir / filename
        pairs = read_corpus(path) if path.is_file() else []
        samples[stratum] = [
            SamplePair(
                pair_id=f"{stratum.value}-{i:04d}",
                stratum=stratum,
                index=i,
                en=p.en,
                xx=p.xx,
            )
            for i, p in enumerate(pairs)
        ]
    return samples


class AnnotationSession:
    """Judgment state for one annotator over one set of samples.

    Writes are serialized; every judgment is appended (and fsynced) to the
    session log before it is acknowledged, and re-judging a pair simply
    overwrites the previous label when the log is replayed.
    """

    def __init__(
        self,
        session_id: str,
        samples: dict[Stratum, list[SamplePair]],
        log_path: Path,
        annotator_id: str = "",
    ):
        self.session_id = session_id
        self.samples = samples
        self.log_path = log_path
        self.annotator_id = annotator_id
        self.judgments: dict[str, AnnotationCategory] = {}
        self._by_id = {p.pair_id: p for pairs in samples.values() for p in pairs}
        self._log: list[dict] = []
        self._lock = threading.Lock()
        if log_path.exists():
            self._replay()

    def _replay(self) -> None:
        with open(self.log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                pair_id = event["pair_id"]
                if pair_id in self._by_id:
                    self.judgments[pair_id] = AnnotationCategory(event["category"])
                    self._log.append(event)

    def pair(self, pair_id: str) -> SamplePair | None:
        return self._by_id.get(pair_id)

    def next_pair(self, stratum: Stratum) -> SamplePair | None:
        for sample in self.samples[stratum]:
            if sample.pair_id not in self.judgments:
                return sample
        return None

    def record_judgment(self, pair_id: str, category: AnnotationCategory) -> None:
        if pair_id not in self._by_id:
            raise KeyError(pair_id)
        with self._lock:
            event = {
                "seq": len(self._log),
                "pair_id": pair_id,
                "category": category.value,
                "annotator": self.annotator_id,
            }
            self.log_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._log.append(event)
            self.judgments[pair_id] = category

    def tally(self, stratum: Stratum) -> StratumTally:
        tally = StratumTally(stratum=stratum)
        for sample in self.samples[stratum]:
            category = self.judgments.get(sample.pair_id)
            if category is not None:
                tally.counts[category] += 1
        return tally

    def progress(self, stratum: Stratum) -> tuple[int, int]:
        total = len(self.samples[stratum])
        judged = sum(1 for s in self.samples[stratum] if s.pair_id in self.judgments)
        return judged, total

    def export_tally(self) -> dict:
        strata = {}
        for stratum in Stratum:
            judged, total = self.progress(stratum)
            entry = self.tally(stratum).to_json()
            entry["judged"] = judged
            entry["sample_size"] = total
            entry["completion"] = judged / total if total else 0.0
            strata[stratum.value] = entry
        return {"session_id": self.session_id, "strata": strata}

    def log_events(self) -> list[dict]:
        out = []
        for event in self._log:
            sample = self._by_id[event["pair_id"]]
            entry = dict(event)
            entry["english"] = sample.en
            entry["foreign"] = sample.xx
            entry["stratum"] = sample.stratum.value
            out.append(entry)
        return out


class SessionStore:
    """Sessions created on first use, persisted under one directory."""

    def __init__(self, samples: dict[Stratum, list[SamplePair]], sessions_dir: Path):
        self.samples = samples
        self.sessions_dir = sessions_dir
        self._sessions: dict[str, AnnotationSession] = {}
        self._lock = threading.Lock()

    def get(self, session_id: str) -> AnnotationSession:
        if not session_id.replace("-", "").replace("_", "").isalnum():
            raise HTTPException(status_code=400, detail="invalid session id")
        with self._lock:
            if session_id not in self._sessions:
                self._sessions[session_id] = AnnotationSession(
                    session_id=session_id,
                    samples=self.samples,
                    log_path=self.sessions_dir / f"{session_id}.jsonl",
                )
            return self._sessions[session_id]


class JudgmentBody(BaseModel):
    pair_id: str
    category: str
    annotator: str = ""


_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>Annotation</title></head>
<body><h1>Annotation service is running</h1>
<p>No UI bundle was found. Build the frontend (see frontend/README.md)
and pass its dist directory via <code>--ui</code>, or use the JSON API
directly.</p></body></html>
"""


def create_app(
    samples_dir: str | Path,
    sessions_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    samples_dir = Path(samples_dir)
    sessions_dir = Path(sessions_dir) if sessions_dir else samples_dir / "sessions"
    store = SessionStore(load_samples(samples_dir), sessions_dir)

    app = FastAPI(title="annotation service")

    @app.get("/session/{session_id}/next")
    def next_pair(session_id: str, stratum: str):
        try:
            stratum_key = Stratum(stratum)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown stratum {stratum!r}")
        session = store.get(session_id)
        judged, total = session.progress(stratum_key)
        sample = session.next_pair(stratum_key)
        if sample is None:
            return {"exhausted": True, "stratum": stratum_key.value,
                    "progress": {"judged": judged, "total": total}}
        payload = sample.to_json()
        payload["progress"] = {"judged": judged, "total": total}
        return payload

    @app.post("/session/{session_id}/judgment")
    def record_judgment(session_id: str, body: JudgmentBody):
        try:
            category = AnnotationCategory(body.category)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown category {body.category!r}")
        session = store.get(session_id)
        if body.annotator:
            session.annotator_id = body.annotator
        try:
            session.record_judgment(body.pair_id, category)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown pair id {body.pair_id!r}")
        return session.export_tally()

    @app.get("/session/{session_id}/tally")
    def get_tally(session_id: str):
        return store.get(session_id).export_tally()

    @app.get("/session/{session_id}/judgments")
    def get_judgments(session_id: str):
        return {"judgments": store.get(session_id).log_events()}

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app


def serve(
    samples_dir: str | Path,
    port: int = 8080,
    sessions_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> None:
    import uvicorn

    app = create_app(samples_dir, sessions_dir=sessions_dir, ui_dir=ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=port)
