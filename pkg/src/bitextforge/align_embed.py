"""Embedding-based sentence aligner.

Costs come from cosine distances between (block-averaged) sentence
embeddings, normalized by the mean distance of random cross-document
sentence pairs so that the skip penalty is comparable across embedding
spaces. Small instances get an exact full-lattice DP; larger ones are
aligned coarse-to-fine: embeddings are downsampled by factor-2 averaging,
aligned recursively, and the result refined inside a band around the
coarse path.

Embeddings are an external input: either a file per document or the
deterministic hashing stub (for plumbing tests only; it does not model
translation equivalence).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .align_length import AlignmentError
from .corpus import AlignMethod, AlignmentLink
from .dp import best_monotone_alignment, shapes_up_to

#: Instances with at most this many lattice cells use exact full DP.
FULL_DP_CELLS = 10_000

_Z_FLOOR = 1e-6
# Cosines are quantized well below any meaningful signal so that rounding
# noise (BLAS order, rescaled inputs) cannot flip cost ties: identical and
# uniformly rescaled embeddings produce bit-identical costs.
_COS_DECIMALS = 12


@dataclass(frozen=True)
class EmbedAlignParams:
    max_block: int = 2
    skip_cost: float = 1.0
    window: int = 40
    norm_samples: int = 128
    seed: int = 1234

    def __post_init__(self) -> None:
        if self.max_block < 1:
            raise ValueError("max_block must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.norm_samples < 1:
            raise ValueError("norm_samples must be >= 1")


@dataclass(frozen=True)
class EmbeddingMatrix:
    """One embedding row per sentence; rows with zero norm are flagged."""

    vectors: np.ndarray

    def __post_init__(self) -> None:
        if self.vectors.ndim != 2:
            raise ValueError("embedding matrix must be 2-dimensional")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("embedding matrix contains non-finite components")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def zero_rows(self) -> np.ndarray:
        return np.flatnonzero(np.linalg.norm(self.vectors, axis=1) == 0.0)


def load_embeddings(text_path: str | Path, emb_path: str | Path) -> EmbeddingMatrix:
    """Load an embedding file and check it against its sentence file.

    Format: a header line ``N D`` followed by N lines of D space-separated
    decimal reals. N must equal the number of lines in ``text_path``.
    """
    text_lines = sum(1 for _ in open(text_path, encoding="utf-8"))
    with open(emb_path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise AlignmentError(f"{emb_path}: bad header, expected 'N D'")
        try:
            n, d = int(header[0]), int(header[1])
        except ValueError as exc:
            raise AlignmentError(f"{emb_path}: bad header, expected 'N D'") from exc
        rows = np.empty((n, d), dtype=np.float64)
        for i in range(n):
            line = fh.readline()
            if not line:
                raise AlignmentError(f"{emb_path}: expected {n} rows, found {i}")
            parts = line.split()
            if len(parts) != d:
                raise AlignmentError(f"{emb_path}:{i + 2}: expected {d} components")
            try:
                rows[i] = [float(x) for x in parts]
            except ValueError as exc:
                raise AlignmentError(f"{emb_path}:{i + 2}: non-numeric component") from exc
    if n != text_lines:
        raise AlignmentError(
            f"{emb_path}: {n} embeddings but {text_path} has {text_lines} sentences"
        )
    return EmbeddingMatrix(rows)


def write_embeddings(matrix: EmbeddingMatrix | np.ndarray, path: str | Path) -> None:
    vectors = matrix.vectors if isinstance(matrix, EmbeddingMatrix) else matrix
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{vectors.shape[0]} {vectors.shape[1]}\n")
        for row in vectors:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def stub_embeddings(sentences: Sequence[str], dim: int = 32, seed: int = 0) -> EmbeddingMatrix:
    """Deterministic unit vectors from hashed character n-grams.

    Identical sentences map to identical rows. This is a test/plumbing
    provider only: it does not place translations near each other.
    """
    if dim < 8:
        raise ValueError("dim must be >= 8")
    rows = np.zeros((len(sentences), dim), dtype=np.float64)
    seed_bytes = seed.to_bytes(8, "little", signed=True)
    for r, sentence in enumerate(sentences):
        for n in (1, 2, 3):
            for k in range(len(sentence) - n + 1):
                gram = sentence[k : k + n].encode("utf-8")
                digest = hashlib.blake2b(gram, digest_size=8, key=seed_bytes).digest()
                value = int.from_bytes(digest, "little")
                idx = value % dim
                sign = 1.0 if (value >> 32) & 1 else -1.0
                rows[r, idx] += sign
        norm = np.linalg.norm(rows[r])
        if norm > 0:
            rows[r] /= norm
    return EmbeddingMatrix(rows)


def _unit_rows(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return vectors / safe


def cost_normalizer(
    src_embs: EmbeddingMatrix, tgt_embs: EmbeddingMatrix, params: EmbedAlignParams
) -> float:
    """Mean (1 - cos) over seeded random cross-document sentence pairs."""
    rng = np.random.default_rng(params.seed)
    i = rng.integers(0, src_embs.n, params.norm_samples)
    j = rng.integers(0, tgt_embs.n, params.norm_samples)
    su = _unit_rows(src_embs.vectors)[i]
    tu = _unit_rows(tgt_embs.vectors)[j]
    cos = np.round(np.einsum("ij,ij->i", su, tu), _COS_DECIMALS)
    return max(float(np.mean(1.0 - cos)), _Z_FLOOR)


def embed_cost(
    src_vectors: np.ndarray, tgt_vectors: np.ndarray, z: float = 1.0
) -> float:
    """Cost of linking two blocks of member embedding rows.

    The block embedding is the re-normalized component mean of its member
    rows; cost = (1 - cos) / z scaled by the total sentence count of the
    block pair. A zero-norm block embedding gets the maximum penalty.
    """
    size = len(src_vectors) + len(tgt_vectors)
    s = np.mean(np.asarray(src_vectors, dtype=np.float64), axis=0)
    t = np.mean(np.asarray(tgt_vectors, dtype=np.float64), axis=0)
    ns, nt = np.linalg.norm(s), np.linalg.norm(t)
    if ns == 0.0 or nt == 0.0:
        return 2.0 / z * size
    cos = round(float(np.dot(s, t) / (ns * nt)), _COS_DECIMALS)
    return (1.0 - cos) / z * size


def _downsample(vectors: np.ndarray) -> np.ndarray:
    n = vectors.shape[0]
    half = (n + 1) // 2
    out = np.empty((half, vectors.shape[1]), dtype=np.float64)
    for k in range(half):
        out[k] = vectors[2 * k : 2 * k + 2].mean(axis=0)
    return out


def _band_from_coarse(
    coarse_links: list[tuple[tuple[int, ...], tuple[int, ...], float]],
    n: int,
    m: int,
    window: int,
) -> list[tuple[int, int]]:
    """Target-column interval per lattice row, around the doubled coarse path."""
    # j-range of the coarse path at every coarse lattice row.
    nc = sum(len(src) for src, _, _ in coarse_links)
    mc = sum(len(tgt) for _, tgt, _ in coarse_links)
    min_j = [m] * (nc + 1)
    max_j = [0] * (nc + 1)
    ci = cj = 0

    def visit(i: int, j: int) -> None:
        min_j[i] = min(min_j[i], j)
        max_j[i] = max(max_j[i], j)

    visit(0, 0)
    for src, tgt, _ in coarse_links:
        ci += len(src)
        cj += len(tgt)
        visit(ci, cj)
    # Fill rows untouched by link corners (cannot happen for contiguous
    # links, but keep the band well-formed regardless).
    for i in range(1, nc + 1):
        min_j[i] = min(min_j[i], min_j[i - 1])
        max_j[i] = max(max_j[i], max_j[i - 1])

    band: list[tuple[int, int]] = []
    for fr in range(n + 1):
        lo_c = min(fr // 2, nc)
        hi_c = min((fr + 1) // 2, nc)
        lo = 2 * min_j[lo_c] - window
        hi = 2 * max_j[hi_c] + 1 + window
        band.append((max(0, min(lo, m)), max(0, min(hi, m))))
    lo0, hi0 = band[0]
    band[0] = (0, hi0)
    lon, hin = band[n]
    band[n] = (min(lon, m), m)
    return band


def _align_matrices(
    src_vectors: np.ndarray,
    tgt_vectors: np.ndarray,
    z: float,
    params: EmbedAlignParams,
    force_exact: bool = False,
) -> list[tuple[tuple[int, ...], tuple[int, ...], float]]:
    n, m = src_vectors.shape[0], tgt_vectors.shape[0]
    shapes = shapes_up_to(params.max_block)

    def cost_fn(i: int, j: int, di: int, dj: int) -> float:
        if di == 0 or dj == 0:
            return params.skip_cost * (di + dj)
        return embed_cost(src_vectors[i : i + di], tgt_vectors[j : j + dj], z)

    if force_exact or (n + 1) * (m + 1) <= FULL_DP_CELLS:
        _, links = best_monotone_alignment(n, m, shapes, cost_fn)
        return links

    coarse_src = _downsample(src_vectors)
    coarse_tgt = _downsample(tgt_vectors)
    coarse_links = _align_matrices(coarse_src, coarse_tgt, z, params)
    band = _band_from_coarse(coarse_links, n, m, params.window)
    _, links = best_monotone_alignment(n, m, shapes, cost_fn, band=band)
    return links


def align_embed(
    src_sentences: Sequence[str],
    tgt_sentences: Sequence[str],
    src_embs: EmbeddingMatrix,
    tgt_embs: EmbeddingMatrix,
    params: EmbedAlignParams | None = None,
) -> list[AlignmentLink]:
    """Minimum-cost monotone alignment under embedding cosine costs."""
    if not src_sentences or not tgt_sentences:
        raise AlignmentError("cannot align empty sentence lists")
    if src_embs.n != len(src_sentences) or tgt_embs.n != len(tgt_sentences):
        raise AlignmentError("embedding row count does not match sentence count")
    params = params or EmbedAlignParams()
    z = cost_normalizer(src_embs, tgt_embs, params)
    raw_links = _align_matrices(src_embs.vectors, tgt_embs.vectors, z, params)
    return [
        AlignmentLink(src=src, tgt=tgt, score=-cost, method=AlignMethod.EMBEDDING)
        for src, tgt, cost in raw_links
    ]
