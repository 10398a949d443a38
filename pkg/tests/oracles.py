"""Independent reference implementations used to check the real ones.

The alignment oracle enumerates every monotone alignment explicitly and
keeps the best by (cost, tie-break key); it shares only the link cost
definition with the production dynamic program, never its search.
"""

from __future__ import annotations

from typing import Callable, Iterator, Sequence

Link = tuple[tuple[int, ...], tuple[int, ...]]


def enumerate_monotone_alignments(
    n_src: int, n_tgt: int, shapes: Sequence[tuple[int, int]]
) -> Iterator[list[Link]]:
    """Every complete monotone cover of both index ranges, one at a time."""

    def rec(i: int, j: int) -> Iterator[list[Link]]:
        if i == n_src and j == n_tgt:
            yield []
            return
        for di, dj in shapes:
            ni, nj = i + di, j + dj
            if ni > n_src or nj > n_tgt:
                continue
            link = (tuple(range(i, ni)), tuple(range(j, nj)))
            for rest in rec(ni, nj):
                yield [link] + rest

    return rec(0, 0)


def oracle_link_key(src: tuple[int, ...], tgt: tuple[int, ...]):
    return (
        0 if (len(src), len(tgt)) == (1, 1) else 1,
        len(src) + len(tgt),
        src,
        tgt,
    )


def oracle_best_alignment(
    n_src: int,
    n_tgt: int,
    shapes: Sequence[tuple[int, int]],
    cost_of_link: Callable[[tuple[int, ...], tuple[int, ...]], float],
) -> tuple[float, list[Link]]:
    """Exhaustive minimum over all monotone alignments.

    The total is accumulated in path order from the end (cost of the first
    link added last), matching how any path-walking evaluation would sum
    the same numbers.
    """
    best_total: float | None = None
    best_key = None
    best_alignment: list[Link] | None = None
    for alignment in enumerate_monotone_alignments(n_src, n_tgt, shapes):
        total = 0.0
        for link in reversed(alignment):
            total = cost_of_link(*link) + total
        key = tuple(oracle_link_key(src, tgt) for src, tgt in alignment)
        if best_total is None or (total, key) < (best_total, best_key):
            best_total, best_key, best_alignment = total, key, alignment
    assert best_alignment is not None, "no alignment enumerated"
    return best_total, best_alignment


def corpus_bleu_reference(
    hypotheses: list[list[str]], references: list[list[str]]
) -> float:
    """Plain reading of the corpus BLEU-4 definition, for cross-checking.

    Collect every n-gram by slicing, clip per sentence against the single
    reference, take the geometric mean of the four precisions and apply
    the brevity penalty. Zero anywhere means zero overall (no smoothing).
    """
    import math
    from collections import Counter

    precisions = []
    for n in range(1, 5):
        match = 0
        total = 0
        for hyp, ref in zip(hypotheses, references):
            hyp_grams = [tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1)]
            ref_grams = [tuple(ref[i : i + n]) for i in range(len(ref) - n + 1)]
            ref_counter = Counter(ref_grams)
            used: Counter = Counter()
            for gram in hyp_grams:
                total += 1
                if used[gram] < ref_counter[gram]:
                    used[gram] += 1
                    match += 1
        if total == 0 or match == 0:
            return 0.0
        precisions.append(match / total)
    hyp_len = sum(len(h) for h in hypotheses)
    ref_len = sum(len(r) for r in references)
    geo = math.exp(sum(math.log(p) for p in precisions) / 4.0)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * geo * bp
