"""Minimum-cost monotone alignment over a sentence lattice.

Both aligners reduce to the same search: walk the (n_src+1) x (n_tgt+1)
lattice from (0, 0) to (n_src, n_tgt) using a fixed set of link shapes
(di, dj), minimising the summed link cost. Ties are broken by preferring
1-1 links, then links with fewer total sentences, then lexicographically
smaller index tuples; the tie-break is applied to the whole alignment,
not greedily per cell.

The recursion runs backward (cost to reach the end), which makes the
global tie-break decomposable: candidate first links from a cell always
have distinct sort keys, so comparing (cost, first-link key) picks the
alignment whose link-key sequence is lexicographically smallest.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

Shape = tuple[int, int]
CostFn = Callable[[int, int, int, int], float]

#: Shapes shared by the aligners: substitutions up to 2-2 plus skips.
DEFAULT_SHAPES: tuple[Shape, ...] = ((1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (2, 2))


def shapes_up_to(max_block: int) -> tuple[Shape, ...]:
    """Skip shapes plus all block substitutions up to max_block per side."""
    shapes: list[Shape] = [(1, 0), (0, 1)]
    for a in range(1, max_block + 1):
        for b in range(1, max_block + 1):
            shapes.append((a, b))
    return tuple(shapes)


def link_sort_key(i: int, j: int, di: int, dj: int):
    """Tie-break key: prefer 1-1, then fewer sentences, then smaller indices."""
    return (
        0 if (di, dj) == (1, 1) else 1,
        di + dj,
        tuple(range(i, i + di)),
        tuple(range(j, j + dj)),
    )


def best_monotone_alignment(
    n_src: int,
    n_tgt: int,
    shapes: Sequence[Shape],
    cost_fn: CostFn,
    band: Sequence[tuple[int, int]] | None = None,
) -> tuple[float, list[tuple[tuple[int, ...], tuple[int, ...], float]]]:
    """Minimum-cost monotone cover of both index ranges.

    ``cost_fn(i, j, di, dj)`` prices the link joining src[i:i+di] with
    tgt[j:j+dj]. ``band``, when given, restricts lattice row i to target
    columns band[i][0]..band[i][1] inclusive; (0, 0) and (n_src, n_tgt)
    must be inside it. Returns the total cost and the chosen links as
    (src_indices, tgt_indices, link_cost) triples in path order.
    """
    inf = math.inf

    def in_band(i: int, j: int) -> bool:
        return band is None or band[i][0] <= j <= band[i][1]

    if not in_band(0, 0) or not in_band(n_src, n_tgt):
        raise ValueError("band must contain the lattice corners")

    cost = [[inf] * (n_tgt + 1) for _ in range(n_src + 1)]
    move: list[list[Shape | None]] = [[None] * (n_tgt + 1) for _ in range(n_src + 1)]
    cost[n_src][n_tgt] = 0.0

    for i in range(n_src, -1, -1):
        for j in range(n_tgt, -1, -1):
            if (i, j) == (n_src, n_tgt) or not in_band(i, j):
                continue
            best: tuple[float, tuple, Shape] | None = None
            for di, dj in shapes:
                ni, nj = i + di, j + dj
                if ni > n_src or nj > n_tgt or not in_band(ni, nj):
                    continue
                tail = cost[ni][nj]
                if tail == inf:
                    continue
                total = cost_fn(i, j, di, dj) + tail
                key = link_sort_key(i, j, di, dj)
                if best is None or (total, key) < (best[0], best[1]):
                    best = (total, key, (di, dj))
            if best is not None:
                cost[i][j] = best[0]
                move[i][j] = best[2]

    if cost[0][0] == inf:
        raise ValueError("no monotone alignment exists for the given shapes/band")

    links: list[tuple[tuple[int, ...], tuple[int, ...], float]] = []
    i = j = 0
    while (i, j) != (n_src, n_tgt):
        di, dj = move[i][j]  # type: ignore[misc]
        links.append(
            (tuple(range(i, i + di)), tuple(range(j, j + dj)), cost_fn(i, j, di, dj))
        )
        i, j = i + di, j + dj
    return cost[0][0], links
