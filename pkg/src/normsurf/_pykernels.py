"""Pure-Python versions of the hot loops (same API as ``_ckernels``)."""

from __future__ import annotations

from typing import Sequence

BACKEND = "python"


def _admissible(mask: int, qmasks) -> bool:
    x0 = mask & qmasks[0]
    x1 = (mask & qmasks[1]) >> 1
    x2 = (mask & qmasks[2]) >> 2
    return not ((x0 & x1) | (x0 & x2) | (x1 & x2))


def dd_pairs(
    pos: Sequence[int],
    neg: Sequence[int],
    every: Sequence[int],
    nbits: int,
    max_card: int,
    qmasks=None,
) -> list[tuple[int, int]]:
    """Pairs (i, j) of supports ``pos[i]``, ``neg[j]`` spanning a 2-face.

    The union support must have at most ``max_card`` bits, be admissible
    when ``qmasks`` is given, and contain the support of no third ray
    from ``every``.
    """
    out = []
    for i, p in enumerate(pos):
        for j, n in enumerate(neg):
            u = p | n
            if u.bit_count() > max_card:
                continue
            if qmasks is not None and not _admissible(u, qmasks):
                continue
            inside = 0
            for r in every:
                if not (r & ~u):
                    inside += 1
                    if inside > 2:
                        break
            if inside == 2:
                out.append((i, j))
    return out


def minimal_elements(vectors: Sequence[Sequence[int]]) -> list[int]:
    """Indices of vectors not dominated coordinatewise by another one.

    Input must be free of duplicates.
    """
    order = sorted(range(len(vectors)), key=lambda k: sum(vectors[k]))
    kept: list[int] = []
    for k in order:
        x = vectors[k]
        dominated = False
        for m in kept:
            y = vectors[m]
            if all(a <= b for a, b in zip(y, x)):
                dominated = True
                break
        if not dominated:
            kept.append(k)
    return sorted(kept)
