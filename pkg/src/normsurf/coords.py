"""Standard normal coordinates and the matching equations.

Each tetrahedron contributes seven coordinates ``[t0, t1, t2, t3, q0, q1, q2]``.
Triangle ``ti`` cuts off vertex ``i``.  Quad ``q0`` separates ``{0,1}`` from
``{2,3}``, ``q1`` separates ``{0,2}`` from ``{1,3}`` and ``q2`` separates
``{0,3}`` from ``{1,2}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .triangulation import EDGES, Triangulation, face_vertices

NormalVector = tuple[int, ...]

QUAD_SIDES = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


class LengthMismatch(ValueError):
    code = "LengthMismatch"


class QuadIncompatible(ValueError):
    code = "QuadIncompatible"


def quad_type(i: int, j: int) -> int:
    """The quad type that keeps vertices ``i`` and ``j`` on the same side."""
    if i > j:
        i, j = j, i
    if i == 0:
        return j - 1
    # {1,2} -> q2, {1,3} -> q1, {2,3} -> q0
    return 3 - (i + j - 2)


def tri_index(tet: int, v: int) -> int:
    return 7 * tet + v


def quad_index(tet: int, q: int) -> int:
    return 7 * tet + 4 + q


def arc_columns(tet: int, face: int, v: int) -> tuple[int, int]:
    """Coordinates whose pieces meet face ``face`` of ``tet`` in the arc
    cutting off corner ``v``."""
    return tri_index(tet, v), quad_index(tet, quad_type(v, face))


def arc_count(vec: Sequence[int], tet: int, face: int, v: int) -> int:
    i, j = arc_columns(tet, face, v)
    return vec[i] + vec[j]


def edge_columns(tet: int, e: int) -> tuple[int, ...]:
    """Coordinates of pieces that cross the tetrahedron edge ``e``."""
    i, j = EDGES[e]
    same = quad_type(i, j)
    return (tri_index(tet, i), tri_index(tet, j)) + tuple(
        quad_index(tet, q) for q in range(3) if q != same
    )


@dataclass(frozen=True)
class MatchingSystem:
    rows: tuple[tuple[int, ...], ...]
    labels: tuple[tuple, ...]
    ncols: int

    def __len__(self) -> int:
        return len(self.rows)

    def residual(self, vec: Sequence[int]) -> list[int]:
        return [sum(c * x for c, x in zip(row, vec)) for row in self.rows]

    def satisfied_by(self, vec: Sequence[int]) -> bool:
        return all(r == 0 for r in self.residual(vec))

    def extended(self, rows, labels) -> "MatchingSystem":
        return MatchingSystem(self.rows + tuple(rows), self.labels + tuple(labels), self.ncols)


def matching_system(T: Triangulation) -> MatchingSystem:
    n = 7 * T.tet_count
    rows = []
    labels = []
    for a, f in T.interior_faces:
        b, g, p = T.gluings[a][f]
        for v in face_vertices(f):
            row = [0] * n
            for c in arc_columns(a, f, v):
                row[c] += 1
            for c in arc_columns(b, g, p[v]):
                row[c] -= 1
            rows.append(tuple(row))
            labels.append(("match", a, f, v))
    return MatchingSystem(tuple(rows), tuple(labels), n)


def quad_masks(t: int) -> tuple[int, int, int]:
    """Bitmasks selecting q0, q1, q2 of every tetrahedron."""
    masks = [0, 0, 0]
    for a in range(t):
        for q in range(3):
            masks[q] |= 1 << quad_index(a, q)
    return masks[0], masks[1], masks[2]


def support_mask(vec: Sequence[int]) -> int:
    m = 0
    for i, x in enumerate(vec):
        if x:
            m |= 1 << i
    return m


def mask_admissible(mask: int, qmasks: tuple[int, int, int]) -> bool:
    """True iff the support has at most one quad type per tetrahedron."""
    x0 = mask & qmasks[0]
    x1 = (mask & qmasks[1]) >> 1
    x2 = (mask & qmasks[2]) >> 2
    return not ((x0 & x1) | (x0 & x2) | (x1 & x2))


def quads_ok(vec: Sequence[int]) -> bool:
    for a in range(len(vec) // 7):
        if sum(1 for q in range(3) if vec[7 * a + 4 + q]) > 1:
            return False
    return True


def is_admissible(vec: Sequence[int], T: Triangulation, system: MatchingSystem | None = None) -> bool:
    if len(vec) != 7 * T.tet_count:
        raise LengthMismatch(f"expected {7 * T.tet_count} coordinates, got {len(vec)}")
    if any(x < 0 for x in vec):
        return False
    if not quads_ok(vec):
        return False
    system = system or matching_system(T)
    return system.satisfied_by(vec)


def quad_compatible(u: Sequence[int], v: Sequence[int]) -> bool:
    return quads_ok([x + y for x, y in zip(u, v)])


def haken_sum(u: Sequence[int], v: Sequence[int]) -> NormalVector:
    if len(u) != len(v):
        raise LengthMismatch("vectors have different lengths")
    if not quad_compatible(u, v):
        raise QuadIncompatible("the two vectors use different quad types in some tetrahedron")
    return tuple(x + y for x, y in zip(u, v))


def in_carrier(g: Sequence[int], f: Sequence[int]) -> bool:
    return all(not x or y for x, y in zip(g, f))


def vertex_link(T: Triangulation, cls: int) -> NormalVector:
    vec = [0] * (7 * T.tet_count)
    for a, v in T.vertex_classes[cls]:
        vec[tri_index(a, v)] += 1
    return tuple(vec)


def vertex_links(T: Triangulation) -> list[NormalVector]:
    return [vertex_link(T, c) for c in range(len(T.vertex_classes))]


def edge_weights(vec: Sequence[int], T: Triangulation) -> list[int]:
    out = []
    for members in T.edge_classes:
        a, e = members[0]
        out.append(sum(vec[c] for c in edge_columns(a, e)))
    return out


def weight(vec: Sequence[int], T: Triangulation) -> int:
    return sum(edge_weights(vec, T))


def boundary_length(vec: Sequence[int], T: Triangulation) -> int:
    w = edge_weights(vec, T)
    return sum(w[c] for c in T.boundary_edge_classes)


def boundary_arc_counts(vec: Sequence[int], T: Triangulation) -> dict[tuple[int, int, int], int]:
    """Arc counts on every boundary triangle, keyed by (tet, face, corner)."""
    out = {}
    for a, f in T.boundary_faces:
        for v in face_vertices(f):
            out[(a, f, v)] = arc_count(vec, a, f, v)
    return out


def euler_characteristic(vec: Sequence[int], T: Triangulation) -> int:
    """Counting formula: points on edges minus arcs plus pieces.

    Interior arcs are counted once per face class, boundary arcs once.
    """
    pieces = sum(vec)
    arcs = 0
    for a, f in T.interior_faces:
        for v in face_vertices(f):
            arcs += arc_count(vec, a, f, v)
    for a, f in T.boundary_faces:
        for v in face_vertices(f):
            arcs += arc_count(vec, a, f, v)
    return weight(vec, T) - arcs + pieces


def zero_vector(T: Triangulation) -> NormalVector:
    return (0,) * (7 * T.tet_count)


def scale(vec: Sequence[int], k: int) -> NormalVector:
    return tuple(k * x for x in vec)


def add(u: Sequence[int], v: Sequence[int]) -> NormalVector:
    return tuple(x + y for x, y in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> NormalVector:
    return tuple(x - y for x, y in zip(u, v))


def leq(u: Sequence[int], v: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(u, v))
