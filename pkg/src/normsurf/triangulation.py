"""Generalized triangulations given by face gluing tables.

A triangulation with ``t`` tetrahedra is stored as a ``t x 4`` table.  Entry
``(a, f)`` is either ``None`` (face ``f`` of tetrahedron ``a`` lies in the
boundary) or a triple ``(b, g, p)`` where ``p`` is a permutation of
``0..3`` sending the vertex labels of tetrahedron ``a`` to those of ``b``,
with ``p[f] == g``.

Tetrahedron edges are numbered 0..5 in the order of ``EDGES``.  Skeleton
classes are numbered by their smallest ``(tet, subsimplex)`` member.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

from .unionfind import ParityUnionFind, UnionFind

Perm = tuple[int, int, int, int]
Gluing = Optional[tuple[int, int, Perm]]

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX: dict[tuple[int, int], int] = {}
for _k, (_i, _j) in enumerate(EDGES):
    EDGE_INDEX[(_i, _j)] = _k
    EDGE_INDEX[(_j, _i)] = _k

IDENTITY: Perm = (0, 1, 2, 3)
ALL_PERMS: tuple[Perm, ...] = tuple(permutations(range(4)))  # type: ignore[assignment]


class TriangulationError(ValueError):
    code = "TriangulationError"


class MalformedTable(TriangulationError):
    code = "MalformedTable"


class InvolutionViolation(TriangulationError):
    code = "InvolutionViolation"


class SelfGluedFaceIdentity(TriangulationError):
    code = "SelfGluedFaceIdentity"


class EdgeNotOnBoundary(TriangulationError):
    code = "EdgeNotOnBoundary"


class AdjacentTrianglesNotDistinct(TriangulationError):
    code = "AdjacentTrianglesNotDistinct"


class NotOneVertexTorus(TriangulationError):
    code = "NotOneVertexTorus"


def perm_inverse(p: Sequence[int]) -> Perm:
    inv = [0, 0, 0, 0]
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)  # type: ignore[return-value]


def perm_compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """Return p after q, i.e. i -> p[q[i]]."""
    return tuple(p[q[i]] for i in range(4))  # type: ignore[return-value]


def perm_sign(p: Sequence[int]) -> int:
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def face_vertices(f: int) -> tuple[int, int, int]:
    return tuple(v for v in range(4) if v != f)  # type: ignore[return-value]


def face_edges(f: int) -> tuple[int, int, int]:
    """Edge indices of the three edges of face ``f``."""
    return tuple(k for k, (i, j) in enumerate(EDGES) if f not in (i, j))  # type: ignore[return-value]


def opposite_edge(e: int) -> int:
    i, j = EDGES[e]
    k, l = (v for v in range(4) if v not in (i, j))
    return EDGE_INDEX[(k, l)]


@dataclass(frozen=True)
class BoundaryComponent:
    id: int
    triangles: tuple[tuple[int, int], ...]
    edges: tuple[int, ...]
    vertices: tuple[int, ...]

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    @property
    def one_vertex_torus(self) -> bool:
        return (
            len(self.triangles) == 2
            and len(self.edges) == 3
            and len(self.vertices) == 1
        )


@dataclass(frozen=True)
class BoundaryStep:
    """Where a boundary triangle continues across one of its edges."""

    tet: int
    face: int
    a: int  # tetrahedron vertex matching the first endpoint
    b: int  # tetrahedron vertex matching the second endpoint


class Triangulation:
    """An immutable gluing table together with its derived skeleton."""

    def __init__(self, gluings: Sequence[Sequence[Gluing]]):
        self.gluings: tuple[tuple[Gluing, ...], ...] = _validate(gluings)
        self.tet_count = len(self.gluings)
        self._compute_skeleton()

    # ------------------------------------------------------------------
    # construction helpers

    @classmethod
    def from_json(cls, data) -> "Triangulation":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise MalformedTable(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict) or "tets" not in data or "gluings" not in data:
            raise MalformedTable("expected an object with 'tets' and 'gluings'")
        t = data["tets"]
        rows = data["gluings"]
        if not isinstance(t, int) or isinstance(t, bool) or t < 0:
            raise MalformedTable("'tets' must be a nonnegative integer")
        if not isinstance(rows, list) or len(rows) != t:
            raise MalformedTable("'gluings' must list one row per tetrahedron")
        table = []
        for a, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != 4:
                raise MalformedTable(f"row {a} must have four entries")
            out_row = []
            for f, entry in enumerate(row):
                if entry is None:
                    out_row.append(None)
                    continue
                if (
                    not isinstance(entry, list)
                    or len(entry) != 3
                    or not isinstance(entry[2], list)
                ):
                    raise MalformedTable(f"entry ({a},{f}) must be null or [tet, face, perm]")
                out_row.append((entry[0], entry[1], tuple(entry[2])))
            table.append(out_row)
        return cls(table)

    def to_json(self) -> dict:
        rows = []
        for row in self.gluings:
            rows.append([None if g is None else [g[0], g[1], list(g[2])] for g in row])
        return {"tets": self.tet_count, "gluings": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()[:16]

    def __eq__(self, other) -> bool:
        return isinstance(other, Triangulation) and self.gluings == other.gluings

    def __hash__(self) -> int:
        return hash(self.gluings)

    def __repr__(self) -> str:
        return f"Triangulation(tets={self.tet_count}, boundary={len(self.boundary)})"

    # ------------------------------------------------------------------
    # skeleton

    def _compute_skeleton(self) -> None:
        t = self.tet_count
        vuf = UnionFind(4 * t)
        euf = ParityUnionFind(6 * t)
        ouf = ParityUnionFind(t)
        for a in range(t):
            for f in range(4):
                g = self.gluings[a][f]
                if g is None:
                    continue
                b, _, p = g
                for v in face_vertices(f):
                    vuf.union(4 * a + v, 4 * b + p[v])
                for e in face_edges(f):
                    i, j = EDGES[e]
                    flip = 1 if p[i] > p[j] else 0
                    euf.union(6 * a + e, 6 * b + EDGE_INDEX[(p[i], p[j])], flip)
                ouf.union(a, b, 0 if perm_sign(p) < 0 else 1)

        self.vertex_classes: list[tuple[tuple[int, int], ...]] = []
        self._vclass = [0] * (4 * t)
        for idx, cls in enumerate(vuf.classes()):
            self.vertex_classes.append(tuple(divmod(x, 4) for x in cls))
            for x in cls:
                self._vclass[x] = idx

        groups: dict[int, list[int]] = {}
        for x in range(6 * t):
            groups.setdefault(euf.find(x)[0], []).append(x)
        ordered = sorted(groups.values(), key=lambda g: g[0])
        self.edge_classes: list[tuple[tuple[int, int], ...]] = []
        self._eclass = [0] * (6 * t)
        self._esign = [1] * (6 * t)
        for idx, cls in enumerate(ordered):
            base = euf.label(cls[0])
            self.edge_classes.append(tuple(divmod(x, 6) for x in cls))
            for x in cls:
                self._eclass[x] = idx
                self._esign[x] = 1 if euf.label(x) == base else -1
        self.valid_edges = euf.consistent

        self.orientable = ouf.consistent
        self.tet_orientation = tuple(1 - 2 * ouf.label(a) for a in range(t))

        self.boundary_faces: list[tuple[int, int]] = [
            (a, f) for a in range(t) for f in range(4) if self.gluings[a][f] is None
        ]
        self.interior_faces: list[tuple[int, int]] = []
        for a in range(t):
            for f in range(4):
                g = self.gluings[a][f]
                if g is not None and (a, f) < (g[0], g[1]):
                    self.interior_faces.append((a, f))

        self._boundary_steps: dict[tuple[int, int, int], BoundaryStep] = {}
        for a, f in self.boundary_faces:
            for e in face_edges(f):
                i, j = EDGES[e]
                self._boundary_steps[(a, f, e)] = self._walk(a, f, i, j)

        buf = UnionFind(len(self.boundary_faces))
        bindex = {bf: k for k, bf in enumerate(self.boundary_faces)}
        for (a, f, _), step in self._boundary_steps.items():
            buf.union(bindex[(a, f)], bindex[(step.tet, step.face)])
        comps = []
        for k, cls in enumerate(buf.classes()):
            tris = tuple(self.boundary_faces[x] for x in cls)
            edges = sorted({self.edge_class(a, e) for a, f in tris for e in face_edges(f)})
            verts = sorted({self.vertex_class(a, v) for a, f in tris for v in face_vertices(f)})
            comps.append(BoundaryComponent(k, tris, tuple(edges), tuple(verts)))
        self.boundary: list[BoundaryComponent] = comps
        self._face_component = {}
        for comp in comps:
            for tri in comp.triangles:
                self._face_component[tri] = comp.id

        bedges = set()
        for a, f in self.boundary_faces:
            for e in face_edges(f):
                bedges.add(self.edge_class(a, e))
        self.boundary_edge_classes = frozenset(bedges)
        self.boundary_vertex_classes = frozenset(
            self.vertex_class(a, v) for a, f in self.boundary_faces for v in face_vertices(f)
        )

    def _walk(self, a: int, f: int, i: int, j: int) -> BoundaryStep:
        """Walk around the edge ``ij`` of boundary face ``(a, f)`` through the
        interior until the next boundary face is reached."""
        tet, face = a, f
        limit = 6 * self.tet_count + 2
        for _ in range(limit):
            k = next(v for v in range(4) if v not in (i, j, face))
            g = self.gluings[tet][k]
            if g is None:
                return BoundaryStep(tet, k, i, j)
            tet, face, p = g
            i, j = p[i], p[j]
        raise TriangulationError("edge walk did not terminate")

    # ------------------------------------------------------------------
    # queries

    def vertex_class(self, tet: int, v: int) -> int:
        return self._vclass[4 * tet + v]

    def edge_class(self, tet: int, e: int) -> int:
        return self._eclass[6 * tet + e]

    def edge_sign(self, tet: int, e: int) -> int:
        """+1 if the tetrahedron edge ``(i<j)`` runs along the class direction."""
        return self._esign[6 * tet + e]

    def boundary_step(self, tet: int, face: int, e: int) -> BoundaryStep:
        return self._boundary_steps[(tet, face, e)]

    def component_of_face(self, tet: int, face: int) -> int:
        return self._face_component[(tet, face)]

    def edge_degree(self, cls: int) -> int:
        return len(self.edge_classes[cls])

    @property
    def counts(self) -> dict:
        return {
            "tetrahedra": self.tet_count,
            "faces": len(self.interior_faces) + len(self.boundary_faces),
            "edges": len(self.edge_classes),
            "vertices": len(self.vertex_classes),
            "boundary_faces": len(self.boundary_faces),
            "boundary_edges": len(self.boundary_edge_classes),
        }

    def vertex_link_euler(self) -> list[int]:
        """Euler characteristic of each vertex link (indexed by vertex class)."""
        chi = [0] * len(self.vertex_classes)
        for cls in self.edge_classes:
            a, e = cls[0]
            for v in EDGES[e]:
                chi[self.vertex_class(a, v)] += 1
        for a, f in self.interior_faces + self.boundary_faces:
            for v in face_vertices(f):
                chi[self.vertex_class(a, v)] -= 1
        for a in range(self.tet_count):
            for v in range(4):
                chi[self.vertex_class(a, v)] += 1
        return chi

    @property
    def is_manifold(self) -> bool:
        """Valid edges, and every vertex link a sphere (interior) or a disk
        (boundary)."""
        if not self.valid_edges:
            return False
        for k, chi in enumerate(self.vertex_link_euler()):
            want = 1 if k in self.boundary_vertex_classes else 2
            if chi != want:
                return False
        return True

    def warnings(self) -> list[str]:
        out = []
        if not self.orientable:
            out.append("non-orientable")
        if not self.valid_edges:
            out.append("edge identified with itself in reverse")
        elif not self.is_manifold:
            out.append("some vertex link is neither a sphere nor a disk")
        return out

    def restrict(self, tets: Iterable[int]) -> "Triangulation":
        """Sub-table on the given tetrahedra (renumbered in increasing order);
        gluings leaving the set become boundary."""
        keep = sorted(set(tets))
        index = {a: k for k, a in enumerate(keep)}
        rows = []
        for a in keep:
            row = []
            for g in self.gluings[a]:
                if g is None or g[0] not in index:
                    row.append(None)
                else:
                    row.append((index[g[0]], g[1], g[2]))
            rows.append(row)
        return Triangulation(rows)


def _validate(gluings: Sequence[Sequence[Gluing]]) -> tuple[tuple[Gluing, ...], ...]:
    t = len(gluings)
    table: list[tuple[Gluing, ...]] = []
    for a, row in enumerate(gluings):
        if len(row) != 4:
            raise MalformedTable(f"tetrahedron {a} needs four face entries")
        out = []
        for f, g in enumerate(row):
            if g is None:
                out.append(None)
                continue
            try:
                b, face, p = g
                b, face = int(b), int(face)
                p = tuple(int(x) for x in p)
            except (TypeError, ValueError) as exc:
                raise MalformedTable(f"entry ({a},{f}) is malformed") from exc
            if not (0 <= b < t) or not (0 <= face < 4):
                raise MalformedTable(f"entry ({a},{f}) points outside the table")
            if sorted(p) != [0, 1, 2, 3]:
                raise MalformedTable(f"entry ({a},{f}) is not a permutation")
            if p[f] != face:
                raise MalformedTable(f"entry ({a},{f}) does not send face {f} to face {face}")
            if (b, face) == (a, f):
                raise SelfGluedFaceIdentity(f"face ({a},{f}) is glued to itself")
            out.append((b, face, p))
        table.append(tuple(out))
    for a in range(t):
        for f in range(4):
            g = table[a][f]
            if g is None:
                continue
            b, face, p = g
            back = table[b][face]
            if back is None or back[0] != a or back[1] != f or back[2] != perm_inverse(p):
                raise InvolutionViolation(
                    f"({a},{f}) -> ({b},{face}) is not matched by the reverse gluing"
                )
    return tuple(table)


def build_triangulation(table) -> Triangulation:
    """Build from a JSON string, a parsed JSON object or a list of rows."""
    if isinstance(table, (str, dict)):
        return Triangulation.from_json(table)
    return Triangulation(table)


def is_minimal_vertex(T: Triangulation) -> bool:
    if not T.boundary:
        return len(T.vertex_classes) == 1
    if len(T.boundary_vertex_classes) != len(T.vertex_classes):
        return False
    seen: set[int] = set()
    for comp in T.boundary:
        if comp.vertex_count != 1 or comp.vertices[0] in seen:
            return False
        seen.add(comp.vertices[0])
    return True


def boundary_components(T: Triangulation) -> list[BoundaryComponent]:
    return list(T.boundary)


def compute_skeleton(T: Triangulation) -> dict:
    return {
        "vertices": [list(map(list, c)) for c in T.vertex_classes],
        "edges": [
            [[a, e, T.edge_sign(a, e)] for a, e in c] for c in T.edge_classes
        ],
        "boundary": [
            {
                "id": c.id,
                "triangles": [list(x) for x in c.triangles],
                "edges": list(c.edges),
                "vertices": c.vertex_count,
                "one_vertex_torus": c.one_vertex_torus,
            }
            for c in T.boundary
        ],
    }


def boundary_edge_location(T: Triangulation, cls: int) -> tuple[int, int, int]:
    """First (tet, face, edge) boundary position of the edge class ``cls``."""
    for a, f in T.boundary_faces:
        for e in face_edges(f):
            if T.edge_class(a, e) == cls:
                return a, f, e
    raise EdgeNotOnBoundary(f"edge class {cls} is not in the boundary")


def layer_on_edge(T: Triangulation, edge: int) -> Triangulation:
    """Attach a new tetrahedron along the two boundary triangles meeting at
    the boundary edge class ``edge``.

    The new tetrahedron has index ``T.tet_count``.  Its edge 01 lies on the
    old edge, face 3 is glued to the first triangle, face 2 to the second,
    and its edge 23 becomes the new boundary diagonal.
    """
    if not (0 <= edge < len(T.edge_classes)) or edge not in T.boundary_edge_classes:
        raise EdgeNotOnBoundary(f"edge class {edge} is not in the boundary")
    a, f, e = boundary_edge_location(T, edge)
    i, j = EDGES[e]
    step = T.boundary_step(a, f, e)
    b, g, i2, j2 = step.tet, step.face, step.a, step.b
    if (b, g) == (a, f):
        raise AdjacentTrianglesNotDistinct(f"edge class {edge} borders a single triangle twice")
    k = next(v for v in range(4) if v not in (i, j, f))
    k2 = next(v for v in range(4) if v not in (i2, j2, g))
    n = T.tet_count
    to_first: Perm = (i, j, k, f)
    to_second: Perm = (i2, j2, g, k2)
    rows = [list(r) for r in T.gluings]
    rows.append([None, None, (b, g, to_second), (a, f, to_first)])
    rows[a][f] = (n, 3, perm_inverse(to_first))
    rows[b][g] = (n, 2, perm_inverse(to_second))
    return Triangulation(rows)


def mobius_layering(along: str = "interior") -> Triangulation:
    """One tetrahedron layered on the one-triangle Moebius band.

    ``along="interior"`` folds face 3 onto face 0 by 0->1, 1->2, 2->3 and
    gives the one-tetrahedron solid torus.  ``along="boundary"`` folds by
    0->3 fixing 1 and 2, which is the creased 3-cell.
    """
    if along == "interior":
        p: Perm = (1, 2, 3, 0)
    elif along == "boundary":
        p = (3, 1, 2, 0)
    else:
        raise ValueError("along must be 'interior' or 'boundary'")
    return Triangulation([[(0, 3, perm_inverse(p)), None, None, (0, 0, p)]])


def unglued_tetrahedron() -> Triangulation:
    return Triangulation([[None, None, None, None]])


def disjoint_union(*parts: Triangulation) -> Triangulation:
    rows = []
    offset = 0
    for T in parts:
        for row in T.gluings:
            rows.append([None if g is None else (g[0] + offset, g[1], g[2]) for g in row])
        offset += T.tet_count
    return Triangulation(rows)
