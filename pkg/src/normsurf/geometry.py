"""Reconstruction of the normal surface represented by a vector.

Pieces are instantiated explicitly.  Parallel copies are stacked by their
distance from the vertex (triangles) or from the quad side that contains the
lower-numbered vertex (quads), which fixes where each piece meets every edge
and face.  Components, orientability and boundary curves then come out of
union-find passes over the face gluings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .coords import (
    QUAD_SIDES,
    NormalVector,
    is_admissible,
    matching_system,
    quad_type,
)
from .triangulation import EDGE_INDEX, EDGES, Triangulation, face_vertices
from .unionfind import ParityUnionFind, UnionFind


class NotAdmissible(ValueError):
    code = "NotAdmissible"


@dataclass(frozen=True)
class BoundaryCurve:
    boundary_id: int
    component: int
    length: int
    arcs: tuple[tuple[tuple[int, int, int], int], ...]
    z: Optional[tuple[int, int, int]]
    trivial: bool

    def to_json(self) -> dict:
        return {
            "boundary": self.boundary_id,
            "component": self.component,
            "length": self.length,
            "z": list(self.z) if self.z is not None else None,
            "trivial": self.trivial,
        }


@dataclass
class Component:
    vector: NormalVector
    euler: int
    orientable: bool
    boundary_count: int
    weight: int
    boundary_length: int
    vertex_linking: bool
    curves: list[int] = field(default_factory=list)

    @property
    def genus(self) -> Optional[int]:
        if not self.orientable:
            return None
        return (2 - self.boundary_count - self.euler) // 2

    @property
    def crosscaps(self) -> Optional[int]:
        if self.orientable:
            return None
        return 2 - self.boundary_count - self.euler

    def to_json(self) -> dict:
        return {
            "chi": self.euler,
            "orientable": self.orientable,
            "genus": self.genus,
            "crosscaps": self.crosscaps,
            "boundary_curves": self.boundary_count,
            "weight": self.weight,
            "boundary_length": self.boundary_length,
            "vertex_linking": self.vertex_linking,
            "vector": list(self.vector),
        }


@dataclass
class SurfaceGeometry:
    vector: NormalVector
    components: list[Component]
    curves: list[BoundaryCurve]
    euler: int
    weight: int
    boundary_length: int

    @property
    def boundary_curves(self) -> dict[int, list[BoundaryCurve]]:
        out: dict[int, list[BoundaryCurve]] = {}
        for c in self.curves:
            out.setdefault(c.boundary_id, []).append(c)
        return out

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    def to_json(self) -> dict:
        return {
            "vector": list(self.vector),
            "chi": self.euler,
            "weight": self.weight,
            "boundary_length": self.boundary_length,
            "components": [c.to_json() for c in self.components],
            "curves": [c.to_json() for c in self.curves],
        }


@dataclass(frozen=True)
class Classification:
    is_sphere: bool
    is_disk: bool
    is_annulus_or_mobius: bool
    is_planar: bool
    is_torus_or_klein: bool
    genus: Optional[int]
    crosscaps: Optional[int]
    connected: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _quad_sides(k: int):
    return QUAD_SIDES[k]


class _Pieces:
    """Piece numbering and stacking positions inside each tetrahedron."""

    def __init__(self, vec: Sequence[int], t: int):
        self.vec = vec
        self.offset = []
        total = 0
        self.quad = []
        for a in range(t):
            self.offset.append(total)
            total += sum(vec[7 * a: 7 * a + 7])
            qk = next((k for k in range(3) if vec[7 * a + 4 + k]), None)
            self.quad.append(qk)
        self.total = total

    def tri(self, a: int, v: int) -> int:
        return self.vec[7 * a + v]

    def qcount(self, a: int) -> int:
        k = self.quad[a]
        return 0 if k is None else self.vec[7 * a + 4 + k]

    def tri_piece(self, a: int, v: int, m: int) -> int:
        base = self.offset[a] + sum(self.vec[7 * a: 7 * a + v])
        return base + m

    def quad_piece(self, a: int, m: int) -> int:
        return self.offset[a] + sum(self.vec[7 * a: 7 * a + 4]) + m

    def arc_piece(self, a: int, f: int, c: int, s: int) -> int:
        """Piece owning the arc at position ``s`` (from corner ``c``) in face f."""
        tc = self.tri(a, c)
        if s < tc:
            return self.tri_piece(a, c, s)
        m = s - tc
        k = self.quad[a]
        side_a = QUAD_SIDES[k][0]
        if c in side_a and f in side_a:
            return self.quad_piece(a, m)
        return self.quad_piece(a, self.qcount(a) - 1 - m)

    def arc_total(self, a: int, f: int, c: int) -> int:
        k = self.quad[a]
        q = self.vec[7 * a + 4 + quad_type(c, f)] if k is not None else 0
        return self.tri(a, c) + q

    def edge_piece(self, a: int, e: int, s: int) -> int:
        """Piece crossing tetrahedron edge ``e`` at distance ``s`` from its lower end."""
        i, j = EDGES[e]
        ti, tj = self.tri(a, i), self.tri(a, j)
        if s < ti:
            return self.tri_piece(a, i, s)
        s -= ti
        k = self.quad[a]
        q = 0
        if k is not None and k != quad_type(i, j):
            q = self.qcount(a)
        if s < q:
            if i in QUAD_SIDES[k][0]:
                return self.quad_piece(a, s)
            return self.quad_piece(a, q - 1 - s)
        s -= q
        return self.tri_piece(a, j, tj - 1 - s)

    def edge_weight(self, a: int, e: int) -> int:
        i, j = EDGES[e]
        k = self.quad[a]
        q = self.qcount(a) if (k is not None and k != quad_type(i, j)) else 0
        return self.tri(a, i) + self.tri(a, j) + q


def _traversals(vec, pieces: _Pieces, a: int):
    """For each piece in tetrahedron ``a`` yield (piece, face, corner, pos,
    from_vertex, to_vertex) describing how its oriented boundary runs
    through each face."""
    for v in range(4):
        others = [x for x in range(4) if x != v]
        x1, x2, x3 = others
        cyc = ((x3, x1, x2), (x1, x2, x3), (x2, x3, x1))  # (face, from, to)
        for m in range(pieces.tri(a, v)):
            pid = pieces.tri_piece(a, v, m)
            for f, fr, to in cyc:
                yield pid, f, v, m, fr, to
    k = pieces.quad[a]
    if k is None:
        return
    (a1, a2), (b1, b2) = QUAD_SIDES[k]
    q = pieces.qcount(a)
    # cycle a1b1 -> a1b2 -> a2b2 -> a2b1 -> a1b1
    steps = ((a2, a1, b1, b2), (b1, b2, a1, a2), (a1, a2, b2, b1), (b2, b1, a2, a1))
    for m in range(q):
        pid = pieces.quad_piece(a, m)
        for f, c, fr, to in steps:
            # position of copy m in face f around corner c
            tc = pieces.tri(a, c)
            if c in (a1, a2) and f in (a1, a2):
                pos = tc + m
            elif c in (b1, b2) and f in (b1, b2):
                pos = tc + (q - 1 - m)
            else:  # pragma: no cover - corners always share the quad side with f
                raise AssertionError("inconsistent quad corner")
            yield pid, f, c, pos, fr, to


def reconstruct(vec: Sequence[int], T: Triangulation, check: bool = True) -> SurfaceGeometry:
    vec = tuple(int(x) for x in vec)
    if check and not is_admissible(vec, T):
        raise NotAdmissible("vector violates the matching equations or quad conditions")
    t = T.tet_count
    pieces = _Pieces(vec, t)
    n = pieces.total

    # traversal records keyed by (tet, face, corner, pos)
    trav: dict[tuple[int, int, int, int], tuple[int, int, int]] = {}
    for a in range(t):
        for pid, f, c, pos, fr, to in _traversals(vec, pieces, a):
            trav[(a, f, c, pos)] = (pid, fr, to)

    puf = ParityUnionFind(n)
    conflicts = []
    for a, f in T.interior_faces:
        b, g, p = T.gluings[a][f]
        for c in face_vertices(f):
            for s in range(pieces.arc_total(a, f, c)):
                pid, fr, to = trav[(a, f, c, s)]
                qid, fr2, to2 = trav[(b, g, p[c], s)]
                same = (fr2, to2) == (p[fr], p[to])
                if not puf.union(pid, qid, 1 if same else 0):
                    conflicts.append(pid)

    roots: dict[int, int] = {}
    comp_of = [0] * n
    for pid in range(n):
        r = puf.find(pid)[0]
        if r not in roots:
            roots[r] = len(roots)
        comp_of[pid] = roots[r]
    ncomp = len(roots)
    nonorientable = {comp_of[pid] for pid in conflicts}

    # per-component counts
    verts = [0] * ncomp
    edges = [0] * ncomp
    faces = [0] * ncomp
    bverts = [0] * ncomp
    cvec = [[0] * (7 * t) for _ in range(ncomp)]
    for a in range(t):
        for col in range(7):
            for m in range(vec[7 * a + col]):
                if col < 4:
                    pid = pieces.tri_piece(a, col, m)
                else:
                    pid = pieces.quad_piece(a, m)
                cvec[comp_of[pid]][7 * a + col] += 1
                faces[comp_of[pid]] += 1

    boundary_edges = T.boundary_edge_classes
    for cls, members in enumerate(T.edge_classes):
        a, e = members[0]
        for s in range(pieces.edge_weight(a, e)):
            cc = comp_of[pieces.edge_piece(a, e, s)]
            verts[cc] += 1
            if cls in boundary_edges:
                bverts[cc] += 1
    for a, f in T.interior_faces:
        for c in face_vertices(f):
            for s in range(pieces.arc_total(a, f, c)):
                edges[comp_of[pieces.arc_piece(a, f, c, s)]] += 1
    for a, f in T.boundary_faces:
        for c in face_vertices(f):
            for s in range(pieces.arc_total(a, f, c)):
                edges[comp_of[pieces.arc_piece(a, f, c, s)]] += 1

    curves = _boundary_curves(vec, T, pieces, comp_of)

    links = {}
    for cls, members in enumerate(T.vertex_classes):
        lv = [0] * (7 * t)
        for a, v in members:
            lv[7 * a + v] += 1
        links[tuple(lv)] = cls

    comps = []
    for k in range(ncomp):
        vk = tuple(cvec[k])
        comps.append(
            Component(
                vector=vk,
                euler=verts[k] - edges[k] + faces[k],
                orientable=k not in nonorientable,
                boundary_count=sum(1 for c in curves if c.component == k),
                weight=verts[k],
                boundary_length=bverts[k],
                vertex_linking=vk in links,
                curves=[i for i, c in enumerate(curves) if c.component == k],
            )
        )
    order = sorted(range(ncomp), key=lambda k: comps[k].vector)
    remap = {old: new for new, old in enumerate(order)}
    comps = [comps[k] for k in order]
    curves = [
        BoundaryCurve(c.boundary_id, remap[c.component], c.length, c.arcs, c.z, c.trivial) for c in curves
    ]
    for k, comp in enumerate(comps):
        comp.curves = [i for i, c in enumerate(curves) if c.component == k]
    return SurfaceGeometry(
        vector=vec,
        components=comps,
        curves=curves,
        euler=sum(verts) - sum(edges) + sum(faces),
        weight=sum(verts),
        boundary_length=sum(bverts),
    )


def _boundary_curves(vec, T: Triangulation, pieces: _Pieces, comp_of) -> list[BoundaryCurve]:
    """Split the boundary arcs into closed curves."""
    arcs = []
    for a, f in T.boundary_faces:
        for c in face_vertices(f):
            for s in range(pieces.arc_total(a, f, c)):
                arcs.append((a, f, c, s))
    if not arcs:
        return []
    index = {arc: k for k, arc in enumerate(arcs)}
    uf = UnionFind(len(arcs))
    point_owner: dict[tuple[int, int], int] = {}
    for k, (a, f, c, s) in enumerate(arcs):
        for x in face_vertices(f):
            if x == c:
                continue
            e = EDGE_INDEX[(c, x)]
            w = pieces.edge_weight(a, e)
            lo = s if c < x else w - 1 - s
            cls = T.edge_class(a, e)
            pos = lo if T.edge_sign(a, e) > 0 else w - 1 - lo
            key = (cls, pos)
            if key in point_owner:
                uf.union(k, point_owner[key])
            else:
                point_owner[key] = k
    del index
    curves = []
    for members in uf.classes():
        first = arcs[members[0]]
        bid = T.component_of_face(first[0], first[1])
        comp = T.boundary[bid]
        counts: dict[tuple[int, int, int], int] = {}
        for k in members:
            a, f, c, _ = arcs[k]
            counts[(a, f, c)] = counts.get((a, f, c), 0) + 1
        z = None
        if comp.one_vertex_torus:
            a0, f0 = comp.triangles[0]
            zz = [0, 0, 0]
            for c in face_vertices(f0):
                x, y = (u for u in face_vertices(f0) if u != c)
                cls = T.edge_class(a0, EDGE_INDEX[(x, y)])
                zz[comp.edges.index(cls)] += counts.get((a0, f0, c), 0)
            z = tuple(zz)
        trivial = _is_vertex_linking_curve(counts, T, comp) or comp.euler_characteristic == 2
        owner = comp_of[pieces.arc_piece(*arcs[members[0]])]
        curves.append(
            BoundaryCurve(
                boundary_id=bid,
                component=owner,
                length=len(members),
                arcs=tuple(sorted(counts.items())),
                z=z,
                trivial=trivial,
            )
        )
    curves.sort(key=lambda c: (c.boundary_id, c.arcs))
    return curves


def _is_vertex_linking_curve(counts, T: Triangulation, comp) -> bool:
    for cls in comp.vertices:
        link = {}
        for a, f in comp.triangles:
            for c in face_vertices(f):
                if T.vertex_class(a, c) == cls:
                    link[(a, f, c)] = link.get((a, f, c), 0) + 1
        if link == {k: v for k, v in counts.items() if v}:
            return True
    return False


def classify(sg: SurfaceGeometry) -> Classification:
    if len(sg.components) != 1:
        return Classification(False, False, False, False, False, None, None, len(sg.components) == 1)
    c = sg.components[0]
    b = c.boundary_count
    return Classification(
        is_sphere=c.euler == 2 and b == 0,
        is_disk=c.euler == 1 and b == 1,
        is_annulus_or_mobius=c.euler == 0 and b >= 1,
        is_planar=c.orientable and c.genus == 0,
        is_torus_or_klein=c.euler == 0 and b == 0,
        genus=c.genus,
        crosscaps=c.crosscaps,
        connected=True,
    )


def classify_component(c: Component) -> Classification:
    b = c.boundary_count
    return Classification(
        is_sphere=c.euler == 2 and b == 0,
        is_disk=c.euler == 1 and b == 1,
        is_annulus_or_mobius=c.euler == 0 and b >= 1,
        is_planar=c.orientable and c.genus == 0,
        is_torus_or_klein=c.euler == 0 and b == 0,
        genus=c.genus,
        crosscaps=c.crosscaps,
        connected=True,
    )


def boundary_curves(sg: SurfaceGeometry) -> dict[int, list[BoundaryCurve]]:
    return sg.boundary_curves
