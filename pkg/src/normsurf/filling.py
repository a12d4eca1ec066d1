"""Layered solid tori, triangulated Dehn fillings and drillings."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Callable, Optional, Sequence

from .coords import NormalVector, arc_count, edge_weights, is_admissible, quads_ok
from .enumeration import ConeBasis, decompose_over, enumerate_fundamental_solutions
from .geometry import reconstruct
from .slopes import BoundaryFrame, Slope, boundary_frame, slope_of_multicurve
from .triangulation import (
    EDGE_INDEX,
    EDGES,
    NotOneVertexTorus,
    Triangulation,
    TriangulationError,
    face_vertices,
    layer_on_edge,
    mobius_layering,
    perm_inverse,
)


class NotMeridional(ValueError):
    code = "NotMeridional"


class NotCapped(ValueError):
    code = "NotCapped"


class DecompositionBudgetExceeded(RuntimeError):
    code = "DecompositionBudgetExceeded"


# ----------------------------------------------------------------------
# layered solid tori


@dataclass(frozen=True)
class LayeredSolidTorus:
    triangulation: Triangulation
    layers: tuple[int, ...]
    weights: tuple[int, int, int]
    base: str
    disk: NormalVector

    @property
    def tet_count(self) -> int:
        return self.triangulation.tet_count

    @property
    def meridian(self) -> Slope:
        return boundary_frame(self.triangulation, 0).from_weights(self.weights)

    def to_json(self) -> dict:
        return {
            "tets": self.tet_count,
            "layers": list(self.layers),
            "weights": list(self.weights),
            "base": self.base,
            "meridian_disk": list(self.disk),
            "triangulation": self.triangulation.to_json(),
        }


@lru_cache(maxsize=1)
def _one_tet_disk() -> NormalVector:
    T = mobius_layering("interior")
    for v in enumerate_fundamental_solutions(T).fundamentals:
        sg = reconstruct(v, T)
        if len(sg.components) == 1 and sg.components[0].euler == 1 and not sg.curves[0].trivial:
            return v
    raise AssertionError("one-tetrahedron solid torus has no meridian disk")


def _path_to(target: tuple[int, int, int]) -> list[tuple[int, int, int]]:
    """Sorted weight triples from (1,2,3) to ``target``, one flip apart."""
    t = tuple(sorted(target))
    if t == (1, 2, 3):
        return [t]
    if t == (1, 1, 2):
        return [(1, 2, 3), t]
    if t == (0, 1, 1):
        return [(1, 2, 3), (1, 1, 2), t]
    a, b, c = t
    if a <= 0 or a + b != c:
        raise ValueError(f"{target} is not the edge-weight triple of a slope")
    chain = [t]
    while chain[-1] != (1, 2, 3):
        a, b, c = chain[-1]
        nxt = tuple(sorted((a, b - a, b)))
        if nxt[0] <= 0:
            raise ValueError(f"{target} is not the edge-weight triple of a slope")
        chain.append(nxt)
    return chain[::-1]


def _extend_disk(
    L2: Triangulation, disk: NormalVector, new_weight: int
) -> NormalVector:
    """Meridian disk of a solid torus after layering one tetrahedron.

    The new tetrahedron (last index) has face 3 and face 2 glued to the old
    boundary; its pieces are pinned down by the old arcs on those faces and
    by the flip formula for the new edge.
    """
    n = L2.tet_count - 1
    a, f, p3 = L2.gluings[n][3]
    b, g, p2 = L2.gluings[n][2]
    c0, c1, c2 = (arc_count(disk, a, f, p3[v]) for v in (0, 1, 2))
    d0, d1, d3 = (arc_count(disk, b, g, p2[v]) for v in (0, 1, 3))
    top = max(c0, c1, c2, d0, d1, d3)
    found = []
    for k in range(3):
        for m in range(0, top + 1):
            q = [0, 0, 0]
            q[k] = m
            t0 = c0 - q[2]
            t1 = c1 - q[1]
            t2 = c2 - q[0]
            t3 = d3 - q[0]
            if min(t0, t1, t2, t3) < 0:
                continue
            if t0 + q[1] != d0 or t1 + q[2] != d1:
                continue
            if t2 + t3 + q[1] + q[2] != new_weight:
                continue
            found.append(disk + (t0, t1, t2, t3, q[0], q[1], q[2]))
            if m == 0:
                break
    for vec in found:
        sg = reconstruct(vec, L2, check=False)
        if len(sg.components) == 1 and sg.components[0].euler == 1 and sg.components[0].boundary_count == 1:
            return vec
    raise AssertionError("could not extend the meridian disk across the new layer")


@lru_cache(maxsize=256)
def _build_lst_cached(target: tuple[int, int, int]) -> LayeredSolidTorus:
    path = _path_to(target)
    L = mobius_layering("interior")
    disk = _one_tet_disk()
    layers = []
    for nxt in path[1:]:
        w = edge_weights(disk, L)
        comp = L.boundary[0]
        bw = {e: w[e] for e in comp.edges}
        choice = None
        for e in comp.edges:
            a, b = (bw[x] for x in comp.edges if x != e)
            new = (a + b) + abs(a - b) - bw[e]
            if tuple(sorted((a, b, new))) == nxt:
                choice = (e, new)
                break
        if choice is None:
            raise AssertionError(f"no flip leads from {sorted(bw.values())} to {nxt}")
        e, new = choice
        L = layer_on_edge(L, e)
        disk = _extend_disk(L, disk, new)
        layers.append(e)
    comp = L.boundary[0]
    w = edge_weights(disk, L)
    weights = tuple(w[e] for e in comp.edges)
    return LayeredSolidTorus(L, tuple(layers), weights, "one-tet fold", disk)


def build_lst(meridian) -> LayeredSolidTorus:
    """Minimal layered solid torus whose meridian meets the three boundary
    edges in the given numbers (a weight triple, or a Slope whose weights
    are used)."""
    if isinstance(meridian, Slope):
        target = meridian.weights
    else:
        target = tuple(int(x) for x in meridian)
    return _build_lst_cached(tuple(sorted(target)))


def descent_length(weights: Sequence[int]) -> int:
    return len(_path_to(tuple(sorted(weights)))) - 1


# ----------------------------------------------------------------------
# gluing a solid torus onto a boundary torus


def _boundary_face_perms(src_face: int, dst_face: int):
    sv = face_vertices(src_face)
    for img in permutations(face_vertices(dst_face)):
        p = [0, 0, 0, 0]
        p[src_face] = dst_face
        for x, y in zip(sv, img):
            p[x] = y
        yield tuple(p)


def _glue_two_faces(
    rows: list[list],
    src: Sequence[tuple[int, int]],
    dst: Sequence[tuple[int, int]],
    check: Callable[[Triangulation], bool],
) -> Optional[Triangulation]:
    """Try all ways of gluing two boundary faces ``src`` onto ``dst`` (in
    either pairing); return the first triangulation accepted by ``check``."""
    for order in (dst, dst[::-1]):
        for p0 in _boundary_face_perms(src[0][1], order[0][1]):
            for p1 in _boundary_face_perms(src[1][1], order[1][1]):
                trial = [list(r) for r in rows]
                ok = True
                for (sa, sf), (da, df), p in ((src[0], order[0], p0), (src[1], order[1], p1)):
                    if trial[sa][sf] is not None or trial[da][df] is not None:
                        ok = False
                        break
                    trial[sa][sf] = (da, df, p)
                    trial[da][df] = (sa, sf, perm_inverse(p))
                if not ok:
                    continue
                try:
                    T = Triangulation(trial)
                except TriangulationError:
                    continue
                if T.valid_edges and check(T):
                    return T
    return None


@dataclass(frozen=True)
class FillingRecord:
    boundary_id: int
    slope: Slope
    lst: LayeredSolidTorus
    start: int

    @property
    def stop(self) -> int:
        return self.start + self.lst.tet_count

    def to_json(self) -> dict:
        return {
            "boundary": f"B{self.boundary_id}",
            "slope": str(self.slope),
            "lst_tets": self.lst.tet_count,
            "tet_range": [self.start, self.stop],
        }


@dataclass(frozen=True)
class FilledManifold:
    triangulation: Triangulation
    base: Triangulation
    fillings: tuple[FillingRecord, ...]
    boundary_map: tuple[int, ...]  # filled boundary id -> base boundary id

    @property
    def base_tets(self) -> int:
        return self.base.tet_count

    def to_json(self) -> dict:
        return {
            "base": self.base.digest(),
            "fillings": [f.to_json() for f in self.fillings],
            "boundary_map": [f"B{k}" for k in self.boundary_map],
            "triangulation": self.triangulation.to_json(),
        }


def _base_boundary_of(F: Triangulation, base: Triangulation) -> tuple[int, ...]:
    out = []
    for comp in F.boundary:
        a, f = comp.triangles[0]
        out.append(base.component_of_face(a, f))
    return tuple(out)


def dehn_fill(M, boundary_id: int, alpha: Slope) -> FilledManifold:
    """Glue the minimal layered solid torus onto boundary ``boundary_id`` so
    that its meridian disk has boundary slope ``alpha``.

    ``M`` is a Triangulation or a FilledManifold; boundary ids always refer
    to the original base triangulation.
    """
    if isinstance(M, FilledManifold):
        base, current, records, bmap = M.base, M.triangulation, list(M.fillings), M.boundary_map
    else:
        base, current, records = M, M, []
        bmap = tuple(range(len(M.boundary)))
    if boundary_id not in bmap:
        raise NotOneVertexTorus(f"B{boundary_id} is not an unfilled boundary component")
    local = bmap.index(boundary_id)
    frame = boundary_frame(current, local)
    alpha_here = frame.slope(alpha.p, alpha.q) if alpha.boundary_id != local else alpha
    target = alpha_here.weights
    lst = build_lst(target)
    t = current.tet_count
    comp = current.boundary[local]
    rows = [list(r) for r in current.gluings]
    for row in lst.triangulation.gluings:
        rows.append([None if g is None else (g[0] + t, g[1], g[2]) for g in row])
    lcomp = lst.triangulation.boundary[0]
    src = [(a + t, f) for a, f in lcomp.triangles]
    dst = list(comp.triangles)
    lst_w = {e: w for e, w in zip(lcomp.edges, lst.weights)}
    expected_edges = len(current.edge_classes) + len(lst.triangulation.edge_classes) - 3

    def accept(T: Triangulation) -> bool:
        if len(T.boundary) != len(current.boundary) - 1:
            return False
        if len(T.vertex_classes) != len(current.vertex_classes):
            return False
        if len(T.edge_classes) != expected_edges:
            return False
        if current.orientable and not T.orientable:
            return False
        for k, cls in enumerate(comp.edges):
            a, e = current.edge_classes[cls][0]
            fcls = T.edge_class(a, e)
            weight = None
            for le in lcomp.edges:
                la, lee = lst.triangulation.edge_classes[le][0]
                if T.edge_class(la + t, lee) == fcls:
                    weight = lst_w[le]
            if weight != target[k]:
                return False
        return True

    F = _glue_two_faces(rows, src, dst, accept)
    if F is None:
        raise AssertionError("no boundary identification realises the slope")
    new_bmap = tuple(bmap[c] for c in _base_boundary_of(F, current))
    rec = FillingRecord(boundary_id, alpha_here, lst, t)
    return FilledManifold(F, base, tuple(records + [rec]), new_bmap)


def lst_disk_in(filled: FilledManifold, rec: FillingRecord) -> NormalVector:
    out = [0] * (7 * filled.triangulation.tet_count)
    out[7 * rec.start: 7 * rec.stop] = rec.lst.disk
    return tuple(out)


def cap_off(v: Sequence[int], filled: FilledManifold) -> NormalVector:
    """Extend a surface of the base by meridian disks in every filling."""
    base = filled.base
    v = tuple(v)
    if len(v) != 7 * base.tet_count:
        raise ValueError("vector length does not match the base triangulation")
    sg = reconstruct(v, base)
    out = list(v) + [0] * (7 * (filled.triangulation.tet_count - base.tet_count))
    for rec in filled.fillings:
        count = 0
        for curve in sg.curves:
            if curve.boundary_id != rec.boundary_id:
                continue
            if curve.trivial:
                raise NotMeridional(f"trivial curve on B{rec.boundary_id}")
            frame = boundary_frame(base, rec.boundary_id)
            slope, copies, triv = slope_of_multicurve(curve.z, frame)
            if triv or slope != rec.slope:
                raise NotMeridional(f"curve of slope {slope} on B{rec.boundary_id}, filling slope {rec.slope}")
            count += copies
        for k, x in enumerate(rec.lst.disk):
            out[7 * rec.start + k] += count * x
    return tuple(out)


def restrict(w: Sequence[int], filled: FilledManifold) -> tuple[NormalVector, list[int]]:
    """Inverse of cap_off on capped vectors; raises NotCapped otherwise."""
    w = tuple(w)
    caps = []
    for rec in filled.fillings:
        part = w[7 * rec.start: 7 * rec.stop]
        disk = rec.lst.disk
        k = None
        for x, y in zip(part, disk):
            if y:
                if x % y:
                    raise NotCapped("filling part is not a multiple of the meridian disk")
                if k is None:
                    k = x // y
                elif k != x // y:
                    raise NotCapped("filling part is not a multiple of the meridian disk")
            elif x:
                raise NotCapped("filling part meets pieces outside the meridian disk")
        caps.append(k or 0)
    return w[: 7 * filled.base_tets], caps


def rewrite_decomposition(
    P: Sequence[int],
    filled: FilledManifold,
    basis: Optional[ConeBasis] = None,
    max_nodes: int = 1_000_000,
) -> list[tuple[NormalVector, int]]:
    from .enumeration import ResourceBudgetExceeded

    W = cap_off(P, filled)
    basis = basis or enumerate_fundamental_solutions(filled.triangulation)
    try:
        terms = decompose_over(W, basis, max_nodes=max_nodes)
    except ResourceBudgetExceeded as exc:
        raise DecompositionBudgetExceeded(str(exc)) from exc
    out = []
    for vec, mult in terms:
        g, _ = restrict(vec, filled)
        out.append((g, mult))
    total = [0] * len(P)
    for g, mult in out:
        for i, x in enumerate(g):
            total[i] += mult * x
    if tuple(total) != tuple(P):
        raise AssertionError("re-written summands do not add up to the surface")
    return out


# ----------------------------------------------------------------------
# drilling


V1, V2, U1, U2, U3 = "v1", "v2", "u1", "u2", "u3"
PENTAGON = (V1, V2, U1, U2, U3)
PENTAGON_TRIANGLES = ((U1, U2, U3), (U1, U3, V1), (U1, V1, V2))
X_MAP = {V2: V1, U1: U3}


def _prism_tets(corners: Sequence[str], order: dict) -> list[tuple]:
    p, q, r = sorted(corners, key=order.get)
    return [
        ((p, 0), (q, 0), (r, 0), (r, 1)),
        ((p, 0), (q, 0), (q, 1), (r, 1)),
        ((p, 0), (p, 1), (q, 1), (r, 1)),
    ]


def drilling_block(order: Sequence[str] = PENTAGON) -> tuple[Triangulation, list[tuple]]:
    """The nine-tetrahedron block: the pentagon with its two x edges
    identified, times a circle, each triangle-prism cut into three
    tetrahedra.  Returns the triangulation and each tetrahedron's points
    (corner, level)."""
    rank_of = {c: k for k, c in enumerate(order)}
    tets: list[tuple] = []
    prism_of = []
    for k, tri in enumerate(PENTAGON_TRIANGLES):
        for tet in _prism_tets(tri, rank_of):
            tets.append(tet)
            prism_of.append(k)
    faces = {}
    for a, pts in enumerate(tets):
        for f in range(4):
            faces[(a, f)] = frozenset(pts[i] for i in range(4) if i != f)

    def maps(points: frozenset):
        corners = {c for c, _ in points}
        levels = {l for _, l in points}
        yield lambda x: x
        if levels == {1}:
            yield lambda x: (x[0], 0)
        if levels == {0}:
            yield lambda x: (x[0], 1)
        if corners <= {V2, U1}:
            yield lambda x: (X_MAP[x[0]], x[1])
        if corners <= {V1, U3}:
            inv = {v: k for k, v in X_MAP.items()}
            yield lambda x: (inv[x[0]], x[1])

    rows: list[list] = [[None] * 4 for _ in tets]
    for (a, f), pts in sorted(faces.items()):
        if rows[a][f] is not None:
            continue
        for phi in maps(pts):
            img = frozenset(phi(x) for x in pts)
            partner = None
            for (b, g), other in sorted(faces.items()):
                if (b, g) != (a, f) and other == img and rows[b][g] is None:
                    if phi(next(iter(pts))) == next(iter(pts)) or True:
                        partner = (b, g)
                        break
            if partner is None:
                continue
            if img == pts and partner[0] == a:
                continue
            b, g = partner
            perm = [0, 0, 0, 0]
            perm[f] = g
            for i in range(4):
                if i == f:
                    continue
                perm[i] = tets[b].index(phi(tets[a][i]))
            perm = tuple(perm)
            rows[a][f] = (b, g, perm)
            rows[b][g] = (a, f, perm_inverse(perm))
            break
    return Triangulation(rows), tets


@dataclass(frozen=True)
class DrilledManifold:
    triangulation: Triangulation
    base: Triangulation
    layers: int
    block_start: int
    boundary: int  # the new copy of B
    drilled_boundary: int  # B^mu
    mu: Slope  # on the new copy of B
    longitude: Slope  # on the new copy of B, distance one from mu
    mu_star: Slope  # meridian of the drilled tube, on B^mu
    lambda_star: Slope  # on B^mu, parallel to mu through the annulus

    def to_json(self) -> dict:
        return {
            "tets": self.triangulation.tet_count,
            "layers": self.layers,
            "block_tets": [self.block_start, self.block_start + 9],
            "B": f"B{self.boundary}",
            "B_mu": f"B{self.drilled_boundary}",
            "mu": str(self.mu),
            "longitude": str(self.longitude),
            "mu_star": str(self.mu_star),
            "lambda_star": str(self.lambda_star),
            "triangulation": self.triangulation.to_json(),
        }


def _edge_slope_on(T: Triangulation, bid: int, cls: int) -> Slope:
    frame = boundary_frame(T, bid)
    return frame.edge_slope(T.boundary[bid].edges.index(cls))


def layer_to_edge(M: Triangulation, boundary_id: int, mu: Slope) -> tuple[Triangulation, int, int, int]:
    """Layer on B until one of its edges has slope mu.  Returns the new
    triangulation, the number of layers, the boundary id and that edge."""
    frame = boundary_frame(M, boundary_id)
    mu = frame.slope(mu.p, mu.q)
    comp = M.boundary[boundary_id]
    w = dict(zip(comp.edges, mu.weights))
    T = M
    bid = boundary_id
    layers = 0
    while min(w.values()) != 0:
        e = max(w, key=lambda x: (w[x], -x))
        a, b = (w[x] for x in w if x != e)
        new_w = (a + b) + abs(a - b) - w[e]
        T = layer_on_edge(T, e)
        layers += 1
        n = T.tet_count - 1
        bid = T.component_of_face(n, 0)
        new_cls = T.edge_class(n, EDGE_INDEX[(2, 3)])
        del w[e]
        w[new_cls] = new_w
        if set(w) != set(T.boundary[bid].edges):
            raise AssertionError("boundary edge bookkeeping lost track")
    e_mu = min(x for x in w if w[x] == 0)
    return T, layers, bid, e_mu


def dehn_drill(M: Triangulation, boundary_id: int, mu: Slope) -> DrilledManifold:
    if not M.boundary[boundary_id].one_vertex_torus:
        raise NotOneVertexTorus(f"B{boundary_id} is not a one-vertex torus")
    T, layers, bid, e_mu = layer_to_edge(M, boundary_id, mu)
    comp = T.boundary[bid]
    t = T.tet_count
    for order in permutations(PENTAGON):
        rank_of = {c: k for k, c in enumerate(order)}
        if (rank_of[V2] < rank_of[U1]) != (rank_of[V1] < rank_of[U3]):
            continue
        block, pts = drilling_block(order)
        if len(block.boundary_faces) != 6 or not block.valid_edges:
            continue
        bprime = [(a, f) for a, f in block.boundary_faces if {c for c, _ in (pts[a][i] for i in range(4) if i != f)} == {U2, U3}]
        if len(bprime) != 2:
            continue
        vert_u = [
            (a, EDGE_INDEX[(i, j)])
            for a in range(9)
            for i in range(4)
            for j in range(i + 1, 4)
            if pts[a][i][0] == pts[a][j][0] and pts[a][i][0] in (U1, U2, U3)
        ]
        rows = [list(r) for r in T.gluings]
        for row in block.gluings:
            rows.append([None if g is None else (g[0] + t, g[1], g[2]) for g in row])
        src = [(a + t, f) for a, f in bprime]
        dst = list(comp.triangles)
        a0, e0 = T.edge_classes[e_mu][0]

        def accept(R: Triangulation) -> bool:
            if len(R.boundary) != len(T.boundary) + 1:
                return False
            if len(R.vertex_classes) != len(T.vertex_classes) + 1:
                return False
            if T.orientable and not R.orientable:
                return False
            if T.is_manifold and not R.is_manifold:
                return False
            if not all(c.one_vertex_torus for c in R.boundary if c.id not in _old_ids(R, T, bid)):
                return False
            target = R.edge_class(a0, e0)
            return all(R.edge_class(a + t, e) == target for a, e in vert_u)

        R = _glue_two_faces(rows, src, dst, accept)
        if R is None:
            continue
        return _drilled_record(M, R, T, layers, t, pts, bid)
    raise AssertionError("no diagonal choice of the drilling block fits the boundary")


def _old_ids(R: Triangulation, T: Triangulation, bid: int) -> set[int]:
    out = set()
    for comp in T.boundary:
        if comp.id == bid:
            continue
        a, f = comp.triangles[0]
        out.add(R.component_of_face(a, f))
    return out


def _drilled_record(M, R: Triangulation, T: Triangulation, layers: int, t: int, pts, bid: int) -> DrilledManifold:
    def face_corners(a, f):
        return {c for c, _ in (pts[a][i] for i in range(4) if i != f)}

    b_face = c_face = None
    for a in range(9):
        for f in range(4):
            if R.gluings[a + t][f] is None:
                cs = face_corners(a, f)
                if cs == {U1, U2} and b_face is None:
                    b_face = (a, f)
                if cs == {V1, V2} and c_face is None:
                    c_face = (a, f)
    new_b = R.component_of_face(b_face[0] + t, b_face[1])
    b_mu = R.component_of_face(c_face[0] + t, c_face[1])

    def find_edge(pred) -> tuple[int, int]:
        for a in range(9):
            for i in range(4):
                for j in range(i + 1, 4):
                    if pred(pts[a][i], pts[a][j]):
                        return a + t, EDGE_INDEX[(i, j)]
        raise AssertionError("edge not found in block")

    u_vert = find_edge(lambda x, y: x[0] == y[0] == U1)
    b_edge = find_edge(lambda x, y: {x[0], y[0]} == {U1, U2} and x[1] == y[1])
    c_edge = find_edge(lambda x, y: {x[0], y[0]} == {V1, V2} and x[1] == y[1])
    v_vert = find_edge(lambda x, y: x[0] == y[0] == V1)
    mu_new = _edge_slope_on(R, new_b, R.edge_class(*u_vert))
    lam_new = _edge_slope_on(R, new_b, R.edge_class(*b_edge))
    mu_star = _edge_slope_on(R, b_mu, R.edge_class(*c_edge))
    lam_star = _edge_slope_on(R, b_mu, R.edge_class(*v_vert))
    return DrilledManifold(R, M, layers, t, new_b, b_mu, mu_new, lam_new, mu_star, lam_star)
