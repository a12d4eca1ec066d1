"""Vertex and fundamental solutions of the normal surface solution cone.

Vertex solutions come from a double description run over the matching
equations in which rays whose support breaks the quadrilateral condition are
discarded as soon as they appear.  Two rays are combined only when they span
a 2-face of the current cone; for admissible supports this combinatorial
test is exact because every ray supported inside an admissible support is
itself admissible and so never filtered.

Fundamental solutions are computed face by face.  Pairwise compatible vertex
solutions share one quad type per tetrahedron, so the maximal cliques of the
compatibility graph are exactly the maximal admissible faces of the cone.
Each such face is split by a pulling triangulation into simplicial cones and
the lattice points of every half-open fundamental parallelepiped are listed;
the coordinatewise minimal points among all of these form the Hilbert basis
of the face.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx

from . import kernels
from .coords import (
    MatchingSystem,
    NormalVector,
    mask_admissible,
    matching_system,
    quad_masks,
    quads_ok,
    support_mask,
)
from .lattice import LatticeCoordinates, coordinates_in_basis, determinant, integer_kernel, inverse, primitive, rank
from .triangulation import Triangulation


class ResourceBudgetExceeded(RuntimeError):
    """Raised when an enumeration exceeds its configured caps.

    ``partial`` holds whatever was computed (possibly empty) and
    ``unexplored`` lists the work items that were not finished.
    """

    code = "ResourceBudgetExceeded"

    def __init__(self, message: str, partial=None, unexplored=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []
        self.unexplored = unexplored if unexplored is not None else []


class Unrepresentable(ValueError):
    code = "Unrepresentable"


@dataclass
class EnumerationBudget:
    max_rays: int = 200_000
    max_parallelepiped: int = 2_000_000
    max_seconds: Optional[float] = None

    def deadline(self) -> Optional[float]:
        return None if self.max_seconds is None else time.monotonic() + self.max_seconds


@dataclass
class ConeBasis:
    fundamentals: list[NormalVector]
    vertex_flags: list[bool]
    admissible_flags: list[bool]
    constraint: object = None
    digest: str = ""
    mode: str = "admissible"
    stats: dict = field(default_factory=dict)

    @property
    def vertices(self) -> list[NormalVector]:
        return [v for v, f in zip(self.fundamentals, self.vertex_flags) if f]

    @property
    def admissible(self) -> list[NormalVector]:
        return [v for v, f in zip(self.fundamentals, self.admissible_flags) if f]

    def __len__(self) -> int:
        return len(self.fundamentals)

    def to_json(self) -> dict:
        out = {
            "triangulation": self.digest,
            "mode": self.mode,
            "fundamentals": [list(v) for v in self.fundamentals],
            "vertex": list(self.vertex_flags),
            "admissible": list(self.admissible_flags),
        }
        if self.constraint is not None:
            out["constraint"] = self.constraint.to_json()
        return out


# ----------------------------------------------------------------------
# double description


def _forced_zero_columns(rows: Sequence[Sequence[int]], n: int) -> set[int]:
    """Columns forced to vanish on the nonnegative orthant: any row whose
    surviving coefficients all share a sign kills its support."""
    dead: set[int] = set()
    changed = True
    while changed:
        changed = False
        for row in rows:
            cols = [c for c in range(n) if row[c] and c not in dead]
            if not cols:
                continue
            if all(row[c] > 0 for c in cols) or all(row[c] < 0 for c in cols):
                dead.update(cols)
                changed = True
    return dead


def _order_rows(rows: list[tuple[int, ...]], live: set[int]) -> list[tuple[int, ...]]:
    """Greedy ordering: next take the row sharing most columns with the
    rows already chosen, so early cones stay in few coordinates."""
    remaining = list(rows)
    seen: set[int] = set()
    ordered = []
    while remaining:
        best = max(
            range(len(remaining)),
            key=lambda k: (
                sum(1 for c, x in enumerate(remaining[k]) if x and c in seen),
                -sum(1 for c, x in enumerate(remaining[k]) if x and c in live and c not in seen),
                -k,
            ),
        )
        row = remaining.pop(best)
        ordered.append(row)
        seen.update(c for c, x in enumerate(row) if x)
    return ordered


def extreme_rays(
    rows: Sequence[Sequence[int]],
    n: int,
    qmasks=None,
    budget: Optional[EnumerationBudget] = None,
) -> list[NormalVector]:
    """Extreme rays of {x >= 0 : A x = 0}, as primitive integer vectors.

    With ``qmasks`` only rays with admissible support are produced (and only
    those are ever combined).
    """
    budget = budget or EnumerationBudget()
    deadline = budget.deadline()
    dead = _forced_zero_columns(rows, n)
    live = [c for c in range(n) if c not in dead]
    work = []
    for row in rows:
        r = tuple(0 if c in dead else x for c, x in enumerate(row))
        if any(r):
            work.append(r)
    work = _order_rows(list(dict.fromkeys(work)), set(live))

    rays: list[tuple[int, ...]] = []
    for c in live:
        e = [0] * n
        e[c] = 1
        rays.append(tuple(e))
    masks = [1 << c for c in live]
    done: list[tuple[int, ...]] = []
    current_rank = 0
    for row in work:
        nz = [(c, x) for c, x in enumerate(row) if x]
        vals = [sum(x * r[c] for c, x in nz) for r in rays]
        pos = [k for k, s in enumerate(vals) if s > 0]
        neg = [k for k, s in enumerate(vals) if s < 0]
        keep = [k for k, s in enumerate(vals) if s == 0]
        pairs = kernels.dd_pairs(
            [masks[k] for k in pos],
            [masks[k] for k in neg],
            masks,
            n,
            current_rank + 2,
            qmasks,
        )
        new_rays = [rays[k] for k in keep]
        new_masks = [masks[k] for k in keep]
        for i, j in pairs:
            p, q = rays[pos[i]], rays[neg[j]]
            sp, sq = vals[pos[i]], vals[neg[j]]
            r = primitive(tuple(sp * b - sq * a for a, b in zip(p, q)))
            new_rays.append(r)
            new_masks.append(masks[pos[i]] | masks[neg[j]])
        rays, masks = new_rays, new_masks
        if len(rays) > budget.max_rays:
            raise ResourceBudgetExceeded(
                f"double description exceeded {budget.max_rays} rays", partial=[], unexplored=["double description"]
            )
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceBudgetExceeded("time budget exhausted during double description")
        done.append(row)
        current_rank = rank(done)
    return sorted(set(rays))


# ----------------------------------------------------------------------
# Hilbert bases of faces


class _FaceHilbert:
    """Hilbert basis of the cone spanned by ``rays`` inside {E x = 0, x >= 0}."""

    def __init__(self, rays: Sequence[NormalVector], rows, n: int, budget: EnumerationBudget):
        self.rays = sorted(rays)
        self.n = n
        self.budget = budget
        support = 0
        for r in self.rays:
            support |= support_mask(r)
        self.cols = [c for c in range(n) if support >> c & 1]
        self.dim = rank([[r[c] for c in self.cols] for r in self.rays])
        sub = [[row[c] for c in self.cols] for row in rows]
        sub = [r for r in sub if any(r)]
        self.lattice = integer_kernel(sub, len(self.cols)) if sub else [
            [int(i == j) for j in range(len(self.cols))] for i in range(len(self.cols))
        ]
        if len(self.lattice) != self.dim:
            raise AssertionError("face is not full-dimensional in its lattice")
        self._rank_cache: dict[tuple[int, ...], int] = {}
        self._tri_cache: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        coords = LatticeCoordinates(self.lattice)
        self._coords = [coords([r[c] for c in self.cols]) for r in self.rays]

    def _rank(self, idx: tuple[int, ...]) -> int:
        if idx not in self._rank_cache:
            self._rank_cache[idx] = rank([self._coords[i] for i in idx])
        return self._rank_cache[idx]

    def triangulate(self, idx: tuple[int, ...], dim: int) -> list[tuple[int, ...]]:
        """Pulling triangulation; the apex is always the first ray of the
        face so triangulations of shared faces agree."""
        if len(idx) == dim:
            return [idx]
        key = idx
        if key in self._tri_cache:
            return self._tri_cache[key]
        apex = idx[0]
        facets = set()
        for c in range(self.n):
            if self.rays[apex][c] <= 0:
                continue
            g = tuple(i for i in idx if self.rays[i][c] == 0)
            if len(g) >= dim - 1 and g not in facets and self._rank(g) == dim - 1:
                facets.add(g)
        out = []
        for g in sorted(facets):
            for s in self.triangulate(g, dim - 1):
                out.append((apex,) + s)
        self._tri_cache[key] = out
        return out

    def parallelepiped(self, simplex: tuple[int, ...]) -> list[NormalVector]:
        """Nonzero lattice points of the half-open parallelepiped spanned by
        the simplex rays."""
        d = self.dim
        cmat = [[self._coords[i][k] for i in simplex] for k in range(d)]
        det = abs(determinant(cmat))
        if det == 1:
            return []
        if det > self.budget.max_parallelepiped:
            raise ResourceBudgetExceeded(f"simplicial cone of volume {det} exceeds the budget")
        inv = inverse(cmat)
        gens = []
        for j in range(d):
            g = tuple(int(inv[i][j] * det) % det for i in range(d))
            if any(g):
                gens.append(g)
        seen = {tuple([0] * d)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tuple((a + b) % det for a, b in zip(x, g))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        pts = []
        rays = [self.rays[i] for i in simplex]
        for lam in seen:
            if not any(lam):
                continue
            vec = [0] * self.n
            for coef, r in zip(lam, rays):
                if coef:
                    for c in self.cols:
                        vec[c] += coef * r[c]
            pts.append(tuple(v // det for v in vec))
        return pts

    def hilbert_basis(self) -> list[NormalVector]:
        if self.dim == 0:
            return []
        cands = set(self.rays)
        for s in self.triangulate(tuple(range(len(self.rays))), self.dim):
            cands.update(self.parallelepiped(s))
        cands_list = sorted(cands)
        keep = kernels.minimal_elements(cands_list)
        return [cands_list[k] for k in keep]


def maximal_compatible_sets(vertices: Sequence[NormalVector], qmasks) -> list[tuple[int, ...]]:
    masks = [support_mask(v) for v in vertices]
    g = nx.Graph()
    g.add_nodes_from(range(len(vertices)))
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if mask_admissible(masks[i] | masks[j], qmasks):
                g.add_edge(i, j)
    return sorted(tuple(sorted(c)) for c in nx.find_cliques(g))


# ----------------------------------------------------------------------
# public API


def _system_rows(T: Triangulation, constraint) -> tuple[list[tuple[int, ...]], MatchingSystem]:
    system = matching_system(T)
    if constraint is not None:
        system = constraint.system(T)
    return list(system.rows), system


def enumerate_vertex_solutions(
    T: Triangulation, constraint=None, budget: Optional[EnumerationBudget] = None
) -> ConeBasis:
    rows, _ = _system_rows(T, constraint)
    n = 7 * T.tet_count
    verts = extreme_rays(rows, n, quad_masks(T.tet_count), budget)
    return ConeBasis(verts, [True] * len(verts), [True] * len(verts), constraint, T.digest(), "vertex")


def enumerate_fundamental_solutions(
    T: Triangulation,
    constraint=None,
    budget: Optional[EnumerationBudget] = None,
    full: bool = False,
    jobs: int = 1,
) -> ConeBasis:
    """Fundamental solutions of the (possibly slope-constrained) cone.

    By default only admissible fundamentals are produced, one Hilbert basis
    per maximal admissible face.  With ``full=True`` the Hilbert basis of the
    whole cone is computed and admissibility is recorded per element.
    """
    budget = budget or EnumerationBudget()
    rows, _ = _system_rows(T, constraint)
    n = 7 * T.tet_count
    qm = quad_masks(T.tet_count)
    if full:
        rays = extreme_rays(rows, n, None, budget)
        hb = _FaceHilbert(rays, rows, n, budget).hilbert_basis() if rays else []
        vset = set(rays)
        fund = sorted(hb)
        return ConeBasis(
            fund,
            [v in vset for v in fund],
            [quads_ok(v) for v in fund],
            constraint,
            T.digest(),
            "full",
            {"extreme_rays": len(rays)},
        )

    verts = extreme_rays(rows, n, qm, budget)
    faces = maximal_compatible_sets(verts, qm)
    out: set[NormalVector] = set(verts)
    jobs_list = [[verts[i] for i in face] for face in faces]

    def run(face_rays):
        return _FaceHilbert(face_rays, rows, n, budget).hilbert_basis()

    results: list[list[NormalVector]] = []
    if jobs > 1 and len(jobs_list) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, jobs_list))
    else:
        done: list[NormalVector] = []
        for k, face_rays in enumerate(jobs_list):
            try:
                results.append(run(face_rays))
            except ResourceBudgetExceeded as exc:
                for r in results:
                    done.extend(r)
                raise ResourceBudgetExceeded(
                    str(exc), partial=sorted(set(done) | set(verts)), unexplored=[faces[i] for i in range(k, len(faces))]
                ) from exc
    for r in results:
        out.update(r)
    fund = sorted(out)
    vset = set(verts)
    return ConeBasis(
        fund,
        [v in vset for v in fund],
        [True] * len(fund),
        constraint,
        T.digest(),
        "admissible",
        {"vertices": len(verts), "faces": len(faces)},
    )


def decompose_over(
    v: Sequence[int],
    basis: ConeBasis | Sequence[NormalVector],
    max_nodes: int = 1_000_000,
) -> list[tuple[NormalVector, int]]:
    """Write ``v`` as a nonnegative integer combination of basis elements.

    Only elements below ``v`` coordinatewise can occur, and these are
    automatically quad-compatible with ``v``.  Raises Unrepresentable when no
    combination exists and ResourceBudgetExceeded when the search is cut off.
    """
    elems = basis.fundamentals if isinstance(basis, ConeBasis) else list(basis)
    target = tuple(v)
    if not any(target):
        return []
    cands = sorted(
        {tuple(b) for b in elems if any(b) and all(x <= y for x, y in zip(b, target))},
        key=lambda b: (-sum(b), b),
    )
    failed: set[tuple[tuple[int, ...], int]] = set()
    nodes = 0

    def rec(res: tuple[int, ...], start: int) -> Optional[list[tuple[NormalVector, int]]]:
        nonlocal nodes
        if not any(res):
            return []
        key = (res, start)
        if key in failed:
            return None
        nodes += 1
        if nodes > max_nodes:
            raise ResourceBudgetExceeded("decomposition search exceeded its node budget")
        for k in range(start, len(cands)):
            b = cands[k]
            m = min((x // y for x, y in zip(res, b) if y), default=0)
            for mult in range(m, 0, -1):
                rest = tuple(x - mult * y for x, y in zip(res, b))
                sub = rec(rest, k + 1)
                if sub is not None:
                    return [(b, mult)] + sub
        failed.add(key)
        return None

    result = rec(target, 0)
    if result is None:
        raise Unrepresentable("no nonnegative integer combination of the basis gives this vector")
    return result


def is_fundamental_in(v: Sequence[int], basis: ConeBasis) -> bool:
    return tuple(v) in set(basis.fundamentals)
