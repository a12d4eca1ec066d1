"""Boundary operator, slope-constrained cones, length constants and the
0-efficiency audit."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .coords import MatchingSystem, NormalVector, arc_columns, matching_system
from .enumeration import ConeBasis, EnumerationBudget, enumerate_fundamental_solutions, enumerate_vertex_solutions
from .geometry import SurfaceGeometry, classify_component, reconstruct
from .slopes import Slope, boundary_frame
from .triangulation import EDGE_INDEX, Triangulation, face_vertices


def normal_boundary_map(T: Triangulation) -> tuple[list[list[int]], list[tuple[int, int, int]]]:
    """Matrix sending disk-type counts to boundary arc-type counts.

    Rows are labelled by (tet, boundary face, corner).
    """
    n = 7 * T.tet_count
    rows = []
    labels = []
    for a, f in T.boundary_faces:
        for c in face_vertices(f):
            row = [0] * n
            for col in arc_columns(a, f, c):
                row[col] += 1
            rows.append(row)
            labels.append((a, f, c))
    return rows, labels


def _corner_opposite(T: Triangulation, a: int, f: int, cls: int) -> int:
    for c in face_vertices(f):
        x, y = (u for u in face_vertices(f) if u != c)
        if T.edge_class(a, EDGE_INDEX[(x, y)]) == cls:
            return c
    raise ValueError("edge class not in this triangle")


@dataclass(frozen=True)
class SlopeConstraint:
    """Surfaces meeting boundary ``boundary_id`` only in ``slope`` (or not
    at all)."""

    boundary_id: int
    slope: Slope

    @property
    def zero_index(self) -> int:
        return self.slope.zero_index

    @property
    def ratio(self) -> tuple[int, int, int, int]:
        """(i1, i3, r, s): arcs at i1 and i3 stand in ratio r : s."""
        z = self.slope.z
        k = self.zero_index
        i1, i3 = (i for i in range(3) if i != k)
        return i1, i3, z[i1], z[i3]

    def equations(self, T: Triangulation) -> tuple[list[tuple[int, ...]], list[tuple]]:
        comp = T.boundary[self.boundary_id]
        boundary_frame(T, self.boundary_id)  # raises unless one-vertex torus
        n = 7 * T.tet_count
        rows = []
        labels = []
        k = self.zero_index
        for a, f in comp.triangles:
            c = _corner_opposite(T, a, f, comp.edges[k])
            row = [0] * n
            for col in arc_columns(a, f, c):
                row[col] += 1
            rows.append(tuple(row))
            labels.append(("zero-arc", a, f, c))
        i1, i3, r, s = self.ratio
        a, f = comp.triangles[0]
        c1 = _corner_opposite(T, a, f, comp.edges[i1])
        c3 = _corner_opposite(T, a, f, comp.edges[i3])
        row = [0] * n
        for col in arc_columns(a, f, c1):
            row[col] += s
        for col in arc_columns(a, f, c3):
            row[col] -= r
        rows.append(tuple(row))
        labels.append(("ratio", a, f, c1, c3, r, s))
        return rows, labels

    def system(self, T: Triangulation) -> MatchingSystem:
        rows, labels = self.equations(T)
        return matching_system(T).extended(rows, labels)

    def to_json(self) -> dict:
        return {"boundary": self.boundary_id, "slope": str(self.slope), "z": list(self.slope.z)}


def constrained_system(T: Triangulation, c: SlopeConstraint) -> MatchingSystem:
    return c.system(T)


# ----------------------------------------------------------------------
# length constants

VARIANTS = ("Basic", "Link1", "SpanningCollection", "BoundaryConditioned")


@dataclass
class AleConstant:
    value: Fraction
    variant: str
    witnesses: list[dict] = field(default_factory=list)
    annulus_terms: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "C": str(self.value),
            "variant": self.variant,
            "witnesses": self.witnesses,
            "annulus_terms": self.annulus_terms,
        }


def _annulus_term_ok(sg: SurfaceGeometry) -> bool:
    """Moebius band, or annulus with both curves in one boundary component."""
    if len(sg.components) != 1:
        return False
    comp = sg.components[0]
    if comp.euler != 0 or comp.boundary_count == 0:
        return False
    if not comp.orientable:
        return comp.boundary_count == 1
    bids = {c.boundary_id for c in sg.curves}
    return comp.boundary_count == 2 and len(bids) == 1


def ale_constant(
    elements: Sequence[NormalVector] | ConeBasis,
    T: Triangulation,
    variant: str = "Basic",
    geometries: Optional[dict] = None,
) -> AleConstant:
    """Maximum of L(bd F)/-chi(F) over elements with chi < 0; the Link1 and
    BoundaryConditioned variants also take L(bd A)/(number of boundary
    curves of A) over annulus and Moebius band elements.  The maximum of
    an empty collection is taken to be 0."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    vecs = elements.admissible if isinstance(elements, ConeBasis) else list(elements)
    geometries = geometries if geometries is not None else {}
    best = Fraction(0)
    witnesses = []
    annuli = []
    for v in vecs:
        sg = geometries.get(v) or reconstruct(v, T)
        geometries[v] = sg
        chi = sg.euler
        L = sg.boundary_length
        if chi < 0:
            ratio = Fraction(L, -chi)
            witnesses.append({"vector": list(v), "L": L, "chi": chi, "ratio": str(ratio)})
            best = max(best, ratio)
        elif variant in ("Link1", "BoundaryConditioned") and _annulus_term_ok(sg):
            nb = sg.components[0].boundary_count
            ratio = Fraction(L, nb)
            annuli.append({"vector": list(v), "L": L, "boundary_curves": nb, "ratio": str(ratio)})
            best = max(best, ratio)
    return AleConstant(best, variant, witnesses, annuli)


# ----------------------------------------------------------------------
# 0-efficiency audit


@dataclass
class AuditReport:
    nonlinking_spheres: list[NormalVector]
    nonlinking_disks: list[NormalVector]
    scanned: int
    scope: str = "vertex solutions"

    @property
    def empty(self) -> bool:
        return not self.nonlinking_spheres and not self.nonlinking_disks

    def to_json(self) -> dict:
        return {
            "nonlinking_spheres": [list(v) for v in self.nonlinking_spheres],
            "nonlinking_disks": [list(v) for v in self.nonlinking_disks],
            "scanned": self.scanned,
            "scope": self.scope,
            "zero_efficient": self.empty,
        }


def audit_zero_efficiency(
    T: Triangulation,
    budget: Optional[EnumerationBudget] = None,
    basis: Optional[ConeBasis] = None,
) -> AuditReport:
    """Report non-vertex-linking normal spheres and disks among the vertex
    solutions (or among a supplied basis)."""
    if basis is None:
        basis = enumerate_vertex_solutions(T, budget=budget)
        scope = "vertex solutions"
    else:
        scope = "supplied basis"
    spheres, disks = [], []
    vecs = basis.admissible
    for v in vecs:
        sg = reconstruct(v, T, check=False)
        if len(sg.components) != 1:
            continue
        comp = sg.components[0]
        if comp.vertex_linking:
            continue
        cl = classify_component(comp)
        if cl.is_sphere:
            spheres.append(v)
        elif cl.is_disk:
            disks.append(v)
        elif comp.euler == 1 and not comp.orientable and comp.boundary_count == 0:
            # a one-sided projective plane: its double is a normal sphere
            spheres.append(tuple(2 * x for x in v))
    return AuditReport(spheres, disks, len(vecs), scope)
