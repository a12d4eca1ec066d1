"""Slopes on one-vertex torus boundary components.

On a one-vertex torus the edge classes ``E0, E1, E2`` of a boundary
component (in canonical order) satisfy ``s0 E0 + s1 E1 + s2 E2 = 0`` in
homology for signs read off the first boundary triangle.  A slope
``p E0 + q E1`` meets the three edges ``|q|``, ``|p|`` and ``|eps p - q|``
times, with ``eps = s0 s1``.  Its normal representative has ``z_k`` arcs
cutting off the corner opposite ``E_k`` in each triangle, and
``z_k = S - w_k`` where ``S = (w0 + w1 + w2) / 2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .triangulation import EDGE_INDEX, NotOneVertexTorus, Triangulation, face_vertices


class BoundaryMismatch(ValueError):
    code = "BoundaryMismatch"


class DisconnectedCurve(ValueError):
    code = "DisconnectedCurve"


class InvalidSlope(ValueError):
    code = "InvalidSlope"


class _Trivial:
    """Marker for a vertex-linking (inessential) curve."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Trivial"

    def to_json(self) -> str:
        return "trivial"


Trivial = _Trivial()


@dataclass(frozen=True)
class Slope:
    boundary_id: int
    p: int
    q: int
    eps: int = 1

    def __post_init__(self):
        if gcd(self.p, self.q) != 1:
            raise InvalidSlope(f"({self.p},{self.q}) is not primitive")
        if not (self.p > 0 or (self.p == 0 and self.q == 1)):
            raise InvalidSlope(f"({self.p},{self.q}) is not in canonical sign")

    @property
    def weights(self) -> tuple[int, int, int]:
        return abs(self.q), abs(self.p), abs(self.eps * self.p - self.q)

    @property
    def z(self) -> tuple[int, int, int]:
        w = self.weights
        s = sum(w) // 2
        return s - w[0], s - w[1], s - w[2]

    @property
    def arc_coords(self) -> tuple[int, int, int]:
        return self.z

    @property
    def zero_index(self) -> int:
        return self.z.index(0)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}@B{self.boundary_id}"

    def to_json(self) -> dict:
        return {"slope": str(self), "p": self.p, "q": self.q, "z": list(self.z), "weights": list(self.weights)}


@dataclass(frozen=True)
class BoundaryFrame:
    """Edge basis data for a one-vertex torus boundary component."""

    boundary_id: int
    edges: tuple[int, int, int]
    eps: int
    triangle: tuple[int, int]

    def slope(self, p: int, q: int) -> Slope:
        g = gcd(p, q)
        if g == 0:
            raise InvalidSlope("(0,0) is not a slope")
        p, q = p // g, q // g
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        return Slope(self.boundary_id, p, q, self.eps)

    def from_weights(self, w: Sequence[int]) -> Slope:
        w0, w1, w2 = w
        p = w1
        if p == 0:
            if w0 != 1 or w2 != 1:
                raise InvalidSlope(f"weights {tuple(w)} are not those of a primitive slope")
            return Slope(self.boundary_id, 0, 1, self.eps)
        for q in (w0, -w0):
            if abs(self.eps * p - q) == w2 and gcd(p, q) == 1:
                return Slope(self.boundary_id, p, q, self.eps)
        raise InvalidSlope(f"weights {tuple(w)} are not those of a primitive slope")

    def from_z(self, z: Sequence[int]) -> Slope:
        s = sum(z)
        return self.from_weights([s - x for x in z])

    def edge_slope(self, k: int) -> Slope:
        w = [1, 1, 1]
        w[k] = 0
        return self.from_weights(w)


def boundary_frame(T: Triangulation, boundary_id: int) -> BoundaryFrame:
    if not (0 <= boundary_id < len(T.boundary)):
        raise BoundaryMismatch(f"no boundary component B{boundary_id}")
    comp = T.boundary[boundary_id]
    if not comp.one_vertex_torus:
        raise NotOneVertexTorus(f"B{boundary_id} is not a one-vertex torus")
    a, f = comp.triangles[0]
    x, y, z = face_vertices(f)
    signs = {}
    for u, v, flip in ((x, y, 1), (y, z, 1), (x, z, -1)):
        e = EDGE_INDEX[(u, v)]
        cls = T.edge_class(a, e)
        signs[comp.edges.index(cls)] = flip * T.edge_sign(a, e)
    eps = signs[0] * signs[1]
    return BoundaryFrame(boundary_id, comp.edges, eps, (a, f))


def slope_from_curve(curve, T: Triangulation, boundary_id: Optional[int] = None) -> Union[Slope, _Trivial]:
    """Slope of a connected normal curve given by its arc triple (or a
    BoundaryCurve record)."""
    if hasattr(curve, "z"):
        boundary_id = curve.boundary_id if boundary_id is None else boundary_id
        z = curve.z
        if z is None:
            raise NotOneVertexTorus(f"B{boundary_id} is not a one-vertex torus")
    else:
        z = tuple(curve)
    frame = boundary_frame(T, boundary_id if boundary_id is not None else 0)
    return slope_from_arcs(z, frame)


def slope_from_arcs(z: Sequence[int], frame: BoundaryFrame) -> Union[Slope, _Trivial]:
    z = tuple(int(x) for x in z)
    if len(z) != 3 or min(z) < 0 or not any(z):
        raise InvalidSlope(f"{z} is not a nonempty arc triple")
    if min(z) > 0:
        if z == (1, 1, 1):
            return Trivial
        raise DisconnectedCurve(f"{z} contains vertex-linking curves")
    s = sum(z)
    w = [s - x for x in z]
    g = gcd(gcd(w[0], w[1]), w[2])
    if g != 1:
        raise DisconnectedCurve(f"{z} describes {g} parallel curves")
    return frame.from_weights(w)


def slope_of_multicurve(z: Sequence[int], frame: BoundaryFrame) -> tuple[Union[Slope, _Trivial, None], int, int]:
    """Decompose an arc triple into (slope, essential copies, trivial copies)."""
    z = tuple(z)
    m = min(z)
    rest = tuple(x - m for x in z)
    if not any(rest):
        return (Trivial if m else None), 0, m
    s = sum(rest)
    w = [s - x for x in rest]
    g = gcd(gcd(w[0], w[1]), w[2])
    return frame.from_weights([x // g for x in w]), g, m


def slope_distance(a: Slope, b: Slope) -> int:
    if a.boundary_id != b.boundary_id:
        raise BoundaryMismatch("slopes lie on different boundary components")
    return abs(a.p * b.q - a.q * b.p)


def complementary_slope(g: Slope) -> Slope:
    """The slope whose representative sums with g's to vertex links only."""
    z = g.z
    m = max(z)
    zc = tuple(m - x for x in z)
    frame = BoundaryFrame(g.boundary_id, (0, 1, 2), g.eps, (0, 0))
    out = slope_from_arcs(zc, frame)
    assert isinstance(out, Slope)
    return out


def slope_length(g: Slope) -> int:
    return sum(g.weights)


def enumerate_short_slopes(frame: BoundaryFrame, bound) -> list[Slope]:
    """All slopes of normal length at most ``bound``.

    Farey-tree traversal from the triangle of edge slopes: each pair of
    adjacent slopes has two common neighbours, and the one not yet visited
    is strictly longer than both, so subtrees can be cut as soon as a slope
    exceeds the bound.
    """
    bound = Fraction(bound)
    if bound < 2:
        return []
    edges = [frame.edge_slope(k) for k in range(3)]
    found = {(s.p, s.q): s for s in edges}
    stack = []
    for i in range(3):
        a, b, c = edges[i], edges[(i + 1) % 3], edges[(i + 2) % 3]
        stack.append((a, b, c))
    while stack:
        a, b, c = stack.pop()
        cand = None
        for sign in (1, -1):
            p, q = a.p + sign * b.p, a.q + sign * b.q
            s = frame.slope(p, q)
            if (s.p, s.q) != (c.p, c.q):
                cand = s
                break
        if cand is None or slope_length(cand) > bound:
            continue
        if (cand.p, cand.q) in found:
            continue
        found[(cand.p, cand.q)] = cand
        stack.append((a, cand, b))
        stack.append((cand, b, a))
    out = [s for s in found.values() if slope_length(s) <= bound]
    return sorted(out, key=lambda s: (slope_length(s), s.p, s.q))


_SLOPE_RE = re.compile(r"^\s*(-?\d+)\s*/\s*(-?\d+)\s*(?:@\s*B?(\d+))?\s*$")


def parse_slope(text: str, default_boundary: int = 0) -> tuple[int, int, int]:
    """Parse ``p/q`` or ``p/q@Bk`` into ``(p, q, k)``."""
    m = _SLOPE_RE.match(text)
    if not m:
        raise InvalidSlope(f"cannot parse slope {text!r}; expected P/Q or P/Q@Bk")
    p, q = int(m.group(1)), int(m.group(2))
    k = int(m.group(3)) if m.group(3) is not None else default_boundary
    return p, q, k


def slope_in(T: Triangulation, text: str, default_boundary: int = 0) -> Slope:
    p, q, k = parse_slope(text, default_boundary)
    return boundary_frame(T, k).slope(p, q)


def homology_sum(a: Slope, b: Slope) -> Slope:
    """Class-level sum (p_a + p_b, q_a + q_b), renormalised."""
    if a.boundary_id != b.boundary_id:
        raise BoundaryMismatch("slopes lie on different boundary components")
    frame = BoundaryFrame(a.boundary_id, (0, 1, 2), a.eps, (0, 0))
    return frame.slope(a.p + b.p, a.q + b.q)
