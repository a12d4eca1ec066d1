"""Brute-force reference implementations used to freeze expected values.

Nothing here calls the package's coordinate, enumeration or bounds code:
the matching equations are rebuilt straight from the gluing table and
admissible vectors are found by a bounded depth-first scan.
"""

from __future__ import annotations


EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def quad_keeping(i, j):
    for k, (a, b) in enumerate(((0, 1), (0, 2), (0, 3))):
        other = {0, 1, 2, 3} - {a, b}
        if {i, j} == {a, b} or {i, j} == other:
            return k
    raise ValueError


def arc_cols(tet, face, corner):
    return 7 * tet + corner, 7 * tet + 4 + quad_keeping(corner, face)


def matching_rows(T):
    """One equation per corner of every interior face pair."""
    rows = []
    seen = set()
    for a, row in enumerate(T.gluings):
        for f, g in enumerate(row):
            if g is None or (a, f) in seen:
                continue
            b, h, p = g
            seen.add((b, h))
            seen.add((a, f))
            for c in range(4):
                if c == f:
                    continue
                r = [0] * (7 * T.tet_count)
                for col in arc_cols(a, f, c):
                    r[col] += 1
                for col in arc_cols(b, h, p[c]):
                    r[col] -= 1
                if any(r):
                    rows.append(r)
    return rows


def scan_admissible(T, bound=5, extra_rows=()):
    """Every nonzero admissible vector with entries <= bound.

    Variables are assigned in order; an equation is checked as soon as its
    last variable is set.
    """
    rows = matching_rows(T) + [list(r) for r in extra_rows]
    n = 7 * T.tet_count
    last = {}
    for r in rows:
        k = max(i for i, x in enumerate(r) if x)
        last.setdefault(k, []).append(r)
    out = []
    vec = [0] * n

    def rec(i):
        if i == n:
            if any(vec):
                out.append(tuple(vec))
            return
        t, slot = divmod(i, 7)
        choices = range(bound + 1)
        if slot >= 4 and any(vec[7 * t + 4: i]):
            choices = (0,)
        for x in choices:
            vec[i] = x
            if all(sum(c * v for c, v in zip(r, vec)) == 0 for r in last.get(i, ())):
                rec(i + 1)
        vec[i] = 0

    rec(0)
    return out


def indecomposable(vectors):
    """Elements of a finite set closed under the summands that lie below
    them: those that are not a sum of two nonzero members."""
    vs = set(vectors)
    out = []
    for v in vs:
        hit = False
        for u in vs:
            if u == v or not all(x <= y for x, y in zip(u, v)):
                continue
            if tuple(y - x for x, y in zip(u, v)) in vs:
                hit = True
                break
        if not hit:
            out.append(v)
    return sorted(out)


def box_sums(basis, bound):
    """Every nonnegative integer combination of ``basis`` with all entries
    at most ``bound`` (breadth-first closure)."""
    elems = [tuple(b) for b in basis if any(b) and max(b) <= bound]
    zero = tuple(0 for _ in elems[0]) if elems else ()
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for b in elems:
                w = tuple(x + y for x, y in zip(v, b))
                if max(w) <= bound and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def edge_weight_triple(vec, T, cls):
    a, e = T.edge_classes[cls][0]
    i, j = EDGE_PAIRS[e]
    cols = [7 * a + i, 7 * a + j] + [7 * a + 4 + k for k in range(3) if k != quad_keeping(i, j)]
    return sum(vec[c] for c in cols)


def slope_filter(vec, T, bid, weights):
    """True when the edge weights of the surface on boundary ``bid`` are a
    multiple of ``weights``: the boundary is empty or parallel copies of
    that one curve."""
    comp = T.boundary[bid]
    w = [edge_weight_triple(vec, T, e) for e in comp.edges]
    if not any(w):
        return True
    m = None
    for x, y in zip(w, weights):
        if y == 0:
            if x != 0:
                return False
            continue
        if x % y:
            return False
        if m is None:
            m = x // y
        elif m != x // y:
            return False
    return True


def farey_triples(depth):
    """Sorted edge-weight triples reachable from (1,2,3) in ``depth`` flips
    that increase the largest weight."""
    level = [(1, 2, 3)]
    for _ in range(depth):
        nxt = set()
        for a, b, c in level:
            nxt.add(tuple(sorted((a, c, a + c))))
            nxt.add(tuple(sorted((b, c, b + c))))
        level = sorted(nxt)
    return level


