"""Search gluing tables for one-vertex knot-manifolds with an empty
0-efficiency audit.

Two tetrahedra are scanned exhaustively; larger counts are sampled at
random with a fixed seed.  Hits are printed with the number of
fundamental surfaces of negative Euler characteristic.
"""

import argparse
import itertools
import json
import random
import time

from normsurf.bounds import audit_zero_efficiency
from normsurf.enumeration import enumerate_fundamental_solutions
from normsurf.geometry import reconstruct
from normsurf.triangulation import Triangulation, TriangulationError, perm_inverse

PERMS = list(itertools.permutations(range(4)))


def pairings(faces):
    if not faces:
        yield []
        return
    first = faces[0]
    for k in range(1, len(faces)):
        rest = faces[1:k] + faces[k + 1:]
        for tail in pairings(rest):
            yield [(first, faces[k])] + tail


def _table(n, pairs, perms):
    rows = [[None] * 4 for _ in range(n)]
    for ((a, f), (b, g)), p in zip(pairs, perms):
        if p[f] != g:
            return None
        rows[a][f] = (b, g, p)
        rows[b][g] = (a, f, perm_inverse(p))
    return rows


def exhaustive(n):
    faces = [(a, f) for a in range(n) for f in range(4)]
    for bnd in itertools.combinations(faces, 2):
        inner = [x for x in faces if x not in bnd]
        for pairs in pairings(inner):
            for perms in itertools.product(PERMS, repeat=len(pairs)):
                rows = _table(n, pairs, perms)
                if rows is not None:
                    yield rows


def sampled(n, seed, seconds):
    rng = random.Random(seed)
    start = time.time()
    faces = [(a, f) for a in range(n) for f in range(4)]
    while time.time() - start < seconds:
        order = faces[:]
        rng.shuffle(order)
        inner = order[2:]
        pairs = [(inner[i], inner[i + 1]) for i in range(0, len(inner), 2)]
        perms = []
        for (a, f), (b, g) in pairs:
            rest = [x for x in range(4) if x != g]
            rng.shuffle(rest)
            p = [0] * 4
            p[f] = g
            for x, y in zip([x for x in range(4) if x != f], rest):
                p[x] = y
            perms.append(tuple(p))
        yield _table(n, pairs, perms)


def knot_manifolds(tables):
    seen = set()
    for rows in tables:
        try:
            T = Triangulation(rows)
        except TriangulationError:
            continue
        if not (T.orientable and len(T.vertex_classes) == 1 and T.is_manifold):
            continue
        if len(T.boundary) != 1 or not T.boundary[0].one_vertex_torus:
            continue
        key = T.digest()
        if key not in seen:
            seen.add(key)
            yield T


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tets", type=int, default=2)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--seconds", type=float, default=120.0)
    ap.add_argument("--out", help="write the hit with most negative-chi fundamentals as JSON")
    args = ap.parse_args()
    tables = exhaustive(args.tets) if args.tets <= 2 else sampled(args.tets, args.seed, args.seconds)
    total = 0
    hits = []
    for T in knot_manifolds(tables):
        total += 1
        if not audit_zero_efficiency(T).empty:
            continue
        basis = enumerate_fundamental_solutions(T)
        neg = sum(1 for v in basis.admissible if reconstruct(v, T).euler < 0)
        hits.append((neg, T))
        print(neg, T.dumps(), flush=True)
    print(f"{total} knot-manifold tables, {len(hits)} with empty audit")
    if args.out and hits:
        best = max(hits, key=lambda h: h[0])[1]
        with open(args.out, "w") as fh:
            json.dump(best.to_json(), fh)


if __name__ == "__main__":
    main()
