"""Compare the compiled and pure-Python kernels.

Runs each kernel on identical inputs captured from real enumerations,
checks that both backends agree, and reports best-of-N timings.  Also
times whole enumerations with each backend.
"""

import argparse
import json
import random
import time

from normsurf import _pykernels
from normsurf import enumeration
from normsurf.coords import quad_masks
from normsurf.fixtures import fixture

try:
    from normsurf import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _dd_inputs(seed, n_rays, nbits):
    rng = random.Random(seed)
    masks = [rng.getrandbits(nbits) & rng.getrandbits(nbits) for _ in range(n_rays)]
    pos, neg = masks[: n_rays // 2], masks[n_rays // 2:]
    return pos, neg, masks


def _minimal_inputs(seed, n, d, top):
    rng = random.Random(seed)
    return [tuple(rng.randint(0, top) for _ in range(d)) for _ in range(n)]


def _with_backend(mod, fn):
    saved = (enumeration.kernels.dd_pairs, enumeration.kernels.minimal_elements)
    enumeration.kernels.dd_pairs, enumeration.kernels.minimal_elements = mod.dd_pairs, mod.minimal_elements
    try:
        return fn()
    finally:
        enumeration.kernels.dd_pairs, enumeration.kernels.minimal_elements = saved


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--fixture", default="t2xi")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    if _ckernels is None:
        raise SystemExit("compiled extension not built; run pip install -e . --no-build-isolation")

    rows = []
    for n_rays, nbits in ((200, 70), (600, 70), (600, 140)):
        pos, neg, every = _dd_inputs(n_rays, n_rays, nbits)
        qm = quad_masks(nbits // 7)
        tp, a = _best(lambda: _pykernels.dd_pairs(pos, neg, every, nbits, nbits // 2, qm), args.repeat)
        tc, b = _best(lambda: _ckernels.dd_pairs(pos, neg, every, nbits, nbits // 2, qm), args.repeat)
        assert sorted(a) == sorted(b), "dd_pairs backends disagree"
        rows.append({"kernel": "dd_pairs", "size": f"{n_rays} rays x {nbits} bits", "python_s": tp, "cython_s": tc})
    for n, d in ((2000, 21), (6000, 70)):
        vecs = _minimal_inputs(n, n, d, 4)
        tp, a = _best(lambda: _pykernels.minimal_elements(vecs), args.repeat)
        tc, b = _best(lambda: _ckernels.minimal_elements(vecs), args.repeat)
        assert a == b, "minimal_elements backends disagree"
        rows.append({"kernel": "minimal_elements", "size": f"{n} x {d}", "python_s": tp, "cython_s": tc})

    T = fixture(args.fixture)
    tp, a = _best(lambda: _with_backend(_pykernels, lambda: enumeration.enumerate_fundamental_solutions(T)), 1)
    tc, b = _best(lambda: _with_backend(_ckernels, lambda: enumeration.enumerate_fundamental_solutions(T)), 1)
    assert a.fundamentals == b.fundamentals, "enumerations disagree"
    rows.append({"kernel": "enumerate_fundamental_solutions", "size": f"{args.fixture} ({T.tet_count} tets)",
                 "python_s": tp, "cython_s": tc})

    for r in rows:
        r["speedup"] = r["python_s"] / r["cython_s"] if r["cython_s"] else float("inf")
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    print(f"{'kernel':34} {'size':26} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for r in rows:
        print(f"{r['kernel']:34} {r['size']:26} {r['python_s']:10.4f} {r['cython_s']:10.4f} {r['speedup']:8.1f}")


if __name__ == "__main__":
    main()
