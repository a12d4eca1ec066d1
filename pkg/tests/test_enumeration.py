import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import SMALL, fundamentals, scan
from normsurf import kernels
from normsurf._pykernels import dd_pairs as py_dd_pairs
from normsurf._pykernels import minimal_elements as py_minimal
from normsurf.enumeration import (
    EnumerationBudget,
    ResourceBudgetExceeded,
    Unrepresentable,
    decompose_over,
    enumerate_fundamental_solutions,
    enumerate_vertex_solutions,
)
from normsurf.fixtures import fixture

# frozen from the brute-force scan (entries <= 5) in tests/oracles.py
EXPECTED_FUNDAMENTALS = {
    "unglued-tet": 7,
    "solid-torus": 4,
    "creased-cell": 4,
    "lst-1-1-2": 7,
    "lst-2-3-5": 5,
}


@pytest.mark.parametrize("name", SMALL)
def test_fundamentals_match_scan(name):
    basis = fundamentals(name)
    ref = oracles.indecomposable(scan(name))
    assert len(basis.admissible) == EXPECTED_FUNDAMENTALS[name]
    assert sorted(v for v in basis.admissible if max(v) <= 5) == ref


@pytest.mark.parametrize("name", SMALL)
def test_vertices_are_fundamental(name):
    T = fixture(name)
    verts = set(enumerate_vertex_solutions(T).admissible)
    assert verts <= set(fundamentals(name).admissible)


@pytest.mark.parametrize("name", ["solid-torus", "lst-1-1-2", "knot-3tet"])
def test_full_mode_contains_admissible(name):
    T = fixture(name)
    full = enumerate_fundamental_solutions(T, full=True)
    adm = set(fundamentals(name).admissible)
    assert {v for v, ok in zip(full.fundamentals, full.admissible_flags) if ok} == adm


def test_parallel_faces_agree():
    T = fixture("knot")
    a = enumerate_fundamental_solutions(T)
    b = enumerate_fundamental_solutions(T, jobs=2)
    assert a.fundamentals == b.fundamentals


def test_budget_exceeded():
    with pytest.raises(ResourceBudgetExceeded):
        enumerate_fundamental_solutions(fixture("t2xi"), budget=EnumerationBudget(max_rays=5))


@pytest.mark.parametrize("name", SMALL)
def test_scan_decomposes(name):
    basis = fundamentals(name)
    for v in scan(name)[::7]:
        terms = decompose_over(v, basis)
        total = [0] * len(v)
        for b, k in terms:
            for i, x in enumerate(b):
                total[i] += k * x
        assert tuple(total) == v


def test_unrepresentable():
    basis = fundamentals("solid-torus")
    with pytest.raises(Unrepresentable):
        decompose_over((0, 0, 0, 0, 0, 0, 1), basis)


masks = st.lists(st.integers(1, 2**14 - 1), min_size=1, max_size=12, unique=True)


@given(masks, masks, st.integers(2, 14), st.booleans())
def test_dd_pairs_backends_agree(pos, neg, card, admissible_only):
    every = sorted(set(pos) | set(neg))
    qm = (0b1001001, 0b10010010, 0b100100100) if admissible_only else None
    assert kernels.dd_pairs(pos, neg, every, 14, card, qm) == py_dd_pairs(pos, neg, every, 14, card, qm)


@given(st.lists(st.tuples(*[st.integers(0, 3)] * 4), min_size=1, max_size=30, unique=True))
def test_minimal_elements_backends_agree(vecs):
    assert list(kernels.minimal_elements(vecs)) == py_minimal(vecs)


@pytest.mark.skipif(os.environ.get("NORMSURF_PURE_PYTHON", "") not in ("", "0"), reason="pure Python forced")
def test_backend_is_compiled():
    assert kernels.BACKEND == "cython"
