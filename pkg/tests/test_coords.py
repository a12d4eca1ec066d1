import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import SMALL, fundamentals
from normsurf.coords import (
    LengthMismatch,
    QuadIncompatible,
    boundary_length,
    euler_characteristic,
    haken_sum,
    is_admissible,
    matching_system,
    quad_compatible,
    quad_type,
    vertex_links,
    weight,
)
from normsurf.fixtures import fixture
from normsurf.geometry import classify, reconstruct
from normsurf.lattice import rank

NAMES = SMALL + ["knot-3tet", "knot"]


def test_quad_type_convention():
    assert quad_type(0, 1) == quad_type(2, 3) == 0
    assert quad_type(0, 2) == quad_type(1, 3) == 1
    assert quad_type(0, 3) == quad_type(1, 2) == 2


@pytest.mark.parametrize("name", NAMES + ["t2xi"])
def test_matching_rows_match_oracle(name):
    T = fixture(name)
    ours = [list(r) for r in matching_system(T).rows]
    ref = oracles.matching_rows(T)
    r = rank(ref) if ref else 0
    assert (rank(ours) if ours else 0) == r
    assert (rank(ours + ref) if ref else 0) == r


@pytest.mark.parametrize("name", NAMES)
def test_vertex_links(name):
    T = fixture(name)
    for v in vertex_links(T):
        assert is_admissible(v, T)
        sg = reconstruct(v, T)
        assert sg.connected and sg.components[0].vertex_linking


def combos(name):
    basis = fundamentals(name).admissible
    return st.lists(st.tuples(st.sampled_from(basis), st.integers(1, 3)), min_size=1, max_size=4)


def _compatible_sum(terms):
    total = None
    for v, k in terms:
        vk = tuple(k * x for x in v)
        if total is None:
            total = vk
        elif quad_compatible(total, vk):
            total = haken_sum(total, vk)
    return total


@pytest.mark.parametrize("name", NAMES)
def test_random_sums_admissible_and_counted(name):
    T = fixture(name)

    @given(combos(name))
    def check(terms):
        v = _compatible_sum(terms)
        assert is_admissible(v, T)
        sg = reconstruct(v, T)
        assert sg.euler == euler_characteristic(v, T)
        assert sg.weight == weight(v, T)
        assert sg.boundary_length == boundary_length(v, T)
        assert sum(c.euler for c in sg.components) == sg.euler
        assert sum(len(c.curves) for c in sg.components) == len(sg.curves)

    check()


@pytest.mark.parametrize("name", NAMES)
def test_pairwise_additivity(name):
    T = fixture(name)
    basis = fundamentals(name).admissible
    for u in basis:
        for v in basis:
            if not quad_compatible(u, v):
                continue
            w = haken_sum(u, v)
            for f in (euler_characteristic, weight, boundary_length):
                assert f(w, T) == f(u, T) + f(v, T)


def test_haken_sum_errors():
    with pytest.raises(LengthMismatch):
        haken_sum((0,) * 7, (0,) * 14)
    with pytest.raises(QuadIncompatible):
        haken_sum((0, 0, 0, 0, 1, 0, 0), (0, 0, 0, 0, 0, 1, 0))


def test_solid_torus_meridian_disk_geometry():
    T = fixture("solid-torus")
    disks = []
    for v in fundamentals("solid-torus").admissible:
        sg = reconstruct(v, T)
        if classify(sg).is_disk and not sg.components[0].vertex_linking:
            disks.append(sg)
    assert len(disks) == 1
    sg = disks[0]
    assert sg.euler == 1 and len(sg.curves) == 1 and not sg.curves[0].trivial
