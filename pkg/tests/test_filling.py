import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from normsurf.coords import is_admissible
from normsurf.enumeration import enumerate_fundamental_solutions
from normsurf.filling import (
    NotCapped,
    NotMeridional,
    build_lst,
    cap_off,
    dehn_drill,
    dehn_fill,
    descent_length,
    drilling_block,
    layer_to_edge,
    lst_disk_in,
    restrict,
)
from normsurf.fixtures import fixture
from normsurf.geometry import reconstruct
from normsurf.slopes import boundary_frame


@pytest.mark.parametrize(
    "weights,tets", [((1, 2, 3), 1), ((1, 1, 2), 2), ((0, 1, 1), 3), ((2, 3, 5), 2), ((5, 8, 13), 4)]
)
def test_lst_sizes(weights, tets):
    L = build_lst(weights)
    assert L.tet_count == tets
    assert tuple(sorted(L.weights)) == weights
    sg = reconstruct(L.disk, L.triangulation)
    assert sg.connected and sg.euler == 1 and len(sg.curves) == 1


@given(st.integers(0, 7), st.data())
def test_lst_counts(depth, data):
    w = data.draw(st.sampled_from(oracles.farey_triples(depth)))
    L = build_lst(w)
    T = L.triangulation
    t = T.tet_count
    assert descent_length(w) == depth and t == depth + 1
    assert T.counts["faces"] == 2 * t + 1
    assert T.counts["edges"] == t + 2
    assert T.counts["vertices"] == 1
    assert L.meridian.weights == L.weights


def test_bad_weights():
    with pytest.raises(ValueError):
        build_lst((1, 2, 4))


def test_fill_solid_torus_is_closed():
    T = fixture("solid-torus")
    F = boundary_frame(T, 0)
    for pq in [(1, 0), (0, 1), (1, 1), (2, 1)]:
        filled = dehn_fill(T, 0, F.slope(*pq))
        X = filled.triangulation
        assert not X.boundary
        assert len(X.vertex_classes) == 1
        assert X.orientable


def test_fill_t2xi_both_sides():
    M = fixture("t2xi")
    F0 = boundary_frame(M, 0)
    F1 = boundary_frame(M, 1)
    a = dehn_fill(M, 0, F0.slope(1, 1))
    assert len(a.triangulation.boundary) == 1 and a.boundary_map == (1,)
    b = dehn_fill(a, 1, F1.slope(0, 1))
    assert not b.triangulation.boundary
    assert [r.boundary_id for r in b.fillings] == [0, 1]
    assert b.fillings[1].start == a.triangulation.tet_count
    rec = b.fillings[0]
    disk = lst_disk_in(b, rec)
    assert disk[7 * rec.start: 7 * rec.stop] == rec.lst.disk
    assert not any(disk[: 7 * rec.start]) and not any(disk[7 * rec.stop:])


def test_cap_off_and_restrict():
    M = fixture("t2xi")
    g = boundary_frame(M, 0).slope(1, 0)
    filled = dehn_fill(M, 0, g)
    annulus = None
    for v in enumerate_fundamental_solutions(M).admissible:
        sg = reconstruct(v, M)
        if sg.connected and sg.euler == 0 and len(sg.curves) == 2 and {c.boundary_id for c in sg.curves} == {0, 1}:
            annulus = v
            break
    assert annulus is not None
    W = cap_off(annulus, filled)
    assert is_admissible(W, filled.triangulation)
    sgW = reconstruct(W, filled.triangulation)
    assert sgW.euler == 1 and len(sgW.curves) == 1
    back, caps = restrict(W, filled)
    assert back == annulus and caps == [1]


def test_cap_off_rejects_wrong_slope():
    M = fixture("t2xi")
    filled = dehn_fill(M, 0, boundary_frame(M, 0).slope(2, 1))
    with pytest.raises(NotMeridional):
        cap_off(fixture_link(M), filled)


def fixture_link(M):
    from normsurf.coords import vertex_link

    return vertex_link(M, M.boundary[0].vertices[0])


def test_restrict_rejects_uncapped():
    M = fixture("solid-torus")
    filled = dehn_fill(M, 0, boundary_frame(M, 0).slope(1, 0))
    X = filled.triangulation
    bad = [0] * (7 * X.tet_count)
    bad[7 * filled.fillings[0].start] = 1
    with pytest.raises(NotCapped):
        restrict(bad, filled)


def test_drilling_block_shape():
    B, pts = drilling_block()
    assert B.tet_count == 9 and len(pts) == 9


@pytest.mark.parametrize("name", ["solid-torus", "lst-1-1-2", "knot-3tet"])
@pytest.mark.parametrize("pq", [(1, 0), (1, 1), (2, 1), (3, -2)])
def test_drill_counts(name, pq):
    M = fixture(name)
    mu = boundary_frame(M, 0).slope(*pq)
    D = dehn_drill(M, 0, mu)
    L, layers, _, _ = layer_to_edge(M, 0, mu)
    T = D.triangulation
    assert layers == D.layers
    assert T.tet_count == M.tet_count + layers + 9
    assert len(T.boundary) == len(M.boundary) + 1
    assert len(T.vertex_classes) == len(M.vertex_classes) + 1
    assert T.restrict(range(L.tet_count)).gluings == L.gluings
    assert T.orientable and T.is_manifold
    assert D.mu.boundary_id == D.boundary and D.mu_star.boundary_id == D.drilled_boundary


@pytest.mark.parametrize("pq", [(0, 1), (1, 1)])
def test_drilled_collar_annulus(pq):
    # the drilled curve is parallel to B, so an annulus joins B to the new
    # boundary with slopes mu and lambda*
    from normsurf.slopes import slope_from_curve

    M = fixture("solid-torus")
    D = dehn_drill(M, 0, boundary_frame(M, 0).slope(*pq))
    T = D.triangulation
    found = False
    for v in enumerate_fundamental_solutions(T).admissible:
        sg = reconstruct(v, T)
        if not (sg.connected and sg.euler == 0 and len(sg.curves) == 2):
            continue
        if any(c.trivial for c in sg.curves):
            continue
        got = {(c.boundary_id, slope_from_curve(c, T)) for c in sg.curves}
        if got == {(D.boundary, D.mu), (D.drilled_boundary, D.lambda_star)}:
            found = True
            break
    assert found


def test_degenerate_lst_meridian_surfaces():
    # meridian 1/1 is a boundary edge of the (0,1,1) torus; besides the disk,
    # an annulus and two negative-chi surfaces have meridian boundary
    from normsurf.slopes import slope_from_curve

    L = build_lst((0, 1, 1))
    T = L.triangulation
    chis = []
    for v in enumerate_fundamental_solutions(T).admissible:
        sg = reconstruct(v, T)
        if sg.curves and not any(c.trivial for c in sg.curves):
            if {slope_from_curve(c, T) for c in sg.curves} == {L.meridian}:
                chis.append(sg.euler)
    assert sorted(chis) == [-2, -1, 0, 1]
