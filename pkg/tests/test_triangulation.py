import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from normsurf.fixtures import FIXTURES, fixture, load_triangulation
from normsurf.triangulation import (
    EDGES,
    AdjacentTrianglesNotDistinct,
    EdgeNotOnBoundary,
    InvolutionViolation,
    MalformedTable,
    SelfGluedFaceIdentity,
    Triangulation,
    disjoint_union,
    is_minimal_vertex,
    layer_on_edge,
    mobius_layering,
    perm_compose,
    perm_inverse,
    perm_sign,
    unglued_tetrahedron,
)
from normsurf.triangulation import ALL_PERMS

perms = st.sampled_from(ALL_PERMS)


@given(perms, perms)
def test_perm_algebra(p, q):
    assert perm_compose(p, perm_inverse(p)) == (0, 1, 2, 3)
    assert perm_sign(perm_compose(p, q)) == perm_sign(p) * perm_sign(q)


def test_solid_torus_skeleton():
    T = fixture("solid-torus")
    assert T.counts == {
        "tetrahedra": 1, "faces": 3, "edges": 3, "vertices": 1, "boundary_faces": 2, "boundary_edges": 3,
    }
    assert T.orientable and T.is_manifold
    assert T.boundary[0].one_vertex_torus
    assert sorted(T.edge_degree(c) for c in range(3)) == [1, 2, 3]
    assert is_minimal_vertex(T)


def test_creased_cell_boundary_is_a_sphere():
    T = fixture("creased-cell")
    comp = T.boundary[0]
    assert comp.euler_characteristic == 2
    assert not comp.one_vertex_torus
    assert not is_minimal_vertex(T)


def test_unglued_tetrahedron():
    T = unglued_tetrahedron()
    assert T.counts["vertices"] == 4 and T.counts["edges"] == 6 and len(T.boundary) == 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_roundtrip(name):
    T = fixture(name)
    again = Triangulation.from_json(json.loads(T.dumps()))
    assert again.gluings == T.gluings
    assert again.digest() == T.digest()


@pytest.mark.parametrize("name", ["knot-3tet", "knot", "t2xi"])
def test_bundled_manifolds(name):
    T = fixture(name)
    assert T.orientable and T.is_manifold and is_minimal_vertex(T)
    assert all(c.one_vertex_torus for c in T.boundary)
    assert T.warnings() == []


def test_knot_and_t2xi_boundary_counts():
    assert len(fixture("knot").boundary) == 1
    assert len(fixture("t2xi").boundary) == 2


def test_layering_counts():
    T = fixture("solid-torus")
    for e in T.boundary_edge_classes:
        L = layer_on_edge(T, e)
        assert L.tet_count == 2
        assert len(L.edge_classes) == len(T.edge_classes) + 1
        assert len(L.vertex_classes) == 1
        assert L.boundary[0].one_vertex_torus
        n = L.tet_count - 1
        assert L.edge_class(n, EDGES.index((2, 3))) == len(L.edge_classes) - 1


def test_layering_rejects_interior_edge():
    T = fixture("lst-1-1-2")
    interior = [c for c in range(len(T.edge_classes)) if c not in T.boundary_edge_classes]
    with pytest.raises(EdgeNotOnBoundary):
        layer_on_edge(T, interior[0])


def test_layering_rejects_single_triangle_edge():
    # two boundary edges of the creased cell fold a triangle onto itself
    T = fixture("creased-cell")
    errors = 0
    for e in T.boundary_edge_classes:
        try:
            layer_on_edge(T, e)
        except AdjacentTrianglesNotDistinct:
            errors += 1
    assert errors == 2


def test_validation_errors():
    with pytest.raises(MalformedTable):
        Triangulation.from_json('{"tets": 1}')
    with pytest.raises(MalformedTable):
        Triangulation([[(0, 1, (0, 1, 2, 3)), None, None, None]])
    with pytest.raises(SelfGluedFaceIdentity):
        Triangulation([[(0, 0, (0, 1, 2, 3)), None, None, None]])
    with pytest.raises(InvolutionViolation):
        Triangulation([[(0, 3, (3, 0, 1, 2)), None, None, None]])


def test_restrict_and_union():
    T = fixture("lst-1-1-2")
    U = disjoint_union(T, fixture("solid-torus"))
    assert U.tet_count == 3
    assert U.restrict(range(2)).gluings == T.gluings
    assert len(U.boundary) == 2


def test_load_from_path(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(mobius_layering().dumps())
    assert load_triangulation(str(path)).gluings == fixture("solid-torus").gluings
