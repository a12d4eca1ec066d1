import pytest

from normsurf.fixtures import fixture
from normsurf.geometry import reconstruct
from normsurf.search import (
    ORACLES,
    AssumeEssentialOracle,
    SearchBudget,
    Verdict,
    decide_essential,
    find_essential_annulus,
    find_essential_disk,
    get_oracle,
    register_oracle,
    search_longitude,
    search_planar,
    search_punctured_disk,
    slope_set,
    verify_certificate,
)
from normsurf.coords import vertex_link
from normsurf.slopes import boundary_frame


def test_vertex_link_not_essential():
    T = fixture("knot")
    v = vertex_link(T, 0)
    ev = decide_essential(v, T, "assume-essential")
    assert ev.verdict == Verdict.NotEssential


def test_meridian_disk_essential_without_oracle():
    T = fixture("solid-torus")
    ev = decide_essential((1, 0, 0, 1, 1, 0, 0), T)
    assert ev.verdict == Verdict.Essential and ev.oracle_id == "default"


def test_oracle_registry():
    class Never:
        id = "never"
        serial = True
        assumption = "nothing is essential"

        def __call__(self, v, T, sg):
            return Verdict.NotEssential

    register_oracle(Never())
    assert get_oracle("never").id == "never"
    assert isinstance(get_oracle("assume-essential"), AssumeEssentialOracle)
    with pytest.raises(KeyError):
        get_oracle("missing")
    del ORACLES["never"]


def test_disk_searches():
    st = fixture("solid-torus")
    r = find_essential_disk(st, 0)
    assert r.found and verify_certificate(r.certificate, st)
    assert find_essential_disk(fixture("knot"), 0).outcome == "NotFound"


def test_t2xi_annulus():
    T = fixture("t2xi")
    r = find_essential_annulus(T, 0, 1)
    assert r.found
    assert verify_certificate(r.certificate, T)
    assert sorted(s.split("@")[1] for s in r.certificate["slopes"]) == ["B0", "B1"]


def test_solid_torus_planar_stage_zero():
    r = search_planar(fixture("solid-torus"))
    assert r.found and r.certificate["stage"] == 0


def test_knot_planar_needs_oracle():
    T = fixture("knot")
    r = search_planar(T)
    assert r.outcome == "Inconclusive"
    assert any("Unknown" in x for x in r.reasons)
    r2 = search_planar(T, oracle="assume-essential")
    assert r2.found and r2.oracle["id"] == "assume-essential"


def test_punctured_disk_on_t2xi():
    T = fixture("t2xi")
    r = search_punctured_disk(T, 0, boundary_frame(T, 0).slope(1, 0))
    assert r.found and verify_certificate(r.certificate, T)


def test_longitude_of_solid_torus():
    T = fixture("solid-torus")
    r = search_longitude(T, 0, boundary_frame(T, 0).slope(1, 0))
    assert r.found


def test_slope_sets():
    s = slope_set(fixture("solid-torus"), 0)
    assert [str(x) for x in s.slopes] == ["2/-1@B0"] and s.complete
    k = slope_set(fixture("knot"), 0)
    assert k.slopes == [] and k.complete
    t = slope_set(fixture("t2xi"), 0)
    assert not t.complete and t.families


def test_budget_scaling():
    b = SearchBudget(max_rays=10, max_seconds=1.0, max_fillings=2, max_slope_length=5)
    d = b.scaled(2)
    assert (d.max_rays, d.max_seconds, d.max_fillings, d.max_slope_length) == (20, 2.0, 4, 10)


def test_tiny_budget_inconclusive():
    r = search_planar(fixture("t2xi"), budget=SearchBudget(max_rays=5))
    assert r.outcome == "Inconclusive"
    assert any("ResourceBudgetExceeded" in x for x in r.reasons)


def test_report_json_roundtrip():
    import json

    r = search_planar(fixture("solid-torus"))
    data = json.loads(json.dumps(r.to_json()))
    assert data["outcome"] == "Found" and data["oracle"]["id"] == "default"


def test_verify_rejects_tampered():
    T = fixture("solid-torus")
    cert = dict(find_essential_disk(T, 0).certificate)
    cert["euler"] = 0
    assert not verify_certificate(cert, T)
    sg = reconstruct(tuple(find_essential_disk(T, 0).certificate["vector"]), T)
    assert sg.euler == 1
