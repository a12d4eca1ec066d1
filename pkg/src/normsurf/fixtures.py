"""Bundled triangulations used by tests, benchmarks and the CLI."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from .triangulation import Triangulation, mobius_layering, unglued_tetrahedron


def _data(name: str) -> Triangulation:
    text = resources.files("normsurf").joinpath("data").joinpath(f"{name}.json").read_text()
    return Triangulation.from_json(json.loads(text))


def _lst(weights):
    def build():
        from .filling import build_lst

        return build_lst(weights).triangulation

    return build


FIXTURES: dict[str, tuple[Callable[[], Triangulation], str]] = {
    "unglued-tet": (unglued_tetrahedron, "single tetrahedron, no gluings"),
    "solid-torus": (lambda: mobius_layering("interior"), "one-tetrahedron solid torus"),
    "creased-cell": (lambda: mobius_layering("boundary"), "one tetrahedron folded along a boundary face"),
    "lst-1-1-2": (_lst((1, 1, 2)), "two-tetrahedron layered solid torus"),
    "lst-2-3-5": (_lst((2, 3, 5)), "layered solid torus, meridian weights (2,3,5)"),
    "lst-3-5-8": (_lst((3, 5, 8)), "layered solid torus, meridian weights (3,5,8)"),
    "knot-3tet": (lambda: _data("knot_3tet"), "0-efficient one-vertex knot-manifold, 3 tetrahedra"),
    "knot": (lambda: _data("knot_4tet"), "0-efficient one-vertex knot-manifold, 4 tetrahedra"),
    "t2xi": (lambda: _data("t2xi_10tet"), "torus times interval, two one-vertex torus boundaries"),
}


@lru_cache(maxsize=None)
def fixture(name: str) -> Triangulation:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return FIXTURES[name][0]()


def small_fixtures(max_tets: int = 2) -> dict[str, Triangulation]:
    out = {}
    for name in FIXTURES:
        T = fixture(name)
        if T.tet_count <= max_tets:
            out[name] = T
    return out


def load_triangulation(source: str) -> Triangulation:
    """A fixture name, or a path to a JSON gluing table."""
    if source in FIXTURES:
        return fixture(source)
    path = Path(source)
    with path.open() as fh:
        return Triangulation.from_json(json.load(fh))
