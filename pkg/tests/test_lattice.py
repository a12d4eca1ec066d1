import pytest
from hypothesis import given
from hypothesis import strategies as st

from normsurf.lattice import (
    LatticeCoordinates,
    coordinates_in_basis,
    determinant,
    integer_kernel,
    primitive,
    rank,
)

small = st.integers(-4, 4)


@given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=4))
def test_kernel_is_kernel(rows):
    ker = integer_kernel(rows, 5)
    assert len(ker) == 5 - rank(rows)
    for k in ker:
        assert all(sum(a * b for a, b in zip(r, k)) == 0 for r in rows)


@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=2, max_size=2))
def test_coordinates_roundtrip(extra, coeffs):
    basis = [[1, 0, 2] + extra[:1], [0, 1, -1] + extra[1:2]]
    vec = [coeffs[0] * a + coeffs[1] * b for a, b in zip(*basis)]
    assert coordinates_in_basis(basis, vec) == coeffs
    lc = LatticeCoordinates(basis)
    assert lc(vec) == coeffs


def test_not_in_lattice():
    lc = LatticeCoordinates([[2, 0], [0, 2]])
    with pytest.raises(ValueError):
        lc([1, 0])
    with pytest.raises(ValueError):
        LatticeCoordinates([[1, 0, 0]])([0, 1, 0])


def test_determinant_and_primitive():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert primitive((4, 6, 0)) == (2, 3, 0)
