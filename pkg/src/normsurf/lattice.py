"""Exact integer linear algebra used by the cone machinery.

Everything here works on Python integers or ``fractions.Fraction``; nothing
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    nrows = len(m)
    r = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        pc = pr[c]
        for i in range(r + 1, nrows):
            row = m[i]
            ic = row[c]
            if ic:
                for j in range(c + 1, ncols):
                    row[j] = (pc * row[j] - ic * pr[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (pc * row[j]) // prev
            row[c] = 0
        prev = pc
        r += 1
        if r == nrows:
            break
    return r


def rref(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals plus the pivot columns."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A basis of the lattice {x in Z^n : A x = 0}.

    Column operations on the stacked matrix [A; I] bring A to echelon form;
    columns whose A part vanishes span the kernel lattice because the
    operations are unimodular.
    """
    m = len(rows)
    cols = [[rows[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(ncols)] for j in range(ncols)]
    piv = 0
    for i in range(m):
        if piv >= ncols:
            break
        while True:
            nz = [j for j in range(piv, ncols) if cols[j][i] != 0]
            if not nz:
                break
            best = min(nz, key=lambda j: abs(cols[j][i]))
            cols[piv], cols[best] = cols[best], cols[piv]
            done = True
            p = cols[piv][i]
            for j in range(piv + 1, ncols):
                x = cols[j][i]
                if x:
                    q = x // p
                    cj, cp = cols[j], cols[piv]
                    for k in range(m + ncols):
                        cj[k] -= q * cp[k]
                    if cj[i]:
                        done = False
            if done:
                piv += 1
                break
    basis = [c[m:] for c in cols[piv:]]
    return basis


def solve_square(matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction]:
    """Solve a nonsingular square system exactly."""
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c] != 0)
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def inverse(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(matrix)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


class LatticeCoordinates:
    """Integer coordinates with respect to a fixed lattice basis (the rows
    of ``basis``).  The coordinate columns and the inverse are computed once
    and reused for every vector."""

    def __init__(self, basis: Sequence[Sequence[int]]):
        self.basis = [list(b) for b in basis]
        d = len(self.basis)
        n = len(self.basis[0]) if d else 0
        cols: list[int] = []
        for j in range(n):
            trial = cols + [j]
            if rank([[self.basis[i][c] for c in trial] for i in range(d)]) == len(trial):
                cols = trial
                if len(cols) == d:
                    break
        self.cols = cols
        mat = [[self.basis[i][c] for i in range(d)] for c in cols]
        inv = inverse(mat) if d else []
        self.den = 1
        for row in inv:
            for x in row:
                self.den = self.den * x.denominator // gcd(self.den, x.denominator)
        self.inv = [[int(x * self.den) for x in row] for row in inv]

    def __call__(self, vec: Sequence[int]) -> list[int]:
        d = len(self.basis)
        rhs = [vec[c] for c in self.cols]
        out = []
        for row in self.inv:
            num = sum(a * b for a, b in zip(row, rhs))
            if num % self.den:
                raise ValueError("vector is not in the lattice")
            out.append(num // self.den)
        for j in range(len(vec)):
            if sum(out[i] * self.basis[i][j] for i in range(d)) != vec[j]:
                raise ValueError("vector is not in the span")
        return out


def coordinates_in_basis(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> list[int]:
    """Integer coordinates of ``vec`` in the lattice basis (rows of ``basis``).

    Raises ValueError if ``vec`` is not in the lattice.
    """
    return LatticeCoordinates(basis)(vec)


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(r) for r in matrix]
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return sign * m[n - 1][n - 1]
