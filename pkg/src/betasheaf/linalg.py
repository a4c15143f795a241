"""Small exact linear algebra over Q (rows are sequences of Fractions)."""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; returns (non-zero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


class Span:
    """Row space with fast membership tests."""

    def __init__(self, ncols: int, rows: Sequence[Sequence] = ()):
        self.ncols = ncols
        self.rows: List[List[Fraction]] = []
        self.pivots: List[int] = []
        for r in rows:
            self.add(r)

    def reduce(self, v: Sequence) -> List[Fraction]:
        v = [Fraction(x) for x in v]
        for row, c in zip(self.rows, self.pivots):
            if v[c] != 0:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence) -> bool:
        w = self.reduce(v)
        c = next((i for i, x in enumerate(w) if x != 0), None)
        if c is None:
            return False
        inv = 1 / w[c]
        w = [x * inv for x in w]
        # keep rows fully reduced against the new pivot
        self.rows = [[a - r[c] * b for a, b in zip(r, w)] if r[c] != 0 else r for r in self.rows]
        self.rows.append(w)
        self.pivots.append(c)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> List[Vector]:
        order = sorted(range(len(self.rows)), key=lambda i: self.pivots[i])
        return [tuple(self.rows[i]) for i in order]


def intersect(a: "Span", b: "Span") -> "Span":
    """Intersection of two row spaces via the kernel of [A; -B]."""
    n = a.ncols
    if a.dim == 0 or b.dim == 0:
        return Span(n)
    rows_a, rows_b = a.basis(), b.basis()
    # solve sum x_i a_i = sum y_j b_j
    cols = len(rows_a) + len(rows_b)
    mat = [[rows_a[i][c] for i in range(len(rows_a))] + [-rows_b[j][c] for j in range(len(rows_b))]
           for c in range(n)]
    kern = nullspace(mat, cols)
    out = Span(n)
    for k in kern:
        vec = [sum(k[i] * rows_a[i][c] for i in range(len(rows_a))) for c in range(n)]
        out.add(vec)
    return out


def nullspace(mat: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    rows, piv = rref(mat) if mat else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(rows, piv):
            v[c] = -row[f]
        out.append(v)
    return out


def solve(mat: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One solution of ``mat @ x = rhs`` or None."""
    if not mat:
        return [] if not any(rhs) else None
    ncols = len(mat[0])
    aug = [list(r) + [b] for r, b in zip(mat, rhs)]
    rows, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(rows, piv):
        x[c] = row[ncols]
    return x
