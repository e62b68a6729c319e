"""Exact sparse linear algebra over Q.

Vectors are dicts ``key -> Fraction`` with no zero entries.  Elimination
never pivots by magnitude (meaningless over Q); among the admissible
entries it picks the one with the smallest numerator+denominator bit
size, which keeps intermediate growth down.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence

Vector = Dict[Hashable, Fraction]


def _size(x: Fraction) -> int:
    return abs(x.numerator).bit_length() + x.denominator.bit_length()


def vadd(a: Vector, b: Vector, c: Fraction = Fraction(1)) -> Vector:
    """a + c*b as a new vector."""
    out = dict(a)
    for k, x in b.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(a: Vector, c: Fraction) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in a.items()}


def iadd(acc: Vector, b: Vector, c: Fraction = Fraction(1)) -> None:
    """acc += c*b in place."""
    if not c:
        return
    for k, x in b.items():
        y = acc.get(k, 0) + c * x
        if y:
            acc[k] = y
        else:
            del acc[k]


class EchelonSpace:
    """Incrementally built subspace kept in reduced row echelon form."""

    def __init__(self):
        self.rows: Dict[Hashable, Vector] = {}   # pivot key -> row (pivot coeff 1)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vector) -> Vector:
        """Remainder of v after eliminating all pivot coordinates."""
        r = dict(v)
        for p in [k for k in r if k in self.rows]:
            c = r.get(p)
            if c:
                iadd(r, self.rows[p], -c)
        return r

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)

    def add(self, v: Vector) -> bool:
        """Insert v; returns True when it enlarged the space."""
        r = self.reduce(v)
        if not r:
            return False
        pivot = min(r, key=lambda k: _size(r[k]))
        r = vscale(r, 1 / r[pivot])
        for q, row in self.rows.items():
            c = row.get(pivot)
            if c:
                iadd(row, r, -c)
        self.rows[pivot] = r
        return True

    def extend(self, vs: Iterable[Vector]) -> int:
        n = 0
        for v in vs:
            n += self.add(v)
        return n

    def coordinates(self, v: Vector) -> Optional[Vector]:
        """Coefficients of v on the row basis (keyed by pivot), or None."""
        r = dict(v)
        coords = {}
        for p, row in self.rows.items():
            c = r.get(p)
            if c:
                coords[p] = c
                iadd(r, row, -c)
        return None if r else coords


def rank(rows: Iterable[Vector]) -> int:
    sp = EchelonSpace()
    sp.extend(rows)
    return sp.rank


def nullspace(columns: Sequence[Vector]) -> List[Dict[int, Fraction]]:
    """Kernel of the linear map whose i-th column is ``columns[i]``.

    Returns basis vectors as dicts ``column index -> coefficient``.
    Elimination runs on the augmented vectors (image | identity tag).
    """
    sp = EchelonSpace()
    kernel = []
    tag = "__col__"
    for i, col in enumerate(columns):
        aug = {("img", k): x for k, x in col.items()}
        aug[(tag, i)] = Fraction(1)
        r = sp.reduce(aug)
        if any(k[0] == "img" for k in r):
            # add with a pivot forced onto the image part
            img = {k: x for k, x in r.items() if k[0] == "img"}
            pivot = min(img, key=lambda k: _size(img[k]))
            r = vscale(r, 1 / r[pivot])
            for row in sp.rows.values():
                c = row.get(pivot)
                if c:
                    iadd(row, r, -c)
            sp.rows[pivot] = r
        else:
            kernel.append({k[1]: x for k, x in r.items()})
    # make kernel vectors independent of later pivots: they already are,
    # each carries its own new tag coordinate i with coefficient 1.
    return kernel


def matrix_rank(m: Sequence[Sequence[Fraction]]) -> int:
    return rank({j: Fraction(x) for j, x in enumerate(row) if x} for row in m)


def solve_square(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> List[Fraction]:
    """Solve m x = b for an invertible square matrix (Gauss-Jordan)."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(m)]
    for col in range(n):
        cands = [r for r in range(col, n) if a[r][col]]
        if not cands:
            raise ZeroDivisionError("singular matrix")
        piv = min(cands, key=lambda r: _size(a[r][col]))
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        cands = [r for r in range(col, n) if a[r][col]]
        if not cands:
            return Fraction(0)
        piv = min(cands, key=lambda r: _size(a[r][col]))
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det
