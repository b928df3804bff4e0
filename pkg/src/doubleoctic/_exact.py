"""Small exact linear-algebra helpers over the rationals."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


def to_fractions(values: Iterable) -> Vec:
    return tuple(Fraction(v) for v in values)


def primitive(values: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, first nonzero entry positive."""
    fr = to_fractions(values)
    if not any(fr):
        raise ValueError("zero vector has no primitive representative")
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    lead = next(v for v in ints if v)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def primitive_scale(values: Sequence) -> Fraction:
    """Return c with values == c * primitive(values)."""
    prim = primitive(values)
    k = next(i for i, v in enumerate(prim) if v)
    return Fraction(values[k]) / prim[k]


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : rows . v = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det(mat: Sequence[Sequence]) -> Fraction:
    m = [list(map(Fraction, r)) for r in mat]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def inverse(mat: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(mat)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[dot(row, col) for col in zip(*b)] for row in a]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list[Fraction]:
    """Row vector times matrix."""
    return [dot(v, col) for col in zip(*m)]


def sign(x) -> int:
    return (x > 0) - (x < 0)
