"""Map cell slabs onto the unit cube as products of multilinear factors.

A slab ``x0 < x < x1, c(x) < y < d(x), lo(x, y) < z < hi(x, y)`` is sent to
``[0, 1]^3`` by ``x = x0 + (x1 - x0) u``, ``y = c + (d - c) v``,
``z = lo + (hi - lo) w``.  Every affine form and every Jacobian factor is then
multilinear in (u, v, w): eight coefficients indexed by the monomial bitmask
(bit 0: u, bit 1: v, bit 2: w).  Re-expanding around each cube corner lets the
kernel evaluate factors from endpoint offsets without cancellation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .._exact import sign
from ..chamber import AffineArrangement, Cell3D, Line2D

Poly = tuple[Fraction, ...]  # 8 coefficients

U, V, W = 1, 2, 4


def _poly(mapping: dict[int, Fraction] | None = None) -> list[Fraction]:
    p = [Fraction(0)] * 8
    for k, v in (mapping or {}).items():
        p[k] = Fraction(v)
    return p


def _add(*terms: tuple[Fraction, Sequence[Fraction]]) -> list[Fraction]:
    out = [Fraction(0)] * 8
    for c, p in terms:
        for k in range(8):
            out[k] += c * p[k]
    return out


def _times_var(p: Sequence[Fraction], bit: int) -> list[Fraction]:
    out = [Fraction(0)] * 8
    for k in range(8):
        if p[k]:
            if k & bit:
                raise ValueError("product is not multilinear")
            out[k | bit] = p[k]
    return out


def at_corner(p: Sequence[Fraction], corner: int) -> list[Fraction]:
    """Coefficients in the offsets s_i = u_i (corner bit 0) or 1 - u_i (bit 1)."""
    c = list(p)
    for bit in (U, V, W):
        if not corner & bit:
            continue
        new = [Fraction(0)] * 8
        for m in range(8):
            if m & bit:
                new[m ^ bit] += c[m]
                new[m] -= c[m]
            else:
                new[m] += c[m]
        c = new
    return c


def evaluate(p: Sequence, u, v, w):
    return sum(p[m] * (u if m & U else 1) * (v if m & V else 1) * (w if m & W else 1)
               for m in range(8))


@dataclass
class Slab:
    """One x-slab of a cell on the unit cube.

    The integrand is ``scale * prod(numerators) / sqrt(prod(denominators))``
    where every factor is positive in the open cube.
    """

    x0: Fraction
    x1: Fraction
    scale: float
    numerators: list[list[Fraction]]
    denominators: list[list[Fraction]]
    den_sources: list[int]

    def corner_tables(self) -> tuple[np.ndarray, np.ndarray]:
        def table(polys):
            arr = np.zeros((len(polys), 8, 8), dtype=np.float64)
            for i, p in enumerate(polys):
                for corner in range(8):
                    arr[i, corner, :] = [float(c) for c in at_corner(p, corner)]
            return arr

        return table(self.numerators), table(self.denominators)

    def integrand(self, u, v, w) -> float:
        """Direct (non-offset) evaluation, for tests."""
        num = 1.0
        for p in self.numerators:
            num *= float(evaluate(p, u, v, w))
        den = 1.0
        for p in self.denominators:
            den *= float(evaluate(p, u, v, w))
        return self.scale * num / den ** 0.5


def _y_of_x(line: Line2D) -> tuple[Fraction, Fraction]:
    """(slope, intercept) of a non-vertical line a x + b y + c = 0."""
    return Fraction(-line.a, line.b), Fraction(-line.c, line.b)


def _chains(cell: Cell3D, x0: Fraction, x1: Fraction) -> tuple[Line2D, Line2D]:
    xm = (x0 + x1) / 2
    vs = cell.region.vertices
    hits = []
    for k, edge in enumerate(cell.region.edges):
        p, q = vs[k], vs[(k + 1) % len(vs)]
        if edge.b == 0:
            continue
        if min(p[0], q[0]) <= x0 and max(p[0], q[0]) >= x1:
            m, b = _y_of_x(edge)
            hits.append((m * xm + b, edge))
    hits.sort(key=lambda h: h[0])
    if len(hits) != 2:
        raise ValueError(f"slab [{x0}, {x1}] does not meet exactly two edges")
    return hits[0][1], hits[1][1]


def slabs(cell: Cell3D, aff: AffineArrangement) -> list[Slab]:
    """Decompose a bounded cell into x-slabs mapped onto the unit cube."""
    xs = sorted({v[0] for v in cell.region.vertices})
    lo_g = aff.forms[cell.lower].graph()
    hi_g = aff.forms[cell.upper].graph()
    const = aff.constant
    base = 2.0 * float(aff.volume_factor) / abs(float(const)) ** 0.5
    out = []
    for x0, x1 in zip(xs, xs[1:]):
        low_edge, high_edge = _chains(cell, x0, x1)
        X = _poly({0: x0, U: x1 - x0})
        mc, bc = _y_of_x(low_edge)
        md, bd = _y_of_x(high_edge)
        C = _add((mc, X), (bc, _poly({0: 1})))
        D = _add((md, X), (bd, _poly({0: 1})))
        DC = _add((1, D), (-1, C))
        Y = _add((1, C), (1, _times_var(DC, V)))
        one = _poly({0: 1})
        LO = _add((lo_g[0], X), (lo_g[1], Y), (lo_g[2], one))
        HI = _add((hi_g[0], X), (hi_g[1], Y), (hi_g[2], one))
        HL = _add((1, HI), (-1, LO))
        Z = _add((1, LO), (1, _times_var(HL, W)))

        dens, srcs = [], []
        for f in aff.forms:
            if f.is_constant:
                continue
            p = _add((f.a, X), (f.b, Y), (f.c, Z), (f.d, one))
            s = cell.sign_vector[f.source]
            dens.append([s * c for c in p])
            srcs.append(f.source)
        nums = []
        scale = base * float(x1 - x0)
        for p in (DC, HL):
            if any(p[1:]):
                nums.append(list(p))
            else:
                scale *= float(p[0])
        out.append(Slab(x0, x1, scale, nums, dens, srcs))
    return out


def monomial_orders(p: Sequence[Fraction]) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int], list[Fraction]]:
    """Split p = u^a (1-u)^b v^c (1-v)^d w^e (1-w)^f * r with r multilinear.

    Multilinear polynomials vanish to order at most one on each face.
    Returns ((a, b), (c, d), (e, f), r).
    """
    orders = []
    r = list(p)
    for bit in (U, V, W):
        lo = all(r[m] == 0 for m in range(8) if not m & bit)
        # value on the face u_i = 1: sum of coefficients with and without the bit
        hi_face = [r[m] + r[m | bit] if not m & bit else Fraction(0) for m in range(8)]
        hi = all(v == 0 for v in hi_face)
        if lo and hi:
            raise ValueError("polynomial vanishes identically")
        if lo:
            r = [r[m | bit] if not m & bit else Fraction(0) for m in range(8)]
        elif hi:
            # r = (1 - u) * q with q independent of u: q = -coefficient of u
            r = [-r[m | bit] if not m & bit else Fraction(0) for m in range(8)]
        orders.append((int(lo), int(hi)))
    return orders[0], orders[1], orders[2], r


def residual_sign_definite(r: Sequence[Fraction]) -> bool:
    """A multilinear polynomial takes its extrema on cube corners."""
    vals = [evaluate(r, c & U and 1, c & V and 1, c & W and 1) for c in range(8)]
    return all(v > 0 for v in vals) or all(v < 0 for v in vals)


__all__ = ["Slab", "slabs", "at_corner", "evaluate", "monomial_orders",
           "residual_sign_definite", "sign"]
