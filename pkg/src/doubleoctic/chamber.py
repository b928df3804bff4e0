"""Cylindrical decomposition of an affine arrangement into polyhedral cells.

After a projective change of coordinates the eight planes are split into
vertical planes (no z term, traced as lines in the (x, y)-plane) and graphs
z = f_i(x, y).  Bounded faces of the projected line arrangement carry stacks
of cells between consecutive graphs; a cell is *closed* when every wall of its
prism lies on an arrangement plane.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from . import _exact
from ._exact import sign
from .arrangement import Arrangement, Census, incidence_census

__all__ = [
    "ChartError",
    "Chart",
    "AffineForm",
    "AffineArrangement",
    "Line2D",
    "Region2D",
    "Cell3D",
    "PolyhedralCycle",
    "apply_chart",
    "p4_images",
    "FourfoldImage",
    "fourfold_images",
    "plane_relation",
    "local_weight",
    "project_lines",
    "bounded_faces",
    "stack_cells",
    "cells_of",
    "closure_contains",
    "incidence_matrix",
    "integer_kernel",
    "polyhedral_cycles",
    "Chamber",
    "chambers_of",
    "chamber_closure_contains",
    "candidate_charts",
]

Point2 = tuple[Fraction, Fraction]
Point3 = tuple[Fraction, Fraction, Fraction]


class ChartError(ValueError):
    pass


# ---------------------------------------------------------------------------
# charts

@dataclass(frozen=True)
class Chart:
    """Substitution ``old = matrix @ new`` followed by setting ``new[affine_coordinate] = 1``."""

    matrix: tuple[tuple[Fraction, ...], ...]
    affine_coordinate: int = 3
    name: str = ""

    def __post_init__(self):
        if _exact.det(self.matrix) == 0:
            raise ChartError("chart matrix is not invertible")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], affine_coordinate: int = 3,
                    name: str = "") -> "Chart":
        mat = tuple(tuple(Fraction(v) for v in r) for r in rows)
        if len(mat) != 4 or any(len(r) != 4 for r in mat):
            raise ChartError("chart matrix must be 4x4")
        return cls(mat, affine_coordinate, name)

    @classmethod
    def identity(cls) -> "Chart":
        return cls.from_matrix([[int(i == j) for j in range(4)] for i in range(4)], name="id")

    @classmethod
    def substitution(cls, text: str) -> "Chart":
        """Parse substitutions such as ``"t -> t - x"`` (several separated by ``;`` or ``,``)."""
        from ._parser import _Parser

        rows = [[int(i == j) for j in range(4)] for i in range(4)]
        for part in re.split(r"[;,]", text):
            if not part.strip():
                continue
            lhs, arrow, rhs = part.partition("->")
            if not arrow:
                lhs, arrow, rhs = part.partition("↦")
            var = lhs.strip()
            if not arrow or var not in "xyzt" or len(var) != 1:
                raise ChartError(f"cannot parse substitution {part!r}")
            rows["xyzt".index(var)] = list(_Parser(rhs).linear())
        return cls.from_matrix(rows, name=text.strip())

    @property
    def det(self) -> Fraction:
        return _exact.det(self.matrix)

    def inverse(self) -> "Chart":
        return Chart.from_matrix(_exact.inverse(self.matrix), self.affine_coordinate,
                                 f"inv({self.name})")

    def to_new(self, old: Sequence) -> list[Fraction]:
        inv = _exact.inverse(self.matrix)
        return [_exact.dot(r, old) for r in inv]

    def as_lists(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.matrix]


# ---------------------------------------------------------------------------
# affine arrangement

@dataclass(frozen=True)
class AffineForm:
    """a*x + b*y + c*z + d in the affine chart, tagged with its source plane."""

    source: int
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    @property
    def is_constant(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    @property
    def is_vertical(self) -> bool:
        return self.c == 0 and not self.is_constant

    def __call__(self, x, y, z) -> Fraction:
        return self.a * x + self.b * y + self.c * z + self.d

    def graph(self) -> tuple[Fraction, Fraction, Fraction]:
        """(p, q, r) with the plane being z = p*x + q*y + r."""
        return (-self.a / self.c, -self.b / self.c, -self.d / self.c)

    def __str__(self) -> str:
        return _affine_str((self.a, self.b, self.c), self.d, "xyz")


def _affine_str(lin, const, names) -> str:
    parts = []
    for c, v in zip(lin, names):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(("-" if c < 0 else "+") + mag + v)
    if const != 0 or not parts:
        parts.append(("-" if const < 0 else "+") + str(abs(const)))
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class AffineArrangement:
    forms: tuple[AffineForm, ...]
    lam: Fraction
    chart: Chart
    label: str = ""
    table_lambda: Fraction = Fraction(1)

    @property
    def vertical(self) -> tuple[int, ...]:
        return tuple(f.source for f in self.forms if f.is_vertical)

    @property
    def graphs(self) -> tuple[int, ...]:
        return tuple(f.source for f in self.forms if f.c != 0)

    @property
    def excluded(self) -> tuple[int, ...]:
        return tuple(f.source for f in self.forms if f.is_constant)

    @property
    def constant(self) -> Fraction:
        """lambda times the values of the planes sent to infinity."""
        c = self.lam
        for i in self.excluded:
            c *= self.forms[i].d
        return c

    @property
    def volume_factor(self) -> Fraction:
        """|det| of the substitution; periods in this chart are multiplied by it."""
        return abs(self.chart.det)

    def octic(self, x, y, z) -> Fraction:
        v = self.lam
        for f in self.forms:
            v *= f(x, y, z)
        return v

    def equation(self) -> str:
        """Product of the non-constant affine factors, e.g. ``x*y*z*(1-x)*...``."""
        out = []
        for f in self.forms:
            if f.is_constant:
                continue
            s = str(f)
            out.append(s if re.fullmatch(r"[xyz]", s) else f"({s})")
        return "".join(out)


def apply_chart(arr: Arrangement, chart: Chart) -> AffineArrangement:
    """Substitute old = M @ new into every form and dehomogenize."""
    k = chart.affine_coordinate
    keep = [i for i in range(4) if i != k]
    forms = []
    for idx, lf in enumerate(arr.forms):
        row = _exact.vecmat(lf.coeffs, chart.matrix)
        a, b, c = (row[i] for i in keep)
        forms.append(AffineForm(idx, a, b, c, row[k]))
    return AffineArrangement(tuple(forms), arr.constant, chart, arr.label, arr.lam)


def p4_images(arr: Arrangement, chart: Chart, census: Census | None = None
              ) -> list[tuple[tuple[Fraction, ...], bool]]:
    """Images of the generic fourfold points; affine coordinates unless at infinity."""
    return [(f.coords, f.at_infinity) for f in fourfold_images(arr, chart, census)]


@dataclass(frozen=True)
class FourfoldImage:
    """A generic fourfold point seen in a chart.

    ``relation`` holds the coprime integers c with sum c_i L_i = 0 over the
    four planes through the point; its sign is fixed by the first entry.
    """

    coords: tuple[Fraction, ...]
    planes: tuple[int, ...]
    relation: tuple[int, ...]
    at_infinity: bool


def plane_relation(arr: Arrangement, planes: Sequence[int]) -> tuple[int, ...]:
    cols = [arr.forms[i].coeffs for i in planes]
    ker = _exact.nullspace([[c[k] for c in cols] for k in range(4)])
    if len(ker) != 1 or any(v == 0 for v in ker[0]):
        raise ValueError(f"planes {tuple(planes)} do not meet in a generic fourfold point")
    return tuple(_exact.primitive(ker[0]))


def fourfold_images(arr: Arrangement, chart: Chart, census: Census | None = None
                    ) -> list[FourfoldImage]:
    census = census or incidence_census(arr)
    inv = _exact.inverse(chart.matrix)
    k = chart.affine_coordinate
    out = []
    for p in census.generic_fourfold_points():
        planes = tuple(sorted(p.planes))
        rel = plane_relation(arr, planes)
        new = [_exact.dot(r, p.coords) for r in inv]
        if new[k] == 0:
            out.append(FourfoldImage(tuple(Fraction(v) for v in _exact.primitive(new)),
                                     planes, rel, True))
        else:
            out.append(FourfoldImage(tuple(new[i] / new[k] for i in range(4) if i != k),
                                     planes, rel, False))
    return out


# ---------------------------------------------------------------------------
# projected lines and faces

@dataclass(frozen=True)
class Line2D:
    """a*x + b*y + c = 0 with coprime integer (a, b, c), first nonzero positive."""

    a: int
    b: int
    c: int
    sources: frozenset = field(default=frozenset(), compare=False)

    @classmethod
    def make(cls, a, b, c, sources=()) -> "Line2D":
        prim = _exact.primitive((a, b, c))
        return cls(*prim, frozenset(sources))

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __call__(self, p: Sequence) -> Fraction:
        return self.a * p[0] + self.b * p[1] + self.c

    def __str__(self) -> str:
        lhs = _affine_str((self.a, self.b), 0, "xy")
        return f"{lhs}={-self.c}"


def _graph_diff_line(fi: AffineForm, fj: AffineForm) -> Line2D | None:
    pi, qi, ri = fi.graph()
    pj, qj, rj = fj.graph()
    if pi == pj and qi == qj:
        return None
    return Line2D.make(pi - pj, qi - qj, ri - rj)


def project_lines(aff: AffineArrangement) -> list[Line2D]:
    """Traces of vertical planes and projections of graph-graph intersections, merged."""
    merged: dict[tuple, set] = {}
    for i in aff.vertical:
        f = aff.forms[i]
        ln = Line2D.make(f.a, f.b, f.d)
        merged.setdefault(ln.key, set()).add(("v", i))
    for i, j in itertools.combinations(aff.graphs, 2):
        ln = _graph_diff_line(aff.forms[i], aff.forms[j])
        if ln is not None:
            merged.setdefault(ln.key, set()).add(("g", i, j))
    return [Line2D(*k, frozenset(s)) for k, s in sorted(merged.items())]


def _intersect(l1: Line2D, l2: Line2D) -> Point2 | None:
    d = l1.a * l2.b - l2.a * l1.b
    if d == 0:
        return None
    x = Fraction(l1.b * l2.c - l2.b * l1.c, d)
    y = Fraction(l2.a * l1.c - l1.a * l2.c, d)
    return (x, y)


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    cross = u[0] * v[1] - u[1] * v[0]
    return -sign(cross)


@dataclass(frozen=True)
class Region2D:
    sign_vector: tuple[int, ...]
    vertices: tuple[Point2, ...]
    edges: tuple[Line2D, ...]
    bounded: bool = True

    def centroid(self) -> Point2:
        n = len(self.vertices)
        return (sum(v[0] for v in self.vertices) / n, sum(v[1] for v in self.vertices) / n)

    def area(self) -> Fraction:
        s = Fraction(0)
        vs = self.vertices
        for p, q in zip(vs, vs[1:] + vs[:1]):
            s += p[0] * q[1] - q[0] * p[1]
        return s / 2

    def interior_points(self, count: int) -> list[Point2]:
        """Deterministic rational points strictly inside the polygon."""
        c = self.centroid()
        pts = [c]
        vs = self.vertices
        k = 0
        while len(pts) < count:
            v = vs[k % len(vs)]
            w = vs[(k + 1) % len(vs)]
            t = Fraction(1, 2 + k // len(vs))
            s = Fraction(1, 3 + (k * 7) % 5)
            edge_pt = (v[0] + s * (w[0] - v[0]), v[1] + s * (w[1] - v[1]))
            pts.append((c[0] + (1 - t) * (edge_pt[0] - c[0]),
                        c[1] + (1 - t) * (edge_pt[1] - c[1])))
            k += 1
        return pts

    def contains_closed(self, p: Sequence) -> bool:
        n = len(self.vertices)
        for i in range(n):
            v, w = self.vertices[i], self.vertices[(i + 1) % n]
            if (w[0] - v[0]) * (p[1] - v[1]) - (w[1] - v[1]) * (p[0] - v[0]) < 0:
                return False
        return True


def _face_from_signs(lines: Sequence[Line2D], signs: tuple[int, ...],
                     candidates: Iterable[Point2]) -> Region2D | None:
    for ln, s in zip(lines, signs):
        d1 = (ln.b, -ln.a)
        for d in (d1, (-d1[0], -d1[1])):
            if all(s2 * (l2.a * d[0] + l2.b * d[1]) >= 0 for l2, s2 in zip(lines, signs)):
                return None  # recession direction: unbounded face
    verts = {p for p in candidates
             if all(s * ln(p) >= 0 for ln, s in zip(lines, signs))}
    if len(verts) < 3:
        return None
    n = len(verts)
    cx = sum(p[0] for p in verts) / n
    cy = sum(p[1] for p in verts) / n
    ordered = sorted(verts, key=cmp_to_key(
        lambda p, q: _angle_cmp((p[0] - cx, p[1] - cy), (q[0] - cx, q[1] - cy))))
    # drop vertices that are not corners (collinear with neighbours)
    corners = []
    for i, p in enumerate(ordered):
        a, b = ordered[i - 1], ordered[(i + 1) % n]
        if (p[0] - a[0]) * (b[1] - a[1]) - (p[1] - a[1]) * (b[0] - a[0]) != 0:
            corners.append(p)
    if len(corners) < 3:
        return None
    edges = []
    for p, q in zip(corners, corners[1:] + corners[:1]):
        ln = next(ln for ln in lines if ln(p) == 0 and ln(q) == 0)
        edges.append(ln)
    return Region2D(signs, tuple(corners), tuple(edges), True)


def bounded_faces(lines: Sequence[Line2D]) -> list[Region2D]:
    """All bounded faces of a line arrangement, exact, sorted by sign vector."""
    lines = list(lines)
    vertices: dict[Point2, list[int]] = {}
    for i, j in itertools.combinations(range(len(lines)), 2):
        p = _intersect(lines[i], lines[j])
        if p is not None:
            vertices.setdefault(p, [])
    for p in vertices:
        vertices[p] = [k for k, ln in enumerate(lines) if ln(p) == 0]

    signs_seen: set[tuple[int, ...]] = set()
    for p, through in vertices.items():
        rays = []
        for k in through:
            d = (Fraction(lines[k].b), Fraction(-lines[k].a))
            rays += [d, (-d[0], -d[1])]
        rays.sort(key=cmp_to_key(_angle_cmp))
        for r1, r2 in zip(rays, rays[1:] + rays[:1]):
            direction = (r1[0] + r2[0], r1[1] + r2[1])
            sv = []
            for k, ln in enumerate(lines):
                val = ln(p)
                if val == 0:
                    val = ln.a * direction[0] + ln.b * direction[1]
                sv.append(sign(val))
            signs_seen.add(tuple(sv))

    faces = []
    for sv in sorted(signs_seen):
        face = _face_from_signs(lines, sv, vertices.keys())
        if face is not None:
            faces.append(face)
    return faces


# ---------------------------------------------------------------------------
# cells

@dataclass(frozen=True)
class Cell3D:
    region: Region2D
    lower: int
    upper: int
    sign_vector: tuple[int, ...]
    f_sign: int
    closed: bool

    def sheet_values(self, aff: AffineArrangement, p: Sequence) -> tuple[Fraction, Fraction]:
        lo = aff.forms[self.lower].graph()
        hi = aff.forms[self.upper].graph()
        return (lo[0] * p[0] + lo[1] * p[1] + lo[2], hi[0] * p[0] + hi[1] * p[1] + hi[2])

    def interior_points(self, aff: AffineArrangement, count: int) -> list[Point3]:
        pts = []
        for k, p in enumerate(self.region.interior_points(count)):
            lo, hi = self.sheet_values(aff, p)
            t = Fraction(1, 2) if k == 0 else Fraction(1, 3 + k % 4)
            pts.append((p[0], p[1], lo + t * (hi - lo)))
        return pts

    def vertices(self, aff: AffineArrangement) -> list[Point3]:
        out = []
        for p in self.region.vertices:
            lo, hi = self.sheet_values(aff, p)
            out.append((p[0], p[1], lo))
            if hi != lo:
                out.append((p[0], p[1], hi))
        return out

    def volume(self, aff: AffineArrangement) -> Fraction:
        """Exact volume: integral of (upper - lower) over the polygon."""
        vs = self.region.vertices
        c = vs[0]
        vol = Fraction(0)
        for p, q in zip(vs[1:], vs[2:]):
            area = ((p[0] - c[0]) * (q[1] - c[1]) - (q[0] - c[0]) * (p[1] - c[1])) / 2
            hs = [h - l for l, h in (self.sheet_values(aff, v) for v in (c, p, q))]
            vol += area * sum(hs) / 3
        return vol

    @property
    def key(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.sign_vector) + \
            f":{self.lower}<{self.upper}"


def _sign_vector(aff: AffineArrangement, p: Point3) -> tuple[int, ...]:
    return tuple(sign(f(*p)) for f in aff.forms)


def stack_cells(aff: AffineArrangement, region: Region2D,
                samples: int = 3) -> list[Cell3D]:
    """Cells between consecutive graph sheets over a bounded face."""
    c = region.centroid()
    graphs = aff.graphs
    if len(graphs) < 2:
        return []

    def height(i, p):
        g = aff.forms[i].graph()
        return g[0] * p[0] + g[1] * p[1] + g[2]

    order = sorted(graphs, key=lambda i: height(i, c))
    vertical_keys = {Line2D.make(aff.forms[i].a, aff.forms[i].b, aff.forms[i].d).key
                     for i in aff.vertical}
    cells = []
    for lo, hi in zip(order, order[1:]):
        crossing = _graph_diff_line(aff.forms[lo], aff.forms[hi])
        closed = all(e.key in vertical_keys or (crossing is not None and e.key == crossing.key)
                     for e in region.edges)
        probe = Cell3D(region, lo, hi, (), 0, closed)
        pts = probe.interior_points(aff, max(samples, 3))
        svs = {_sign_vector(aff, p) for p in pts}
        if len(svs) != 1 or 0 in next(iter(svs)):
            raise AssertionError(f"sign vector not constant on cell over {region.sign_vector}")
        sv = svs.pop()
        f_sign = sign(aff.lam)
        for s in sv:
            f_sign *= s
        for p in pts:
            assert sign(aff.octic(*p)) == f_sign
        cells.append(Cell3D(region, lo, hi, sv, f_sign, closed))
    return cells


def cells_of(aff: AffineArrangement) -> list[Cell3D]:
    cells = []
    for region in bounded_faces(project_lines(aff)):
        cells.extend(stack_cells(aff, region))
    return cells


def closure_contains(cell: Cell3D, aff: AffineArrangement, p: Sequence) -> bool:
    if not cell.region.contains_closed(p):
        return False
    lo, hi = cell.sheet_values(aff, p)
    return lo <= p[2] <= hi


# ---------------------------------------------------------------------------
# chambers assembled from prisms

@dataclass(frozen=True)
class Chamber:
    """A bounded chamber of the affine arrangement as a union of prisms.

    A closed prism is a chamber on its own; otherwise the prisms sharing one
    sign vector are glued across their open walls.
    """

    sign_vector: tuple[int, ...]
    prisms: tuple[Cell3D, ...]
    f_sign: int

    @property
    def key(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.sign_vector)

    @property
    def closed(self) -> bool:
        return True

    def volume(self, aff: AffineArrangement) -> Fraction:
        return sum((c.volume(aff) for c in self.prisms), Fraction(0))


def _recession_free(aff: AffineArrangement, sv: Sequence[int]) -> bool:
    """True iff {d : s_i (a_i, b_i, c_i) . d >= 0 for all i} is {0}."""
    normals = [(s * f.a, s * f.b, s * f.c) for f, s in zip(aff.forms, sv) if not f.is_constant]
    if _exact.rank(normals) < 3:
        return False
    for n1, n2 in itertools.combinations(normals, 2):
        d = (n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2],
             n1[0] * n2[1] - n1[1] * n2[0])
        if not any(d):
            continue
        for dd in (d, tuple(-v for v in d)):
            if all(n[0] * dd[0] + n[1] * dd[1] + n[2] * dd[2] >= 0 for n in normals):
                return False
    return True


def chambers_of(aff: AffineArrangement, cells: Sequence[Cell3D] | None = None) -> list[Chamber]:
    """Bounded chambers, each as the union of its prisms over bounded faces."""
    cells = cells_of(aff) if cells is None else cells
    groups: dict[tuple[int, ...], list[Cell3D]] = {}
    for c in cells:
        groups.setdefault(c.sign_vector, []).append(c)
    out = []
    for sv in sorted(groups):
        prisms = groups[sv]
        if len(prisms) == 1 and prisms[0].closed:
            out.append(Chamber(sv, tuple(prisms), prisms[0].f_sign))
        elif _recession_free(aff, sv):
            out.append(Chamber(sv, tuple(prisms), prisms[0].f_sign))
    return out


def chamber_closure_contains(ch: Chamber, aff: AffineArrangement, p: Sequence) -> bool:
    return all(s * f(*p) >= 0 for f, s in zip(aff.forms, ch.sign_vector))


# ---------------------------------------------------------------------------
# polyhedral cycles

@dataclass(frozen=True)
class PolyhedralCycle:
    terms: tuple[tuple[int, int], ...]  # (cell index, coefficient)
    incidence_ok: bool

    @property
    def is_singleton(self) -> bool:
        return len(self.terms) == 1 and abs(self.terms[0][1]) == 1


def local_weight(signs: Sequence[int], point: FourfoldImage) -> int:
    """Boundary multiplicity of a chamber at a fourfold point in its closure.

    With t_i = c_i s_i over the four planes through the point, the local cone
    is a triangle when one t_i disagrees with the other three and a
    quadrilateral on a 2+2 split.  Triangles count with the majority sign,
    quadrilaterals not at all.
    """
    total = sum(_exact.sign(c) * signs[i] for c, i in zip(point.relation, point.planes))
    if total in (4, -4):
        raise ValueError("empty local cone")
    return total // 2


WEIGHTINGS = ("local", "closure")


def incidence_matrix(cells: Sequence[Cell3D | Chamber], aff: AffineArrangement,
                     points: Sequence, weighting: str = "closure") -> list[list[int]]:
    """Rows are points, columns cells.

    ``closure`` puts 1 wherever the point lies in the closure of the cell;
    ``local`` replaces that 1 by :func:`local_weight` and needs
    :class:`FourfoldImage` points.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}")

    def inside(c, p):
        if isinstance(c, Chamber):
            return chamber_closure_contains(c, aff, p)
        return closure_contains(c, aff, p)

    rows = []
    for p in points:
        coords = p.coords if isinstance(p, FourfoldImage) else p
        if isinstance(p, FourfoldImage) and p.at_infinity:
            continue
        row = []
        for c in cells:
            if not inside(c, coords):
                row.append(0)
            elif weighting == "closure":
                row.append(1)
            else:
                if not isinstance(p, FourfoldImage):
                    raise TypeError("local weighting needs FourfoldImage points")
                row.append(local_weight(c.sign_vector, p))
        rows.append(row)
    return rows


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis of the integer kernel via unimodular column reduction (Hermite form)."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    a = [list(r) for r in matrix]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # columns track ops

    def colop(dst, src, k):  # col[dst] -= k * col[src]
        for r in a:
            r[dst] -= k * r[src]
        for r in u:
            r[dst] -= k * r[src]

    def swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    piv = 0
    for row in range(len(a)):
        if piv >= ncols:
            break
        while True:
            nz = [c for c in range(piv, ncols) if a[row][c] != 0]
            if not nz:
                break
            m = min(nz, key=lambda c: abs(a[row][c]))
            swap(piv, m)
            done = True
            for c in range(piv + 1, ncols):
                if a[row][c]:
                    colop(c, piv, a[row][c] // a[row][piv])
                    if a[row][c]:
                        done = False
            if done:
                piv += 1
                break
    return [[u[r][c] for r in range(ncols)] for c in range(piv, ncols)]


def polyhedral_cycles(cells: Sequence[Cell3D | Chamber], aff: AffineArrangement,
                      points: Sequence, weighting: str = "closure") -> list[PolyhedralCycle]:
    """Integer combinations of cells whose incidence sums vanish at every point.

    Cells with an all-zero column come out as singleton cycles; the remaining
    kernel is computed on the incident columns only.
    """
    mat = incidence_matrix(cells, aff, points, weighting)
    n = len(cells)
    free = [j for j in range(n) if not any(r[j] for r in mat)]
    busy = [j for j in range(n) if j not in free]
    out = [PolyhedralCycle(((j, 1),), True) for j in free]
    if busy:
        sub = [[r[j] for j in busy] for r in mat]
        for vec in integer_kernel(sub, len(busy)):
            terms = tuple((busy[k], v) for k, v in enumerate(vec) if v)
            ok = all(sum(r[j] * v for j, v in terms) == 0 for r in mat)
            out.append(PolyhedralCycle(terms, ok))
    return out


# ---------------------------------------------------------------------------
# chart search

def _complete_unimodular(ell: Sequence[int]) -> list[list[int]]:
    """Integer matrix U with det +-1 and ell @ U = (0, 0, 0, 1); ell primitive."""
    n = len(ell)
    row = list(ell)
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst, src, k):
        row[dst] -= k * row[src]
        for r in u:
            r[dst] -= k * r[src]

    while sum(1 for v in row if v) > 1:
        nz = [i for i in range(n) if row[i]]
        m = min(nz, key=lambda i: abs(row[i]))
        for i in nz:
            if i != m:
                colop(i, m, row[i] // row[m])
    k = next(i for i in range(n) if row[i])
    if row[k] < 0:
        for r in u:
            r[k] = -r[k]
        row[k] = -row[k]
    if row[k] != 1:
        raise ChartError("linear form is not primitive")
    # move column k to the last position
    for r in u:
        r[k], r[n - 1] = r[n - 1], r[k]
    return u


_PERMS = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]


def candidate_charts(arr: Arrangement, census: Census | None = None,
                     projections: int = 3) -> list[Chart]:
    """Charts sending planes through generic fourfold points, then every plane, to infinity.

    Each plane at infinity is tried with several choices of projection axis.
    """
    census = census or incidence_census(arr)
    through_p4: list[int] = []
    for p in census.generic_fourfold_points():
        for i in sorted(p.planes):
            if i not in through_p4:
                through_p4.append(i)
    order = through_p4 + [i for i in range(len(arr.forms)) if i not in through_p4]
    charts = []
    for i in order:
        base = _complete_unimodular(arr.forms[i].coeffs)
        for perm in _PERMS[:projections]:
            cols = [base_col for base_col in zip(*base)]
            new_cols = [cols[perm[0]], cols[perm[1]], cols[perm[2]], cols[3]]
            mat = [list(r) for r in zip(*new_cols)]
            charts.append(Chart.from_matrix(mat, name=f"plane{i}->inf/p{''.join(map(str, perm))}"))
    return charts
