"""Arrangements of eight planes in P^3: parsing, incidence census, Betti numbers."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import _exact
from ._parser import ParseError, parse_product

__all__ = [
    "ArrangementError",
    "ParseError",
    "LinearForm",
    "Arrangement",
    "IncidencePoint",
    "IncidenceLine",
    "Census",
    "BettiData",
    "parse_arrangement",
    "arrangement_from_matrix",
    "incidence_census",
    "betti_relations",
    "betti_data",
    "load_arrangements",
    "dump_arrangement",
]

N_PLANES = 8


class ArrangementError(ValueError):
    """Raised for malformed arrangements (wrong factor count, repeated plane, ...)."""


@dataclass(frozen=True, order=True)
class LinearForm:
    """ax + by + cz + dt, stored as coprime integers with first nonzero entry positive."""

    coeffs: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.coeffs) != 4 or not any(self.coeffs):
            raise ArrangementError(f"invalid linear form {self.coeffs}")
        if _exact.primitive(self.coeffs) != tuple(self.coeffs):
            raise ArrangementError(f"linear form {self.coeffs} is not canonical")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> tuple["LinearForm", Fraction]:
        """Canonicalize; returns the form and the scalar c with coeffs == c * form."""
        prim = _exact.primitive(coeffs)
        return cls(prim), _exact.primitive_scale(coeffs)

    def __call__(self, point: Sequence) -> Fraction:
        return _exact.dot(self.coeffs, point)

    def __str__(self) -> str:
        parts = []
        for c, v in zip(self.coeffs, "xyzt"):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + v)
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


@dataclass(frozen=True)
class Arrangement:
    """Eight planes and the scaling lambda of the octic F = lambda * scale * L_1 ... L_8.

    ``scale`` carries the product of the normalizing constants removed when the
    factors were canonicalized, so F is reproduced exactly as written.
    """

    label: str
    forms: tuple[LinearForm, ...]
    lam: Fraction = Fraction(1)
    scale: Fraction = Fraction(1)
    b2_tilde: int | None = None

    def __post_init__(self):
        if len(self.forms) != N_PLANES:
            raise ArrangementError(f"expected {N_PLANES} planes, got {len(self.forms)}")
        if len(set(self.forms)) != N_PLANES:
            dup = next(f for f in self.forms if self.forms.count(f) > 1)
            raise ArrangementError(f"repeated plane {dup}")
        if self.lam == 0 or self.scale == 0:
            raise ArrangementError("lambda must be nonzero")

    @property
    def constant(self) -> Fraction:
        """lambda * scale: the constant multiplying the product of canonical forms."""
        return self.lam * self.scale

    def octic(self, point: Sequence) -> Fraction:
        value = self.constant
        for f in self.forms:
            value *= f(point)
        return value

    def with_lambda(self, lam) -> "Arrangement":
        return Arrangement(self.label, self.forms, Fraction(lam), self.scale, self.b2_tilde)

    def matrix(self) -> list[tuple[int, int, int, int]]:
        return [f.coeffs for f in self.forms]


@dataclass(frozen=True)
class IncidencePoint:
    coords: tuple[int, int, int, int]
    planes: frozenset[int]
    on_triple_line: bool

    @property
    def multiplicity(self) -> int:
        return len(self.planes)


@dataclass(frozen=True)
class IncidenceLine:
    span: tuple[tuple[int, ...], tuple[int, ...]]
    planes: frozenset[int]

    @property
    def multiplicity(self) -> int:
        return len(self.planes)


@dataclass(frozen=True)
class Census:
    double_lines: int
    triple_lines: int
    points_mult4: int
    points_mult5: int
    p4_generic: int
    admissible: bool
    max_point_multiplicity: int
    max_line_multiplicity: int
    points: tuple[IncidencePoint, ...] = field(repr=False, default=())
    lines: tuple[IncidenceLine, ...] = field(repr=False, default=())

    def generic_fourfold_points(self) -> list[IncidencePoint]:
        return [p for p in self.points if p.multiplicity == 4 and not p.on_triple_line]


@dataclass(frozen=True)
class BettiData:
    b3_hat: int
    b3_tilde: int
    b3_smoothing: int
    p4_generic: int
    b2_tilde: int | None = None


def _build(label: str, raw: Sequence[Sequence], lam) -> Arrangement:
    if len(raw) != N_PLANES:
        raise ArrangementError(f"expected {N_PLANES} linear factors, got {len(raw)}")
    forms, scale = [], Fraction(1)
    for coeffs in raw:
        if not any(coeffs):
            raise ArrangementError("zero linear form")
        form, c = LinearForm.from_coeffs(coeffs)
        forms.append(form)
        scale *= c
    return Arrangement(label, tuple(forms), Fraction(lam), scale)


def parse_arrangement(text: str, lam=1, label: str = "") -> Arrangement:
    """Parse e.g. ``"xyzt(x+y)(y+z)(z+t)(t+x)"`` into an :class:`Arrangement`.

    Raises :class:`ParseError` on syntax errors and :class:`ArrangementError`
    on a factor count other than eight or a repeated plane.
    """
    return _build(label, parse_product(text), lam)


def arrangement_from_matrix(rows: Sequence[Sequence[int]], lam=1, label: str = "") -> Arrangement:
    return _build(label, [tuple(int(v) for v in r) for r in rows], lam)


def _line_points(rows) -> tuple[tuple[int, ...], tuple[int, ...]]:
    basis = _exact.nullspace(rows, 4)
    return tuple(_exact.primitive(b) for b in basis[:2])


def incidence_census(arr: Arrangement) -> Census:
    """Exact census of the multiple lines and points of the arrangement."""
    ells = [f.coeffs for f in arr.forms]
    lines: dict[frozenset, IncidenceLine] = {}
    for i, j in itertools.combinations(range(N_PLANES), 2):
        on = frozenset(k for k in range(N_PLANES)
                       if _exact.rank([ells[i], ells[j], ells[k]]) == 2)
        if on not in lines:
            lines[on] = IncidenceLine(_line_points([ells[i], ells[j]]), on)

    multi_lines = [ln for ln in lines.values() if ln.multiplicity >= 3]
    points: dict[frozenset, tuple[int, ...]] = {}
    for i, j, k in itertools.combinations(range(N_PLANES), 3):
        rows = [ells[i], ells[j], ells[k]]
        if _exact.rank(rows) < 3:
            continue
        p = _exact.primitive(_exact.nullspace(rows, 4)[0])
        on = frozenset(m for m in range(N_PLANES) if _exact.dot(ells[m], p) == 0)
        if len(on) >= 3:
            points.setdefault(on, p)

    stored = tuple(sorted(
        (IncidencePoint(p, on, any(ln.planes <= on for ln in multi_lines))
         for on, p in points.items()),
        key=lambda pt: (sorted(pt.planes), pt.coords)))
    line_list = tuple(sorted(lines.values(), key=lambda ln: sorted(ln.planes)))

    mult = [p.multiplicity for p in stored]
    lmult = [ln.multiplicity for ln in line_list]
    max_p = max(mult, default=0)
    max_l = max(lmult, default=0)
    return Census(
        double_lines=lmult.count(2),
        triple_lines=lmult.count(3),
        points_mult4=mult.count(4),
        points_mult5=mult.count(5),
        p4_generic=sum(1 for p in stored if p.multiplicity == 4 and not p.on_triple_line),
        admissible=max_p <= 5 and max_l <= 3,
        max_point_multiplicity=max_p,
        max_line_multiplicity=max_l,
        points=stored,
        lines=line_list,
    )


def betti_relations(b3_hat: int, b3_tilde: int = 2) -> int:
    """b3 of the smoothing, 2*b3_hat - b3_tilde.

    Follows from the two displayed relations between the small resolution, the
    nodal model and its smoothing once b4 = b2 is used on both sides.
    """
    if b3_tilde < 0 or b3_hat < b3_tilde:
        raise ValueError(f"need b3_hat >= b3_tilde >= 0, got {b3_hat}, {b3_tilde}")
    result = 2 * b3_hat - b3_tilde
    if result < 0:
        raise ValueError("negative Betti number")
    return result


def betti_data(arr: Arrangement, b3_hat: int, census: Census | None = None,
               b3_tilde: int = 2) -> BettiData:
    census = census or incidence_census(arr)
    return BettiData(b3_hat, b3_tilde, betti_relations(b3_hat, b3_tilde),
                     census.p4_generic, arr.b2_tilde)


# ---------------------------------------------------------------------------
# arrangement files

_KEY = re.compile(r"^\s*(\w+)\s*=\s*(.*?)\s*$")


def _parse_record(lines: list[str], source: str) -> Arrangement:
    meta: dict[str, str] = {}
    rows: list[list[int]] = []
    for line in lines:
        m = _KEY.match(line)
        if m:
            meta[m.group(1).lower()] = m.group(2)
        else:
            rows.append([int(v) for v in line.split()])
    label = meta.get("label", "")
    lam = Fraction(meta.get("lambda", "1"))
    if "equation" in meta:
        if rows:
            raise ArrangementError(f"{source}: record {label!r} has both equation and matrix")
        arr = parse_arrangement(meta["equation"], lam, label)
    else:
        if any(len(r) != 4 for r in rows):
            raise ArrangementError(f"{source}: matrix rows must have 4 integers")
        arr = arrangement_from_matrix(rows, lam, label)
    if "b2" in meta:
        arr = Arrangement(arr.label, arr.forms, arr.lam, arr.scale, int(meta["b2"]))
    return arr


def load_arrangements(path: str | Path) -> list[Arrangement]:
    """Read one or more ``label = ...`` records from a plain-text file."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_arrangement_records(text, str(path))


def parse_arrangement_records(text: str, source: str = "<string>") -> list[Arrangement]:
    records: list[list[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _KEY.match(line)
        if m and m.group(1).lower() == "label":
            records.append([])
        if not records:
            raise ArrangementError(f"{source}: record must start with 'label ='")
        records[-1].append(line)
    return [_parse_record(r, source) for r in records]


def dump_arrangement(arr: Arrangement) -> str:
    """Matrix form of an arrangement record (round-trips through load)."""
    out = [f"label = {arr.label}", f"lambda = {arr.constant}"]
    if arr.b2_tilde is not None:
        out.append(f"b2 = {arr.b2_tilde}")
    out += [" ".join(str(c) for c in f.coeffs) for f in arr.forms]
    return "\n".join(out) + "\n"


def iter_arrangements(labels: Iterable[str], pool: Sequence[Arrangement]) -> list[Arrangement]:
    by_label = {a.label: a for a in pool}
    return [by_label[lbl] for lbl in labels]
