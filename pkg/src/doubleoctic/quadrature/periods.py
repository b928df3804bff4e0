"""Cell periods and their cross-checks.

Two normalizations are supported.  ``table`` returns iiint_C |F / lambda|^(-1/2)
(this is what the published tables list), ``cover`` returns the double cover
period 2 iiint_C |lambda F|^(-1/2).  Both obey the same scaling law in the
integrated octic and coincide when |lambda| = 2.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

import numpy as np

from ..chamber import AffineArrangement, Cell3D, Chamber
from . import cube
from .rules import OFFSET_FLOOR, tanh_sinh_grid

REAL = "real"
IMAGINARY = "imaginary"
CONVENTIONS = ("table", "cover")


class QuadratureError(RuntimeError):
    """Tolerance not reached within the node budget; carries the best estimate."""

    def __init__(self, message: str, estimate: float = math.nan, rel_err: float = math.inf):
        super().__init__(message)
        self.estimate = estimate
        self.rel_err = rel_err


class InvalidCellError(ValueError):
    """The integrand changed sign inside the cell."""


@dataclass(frozen=True)
class QuadratureSettings:
    tol: float = 1e-10
    budget: int = 1 << 30
    min_level: int = 3
    max_level: int = 7
    offset_floor: float = OFFSET_FLOOR
    convention: str = "table"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")

    def with_tol(self, tol: float) -> "QuadratureSettings":
        return replace(self, tol=tol)

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class PeriodValue:
    value: float
    axis: str
    est_rel_err: float
    cell_ref: str = ""
    settings: QuadratureSettings = field(default_factory=QuadratureSettings)
    evaluations: int = 0

    @property
    def complex_value(self) -> complex:
        return complex(self.value, 0) if self.axis == REAL else complex(0, self.value)


def _backend():
    from . import cube_sums

    return cube_sums


def integrate_slab(slab: cube.Slab, settings: QuadratureSettings, cube_sums=None,
                   budget: int | None = None) -> tuple[float, float, int]:
    """Refine a slab until two consecutive levels agree; returns (value, abs_err, evals)."""
    cube_sums = cube_sums or _backend()
    num, den = slab.corner_tables()
    budget = settings.budget if budget is None else budget
    used = 0
    prev = None
    level = settings.min_level
    while True:
        grid = tanh_sinh_grid(level, settings.offset_floor)
        cost = len(grid) ** 3
        if used + cost > budget or level > settings.max_level:
            est = prev[0] if prev else math.nan
            err = prev[1] if prev else math.inf
            raise QuadratureError(
                f"node budget exhausted at level {level} (rel err {err:.2e})", est, err)
        sums, mism, evals = cube_sums(num, den, grid.offset, grid.side, grid.weight,
                                      grid.node_level, level + 1)
        used += int(evals)
        if mism:
            raise InvalidCellError(f"integrand sign inconsistent at {mism} nodes")
        partial = np.cumsum(sums)
        estimates = [slab.scale * partial[k] * (2.0 ** -k) ** 3 for k in range(level + 1)]
        value = estimates[-1]
        diff = abs(estimates[-1] - estimates[-2])
        rel = diff / abs(value) if value else math.inf
        prev = (value, rel)
        if rel <= settings.tol and level > settings.min_level - 1:
            return value, diff, used
        level += 1


def _prisms(cell: Cell3D | Chamber) -> tuple[Cell3D, ...]:
    if isinstance(cell, Chamber):
        return cell.prisms
    if not cell.closed:
        raise InvalidCellError(f"{cell.key}: prism is not closed by arrangement planes")
    return (cell,)


def normalization(aff: AffineArrangement, convention: str) -> float:
    """Factor turning 2 iiint |lambda F|^(-1/2) into the requested convention."""
    if convention == "cover":
        return 1.0
    if convention == "table":
        return abs(float(aff.table_lambda)) / 2.0
    raise ValueError(f"unknown convention {convention!r}")


def cell_period(cell: Cell3D | Chamber, aff: AffineArrangement, tol: float | None = None,
                settings: QuadratureSettings | None = None, cube_sums=None) -> PeriodValue:
    """Period of a chamber (or of a closed prism) in the chosen normalization."""
    settings = settings or QuadratureSettings()
    if tol is not None:
        settings = settings.with_tol(tol)
    total, err, used = 0.0, 0.0, 0
    for prism in _prisms(cell):
        for slab in cube.slabs(prism, aff):
            try:
                v, e, n = integrate_slab(slab, settings, cube_sums, settings.budget - used)
            except QuadratureError as exc:
                raise QuadratureError(f"{cell.key}: {exc}", total + exc.estimate,
                                      exc.rel_err) from exc
            total += v
            err += e
            used += n
    if not total > 0:
        raise InvalidCellError(f"{cell.key}: non-positive integral {total!r}")
    factor = normalization(aff, settings.convention)
    axis = REAL if cell.f_sign > 0 else IMAGINARY
    return PeriodValue(total * factor, axis, err / total, cell.key, settings, used)


# ---------------------------------------------------------------------------
# power substitution cross-check

def _gauss_legendre_01(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def power_substitution_period(cell: Cell3D | Chamber, aff: AffineArrangement, k: int = 2,
                              order: int = 48, convention: str = "table") -> PeriodValue:
    """Cross-check of :func:`cell_period` by the substitution u -> s**k.

    Each unit-cube coordinate is split at 1/2 and both halves are pulled
    towards their endpoint by s -> s**k.  The cell qualifies only if every
    factor is a monomial in the face offsets times a polynomial of constant
    sign on the closed cube; then the substituted integrand is bounded and a
    Gauss-Legendre product rule applies.
    """
    if k < 1:
        raise ValueError("k must be positive")
    total = 0.0
    nodes, weights = _gauss_legendre_01(order)
    slabs = [sl for prism in _prisms(cell) for sl in cube.slabs(prism, aff)]
    for slab in slabs:
        exps = np.zeros((3, 2))  # per coordinate, per side: net exponent
        for sgn, polys in ((1.0, slab.numerators), (-0.5, slab.denominators)):
            for p in polys:
                ou, ov, ow, r = cube.monomial_orders(p)
                if not cube.residual_sign_definite(r):
                    raise ValueError("cell is not box-reducible: a factor vanishes "
                                     "inside a face or at an isolated corner")
                exps += sgn * np.array([ou, ov, ow], dtype=float)
        # substituted exponent per side: k*(e + 1) - 1 must be >= 0
        if np.any(k * (exps + 1.0) - 1.0 < -1e-12):
            raise ValueError(f"integrand unbounded after substitution with k={k}")
        # offsets s in (0, 1/2] -> t = (2s)^(1/k)/... use s = t**k / 2 on each half
        t = nodes
        s = 0.5 * t ** k
        ds = 0.5 * k * t ** (k - 1)
        num, den = slab.corner_tables()
        acc = 0.0
        for cu in (0, 1):
            for cv in (0, 1):
                for cw in (0, 1):
                    corner = cu | (cv << 1) | (cw << 2)
                    su = s[:, None, None]
                    sv = s[None, :, None]
                    sw = s[None, None, :]

                    def ev(tab):
                        c = tab[:, corner, :]
                        out = []
                        for row in c:
                            out.append(row[0] + row[1] * su + row[2] * sv + row[3] * su * sv
                                       + sw * (row[4] + row[5] * su + row[6] * sv
                                               + row[7] * su * sv))
                        return out

                    pn = np.ones((order, order, order))
                    for v in ev(num):
                        pn = pn * v
                    pd = np.ones((order, order, order))
                    for v in ev(den):
                        pd = pd * v
                    if np.any(pd <= 0):
                        raise ValueError("integrand sign inconsistent after substitution")
                    f = pn / np.sqrt(pd)
                    wts = (weights * ds)[:, None, None] * (weights * ds)[None, :, None] \
                        * (weights * ds)[None, None, :]
                    acc += float(np.sum(wts * f))
        total += slab.scale * acc
    axis = REAL if cell.f_sign > 0 else IMAGINARY
    settings = QuadratureSettings(convention=convention)
    return PeriodValue(total * normalization(aff, convention), axis, math.nan, cell.key,
                       settings, 8 * order ** 3 * len(slabs))


# ---------------------------------------------------------------------------
# scaling law

@dataclass(frozen=True)
class ScalingRecord:
    mu: Fraction
    base: PeriodValue
    scaled: PeriodValue
    flipped: PeriodValue
    scale_ok: bool
    flip_ok: bool

    @property
    def ok(self) -> bool:
        return self.scale_ok and self.flip_ok


def _rescaled(aff: AffineArrangement, factor: Fraction) -> AffineArrangement:
    return replace(aff, lam=aff.lam * factor)


def _flip_cell(cell: Cell3D | Chamber) -> Cell3D | Chamber:
    if isinstance(cell, Chamber):
        return Chamber(cell.sign_vector, tuple(_flip_cell(c) for c in cell.prisms), -cell.f_sign)
    return Cell3D(cell.region, cell.lower, cell.upper, cell.sign_vector, -cell.f_sign, cell.closed)


def scaling_check(cell: Cell3D | Chamber, aff: AffineArrangement, mu,
                  tol: float = 1e-10) -> ScalingRecord:
    """period(mu * lambda F) == mu^(-1/2) period(lambda F); lambda -> -lambda swaps axes."""
    mu = Fraction(mu)
    if mu <= 0:
        raise ValueError("mu must be positive")
    base = cell_period(cell, aff, tol)
    scaled = cell_period(cell, _rescaled(aff, mu), tol)
    flipped = cell_period(_flip_cell(cell), _rescaled(aff, Fraction(-1)), tol)
    expect = base.value / math.sqrt(mu)
    scale_ok = abs(scaled.value - expect) <= 2 * tol * abs(expect)
    flip_ok = flipped.axis != base.axis and abs(flipped.value - base.value) <= 2 * tol * base.value
    return ScalingRecord(mu, base, scaled, flipped, scale_ok, flip_ok)
