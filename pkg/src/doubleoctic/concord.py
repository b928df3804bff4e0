"""Rational proportionality between period generators and critical L-values.

The real generator is compared with pi^2 L(f, 1), the imaginary one with
pi L(f, 2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .lattice import PeriodLattice, recognize_rational
from .modular import LValues

REAL = "real"
IMAGINARY = "imaginary"


@dataclass(frozen=True)
class Match:
    value: float
    axis: str
    rho: Fraction | None
    residual: float

    @property
    def ok(self) -> bool:
        return self.rho is not None


@dataclass(frozen=True)
class CommensurabilityReport:
    arrangement: str
    form: str
    omega_re: float
    omega_im: float
    rho_re: Fraction | None
    rho_im: Fraction | None
    residuals: dict = field(default_factory=dict)
    entries: tuple[Match, ...] = ()

    @property
    def ok(self) -> bool:
        return self.rho_re is not None and self.rho_im is not None

    def as_record(self) -> dict:
        return {
            "arrangement": self.arrangement,
            "form": self.form,
            "omega_re": self.omega_re,
            "omega_im": self.omega_im,
            "rho_re": None if self.rho_re is None else str(self.rho_re),
            "rho_im": None if self.rho_im is None else str(self.rho_im),
            "residual_re": self.residuals.get(REAL),
            "residual_im": self.residuals.get(IMAGINARY),
        }


def reference(lv: LValues, axis: str):
    if axis == REAL:
        return mpmath.pi ** 2 * lv.L1
    if axis == IMAGINARY:
        return mpmath.pi * lv.L2
    raise ValueError(f"unknown axis {axis!r}")


def match_value(value: float, axis: str, lv: LValues, max_den: int = 64,
                tol: float = 1e-7) -> Match:
    """rho with value = rho * reference; residual is the relative mismatch."""
    ref = reference(lv, axis)
    rho = recognize_rational(value, ref, max_den, tol)
    best = rho if rho is not None else Fraction(float(mpmath.mpf(value) / ref)).limit_denominator(max_den)
    guess = ref * best.numerator / best.denominator
    residual = float(abs(mpmath.mpf(value) - guess) / abs(value)) if best else float("inf")
    return Match(float(value), axis, rho, residual)


def match_periods(lat: PeriodLattice, lv: LValues, max_den: int = 64, tol: float = 1e-7,
                  arrangement: str = "", periods=()) -> CommensurabilityReport:
    """Express both generators (and optionally every period) through the L-values."""
    re = match_value(lat.omega_re, REAL, lv, max_den, tol)
    im = match_value(lat.omega_im, IMAGINARY, lv, max_den, tol)
    entries = tuple(match_value(abs(float(p.value)), p.axis, lv, max_den, tol) for p in periods)
    return CommensurabilityReport(arrangement, lv.form, lat.omega_re, lat.omega_im, re.rho, im.rho,
                                  {REAL: re.residual, IMAGINARY: im.residual}, entries)


def _fmt_rho(rho: Fraction | None) -> str:
    return "NONE" if rho is None else str(rho)


def format_table(reports) -> str:
    """Aligned text table with one row per arrangement."""
    head = ("Arr.", "form", "real generator", "= rho pi^2 L(f,1)", "imag. generator",
            "= rho pi L(f,2)", "max residual")
    rows = [head]
    for r in reports:
        rows.append((
            r.arrangement, r.form, f"{r.omega_re:.10f}", _fmt_rho(r.rho_re),
            f"{r.omega_im:.10f}i", _fmt_rho(r.rho_im),
            f"{max(r.residuals.values()):.1e}",
        ))
    widths = [max(len(row[k]) for row in rows) for k in range(len(head))]
    lines = []
    for n, row in enumerate(rows):
        lines.append(" | ".join(c.rjust(w) if k >= 2 else c.ljust(w)
                                for k, (c, w) in enumerate(zip(row, widths))).rstrip())
        if n == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines)
