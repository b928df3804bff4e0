"""Comparisons of computed quantities against the reference tables."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import SimpleNamespace
from typing import Iterable, Mapping, Sequence

import mpmath

from .arrangement import Arrangement, betti_relations, incidence_census
from .concord import IMAGINARY, REAL, match_periods, match_value
from .golden import GoldenTables
from .lattice import PeriodLattice, elliptic_invariants, lattice_generators
from .modular import LValues, ModularForm, q_expansion

INVARIANT_DIGITS = 9
LVALUE_DIGITS = 25
PROPORTION_TOL = 1e-8


@dataclass(frozen=True)
class Check:
    table: str
    item: str
    ok: bool
    expected: str
    got: str
    residual: float = 0.0

    def as_record(self) -> dict:
        return {"table": self.table, "item": self.item, "ok": self.ok,
                "expected": self.expected, "got": self.got, "residual": self.residual}


def digits_match(got, expected: str, digits: int) -> tuple[bool, float]:
    """True iff ``got`` lies within half a unit of the ``digits``-th significant digit of ``expected``.

    The second value is the relative mismatch.
    """
    with mpmath.workdps(max(digits + 10, 30)):
        e = mpmath.mpf(expected)
        g = mpmath.mpf(got)
        diff = abs(g - e)
        if e == 0:
            return diff == 0, float(diff)
        exp10 = int(mpmath.floor(mpmath.log10(abs(e))))
        allowed = mpmath.mpf(10) ** (exp10 - digits + 1) / 2
        return bool(diff <= allowed), float(diff / abs(e))


def golden_periods(golden: GoldenTables, label: str) -> list[SimpleNamespace]:
    return [SimpleNamespace(value=v, axis=axis)
            for axis in (REAL, IMAGINARY) for v in golden.period_values(label, axis)]


def golden_lattice(golden: GoldenTables, label: str, max_den: int = 64) -> PeriodLattice:
    return lattice_generators(golden_periods(golden, label), max_den)


def check_census(arrangements: Sequence[Arrangement], golden: GoldenTables) -> list[Check]:
    out = []
    for arr in arrangements:
        ref = golden.census[arr.label]
        c = incidence_census(arr)
        out.append(Check("census", f"{arr.label} p4_generic", c.p4_generic == ref["p4_generic"],
                         str(ref["p4_generic"]), str(c.p4_generic)))
        out.append(Check("census", f"{arr.label} admissible", c.admissible, "True", str(c.admissible)))
        b3 = betti_relations(ref["b3_hat"])
        out.append(Check("census", f"{arr.label} b3 smoothing", b3 == ref["b3_t"],
                         str(ref["b3_t"]), str(b3)))
        out.append(Check("census", f"{arr.label} lambda", arr.lam == golden.lam[arr.label],
                         str(golden.lam[arr.label]), str(arr.lam)))
    return out


def _printed_terms(expansion: str) -> int:
    return int(expansion.rsplit("O(q^", 1)[1].rstrip(")"))


def check_q_expansions(forms: Mapping[str, ModularForm], golden: GoldenTables) -> list[Check]:
    out = []
    for name, rec in golden.forms.items():
        if name not in forms:
            out.append(Check("q-expansion", name, False, rec["expansion"], "missing"))
            continue
        got = q_expansion(forms[name], _printed_terms(rec["expansion"]))
        out.append(Check("q-expansion", name, got == rec["expansion"], rec["expansion"], got))
    return out


def check_lvalues(lvalues: Mapping[str, LValues], golden: GoldenTables,
                  digits: int = LVALUE_DIGITS) -> list[Check]:
    out = []
    for name, ref in golden.lvalues.items():
        lv = lvalues.get(name)
        for key in ("L1", "L2"):
            if lv is None:
                out.append(Check("L-values", f"{name} {key}", False, ref[key], "missing"))
                continue
            got = getattr(lv, key)
            ok, res = digits_match(got, ref[key], digits)
            out.append(Check("L-values", f"{name} {key}", ok, ref[key],
                             mpmath.nstr(got, digits + 4), res))
        if lv is not None:
            with mpmath.workdps(40):
                level = int(name.split("/")[0])
                lhs = lv.L3
                rhs = 2 * mpmath.pi ** 2 / level * lv.L1
                res = float(abs(lhs - rhs))
            out.append(Check("L-values", f"{name} L3 identity", res < 1e-20, "0",
                             f"{res:.1e}", res))
    return out


def check_invariants(golden: GoldenTables, labels: Iterable[str] | None = None,
                     digits: int = INVARIANT_DIGITS,
                     lattices: Mapping[str, PeriodLattice] | None = None) -> list[Check]:
    """Invariants of the lattices (by default built from the reference periods)."""
    out = []
    for label in labels or golden.labels:
        lat = (lattices or {}).get(label) or golden_lattice(golden, label)
        inv = elliptic_invariants(lat)
        ref = golden.invariants[label]
        for key in ("tau_over_i", "j", "g2", "g3"):
            got = getattr(inv, key)
            if float(mpmath.mpf(ref[key])) == 0:
                ok, res = abs(got) < 1e-9, float(abs(got))
            else:
                ok, res = digits_match(got, ref[key], digits)
            out.append(Check("invariants", f"{label} {key}", ok, ref[key],
                             mpmath.nstr(got, digits + 3), res))
    return out


def check_proportionality(golden: GoldenTables, lvalues: Mapping[str, LValues],
                          max_den: int = 64, tol: float = PROPORTION_TOL) -> list[Check]:
    """Each printed equality period = rho * reference, and the generator match per row."""
    out = []
    for label, rec in golden.proportionality.items():
        lv = lvalues[rec["form"]]
        for axis, vkey, rkey in ((REAL, "real", "rho_re"), (IMAGINARY, "imaginary", "rho_im")):
            m = match_value(float(rec[vkey]), axis, lv, max_den)
            ok = m.rho == Fraction(rec[rkey]) and m.residual <= tol
            out.append(Check("proportionality", f"{label} {rkey}", ok, str(rec[rkey]),
                             str(m.rho), m.residual))
    for label in golden.labels:
        lv = lvalues[golden.form_of(label)]
        rep = match_periods(golden_lattice(golden, label, max_den), lv, max_den,
                            arrangement=label)
        ok = rep.ok and max(rep.residuals.values()) <= tol
        if label in golden.proportionality:
            rec = golden.proportionality[label]
            ok = ok and rep.rho_re == rec["rho_re"] and rep.rho_im == rec["rho_im"]
            expected = f"{rec['rho_re']}/{rec['rho_im']}"
        else:
            expected = "resolved"
        out.append(Check("proportionality", f"{label} generators", ok, expected,
                         f"{rep.rho_re}/{rep.rho_im}", max(rep.residuals.values())))
    return out


def check_computed_lattice(label: str, lat: PeriodLattice, golden: GoldenTables,
                           rel: float = 1e-9) -> list[Check]:
    ref = golden_lattice(golden, label)
    out = []
    for axis, got, exp in ((REAL, lat.omega_re, ref.omega_re), (IMAGINARY, lat.omega_im, ref.omega_im)):
        res = abs(got - exp) / exp
        out.append(Check("periods", f"{label} {axis} generator", res <= rel, f"{exp:.10f}",
                         f"{got:.10f}", res))
    return out


def all_ok(checks: Iterable[Check]) -> bool:
    return all(c.ok for c in checks)


def summarize(checks: Sequence[Check]) -> dict[str, tuple[int, int]]:
    tables: dict[str, list[int]] = {}
    for c in checks:
        t = tables.setdefault(c.table, [0, 0])
        t[0] += c.ok
        t[1] += 1
    return {k: (v[0], v[1]) for k, v in tables.items()}


def finite(x: float) -> bool:
    return math.isfinite(x)
