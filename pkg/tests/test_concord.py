import dataclasses
from fractions import Fraction

import pytest

from doubleoctic.chamber import Chart
from doubleoctic.checks import golden_lattice
from doubleoctic.concord import (
    IMAGINARY,
    REAL,
    format_table,
    match_periods,
    match_value,
    reference,
)
from doubleoctic.pipeline import compute_periods
from doubleoctic.quadrature import QuadratureSettings


@pytest.mark.parametrize("label, rho_re, rho_im", [
    ("1", Fraction(16), Fraction(32)),
    ("240", Fraction(20), Fraction(18)),
    ("19", Fraction(4), Fraction(16)),
])
def test_reference_generators(golden, lvalues, label, rho_re, rho_im):
    lat = golden_lattice(golden, label)
    rep = match_periods(lat, lvalues[golden.form_of(label)], arrangement=label)
    assert (rep.rho_re, rep.rho_im) == (rho_re, rho_im)
    assert max(rep.residuals.values()) < 1e-9
    assert rep.ok


def test_match_value_round_trip(lvalues):
    lv = lvalues["8/1"]
    for axis in (REAL, IMAGINARY):
        v = float(reference(lv, axis)) * 7 / 3
        m = match_value(v, axis, lv)
        assert m.rho == Fraction(7, 3) and m.residual < 1e-15


def test_unmatched_value(lvalues):
    lv = lvalues["8/1"]
    m = match_value(float(reference(lv, REAL)) * 2 ** 0.5, REAL, lv, max_den=16)
    assert m.rho is None and not m.ok and m.residual > 1e-7
    with pytest.raises(ValueError):
        reference(lv, "sideways")


def test_table_layout(golden, lvalues):
    reps = [match_periods(golden_lattice(golden, lab), lvalues[golden.form_of(lab)], arrangement=lab)
            for lab in ("1", "19")]
    lines = format_table(reps).splitlines()
    assert len(lines) >= 3
    assert len({len(line.rstrip()) for line in lines[:1]}) == 1
    assert reps[0].as_record()["rho_re"] == "16"


def _one_chart(arr, convention="table"):
    settings = QuadratureSettings(tol=1e-9, convention=convention)
    run = compute_periods(arr, settings, charts=[Chart.substitution("t -> t - x")])
    return run.lattice()


@pytest.fixture(scope="module")
def row_one_lattice(arrangements):
    return _one_chart(arrangements["1"])


def test_flipped_lambda_changes_proportionality(arrangements, lvalues, row_one_lattice):
    arr = arrangements["1"]
    flipped = _one_chart(dataclasses.replace(arr, lam=-arr.lam))
    lv = lvalues["8/1"]
    a = match_periods(row_one_lattice, lv)
    b = match_periods(flipped, lv)
    assert (flipped.omega_re, flipped.omega_im) == pytest.approx(
        (row_one_lattice.omega_im, row_one_lattice.omega_re), rel=1e-12)
    assert (a.rho_re, a.rho_im) != (b.rho_re, b.rho_im)
    assert b.ok and not a.ok


@pytest.mark.parametrize("convention, power", [("table", 0.5), ("cover", -0.5)])
def test_scaling_coherence(arrangements, lvalues, convention, power):
    # lambda = +1 puts this arrangement's periods on the reference axes
    arr = dataclasses.replace(arrangements["1"], lam=Fraction(1))
    mu = 4
    base = _one_chart(arr, convention)
    scaled = _one_chart(dataclasses.replace(arr, lam=arr.lam * mu), convention)
    factor = mu ** power
    assert scaled.omega_re == pytest.approx(base.omega_re * factor, rel=1e-12)
    lv = lvalues["8/1"]
    a, b = match_periods(base, lv), match_periods(scaled, lv)
    assert a.ok and b.ok
    assert b.rho_re == a.rho_re * Fraction(factor).limit_denominator(4)
    assert b.rho_im == a.rho_im * Fraction(factor).limit_denominator(4)
