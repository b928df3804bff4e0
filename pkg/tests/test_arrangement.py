import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from doubleoctic import _exact
from doubleoctic.arrangement import (
    ArrangementError,
    ParseError,
    arrangement_from_matrix,
    betti_data,
    betti_relations,
    dump_arrangement,
    incidence_census,
    parse_arrangement,
    parse_arrangement_records,
)

P4_COLUMN = {"1": 1, "3": 3, "19": 4, "32": 5, "69": 5, "93": 6,
             "238": 12, "239": 10, "240": 10, "241": 10, "245": 9}


def coeffs(arr):
    return [f.coeffs for f in arr.forms]


def test_parse_row_one():
    arr = parse_arrangement("xyzt(x+y)(y+z)(z+t)(t+x)", -1)
    assert coeffs(arr) == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
                           (1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)]
    assert arr.lam == -1


def test_parse_row_239():
    arr = parse_arrangement("xyzt(x+y+z)(x+y+t)(x+z+t)(y+z+t)", 1)
    assert len(arr.forms) == 8
    assert coeffs(arr)[4:] == [(1, 1, 1, 0), (1, 1, 0, 1), (1, 0, 1, 1), (0, 1, 1, 1)]


def test_forms_are_canonical():
    arr = parse_arrangement("xyzt(-2x-2y)(y+z)(z+t)(t+x)")
    assert arr.forms[4].coeffs == (1, 1, 0, 0)
    assert arr.scale == -2


@pytest.mark.parametrize("text, err", [
    ("xyzt(x+y)(x+y)(z+t)(t+x)", ArrangementError),
    ("xyzt(x+y)(y+z)(z+t)", ArrangementError),
    ("xyzt(x+y)(y+z)(z+t)(t+x)(x-y)", ArrangementError),
    ("xyzt(x+y)(y+z)(z+t)(t+x", ParseError),
    ("xyzt(x*y)(y+z)(z+t)(t+x)", ParseError),
    ("xyzt(x+y)(y+z)(z+t)(0)", ParseError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_arrangement(text)


def test_zero_lambda_rejected():
    with pytest.raises(ArrangementError):
        parse_arrangement("xyzt(x+y)(y+z)(z+t)(t+x)", 0)


def test_matrix_and_equation_records_agree():
    text = ("label = a\nlambda = -1\nequation = xyzt(x+y)(y+z)(z+t)(t+x)\n"
            "label = b\nlambda = -1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n"
            "1 1 0 0\n0 1 1 0\n0 0 1 1\n1 0 0 1\n")
    a, b = parse_arrangement_records(text)
    assert a.forms == b.forms and a.lam == b.lam


def test_dump_round_trip(arrangements):
    for arr in arrangements.values():
        back = parse_arrangement_records(dump_arrangement(arr))[0]
        assert back.forms == arr.forms
        assert back.constant == arr.constant


@pytest.mark.parametrize("label", sorted(P4_COLUMN, key=int))
def test_census_matches_table(arrangements, label):
    c = incidence_census(arrangements[label])
    assert c.admissible
    assert c.p4_generic == P4_COLUMN[label]
    assert c.p4_generic <= c.points_mult4


def test_row_one_fourfold_point(arrangements):
    pts = incidence_census(arrangements["1"]).generic_fourfold_points()
    assert [p.coords for p in pts] in ([(1, -1, 1, -1)], [(-1, 1, -1, 1)])


def test_stored_points_recheck(arrangements):
    for arr in arrangements.values():
        c = incidence_census(arr)
        for p in c.points:
            zeros = sum(1 for f in arr.forms if f(p.coords) == 0)
            assert zeros == p.multiplicity >= 3
        for ln in c.lines:
            for q in ln.span:
                assert sum(1 for f in arr.forms if f(q) == 0) >= ln.multiplicity


def general_position(rng):
    while True:
        rows = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(8)]
        if all(_exact.rank(list(s)) == 3 for s in itertools.combinations(rows, 3)) and \
                all(_exact.det(list(s)) != 0 for s in itertools.combinations(rows, 4)):
            return rows


def test_generic_planes():
    rows = general_position(random.Random(7))
    c = incidence_census(arrangement_from_matrix(rows))
    assert (c.double_lines, c.triple_lines, c.points_mult4, c.points_mult5) == (28, 0, 0, 0)
    assert c.admissible


def test_non_admissible_flagged():
    # six planes through the origin of the affine chart
    arr = parse_arrangement("xyz(x+y)(y+z)(x+z)(t)(x+y+z+t)")
    c = incidence_census(arr)
    assert not c.admissible
    assert c.max_point_multiplicity == 6


census_fields = ("double_lines", "triple_lines", "points_mult4", "points_mult5", "p4_generic",
                 "admissible")


def census_tuple(arr):
    c = incidence_census(arr)
    return tuple(getattr(c, k) for k in census_fields)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(sorted(P4_COLUMN)), st.permutations(range(8)),
       st.lists(st.integers(-5, 5).filter(bool), min_size=8, max_size=8))
def test_census_invariant_under_permutation_and_scaling(label, perm, scales):
    from doubleoctic.arrangement import load_arrangements
    from doubleoctic.cli import DATA
    arr = {a.label: a for a in load_arrangements(DATA / "arrangements.txt")}[label]
    rows = [[s * c for c in arr.forms[i].coeffs] for i, s in zip(perm, scales)]
    assert census_tuple(arrangement_from_matrix(rows)) == census_tuple(arr)


unimodular = st.lists(st.integers(-2, 2), min_size=16, max_size=16).map(
    lambda v: [v[4 * i:4 * i + 4] for i in range(4)]).filter(lambda m: _exact.det(m) != 0)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["1", "19", "239", "245"]), unimodular)
def test_census_invariant_under_projective_change(label, mat):
    from doubleoctic.arrangement import load_arrangements
    from doubleoctic.cli import DATA
    arr = {a.label: a for a in load_arrangements(DATA / "arrangements.txt")}[label]
    rows = [_exact.vecmat(f.coeffs, mat) for f in arr.forms]
    rows = [[int(v) for v in r] for r in rows]
    assert census_tuple(arrangement_from_matrix(rows)) == census_tuple(arr)


@pytest.mark.parametrize("b3_hat, expected", [(3, 4), (11, 20), (2, 2), (5, 8), (8, 14)])
def test_betti_relation(b3_hat, expected):
    assert betti_relations(b3_hat) == expected


@given(st.integers(2, 10_000))
def test_betti_relation_symmetry(b3_hat):
    assert betti_relations(b3_hat) - b3_hat == b3_hat - 2


@pytest.mark.parametrize("args", [(1, 2), (-1, 0), (3, -1)])
def test_betti_relation_rejects(args):
    with pytest.raises(ValueError):
        betti_relations(*args)


def test_betti_table(arrangements, golden):
    for label, ref in golden.census.items():
        data = betti_data(arrangements[label], ref["b3_hat"])
        assert data.b3_smoothing == ref["b3_t"]
        assert data.p4_generic == ref["p4_generic"]
        assert data.b2_tilde == golden.b2[label]


def test_lambda_column(arrangements, golden):
    assert {k: int(a.lam) for k, a in arrangements.items()} == dict(golden.lam)
    for a in arrangements.values():
        assert a.lam == Fraction(golden.lam[a.label])
