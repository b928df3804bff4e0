from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from doubleoctic import _exact
from doubleoctic.chamber import (
    AffineArrangement,
    AffineForm,
    Chart,
    ChartError,
    FourfoldImage,
    Line2D,
    _complete_unimodular,
    apply_chart,
    bounded_faces,
    candidate_charts,
    cells_of,
    chambers_of,
    fourfold_images,
    incidence_matrix,
    integer_kernel,
    local_weight,
    p4_images,
    polyhedral_cycles,
    project_lines,
    stack_cells,
)

F = Fraction


@pytest.fixture(scope="module")
def row_one(arrangements):
    arr = arrangements["1"]
    chart = Chart.substitution("t -> t - x")
    return arr, chart, apply_chart(arr, chart)


def affine(*forms, lam=1):
    fs = tuple(AffineForm(i, *map(F, f)) for i, f in enumerate(forms))
    return AffineArrangement(fs, F(lam), Chart.identity())


def test_row_one_affine_equation(row_one):
    _, _, aff = row_one
    live = sorted(f.coeffs for f in aff.forms if not f.is_constant)
    expected = sorted(tuple(map(F, c)) for c in [
        (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (-1, 0, 0, 1),
        (1, 1, 0, 0), (0, 1, 1, 0), (-1, 0, 1, 1)])
    assert live == expected
    assert aff.excluded == (7,)  # t + x
    assert aff.forms[7].d == 1


def test_identity_chart_partition(arrangements):
    for arr in arrangements.values():
        aff = apply_chart(arr, Chart.identity())
        parts = set(aff.vertical) | set(aff.graphs) | set(aff.excluded)
        assert len(aff.vertical) + len(aff.graphs) + len(aff.excluded) == 8
        assert parts == set(range(8))


def test_identity_chart_row_one(arrangements):
    aff = apply_chart(arrangements["1"], Chart.identity())
    assert set(aff.vertical) == {0, 1, 4, 7}  # x, y, x+y, x+1
    assert set(aff.graphs) == {2, 5, 6}
    assert aff.excluded == (3,)


def test_chart_round_trip(arrangements):
    arr = arrangements["245"]
    chart = Chart.substitution("t -> t - x; y -> y + 2z")
    back = Chart.from_matrix(_exact.matmul(chart.matrix, chart.inverse().matrix))
    assert apply_chart(arr, back).forms == apply_chart(arr, Chart.identity()).forms


def test_singular_chart():
    with pytest.raises(ChartError):
        Chart.from_matrix([[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_p4_images(arrangements, row_one):
    arr, chart, _ = row_one
    assert p4_images(arr, chart) == [((1, -1, 1, 0), True)]
    [(pt, inf)] = p4_images(arr, Chart.identity())
    assert not inf and pt == (-1, 1, -1)  # (1,-1,1,-1) divided by t = -1
    assert len(p4_images(arrangements["238"], Chart.identity())) == 12


def test_row_one_lines(row_one):
    _, _, aff = row_one
    keys = {ln.key for ln in project_lines(aff)}
    assert keys == {(1, 0, 0), (0, 1, 0), (1, 0, -1), (1, 1, 0), (1, 1, -1)}


def test_row_one_faces(row_one):
    _, _, aff = row_one
    faces = bounded_faces(project_lines(aff))
    verts = sorted(sorted(f.vertices) for f in faces)
    assert verts == sorted([sorted([(0, 0), (1, 0), (0, 1)]), sorted([(0, 0), (1, 0), (1, -1)])])
    assert all(f.area() == F(1, 2) for f in faces)


def test_row_one_cells(row_one):
    _, _, aff = row_one
    cells = cells_of(aff)
    closed = [c for c in cells if c.closed]
    assert len(cells) == 4 and len(closed) == 3
    graph = {i: aff.forms[i].graph() for i in aff.graphs}
    z0, zy, zx = 2, 5, 6  # z = 0, z = -y, z = x - 1

    def sheets(c):
        return (c.lower, c.upper)

    upper = {sheets(c): c.closed for c in cells if (F(0), F(1)) in c.region.vertices}
    lower = {sheets(c): c.closed for c in cells if (F(1), F(-1)) in c.region.vertices}
    assert upper == {(zx, zy): True, (zy, z0): False}
    assert lower == {(zx, z0): True, (z0, zy): True}
    assert graph[zx] == (1, 0, -1)


def test_cells_have_constant_signs(row_one):
    _, _, aff = row_one
    for c in cells_of(aff):
        pts = c.interior_points(aff, 12)
        for p in pts:
            signs = tuple(_exact.sign(f(*p)) for f in aff.forms)
            assert signs == c.sign_vector
            assert _exact.sign(aff.octic(*p)) == c.f_sign


def test_stacking_partitions_volume(arrangements):
    aff = apply_chart(arrangements["239"], candidate_charts(arrangements["239"], projections=1)[0])
    for region in bounded_faces(project_lines(aff))[:6]:
        cells = stack_cells(aff, region)
        if not cells:
            continue
        top = max(cells, key=lambda c: c.sheet_values(aff, region.centroid())[1]).upper
        bottom = min(cells, key=lambda c: c.sheet_values(aff, region.centroid())[0]).lower
        from doubleoctic.chamber import Cell3D
        whole = Cell3D(region, bottom, top, (), 0, False)
        assert sum(c.volume(aff) for c in cells) == whole.volume(aff)


def test_face_area_invariant_under_relabeling(row_one):
    _, _, aff = row_one
    lines = project_lines(aff)
    a = sum(f.area() for f in bounded_faces(lines))
    b = sum(f.area() for f in bounded_faces(list(reversed(lines))))
    assert a == b == 1


def test_synthetic_faces():
    tri = [Line2D.make(1, 0, 0), Line2D.make(0, 1, 0), Line2D.make(1, 1, -1)]
    assert len(bounded_faces(tri)) == 1
    assert bounded_faces(tri[:2]) == []


def test_synthetic_projections():
    aff = affine((1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 1, -1))
    keys = [ln.key for ln in project_lines(aff)]
    assert keys == [(1, 0, 0)]  # the two graphs z = 0 and z = 1 are parallel
    assert cells_of(aff) == []


def test_row_one_singleton_cycles(row_one):
    arr, chart, aff = row_one
    chambers = chambers_of(aff)
    assert len(chambers) == 3
    for w in ("closure", "local"):
        cycles = polyhedral_cycles(chambers, aff, fourfold_images(arr, chart), w)
        assert sorted(c.terms for c in cycles) == [((0, 1),), ((1, 1),), ((2, 1),)]


def test_kernel_examples():
    assert integer_kernel([[1, 1]]) in ([[1, -1]], [[-1, 1]])
    assert integer_kernel([[1]]) == []
    assert integer_kernel([[2, 3, 4]], 3)


small_matrices = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=0, max_size=4))


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_kernel_exact(mat):
    if not mat:
        return
    n = len(mat[0])
    ker = integer_kernel(mat, n)
    for v in ker:
        assert all(isinstance(x, int) for x in v)
        assert all(sum(r[j] * v[j] for j in range(n)) == 0 for r in mat)
    assert len(ker) == n - _exact.rank(mat)
    if ker:
        assert _exact.rank(ker) == len(ker)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=5))
def test_kernel_is_saturated(row):
    # a unimodular column reduction of one row leaves a basis of the full lattice kernel
    n = len(row)
    ker = integer_kernel([row], n)
    if not ker or not any(row):
        return
    # every standard kernel vector (e_i * r_j - e_j * r_i)/g is an integer combination
    import math
    for i in range(n):
        for j in range(i + 1, n):
            g = math.gcd(row[i], row[j]) or 1
            v = [0] * n
            v[i], v[j] = row[j] // g, -row[i] // g
            if not any(v):
                continue
            sol = _exact.nullspace([[k[m] for k in ker] + [-v[m]] for m in range(n)], len(ker) + 1)
            assert sol, "target not in the span"
            coeffs = [c / sol[0][-1] for c in sol[0][:-1]]
            assert all(c.denominator == 1 for c in coeffs)


def test_polyhedral_cycle_closure_examples():
    aff = affine((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 0, -1), (0, 0, 1, -1),
                 (0, 0, 1, 1))
    chambers = chambers_of(aff)
    assert len(chambers) == 2
    origin = (F(0), F(0), F(0))
    cycles = polyhedral_cycles(chambers, aff, [origin])
    assert [c.terms for c in cycles] in ([((0, 1), (1, -1))], [((0, -1), (1, 1))])
    assert polyhedral_cycles(chambers[:1], aff, [origin]) == []


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["3", "19", "93", "240", "245"]), st.integers(0, 7))
def test_cycles_satisfy_incidence(arrangements, label, k):
    arr = arrangements[label]
    chart = candidate_charts(arr, projections=1)[k]
    aff = apply_chart(arr, chart)
    chambers = chambers_of(aff)
    points = fourfold_images(arr, chart)
    for w in ("closure", "local"):
        mat = incidence_matrix(chambers, aff, points, w)
        for cyc in polyhedral_cycles(chambers, aff, points, w):
            assert cyc.incidence_ok
            assert all(sum(r[j] * n for j, n in cyc.terms) == 0 for r in mat)


def point(relation):
    return FourfoldImage((F(0),) * 3, (0, 1, 2, 3), relation, False)


@pytest.mark.parametrize("signs, weight", [
    ((1, 1, 1, -1), 1),     # triangle, majority +
    ((-1, -1, -1, 1), -1),  # triangle, majority -
    ((1, 1, -1, -1), 0),    # quadrilateral
    ((1, -1, 1, -1), 0),
])
def test_local_weight(signs, weight):
    assert local_weight(signs, point((1, 1, 1, 1))) == weight


def test_local_weight_uses_relation_signs():
    assert local_weight((1, 1, 1, 1), point((1, 1, 1, -1))) == 1
    with pytest.raises(ValueError):
        local_weight((1, 1, 1, 1), point((1, 1, 1, 1)))


@settings(max_examples=100)
@given(st.lists(st.integers(-20, 20), min_size=4, max_size=4).filter(
    lambda v: any(v) and __import__("math").gcd(*v) == 1))
def test_complete_unimodular(ell):
    u = _complete_unimodular(ell)
    assert abs(_exact.det(u)) == 1
    assert _exact.vecmat(ell, u) == [0, 0, 0, 1]


def test_candidate_charts_send_each_plane_to_infinity(arrangements):
    arr = arrangements["245"]
    charts = candidate_charts(arr, projections=1)
    assert len(charts) == 8
    sent = [apply_chart(arr, c).excluded for c in charts]
    assert sorted(s[0] for s in sent) == list(range(8))
    assert all(abs(c.det) == 1 for c in charts)
