import itertools
from math import comb

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from modcoh.cech import (
    CechComplex,
    Constraint,
    CoveredSpace,
    LineBundleDatum,
    Ray,
    SectionLattice,
    affine_space,
    blowup_bundle,
    blowup_cover,
    cech_cohomology,
    modulus_bundle,
    point,
    product_with_line,
    projective_box,
    projective_bundle,
    projective_cover,
)
from modcoh.verdict import Box, DefectError


def naive_cech_dims(bundle, box):
    """Total H^q dims from the full alternating Cech complex, ranks by sympy."""
    charts = sorted(bundle.space.chart_names)
    top = len(charts) - 1
    dims = [0] * (top + 1)
    for m in box:
        cells = [[T for T in itertools.combinations(range(len(charts)), p + 1)
                  if m in bundle.lattice([charts[i] for i in T])] for p in range(top + 1)]
        ranks = []
        for p in range(top):
            mat = sympy.zeros(len(cells[p + 1]), len(cells[p]))
            for r, T in enumerate(cells[p + 1]):
                for k in range(len(T)):
                    S = T[:k] + T[k + 1:]
                    if S in cells[p]:
                        mat[r, cells[p].index(S)] = (-1) ** k
            ranks.append(mat.rank() if mat.shape[0] and mat.shape[1] else 0)
        for p in range(top + 1):
            into = ranks[p - 1] if p > 0 else 0
            out = ranks[p] if p < top else 0
            dims[p] += len(cells[p]) - out - into
    return dims


def closed_form(n, d):
    h0 = comb(n + d, n) if d >= 0 else 0
    hn = comb(-d - 1, n) if -d - 1 >= n else 0
    return h0, hn


# ---------------------------------------------------------------- covers


def test_projective_cover_examples():
    p1 = projective_cover(1)
    assert p1.chart_names == ("U0", "U1")
    inter = projective_bundle(1, 0).lattice(["U0", "U1"])
    assert all(((a, -a) in inter) for a in range(-5, 6))
    assert (1, 0) not in inter
    u0 = projective_bundle(1, 0).chart_lattice("U0")
    assert (-2, 2) in u0 and (2, -2) not in u0
    p2 = projective_cover(2)
    assert len(p2.chart_names) == 3
    assert (0, 0, 0) in projective_bundle(2, 0).lattice(p2.chart_names)
    with pytest.raises(ValueError):
        projective_cover(0)


def test_top_monomial_lies_in_no_chart():
    b = projective_bundle(2, -3)
    assert all((-1, -1, -1) not in b.chart_lattice(c) for c in b.space.chart_names)
    s = CechComplex(b, Box.cube(3, -1, -1)).slice((-1, -1, -1))
    assert s.dims == [0, 0, 1]


def test_blowup_cover_examples():
    s = blowup_cover(1)
    # chart U0 is k[t0, t1/t0]: monomials t0^a (t1/t0)^b, a, b >= 0
    u0 = blowup_bundle(1, 0, s).chart_lattice("U0")
    expected = {(a - b, b) for a in range(8) for b in range(8)}
    box = Box.cube(2, -3, 3)
    assert {m for m in box if m in u0} == {m for m in box if m in expected}
    assert {m for m in box if m in blowup_bundle(1, 0, s).global_lattice()} == \
        {m for m in box if min(m) >= 0}
    assert {m for m in box if m in blowup_bundle(1, 1, s).global_lattice()} == \
        {m for m in box if min(m) >= 0 and sum(m) >= 1}
    with pytest.raises(ValueError):
        blowup_cover(0)


def test_product_examples():
    pl = product_with_line(point())
    assert len(pl.chart_names) == 2
    a1 = product_with_line(affine_space(["x"]))
    lat = {c: LineBundleDatum(a1).chart_lattice(c) for c in a1.chart_names}
    assert (3, 2) in lat["A*t"] and (3, -2) not in lat["A*t"]
    assert (3, -2) in lat["A*t_inf"] and (-1, 0) not in lat["A*t_inf"]
    assert len(product_with_line(blowup_cover(1)).chart_names) == 4


@pytest.mark.parametrize("d", range(-4, 5))
def test_point_times_line_matches_projective_line(d):
    pl = product_with_line(point())
    ours = cech_cohomology(LineBundleDatum(pl, {"t_inf": -d}), Box.cube(1, -8, 8))
    ref = cech_cohomology(projective_bundle(1, d), projective_box(1, d))
    assert ours.totals() == ref.totals()


# ---------------------------------------------------------------- cohomology


def test_cohomology_examples():
    r = cech_cohomology(projective_bundle(2, -3), Box.cube(3, -4, 1))
    assert r.totals() == {0: 0, 1: 0, 2: 1}
    assert r.basis(2) == ["1/(t0*t1*t2)"]
    r = cech_cohomology(projective_bundle(1, -1), projective_box(1, -1))
    assert r.totals() == {0: 0, 1: 0}
    r = cech_cohomology(projective_bundle(2, 2), projective_box(2, 2))
    assert r.totals() == {0: 6, 1: 0, 2: 0}
    assert len(set(r.basis(0))) == 6


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projective_closed_forms(n):
    for d in range(-6, 7):
        r = cech_cohomology(projective_bundle(n, d), projective_box(n, d))
        h0, hn = closed_form(n, d)
        assert r.dim(0) == h0 and r.dim(n) == hn
        assert all(r.dim(q) == 0 for q in range(1, n))


@pytest.mark.parametrize("bundle,box", [
    (projective_bundle(1, -3), Box.cube(2, -4, 1)),
    (projective_bundle(2, -4), Box.cube(3, -3, 0)),
    (projective_bundle(2, 1), Box.cube(3, -1, 2)),
    (blowup_bundle(1, -2, blowup_cover(1)), Box.cube(2, -3, 3)),
    (blowup_bundle(2, -3, blowup_cover(2)), Box.cube(3, -2, 1)),
    (LineBundleDatum(product_with_line(affine_space(["x"])), {"x": -1, "t_inf": 2}), Box.cube(2, -3, 3)),
])
def test_engine_matches_naive_complex(bundle, box):
    assert list(cech_cohomology(bundle, box).totals().values()) == naive_cech_dims(bundle, box)


def test_chart_order_invariance():
    for bundle, box in [(projective_bundle(2, -3), Box.cube(3, -3, 1)),
                        (blowup_bundle(2, -3, blowup_cover(2)), Box.cube(3, -3, 1))]:
        base = cech_cohomology(bundle, box)
        for order in itertools.permutations(bundle.space.chart_names):
            r = cech_cohomology(bundle, box, order=order)
            assert r.totals() == base.totals()
            for q in base.totals():
                assert sorted(r.multidegrees(q)) == sorted(base.multidegrees(q))


@given(st.integers(1, 3), st.integers(-6, 6))
@settings(max_examples=25, deadline=None)
def test_support_locality(n, d):
    r = cech_cohomology(projective_bundle(n, d), projective_box(n, d))
    assert sum(c["dim"] for c in r.classes.get(0, [])) == r.dim(0)
    assert all(min(m) >= 0 for m in r.multidegrees(0))
    assert all(max(m) <= -1 for m in r.multidegrees(n))
    # enlarging the box adds nothing: the derived box holds all of the support
    big = cech_cohomology(projective_bundle(n, d), Box.cube(n + 1, -8, 8))
    assert big.totals() == r.totals()


@given(st.integers(1, 2), st.integers(-4, 3))
@settings(max_examples=15, deadline=None)
def test_d_squared_vanishes(n, i):
    assert CechComplex(blowup_bundle(n, i, blowup_cover(n)), Box.cube(n + 1, -3, 3)).check_d_squared()
    assert CechComplex(projective_bundle(n, i), Box.cube(n + 1, -3, 3)).check_d_squared()


def test_parallel_schedule_gives_same_report():
    b = blowup_bundle(2, -3, blowup_cover(2))
    box = Box.cube(3, -3, 2)
    assert cech_cohomology(b, box, workers=2).to_dict() == cech_cohomology(b, box).to_dict()


def test_representatives_are_cocycles_not_coboundaries():
    c = CechComplex(projective_bundle(1, -2), Box.cube(2, -1, -1))
    s = c.slice((-1, -1))
    assert s.dims == [0, 1]
    (rep,) = s.representatives[1]
    assert s.coordinates(1, rep) == [1]


def test_modulus_bundle_bound():
    a1 = product_with_line(affine_space(["x"]))
    b = modulus_bundle(a1, {"x": 3, "t_inf": 1})
    assert b.bound("x") == -2 and b.bound("t_inf") == 0


def test_from_chart_lattices_checks_consistency():
    s = blowup_cover(1)
    good = blowup_bundle(1, 2, s)
    lats = {c: good.chart_lattice(c) for c in s.chart_names}
    assert LineBundleDatum.from_chart_lattices(s, lats).bounds == good.bounds
    bad = dict(lats)
    bad["U1"] = SectionLattice(s.variables, (Constraint((1, 1), 3, label="E"), Constraint((1, 0), 0, label="t0")))
    with pytest.raises(ValueError, match="disagree"):
        LineBundleDatum.from_chart_lattices(s, bad)
    bad["U1"] = SectionLattice(s.variables, (Constraint((1, 1), 2, label="E"),))
    with pytest.raises(ValueError):
        LineBundleDatum.from_chart_lattices(s, bad)


def test_malformed_spaces_are_rejected():
    with pytest.raises(ValueError):
        CoveredSpace(("x",), (Ray("x", (2,)),), (("A", {"x"}),))
    with pytest.raises(ValueError):
        CoveredSpace(("x",), (Ray("x", (1,)),), (("A", {"y"}),))
    with pytest.raises(ValueError):
        CechComplex(projective_bundle(1, 0), Box.cube(3, 0, 0))


def test_defect_error_on_broken_differential(monkeypatch):
    # negative control: a sign-free differential must be caught by the d o d check
    import modcoh.cech as cech

    original = cech._differential

    def unsigned(cells_p, cells_q):
        return [[abs(x) for x in row] for row in original(cells_p, cells_q)]

    monkeypatch.setattr(cech, "_differential", unsigned)
    with pytest.raises(DefectError):
        CechComplex(projective_bundle(2, 0), Box.cube(3, 0, 0)).check_d_squared()
