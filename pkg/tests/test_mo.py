import json

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from modcoh.mo import (
    AffineModulusPair,
    FactoredDivisor,
    LocalizedElement,
    NotAdmissibleError,
    check_divisor_shift,
    check_poly_extension,
    membership_exponent,
    membership_sweep,
    mo_contains,
    mo_generator,
    mo_pullback,
    pair_from_spec,
    pair_to_spec,
)
from modcoh.poly import CoeffRing, PolyRing, RingMap, UnsupportedRingError
from modcoh.verdict import FAIL, PASS, WITNESSED


def brute_force_member(f_exp, a_exp, n_max=10):
    """fa in A and (fa)^n a in A for some n <= n_max, by exponent arithmetic."""
    fa = [r + e for r, e in zip(f_exp, a_exp)]
    if min(fa) < 0:
        return False
    return any(all(n * x + e >= 0 for x, e in zip(fa, a_exp)) for n in range(n_max + 1))


# ---------------------------------------------------------------- examples


def test_generator_examples():
    assert str(mo_generator(AffineModulusPair.parse("x,y", "x^3*y^2")).generator) == "1/(x^2*y)"
    assert str(mo_generator(AffineModulusPair.parse("x", "x")).generator) == "1"
    assert str(mo_generator(AffineModulusPair.parse("t", "t^4")).generator) == "1/t^3"


def test_generator_needs_rationals():
    with pytest.raises(UnsupportedRingError):
        mo_generator(AffineModulusPair.parse("t", "t", coeffs="dual"))


def test_membership_examples():
    p = AffineModulusPair.parse("x", "x^2")
    assert mo_contains(p, p.parse_element("1/x"))
    assert not mo_contains(p, p.parse_element("1/x^2"))
    assert not brute_force_member([2], [-2])
    one = AffineModulusPair.parse("x", "1")
    assert mo_contains(one, one.parse_element("5"))
    assert one.parse_element("1/x") is None  # not even in A[1/f]


def test_membership_non_monomial():
    p = AffineModulusPair.parse("x,y", "(x+y)^2*x")
    assert mo_contains(p, p.parse_element("1/(x+y)"))
    assert not mo_contains(p, p.parse_element("1/(x*(x+y))"))
    assert not mo_contains(p, p.parse_element("1/(x+y)^2"))


def test_pullback_examples():
    U, T = PolyRing(("u",)), PolyRing(("t",))
    src = AffineModulusPair(U, FactoredDivisor.parse(U, "u^2"))
    dst = AffineModulusPair(T, FactoredDivisor.parse(T, "t^4"))
    m = RingMap(U, T, (T("t^2"),))
    img = mo_pullback(m, src, dst, src.parse_element("1/u"))
    assert str(img) == "1/t^2"
    a = src.parse_element("1/u + 3")
    assert mo_pullback(RingMap.identity(U), src, src, a) == a


def test_pullback_inclusion_keeps_membership():
    X, XY = PolyRing(("x",)), PolyRing(("x", "y"))
    src = AffineModulusPair(X, FactoredDivisor.parse(X, "x^2"))
    dst = AffineModulusPair(XY, FactoredDivisor.parse(XY, "x^2"))
    img = mo_pullback(RingMap.inclusion(X, XY), src, dst, src.parse_element("1/x"))
    assert str(img) == "1/x" and mo_contains(dst, img)


def test_pullback_not_admissible():
    X = PolyRing(("x",))
    src = AffineModulusPair(X, FactoredDivisor.parse(X, "x^2"))
    dst = AffineModulusPair(X, FactoredDivisor.parse(X, "x"))
    with pytest.raises(NotAdmissibleError):
        mo_pullback(RingMap.identity(X), src, dst, src.parse_element("1/x"))


def test_poly_extension_examples():
    for f, bound in (("x^2", 4), ("1", 3)):
        assert check_poly_extension(AffineModulusPair.parse("x", f), bound).status == PASS
    assert check_poly_extension(AffineModulusPair.parse("x,y", "x^2*y^3"), 3).status == PASS


def test_divisor_shift_examples():
    assert check_divisor_shift(AffineModulusPair.parse("x", "x^2"), 4).status == PASS
    assert check_divisor_shift(AffineModulusPair.parse("", "1"), 2).status == PASS
    v = check_divisor_shift(AffineModulusPair.parse("", "1", coeffs="dual"), 2)
    assert v.status == WITNESSED
    assert "eps" in v.witness


def test_divisor_shift_detects_bad_membership(monkeypatch):
    # negative control: a membership test that ignores the radical breaks the shift identity
    import modcoh.mo as mo

    monkeypatch.setattr(mo, "mo_contains", lambda pair, a, n=None: mo._f_times(pair, a) is not None)
    assert check_divisor_shift(AffineModulusPair.parse("x", "x^2"), 2).status == FAIL


def test_factored_divisor_validation():
    R = PolyRing(("x",))
    with pytest.raises(ValueError):
        FactoredDivisor(R, ((R("x"), 1), (R("2*x"), 1)), 1)  # associate factors
    with pytest.raises(ValueError):
        FactoredDivisor(R, ((R("x"), 1),), 0)
    D = PolyRing(("t",), coeffs=CoeffRing.DUAL)
    with pytest.raises(UnsupportedRingError):
        FactoredDivisor(D, ((D("t + eps"), 1),), 1)


def test_localized_element_is_canonical():
    p = AffineModulusPair.parse("x", "x^2")
    e = LocalizedElement(p, p.ring("x^4"), 3)
    assert e.fpower == 1 and e.numerator == p.ring("1")  # x^4/x^6 = 1/f


def test_pair_spec_round_trip(tmp_path):
    spec = {"variables": ["x", "y"], "coefficients": "QQ", "factors": [["x+y", 2], ["x", 1]], "unit": "3"}
    pair = pair_from_spec(spec)
    again = pair_from_spec(json.dumps(pair_to_spec(pair)))
    assert again == pair
    assert str(mo_generator(pair).generator) == "1/(x + y)"
    assert pair_from_spec({"variables": "x,y", "modulus": "x^3*y^2"}).f == pair.ring("x^3*y^2")


def test_membership_sweep_runs():
    v = membership_sweep(200, seed=3)
    assert v.status == PASS and v.details["members"] + v.details["non_members"] == 200
    assert v.to_dict() == membership_sweep(200, seed=3).to_dict()


# ---------------------------------------------------------------- properties

IRREDUCIBLES = ("x", "y", "x + 1", "x + y", "x*y + 1", "x^2 + y^2 + 1")


@st.composite
def factored_pairs(draw):
    chosen = draw(st.lists(st.sampled_from(IRREDUCIBLES), min_size=1, max_size=3, unique=True))
    text = "*".join(f"({p})^{draw(st.integers(1, 3))}" for p in chosen)
    return AffineModulusPair.parse("x,y", text)


@given(factored_pairs())
@settings(max_examples=40, deadline=None)
def test_generator_is_member_and_sharp(pair):
    gen = mo_generator(pair).generator
    assert mo_contains(pair, gen)
    for p, _ in pair.modulus.factors:
        sharper = pair.try_localize(gen.numerator, pair.f_power(gen.fpower) * p)
        assert sharper is not None and not mo_contains(pair, sharper)


def sympy_member(pair, num, den):
    """Definition-level oracle with the radical computed by sympy's factorization."""
    x, y = sympy.symbols("x y")
    f = sympy.sympify(str(pair.f).replace("^", "**"))
    rad = sympy.prod([b for b, _ in sympy.factor_list(f)[1]])
    a = sympy.sympify(f"({num})/({den})".replace("^", "**"))
    fa = sympy.cancel(f * a)
    if not fa.is_polynomial(x, y):
        return False
    return sympy.cancel(fa / rad).is_polynomial(x, y)


@given(factored_pairs(), st.sampled_from(("1", "x", "y + 2", "x*y - 1", "x + y")),
       st.lists(st.sampled_from(IRREDUCIBLES), max_size=4))
@settings(max_examples=60, deadline=None)
def test_membership_matches_sympy_oracle(pair, num, den_factors):
    den = "*".join(f"({p})" for p in den_factors) or "1"
    elem = pair.try_localize(pair.ring(num), pair.ring(den))
    assume(elem is not None)
    assert mo_contains(pair, elem) == sympy_member(pair, num, den)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=3), st.data())
@settings(max_examples=200, deadline=None)
def test_monomial_membership_matches_brute_force(mults, data):
    names = ("x", "y", "z")[:len(mults)]
    pair = AffineModulusPair.monomial(names, mults)
    exp = [data.draw(st.integers(-6, 6)) if r else data.draw(st.integers(0, 6)) for r in mults]
    a = pair.monomial_element(exp)
    assert mo_contains(pair, a) == brute_force_member(mults, exp)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=3), st.data())
@settings(max_examples=100, deadline=None)
def test_dual_methods_agree(mults, data):
    # over the dual numbers the search with a generous bound must match QQ behaviour on eps-free data
    names = ("x", "y", "z")[:len(mults)]
    q = AffineModulusPair.monomial(names, mults)
    d = AffineModulusPair.monomial(names, mults, coeffs=CoeffRing.DUAL)
    exp = [data.draw(st.integers(-6, 6)) if r else data.draw(st.integers(0, 6)) for r in mults]
    assert mo_contains(d, d.monomial_element(exp), max(mults) + 1) == mo_contains(q, q.monomial_element(exp))


@given(st.lists(st.integers(0, 3), min_size=2, max_size=2), st.lists(st.integers(0, 2), min_size=2, max_size=2),
       st.lists(st.integers(-5, 5), min_size=2, max_size=2))
@settings(max_examples=100, deadline=None)
def test_monotone_in_modulus(f_exp, h_exp, a_exp):
    g_exp = [a + b for a, b in zip(f_exp, h_exp)]
    src = AffineModulusPair.monomial(("x", "y"), f_exp)
    dst = AffineModulusPair.monomial(("x", "y"), g_exp)
    a = src.monomial_element([e if r else abs(e) for e, r in zip(a_exp, f_exp)])
    img = mo_pullback(RingMap.identity(src.ring), src, dst, a)
    if mo_contains(src, a):
        assert mo_contains(dst, img)


def test_exhaustion_in_box():
    base = AffineModulusPair.parse("x,y", "x^2*y")
    box = [(a, b) for a in range(-4, 5) for b in range(-4, 5)]
    covered = set()
    for n in range(1, 7):
        pair = AffineModulusPair(base.ring, base.modulus.power(n))
        now = {e for e in box if mo_contains(pair, pair.monomial_element(e))}
        assert covered <= now  # increasing
        covered = now
    assert covered == set(box)  # every monomial of A[1/f] in the box


def test_membership_exponent_is_bounded_by_multiplicity():
    pair = AffineModulusPair.parse("x", "x^3")
    # 1/x^2 needs n with (x)^n / x^2 in A, i.e. n = 2
    assert membership_exponent(pair, pair.parse_element("1/x^2"), 3) == 2
    assert membership_exponent(pair, pair.parse_element("1/x^3"), 3) is None


@given(factored_pairs(), st.sampled_from(("1", "x", "y + 2", "x*y - 1")),
       st.lists(st.sampled_from(IRREDUCIBLES + ("x - y", "y + 3")), max_size=3))
@settings(max_examples=60, deadline=None)
def test_localization_shortcut_matches_power_search(pair, num, den_factors):
    num = pair.ring(num)
    den = pair.ring("*".join(f"({p})" for p in den_factors) or "1")
    assert pair.try_localize(num, den) == pair._localize_by_power(num, den)


@given(st.lists(st.integers(0, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 4), min_size=3, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3), st.sampled_from(("1", "y + 1", "2*x - z")))
@settings(max_examples=80, deadline=None)
def test_monomial_denominator_shortcut(mults, num_exp, den_exp, extra):
    pair = AffineModulusPair.parse("x,y,z", "*".join(f"{v}^{r}" for v, r in zip("xy", mults) if r) or "1",
                                   invertible=["z"])
    num = pair.ring.monomial([max(num_exp[0], 0), max(num_exp[1], 0), num_exp[2]]) * pair.ring(extra)
    den = pair.ring.monomial([den_exp[0], den_exp[1], den_exp[2] - 2], 3)
    assert pair.try_localize(num, den) == pair._localize_by_power(num, den)
