"""The filtered structure sheaf on affine modulus data.

For a ring A and a nonzero divisor f, the module of interest is

    MO(A, f) = { a/f in A[1/f] : a in rad(f) }.

Radicals are taken from a declared factorisation ``f = u * prod p_i^r_i``;
no factorisation or general radical algorithm is attempted.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Iterable

from .poly import (
    CoeffRing,
    NotDivisibleError,
    Poly,
    PolyRing,
    RingMap,
    UnsupportedRingError,
    divides,
    exact_divide,
    format_fraction,
    parse_factored,
    parse_fraction,
)
from .verdict import FAIL, PASS, WITNESSED, Box, DefectError, TheoremVerdict

__all__ = [
    "FactoredDivisor",
    "AffineModulusPair",
    "LocalizedElement",
    "MOModule",
    "NotAdmissibleError",
    "DefectError",
    "mo_generator",
    "mo_contains",
    "membership_exponent",
    "mo_pullback",
    "check_poly_extension",
    "check_divisor_shift",
    "membership_sweep",
    "pair_from_spec",
    "pair_to_spec",
]


class NotAdmissibleError(ValueError):
    """A morphism of modulus data fails the divisibility requirement."""


@dataclass(frozen=True)
class FactoredDivisor:
    ring: PolyRing
    factors: tuple[tuple[Poly, int], ...] = ()
    unit: object = 1

    def __post_init__(self):
        ring = self.ring
        object.__setattr__(self, "unit", ring.coeffs.coerce(self.unit))
        if not ring.coeffs.is_unit(self.unit):
            raise ValueError(f"unit part {self.unit} is not a unit")
        facs = []
        for p, r in self.factors:
            p = ring(p)
            if int(r) != r or r < 1:
                raise ValueError(f"multiplicity must be a positive integer, got {r}")
            if p.is_zero() or p.is_unit():
                raise ValueError(f"declared irreducible {p} is zero or a unit")
            if ring.coeffs is CoeffRing.DUAL and not p.eps_part().is_zero():
                raise UnsupportedRingError("dual-number factors must be eps-free")
            facs.append((p, int(r)))
        for i, (p, _) in enumerate(facs):
            for q, _ in facs[:i]:
                if _associate(p, q):
                    raise ValueError(f"declared factors {q} and {p} are associate")
        object.__setattr__(self, "factors", tuple(facs))
        if ring.coeffs is CoeffRing.DUAL and self.expand().real_part().is_zero():
            raise ValueError("modulus is a zero divisor")

    @classmethod
    def parse(cls, ring: PolyRing, text: str) -> "FactoredDivisor":
        unit, factors = parse_factored(ring, text)
        return cls(ring, tuple(factors), unit)

    @classmethod
    def monomial(cls, ring: PolyRing, exps: Iterable[int]) -> "FactoredDivisor":
        return cls(ring, tuple((ring.gen(v), r) for v, r in zip(ring.variables, exps) if r))

    def expand(self) -> Poly:
        out = self.ring.const(self.unit)
        for p, r in self.factors:
            out = out * p ** r
        return out

    def radical(self) -> Poly:
        out = self.ring.one()
        for p, _ in self.factors:
            out = out * p
        return out

    @property
    def max_multiplicity(self) -> int:
        return max((r for _, r in self.factors), default=0)

    def power(self, n: int) -> "FactoredDivisor":
        return FactoredDivisor(self.ring, tuple((p, r * n) for p, r in self.factors), self.unit ** n)

    def times(self, p: Poly, r: int = 1) -> "FactoredDivisor":
        return FactoredDivisor(self.ring, self.factors + ((p, r),), self.unit)

    def to_ring(self, ring: PolyRing) -> "FactoredDivisor":
        """Transport along an inclusion of rings; factors becoming units are dropped."""
        facs = tuple((p.to_ring(ring), r) for p, r in self.factors)
        return FactoredDivisor(ring, tuple(fr for fr in facs if not fr[0].is_unit()), self.unit)

    def __str__(self):
        parts = []
        if self.unit != 1:
            parts.append(str(self.ring.const(self.unit)))
        for p, r in self.factors:
            s = str(p)
            if len(p) > 1 or "*" in s:
                s = f"({s})"
            parts.append(s if r == 1 else f"{s}^{r}")
        return "*".join(parts) or "1"


def _associate(p: Poly, q: Poly) -> bool:
    try:
        return exact_divide(p, q).is_unit()
    except (NotDivisibleError, UnsupportedRingError):
        return False


@dataclass(frozen=True)
class AffineModulusPair:
    ring: PolyRing
    modulus: FactoredDivisor

    def __post_init__(self):
        if self.modulus.ring != self.ring:
            raise ValueError("modulus must live in the pair's ring")

    @classmethod
    def parse(cls, variables, f: str, invertible: Iterable[str] = (), coeffs=CoeffRing.RATIONALS):
        if isinstance(variables, str):
            variables = [v.strip() for v in variables.split(",") if v.strip()]
        if isinstance(coeffs, str):
            coeffs = CoeffRing.from_name(coeffs)
        ring = PolyRing(tuple(variables), frozenset(invertible), coeffs)
        return cls(ring, FactoredDivisor.parse(ring, f))

    @classmethod
    def monomial(cls, variables, exps: Iterable[int], coeffs=CoeffRing.RATIONALS) -> "AffineModulusPair":
        ring = PolyRing(tuple(variables), coeffs=coeffs)
        return cls(ring, FactoredDivisor.monomial(ring, exps))

    @cached_property
    def f(self) -> Poly:
        return self.modulus.expand()

    @cached_property
    def radical(self) -> Poly:
        return self.modulus.radical()

    @cached_property
    def _powers(self) -> list[Poly]:
        return [self.ring.one()]

    def f_power(self, k: int) -> Poly:
        powers = self._powers
        while len(powers) <= k:
            powers.append(powers[-1] * self.f)
        return powers[k]

    def extend(self, var: str, invertible: bool = False) -> "AffineModulusPair":
        """(A[var], f), or (A[var, 1/var], f) when ``invertible``."""
        ring = self.ring.with_variables([var], [var] if invertible else [])
        return AffineModulusPair(ring, self.modulus.to_ring(ring))

    def with_ring(self, ring: PolyRing) -> "AffineModulusPair":
        return AffineModulusPair(ring, self.modulus.to_ring(ring))

    def try_localize(self, num, den=1) -> "LocalizedElement | None":
        """num/den as an element of A[1/f], or None if it is not one."""
        num, den = self.ring(num), self.ring(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if self.ring.coeffs is CoeffRing.RATIONALS:
            return self._localize_factorial(num, den)
        return self._localize_by_power(num, den)

    def _localize_by_power(self, num: Poly, den: Poly) -> "LocalizedElement | None":
        # if den | num*f^k for some k then also for every larger k, and the
        # multiplicity of any prime factor of den bounds the k needed
        bound = 1 + sum(max(abs(e) for e in col) for col in zip(*den.terms)) if not den.is_constant() else 0
        try:
            return LocalizedElement(self, exact_divide(num * self.f_power(bound), den), bound)
        except (NotDivisibleError, UnsupportedRingError):
            return None

    @cached_property
    def _factor_vars(self) -> list[int | None]:
        """Index of the variable each declared factor is, or None."""
        out = []
        for p, _ in self.modulus.factors:
            exp, c = p.leading()
            out.append(exp.index(1) if p.is_monomial() and c == 1 and sum(exp) == 1 else None)
        return out

    def _localize_factorial(self, num: Poly, den: Poly) -> "LocalizedElement | None":
        # strip declared primes from den; what is left is prime to f, so it
        # must divide num outright
        k = 0
        rest = []
        # variable factors of a monomial den are read off its exponent
        dexp = list(den.exponent()) if den.is_monomial() else None
        for (p, r), j in zip(self.modulus.factors, self._factor_vars):
            if dexp is not None and j is not None:
                e, dexp[j] = dexp[j], 0
            else:
                if dexp is not None:
                    den, dexp = den.ring.monomial(dexp, den.leading()[1]), None
                e = 0
                while not den.is_constant():
                    try:
                        den = exact_divide(den, p)
                    except NotDivisibleError:
                        break
                    e += 1
            k = max(k, -(-e // r))
            rest.append((p, e, r, j))
        if dexp is not None:
            den = den.ring.monomial(dexp, den.leading()[1])
        try:
            num = exact_divide(num, den)
        except NotDivisibleError:
            return None
        shift = [0] * self.ring.nvars
        for p, e, r, j in rest:
            if j is not None:
                shift[j] += r * k - e
            else:
                num = num * p ** (r * k - e)
        if any(shift):
            num = num.shift(shift)
        if k and self.modulus.unit != 1:
            num = num * self.ring.const(self.modulus.unit) ** k
        return LocalizedElement(self, num, k)

    def localize(self, num, den=1) -> "LocalizedElement":
        out = self.try_localize(num, den)
        if out is None:
            raise ValueError(f"({num})/({den}) is not in {self.ring}[1/f]")
        return out

    def parse_element(self, text: str) -> "LocalizedElement | None":
        num, den = parse_fraction(self.ring, text)
        return self.try_localize(num, den)

    def monomial_element(self, exp: Iterable[int], coeff=1) -> "LocalizedElement | None":
        """The Laurent monomial coeff * x^exp, if it lies in A[1/f]."""
        exp = tuple(exp)
        num_exp = tuple(max(e, 0) if v not in self.ring.invertible else e
                        for v, e in zip(self.ring.variables, exp))
        den_exp = tuple(n - e for n, e in zip(num_exp, exp))
        return self.try_localize(self.ring.monomial(num_exp, coeff), self.ring.monomial(den_exp))

    def __str__(self):
        return f"({self.ring}, {self.modulus})"


@dataclass(frozen=True)
class LocalizedElement:
    """numerator / f^fpower in A[1/f], with fpower minimal."""

    pair: AffineModulusPair
    numerator: Poly
    fpower: int = 0

    def __post_init__(self):
        num = self.pair.ring(self.numerator)
        k = int(self.fpower)
        if k < 0:
            raise ValueError("fpower must be nonnegative")
        f = self.pair.f
        while k > 0:
            try:
                num = exact_divide(num, f)
            except NotDivisibleError:
                break
            k -= 1
        if num.is_zero():
            k = 0
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "fpower", k)

    def __add__(self, other: "LocalizedElement") -> "LocalizedElement":
        if other.pair != self.pair:
            raise ValueError("elements of different localisations")
        k = max(self.fpower, other.fpower)
        f = self.pair.f
        num = self.numerator * f ** (k - self.fpower) + other.numerator * f ** (k - other.fpower)
        return LocalizedElement(self.pair, num, k)

    def scale(self, p) -> "LocalizedElement":
        return LocalizedElement(self.pair, self.numerator * self.pair.ring(p), self.fpower)

    def in_ring(self) -> bool:
        return self.fpower == 0

    def laurent(self) -> Poly | None:
        """Value in the full Laurent ring when f is a monomial up to a unit."""
        f = self.pair.f
        if not f.is_monomial():
            return None
        lring = self.pair.ring.laurent()
        return self.numerator.to_ring(lring) * f.to_ring(lring) ** (-self.fpower)

    def __str__(self):
        lp = self.laurent()
        if lp is not None:
            return format_fraction(lp)
        if self.fpower == 0:
            return str(self.numerator)
        # the denominator is a product of declared factors: cancel what we can
        k = self.fpower
        mod = self.pair.modulus
        num = self.numerator * self.pair.ring.const(self.pair.ring.coeffs.inverse(mod.unit) ** k)
        left = []
        for p, r in mod.factors:
            e = r * k
            while e:
                try:
                    num = exact_divide(num, p)
                except NotDivisibleError:
                    break
                e -= 1
            if e:
                left.append((p, e))
        if not left:
            return str(num)
        den = str(FactoredDivisor(self.pair.ring, tuple(left)))
        if len(left) > 1:
            den = f"({den})"
        ns = str(num)
        if len(num) > 1:
            ns = f"({ns})"
        return f"{ns}/{den}"


@dataclass(frozen=True)
class MOModule:
    pair: AffineModulusPair
    generator: LocalizedElement

    def contains(self, a: LocalizedElement) -> bool:
        return mo_contains(self.pair, a)

    def generator_exponent(self) -> tuple[int, ...] | None:
        lp = self.generator.laurent()
        if lp is None or not lp.is_monomial():
            return None
        return lp.exponent()

    def contains_exponent(self, exp: Iterable[int]) -> bool:
        """Lattice test for a Laurent monomial when the generator is a monomial."""
        g = self.generator_exponent()
        if g is None:
            raise ValueError("generator is not a monomial")
        diff = tuple(e - ge for e, ge in zip(exp, g))
        return self.pair.ring.allows(diff)

    def __str__(self):
        return f"{self.generator} * {self.pair.ring}"


# ---------------------------------------------------------------- operations


def mo_generator(pair: AffineModulusPair) -> MOModule:
    """Free generator 1/prod p_i^(r_i - 1) over a factorial coefficient ring."""
    if pair.ring.coeffs is not CoeffRing.RATIONALS:
        raise UnsupportedRingError("the closed-form generator needs a UFD (rational coefficients)")
    unit = pair.modulus.unit
    gen = LocalizedElement(pair, pair.modulus.radical() * unit, 1)
    return MOModule(pair, gen)


def _f_times(pair: AffineModulusPair, a: LocalizedElement) -> Poly | None:
    """f*a as an element of A, or None when f*a is not in A."""
    if a.fpower == 0:
        return a.numerator * pair.f
    try:
        return exact_divide(a.numerator, pair.f_power(a.fpower - 1))
    except NotDivisibleError:
        return None


def _in_radical(pair: AffineModulusPair, b: Poly) -> bool:
    rad = pair.radical
    if pair.ring.coeffs is CoeffRing.DUAL:
        # rad(f) = (prod p_i, eps) for eps-free p_i
        return divides(rad, b.real_part())
    return divides(rad, b)


def membership_exponent(pair: AffineModulusPair, a: LocalizedElement, n_bound: int) -> int | None:
    """Smallest n <= n_bound with f*a and (f*a)^n * a in A, or None."""
    b = _f_times(pair, a)
    if b is None:
        return None
    fk = pair.f_power(a.fpower)
    power = pair.ring.one()
    for n in range(n_bound + 1):
        if divides(fk, power * a.numerator):
            return n
        power = power * b
    return None


def mo_contains(pair: AffineModulusPair, a: LocalizedElement, n_bound: int | None = None) -> bool:
    """Membership of ``a`` in MO(pair).

    Over QQ the radical-divisibility test is authoritative and the bounded
    power search (n <= max r_i, which is complete there) must agree.  Over the
    dual numbers the search with ``n_bound`` (default 4) decides; the radical
    test is cross-checked whenever the bound is large enough to be complete.
    """
    if a.pair != pair:
        raise ValueError("element belongs to a different modulus pair")
    max_r = pair.modulus.max_multiplicity
    b = _f_times(pair, a)
    by_radical = b is not None and _in_radical(pair, b)
    if pair.ring.coeffs is CoeffRing.RATIONALS:
        bound = max_r if n_bound is None else max(n_bound, max_r)
        by_search = membership_exponent(pair, a, bound) is not None
        if by_search != by_radical:
            raise DefectError(f"membership methods disagree on {a} in {pair}")
        return by_radical
    bound = 4 if n_bound is None else n_bound
    by_search = membership_exponent(pair, a, bound) is not None
    if bound >= max_r and by_search != by_radical:
        raise DefectError(f"membership methods disagree on {a} in {pair}")
    return by_search


def mo_pullback(m: RingMap, src: AffineModulusPair, dst: AffineModulusPair,
                a: LocalizedElement) -> LocalizedElement:
    """Image of ``a`` under A[1/f] -> B[1/g]; needs phi(f) | g."""
    if m.source != src.ring or m.target != dst.ring:
        raise ValueError("ring map does not match the modulus pairs")
    phi_f = m(src.f)
    try:
        h = exact_divide(dst.f, phi_f)
    except NotDivisibleError:
        raise NotAdmissibleError(f"phi(f) = {phi_f} does not divide {dst.f}") from None
    return LocalizedElement(dst, m(a.numerator) * h ** a.fpower, a.fpower)


# ---------------------------------------------------------------- lemma checks


def _numerator_ranges(ring: PolyRing, bound: int):
    return [range(-bound, bound + 1) if v in ring.invertible else range(0, bound + 1)
            for v in ring.variables]


def _fresh(ring: PolyRing, var: str) -> str:
    name = var
    while name in ring.variables:
        name += "_"
    return name


def check_poly_extension(pair: AffineModulusPair, degree_bound: int, var: str = "t") -> TheoremVerdict:
    """MO(A[t], f) agrees with MO(A, f)[t] coefficientwise on a finite box.

    Elements are x^alpha * t^c / f^k with all exponents in [0, degree_bound]
    (invertible variables in [-degree_bound, degree_bound]), plus binomials in
    two different t-degrees.
    """
    var = _fresh(pair.ring, var)
    ext = pair.extend(var)
    B = degree_bound
    singles = [(alpha, k) for alpha in cartesian(*_numerator_ranges(pair.ring, B)) for k in range(B + 1)]
    checked = 0

    def base_member(alpha, k):
        return mo_contains(pair, LocalizedElement(pair, pair.ring.monomial(alpha), k))

    def ext_elem(alpha, c, k):
        return LocalizedElement(ext, ext.ring.monomial(alpha + (c,)), k)

    base_cache = {}
    for alpha, k in singles:
        base_cache[alpha, k] = base_member(alpha, k)
        for c in range(B + 1):
            e = ext_elem(alpha, c, k)
            checked += 1
            if mo_contains(ext, e) != base_cache[alpha, k]:
                return _verdict_fail("poly_extension", pair, B, str(e), checked)
    for i, (alpha, k) in enumerate(singles):
        beta, l = singles[(7 * i + 3) % len(singles)]
        e = ext_elem(alpha, 0, k) + ext_elem(beta, 1, l)
        checked += 1
        if mo_contains(ext, e) != (base_cache[alpha, k] and base_cache[beta, l]):
            return _verdict_fail("poly_extension", pair, B, str(e), checked)
    return TheoremVerdict(
        "poly_extension", {"pair": str(pair), "degree_bound": B, "variable": var}, PASS,
        box=_record_box(pair.ring, B).extend([(0, B)]),
        details={"elements_checked": checked, "fpower_range": [0, B]},
    )


def _record_box(ring: PolyRing, bound: int) -> Box:
    return Box(tuple((-bound, bound) if v in ring.invertible else (0, bound) for v in ring.variables))


def _verdict_fail(name, pair, bound, witness, checked):
    return TheoremVerdict(name, {"pair": str(pair), "degree_bound": bound}, FAIL,
                          box=_record_box(pair.ring, bound), witness=witness,
                          details={"elements_checked": checked})


def check_divisor_shift(pair: AffineModulusPair, degree_bound: int, var: str = "t",
                        n_bound: int | None = None) -> TheoremVerdict:
    """Compare MO(A[t], f) and MO(A[t], f*t) inside A[t, 1/t, 1/f].

    Over QQ the two must coincide.  Over the dual numbers the first is only
    contained in the second; a strictly larger element is returned as witness.
    """
    var = _fresh(pair.ring, var)
    ext = pair.extend(var)
    shifted = AffineModulusPair(ext.ring, ext.modulus.times(ext.ring.gen(var)))
    B = degree_bound
    ring = ext.ring
    basis = ring.coeffs.rational_basis()
    f = ext.f
    witness = None
    checked = 0
    for alpha in cartesian(*_numerator_ranges(pair.ring, B)):
        for c in range(-B, B + 1):
            for k in range(B + 1):
                for coeff in basis:
                    num = ring.monomial(alpha + (max(c, 0),), coeff)
                    den = f ** k * ring.monomial((0,) * len(alpha) + (max(-c, 0),))
                    checked += 1
                    lhs_elem = ext.try_localize(num, den)
                    lhs = lhs_elem is not None and mo_contains(ext, lhs_elem, n_bound)
                    rhs_elem = shifted.try_localize(num, den)
                    rhs = rhs_elem is not None and mo_contains(shifted, rhs_elem, n_bound)
                    if lhs and not rhs:
                        return TheoremVerdict(
                            "divisor_shift", {"pair": str(pair), "degree_bound": B}, FAIL,
                            box=_record_box(pair.ring, B).extend([(-B, B)]), witness=str(lhs_elem),
                            details={"reason": "inclusion MO(A[t],f) in MO(A[t],ft) violated"})
                    if rhs and not lhs and witness is None:
                        witness = str(rhs_elem)
    params = {"pair": str(pair), "degree_bound": B, "variable": var}
    box = _record_box(pair.ring, B).extend([(-B, B)])
    details = {"elements_checked": checked, "fpower_range": [0, B]}
    if witness is None:
        return TheoremVerdict("divisor_shift", params, PASS, box=box, details=details)
    status = WITNESSED if ring.coeffs is CoeffRing.DUAL else FAIL
    return TheoremVerdict("divisor_shift", params, status, box=box, witness=witness, details=details)


def membership_sweep(count: int, seed: int = 0, max_exponent: int = 6, max_mult: int = 4) -> TheoremVerdict:
    """Random monomial memberships; mo_contains raises if its two methods disagree."""
    rng = random.Random(seed)
    members = 0
    for _ in range(count):
        nv = rng.randint(1, 3)
        names = ("x", "y", "z")[:nv]
        mults = [rng.randint(0, max_mult) for _ in names]
        pair = AffineModulusPair.monomial(names, mults)
        # negative exponents only where f can absorb them
        exp = [rng.randint(-max_exponent, max_exponent) if r else rng.randint(0, max_exponent) for r in mults]
        a = pair.monomial_element(exp)
        members += mo_contains(pair, a)
    return TheoremVerdict("membership", {"count": count, "seed": seed}, PASS,
                          details={"members": members, "non_members": count - members})


# ---------------------------------------------------------------- spec files


def pair_from_spec(spec: dict | str) -> AffineModulusPair:
    """Build a pair from a JSON object (or its text).

    Keys: ``variables`` (list or comma string), ``invertible`` (list),
    ``coefficients`` ("QQ" or "dual"), and either ``modulus`` (factored
    product string) or ``factors`` ([[poly, multiplicity], ...]) with an
    optional ``unit``.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    variables = spec.get("variables", [])
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",") if v.strip()]
    coeffs = CoeffRing.from_name(spec.get("coefficients", "QQ"))
    ring = PolyRing(tuple(variables), frozenset(spec.get("invertible", [])), coeffs)
    if "modulus" in spec:
        return AffineModulusPair(ring, FactoredDivisor.parse(ring, str(spec["modulus"])))
    factors = tuple((ring.parse(str(p)), int(r)) for p, r in spec.get("factors", []))
    unit = spec.get("unit", 1)
    if isinstance(unit, str):
        unit = ring.parse(unit).constant_coeff()
    return AffineModulusPair(ring, FactoredDivisor(ring, factors, unit))


def pair_to_spec(pair: AffineModulusPair) -> dict:
    ring = pair.ring
    unit = pair.modulus.unit
    return {
        "variables": list(ring.variables),
        "invertible": sorted(ring.invertible),
        "coefficients": ring.coeffs.short_name,
        "unit": str(ring.const(unit)),
        "factors": [[str(p), r] for p, r in pair.modulus.factors],
    }
