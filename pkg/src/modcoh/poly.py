"""Exact sparse (Laurent) polynomials over QQ and the dual numbers QQ[eps]/(eps^2).

A :class:`PolyRing` fixes an ordered tuple of variable names, the subset of
them that is invertible, and the coefficient ring.  Elements are immutable
:class:`Poly` objects holding a map ``exponent vector -> nonzero coefficient``.

Text form::

    3/2*x^2*y - x + 1        eps*t + 1        x^-1*y      (x invertible)

``eps`` is reserved for the nilpotent generator of the dual numbers.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

__all__ = [
    "CoeffRing",
    "Dual",
    "PolyRing",
    "Poly",
    "RingMap",
    "RingMismatchError",
    "NotDivisibleError",
    "UnsupportedRingError",
    "ParseError",
    "exact_divide",
    "divides",
    "apply_map",
]


class RingMismatchError(ValueError):
    """Operands live in different rings."""


class NotDivisibleError(ArithmeticError):
    """Exact division has no solution in the ring."""

    def __init__(self, message: str = "", dividend=None, divisor=None):
        super().__init__(message)
        self.dividend = dividend
        self.divisor = divisor

    def __str__(self):
        # formatted lazily: division failures are routine in membership searches
        if self.dividend is not None:
            return f"{self.divisor} does not divide {self.dividend}"
        return super().__str__()


class UnsupportedRingError(ValueError):
    """The operation needs a coefficient ring we do not support here."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0, line: int = 1):
        self.text = text
        self.pos = pos
        self.line = line
        self.column = pos + 1
        super().__init__(f"{message} (line {line}, column {self.column})")


@dataclass(frozen=True, slots=True)
class Dual:
    """a + b*eps with eps^2 = 0."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @staticmethod
    def lift(x) -> "Dual":
        return x if isinstance(x, Dual) else Dual(Fraction(x))

    def __add__(self, other):
        o = Dual.lift(other)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Dual.lift(other))

    def __rsub__(self, other):
        return Dual.lift(other) - self

    def __mul__(self, other):
        o = Dual.lift(other)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** -k
        # (a + b eps)^k = a^k + k a^(k-1) b eps
        return Dual(self.a ** k, k * self.a ** (k - 1) * self.b if k else 0)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, Dual):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def is_unit(self) -> bool:
        return self.a != 0

    def inverse(self) -> "Dual":
        if not self.a:
            raise ZeroDivisionError(f"{self} is not a unit")
        return Dual(1 / self.a, -self.b / (self.a * self.a))

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


class CoeffRing(enum.Enum):
    RATIONALS = "QQ"
    DUAL = "QQ[eps]/(eps^2)"

    @classmethod
    def from_name(cls, name: str) -> "CoeffRing":
        key = name.strip().lower()
        if key in {"qq", "q", "rationals", "rational"}:
            return cls.RATIONALS
        if key in {"dual", "dualnumbers", "dual_numbers", "qq[eps]", "qq[eps]/(eps^2)"}:
            return cls.DUAL
        raise ValueError(f"unknown coefficient ring {name!r}")

    @property
    def short_name(self) -> str:
        return "QQ" if self is CoeffRing.RATIONALS else "dual"

    def coerce(self, c):
        if self is CoeffRing.RATIONALS:
            if isinstance(c, Dual):
                if c.b:
                    raise UnsupportedRingError("eps is not available over QQ")
                return c.a
            return Fraction(c)
        return Dual.lift(c)

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def is_unit(self, c) -> bool:
        if self is CoeffRing.RATIONALS:
            return c != 0
        return c.is_unit()

    def inverse(self, c):
        if self is CoeffRing.RATIONALS:
            return 1 / Fraction(c)
        return c.inverse()

    def rational_basis(self) -> tuple:
        """A QQ-basis of the coefficient ring."""
        if self is CoeffRing.RATIONALS:
            return (Fraction(1),)
        return (Dual(1), Dual(0, 1))


Exp = tuple[int, ...]


@dataclass(frozen=True)
class PolyRing:
    variables: tuple[str, ...]
    invertible: frozenset[str] = frozenset()
    coeffs: CoeffRing = CoeffRing.RATIONALS

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "invertible", frozenset(self.invertible))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"repeated variable names in {self.variables}")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) or v == "eps":
                raise ValueError(f"bad variable name {v!r}")
        if not self.invertible <= set(self.variables):
            raise ValueError("invertible variables must be ring variables")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def is_laurent(self) -> bool:
        return bool(self.invertible)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise RingMismatchError(f"{name!r} is not a variable of {self}") from None

    def allows(self, exp: Exp) -> bool:
        return all(e >= 0 or v in self.invertible for v, e in zip(self.variables, exp))

    def with_variables(self, extra: Iterable[str], invertible: Iterable[str] = ()) -> "PolyRing":
        return PolyRing(self.variables + tuple(extra), self.invertible | frozenset(invertible), self.coeffs)

    def localized(self, names: Iterable[str]) -> "PolyRing":
        return PolyRing(self.variables, self.invertible | frozenset(names), self.coeffs)

    def laurent(self) -> "PolyRing":
        """The ring with every variable inverted."""
        return PolyRing(self.variables, frozenset(self.variables), self.coeffs)

    # constructors
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        return Poly(self, {(0,) * self.nvars: c})

    def monomial(self, exp: Iterable[int], c=1) -> "Poly":
        return Poly(self, {tuple(exp): c})

    def gen(self, name: str) -> "Poly":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return self.monomial(exp)

    def gens(self) -> tuple["Poly", ...]:
        return tuple(self.gen(v) for v in self.variables)

    def eps(self) -> "Poly":
        if self.coeffs is not CoeffRing.DUAL:
            raise UnsupportedRingError("eps needs dual-number coefficients")
        return self.const(Dual(0, 1))

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)

    def __call__(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring} vs {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def __str__(self):
        names = ", ".join(f"{v}^±1" if v in self.invertible else v for v in self.variables)
        return f"{self.coeffs.short_name}[{names}]"


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exp, object] | None = None, *, _trusted=False):
        self.ring = ring
        if _trusted:
            self._terms = terms
        else:
            coeffs = ring.coeffs
            clean: dict[Exp, object] = {}
            for exp, c in (terms or {}).items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != ring.nvars:
                    raise RingMismatchError(f"exponent {exp} has wrong length for {ring}")
                if not ring.allows(exp):
                    raise ValueError(f"negative exponent on a non-invertible variable: {exp} in {ring}")
                c = coeffs.coerce(c)
                if c:
                    clean[exp] = c
            self._terms = clean
        self._hash = None

    @property
    def terms(self) -> dict[Exp, object]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical (lex-descending) order."""
        return sorted(self._terms.items(), reverse=True)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction, Dual)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Fraction, Dual)):
            return self.ring.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Poly(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if len(self._terms) == 1 and len(other._terms) == 1:
            (e1, c1), = self._terms.items()
            (e2, c2), = other._terms.items()
            c = c1 * c2
            return Poly(self.ring, {tuple(a + b for a, b in zip(e1, e2)): c} if c else {}, _trusted=True)
        out: dict[Exp, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(exp, 0) + c1 * c2
                if s:
                    out[exp] = s
                else:
                    out.pop(exp, None)
        return Poly(self.ring, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # structure
    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0,) * self.ring.nvars}

    def constant_coeff(self):
        return self._terms.get((0,) * self.ring.nvars, self.ring.coeffs.zero())

    def exponent(self) -> Exp:
        """Exponent vector of a monomial."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return next(iter(self._terms))

    def coefficient(self, exp: Iterable[int]):
        return self._terms.get(tuple(exp), self.ring.coeffs.zero())

    def leading(self) -> tuple[Exp, object]:
        if not self._terms:
            raise ValueError("zero has no leading term")
        exp = max(self._terms)
        return exp, self._terms[exp]

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_unit(self) -> bool:
        if len(self._terms) != 1:
            return False
        exp, c = next(iter(self._terms.items()))
        inv = self.ring.invertible
        return self.ring.coeffs.is_unit(c) and all(
            e == 0 or v in inv for v, e in zip(self.ring.variables, exp)
        )

    def unit_inverse(self) -> "Poly":
        if not self.is_unit():
            raise NotDivisibleError(f"{self} is not a unit in {self.ring}")
        exp, c = next(iter(self._terms.items()))
        return Poly(self.ring, {tuple(-e for e in exp): self.ring.coeffs.inverse(c)}, _trusted=True)

    def real_part(self) -> "Poly":
        """For dual coefficients: the eps-free part (coefficients stay dual)."""
        if self.ring.coeffs is CoeffRing.RATIONALS:
            return self
        return Poly(self.ring, {e: Dual(c.a) for e, c in self._terms.items() if c.a}, _trusted=True)

    def eps_part(self) -> "Poly":
        """For dual coefficients: q with self = real_part + eps*q, q eps-free."""
        if self.ring.coeffs is CoeffRing.RATIONALS:
            return self.ring.zero()
        return Poly(self.ring, {e: Dual(c.b) for e, c in self._terms.items() if c.b}, _trusted=True)

    def to_ring(self, ring: PolyRing) -> "Poly":
        """Same terms viewed in ``ring`` (matched by variable name)."""
        if ring == self.ring:
            return self
        idx = [ring.index(v) for v in self.ring.variables]
        out = {}
        for exp, c in self._terms.items():
            new = [0] * ring.nvars
            for i, e in zip(idx, exp):
                new[i] = e
            out[tuple(new)] = c
        return Poly(ring, out)

    def shift(self, exp: Iterable[int]) -> "Poly":
        """Multiply by the monomial with exponent ``exp`` (must stay in the ring)."""
        exp = tuple(exp)
        return Poly(self.ring, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()})

    def min_exponents(self) -> Exp:
        return tuple(min(col) for col in zip(*self._terms)) if self._terms else (0,) * self.ring.nvars

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({str(self)!r}, {self.ring})"


# ---------------------------------------------------------------- division


def _divide_monomial(p: Poly, q: Poly) -> Poly:
    (qexp, qc), = q._terms.items()
    coeffs = p.ring.coeffs
    if qc == 1:
        inv = qc
    else:
        inv = coeffs.inverse(qc) if coeffs.is_unit(qc) else None
    out = {}
    for exp, c in p._terms.items():
        new = tuple(a - b for a, b in zip(exp, qexp))
        if not p.ring.allows(new):
            raise NotDivisibleError("", p, q)
        if inv is not None:
            out[new] = c if qc == 1 else c * inv
        else:
            # non-unit dual coefficient b*eps: need c in eps*QQ
            if c.a:
                raise NotDivisibleError("", p, q)
            out[new] = Dual(c.b / qc.b)
    return Poly(p.ring, out, _trusted=True)


def exact_divide(p: Poly, q: Poly) -> Poly:
    """Return r with q*r == p, or raise :class:`NotDivisibleError`.

    Over the dual numbers the lex-leading coefficient of ``q`` (after removing
    monomial content in invertible variables) must be a unit.
    """
    if p.ring != q.ring:
        raise RingMismatchError(f"{p.ring} vs {q.ring}")
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return p
    ring = p.ring
    if q.is_monomial():
        return _divide_monomial(p, q)

    # Clear monomial content in invertible variables, then divide in the
    # polynomial ring on the same variables.
    inv_mask = [v in ring.invertible for v in ring.variables]
    qmin = [m if flag else 0 for m, flag in zip(q.min_exponents(), inv_mask)]
    pmin = [m if flag else 0 for m, flag in zip(p.min_exponents(), inv_mask)]
    q0 = {tuple(a - b for a, b in zip(e, qmin)): c for e, c in q._terms.items()}
    rem = {tuple(a - b for a, b in zip(e, pmin)): c for e, c in p._terms.items()}

    coeffs = ring.coeffs
    lq_exp = max(q0)
    lq_c = q0[lq_exp]
    if not coeffs.is_unit(lq_c):
        raise UnsupportedRingError(f"leading coefficient of {q} is not a unit")
    lq_inv = coeffs.inverse(lq_c)
    quot: dict[Exp, object] = {}
    while rem:
        lexp = max(rem)
        if any(a < b for a, b in zip(lexp, lq_exp)):
            raise NotDivisibleError("", p, q)
        texp = tuple(a - b for a, b in zip(lexp, lq_exp))
        tc = rem[lexp] * lq_inv
        quot[texp] = quot.get(texp, 0) + tc
        for e, c in q0.items():
            k = tuple(a + b for a, b in zip(e, texp))
            s = rem.get(k, 0) - tc * c
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    shift = tuple(a - b for a, b in zip(pmin, qmin))
    out = {tuple(a + b for a, b in zip(e, shift)): c for e, c in quot.items()}
    if not all(ring.allows(e) for e in out):
        raise NotDivisibleError("", p, q)
    return Poly(ring, out)


def divides(q: Poly, p: Poly) -> bool:
    try:
        exact_divide(p, q)
    except NotDivisibleError:
        return False
    return True


# ---------------------------------------------------------------- ring maps


@dataclass(frozen=True)
class RingMap:
    """Substitution homomorphism ``source -> target`` given by generator images."""

    source: PolyRing
    target: PolyRing
    images: tuple[Poly, ...]

    def __post_init__(self):
        images = self.images
        if isinstance(images, Mapping):
            images = tuple(images[v] for v in self.source.variables)
        images = tuple(self.target(img) for img in images)
        if len(images) != self.source.nvars:
            raise RingMismatchError("one image per source variable is required")
        for v, img in zip(self.source.variables, images):
            if v in self.source.invertible and not img.is_unit():
                raise ValueError(f"image of invertible {v} must be a unit, got {img}")
        if self.source.coeffs is CoeffRing.DUAL and self.target.coeffs is CoeffRing.RATIONALS:
            raise UnsupportedRingError("cannot map dual coefficients into QQ")
        object.__setattr__(self, "images", images)

    @classmethod
    def build(cls, source: PolyRing, target: PolyRing, **images) -> "RingMap":
        full = {v: images.get(v, v) for v in source.variables}
        return cls(source, target, {v: target(img) if isinstance(img, (str, Poly)) else target.const(img)
                                    for v, img in full.items()})

    @classmethod
    def identity(cls, ring: PolyRing) -> "RingMap":
        return cls(ring, ring, ring.gens())

    @classmethod
    def inclusion(cls, source: PolyRing, target: PolyRing) -> "RingMap":
        return cls(source, target, tuple(target.gen(v) for v in source.variables))

    def __call__(self, p: Poly) -> Poly:
        return apply_map(self, p)


def apply_map(m: RingMap, p: Poly) -> Poly:
    if p.ring != m.source:
        raise RingMismatchError(f"map source {m.source} vs element ring {p.ring}")
    target = m.target
    cache: dict[tuple[int, int], Poly] = {}

    def power(i: int, e: int) -> Poly:
        if (i, e) not in cache:
            cache[i, e] = m.images[i] ** e
        return cache[i, e]

    result = target.zero()
    for exp, c in p._terms.items():
        term = target.const(c)
        for i, e in enumerate(exp):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


# ---------------------------------------------------------------- printing


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(ring: PolyRing, exp: Exp) -> str:
    parts = []
    for v, e in zip(ring.variables, exp):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def _rational_terms(p: Poly):
    """(sign, abs coefficient, eps flag, exponent) in canonical order."""
    for exp, c in p.items():
        if isinstance(c, Dual):
            pieces = [(c.a, False), (c.b, True)]
        else:
            pieces = [(c, False)]
        for val, is_eps in pieces:
            if val:
                yield (val < 0, abs(val), is_eps, exp)


def format_poly(p: Poly) -> str:
    out = []
    for neg, val, is_eps, exp in _rational_terms(p):
        mono = format_monomial(p.ring, exp)
        factors = []
        if val != 1 or (not mono and not is_eps):
            factors.append(_fmt_rational(val))
        if is_eps:
            factors.append("eps")
        if mono:
            factors.append(mono)
        body = "*".join(factors)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def format_fraction(p: Poly) -> str:
    """Print a Laurent polynomial as ``num/den`` with a monomial denominator."""
    if p.is_zero():
        return "0"
    mins = p.min_exponents()
    den = tuple(-m if m < 0 else 0 for m in mins)
    if not any(den):
        return format_poly(p)
    num = Poly(p.ring, {tuple(a + b for a, b in zip(e, den)): c for e, c in p._terms.items()})
    ns = format_poly(num)
    if sum(1 for _ in _rational_terms(num)) > 1:
        ns = f"({ns})"
    ds = format_monomial(p.ring, den)
    if "*" in ds:
        ds = f"({ds})"
    return f"{ns}/{ds}"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        if val == "**":
            val = "^"
        tokens.append((kind, val, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _FractionParser:
    """Recursive descent over + - * / ^ ( ); values are (num, den) pairs."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        val = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}" if self.peek()[1] is not None
                             else "unexpected end of input")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            (a, b), (c, d) = val, rhs
            val = (a * d + c * b, b * d) if op == "+" else (a * d - c * b, b * d)
        return val

    def term(self):
        val = self.unary()
        while self.peek()[1] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            (a, b), (c, d) = val, rhs
            if tok[1] == "*":
                val = (a * c, b * d)
            else:
                if c.is_zero():
                    raise self.error("division by zero", tok)
                val = (a * d, b * c)
        return val

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            a, b = self.unary()
            return (-a, b)
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def signed_int(self):
        sign = 1
        paren = False
        if self.peek()[1] == "(":
            self.take()
            paren = True
        if self.peek()[1] in ("-", "+"):
            sign = -1 if self.take()[1] == "-" else 1
        tok = self.take()
        if tok[0] != "num":
            raise self.error("expected an integer exponent", tok)
        if paren:
            if self.peek()[1] != ")":
                raise self.error("expected ')'")
            self.take()
        return sign * int(tok[1])

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            k = self.signed_int()
            a, b = base
            if k < 0:
                if a.is_zero():
                    raise self.error("zero to a negative power")
                a, b, k = b, a, -k
            base = (a ** k, b ** k)
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        ring = self.ring
        if kind == "num":
            return (ring.const(int(val)), ring.one())
        if kind == "name":
            if val == "eps":
                try:
                    return (ring.eps(), ring.one())
                except UnsupportedRingError:
                    raise ParseError("eps needs dual-number coefficients", self.text, pos) from None
            if val not in ring.variables:
                raise ParseError(f"unknown variable {val!r}", self.text, pos)
            return (ring.gen(val), ring.one())
        if val == "(":
            inner = self.expr()
            if self.peek()[1] != ")":
                raise self.error("expected ')'")
            self.take()
            return inner
        if val is None:
            raise ParseError("unexpected end of input", self.text, pos)
        raise ParseError(f"unexpected token {val!r}", self.text, pos)


def _poly_ring_for_parsing(ring: PolyRing) -> PolyRing:
    # parse in the full Laurent ring so x^-1 is representable, then pull back
    return ring.laurent()


def parse_fraction(ring: PolyRing, text: str) -> tuple[Poly, Poly]:
    """Parse a rational expression into ``(numerator, denominator)`` over ``ring``.

    Negative powers of non-invertible variables are moved to the denominator.
    """
    lring = _poly_ring_for_parsing(ring)
    num, den = _FractionParser(lring, text).parse()
    # clear negative exponents of non-invertible variables
    shift = [0] * ring.nvars
    for poly in (num, den):
        for i, m in enumerate(poly.min_exponents()):
            if ring.variables[i] not in ring.invertible and m < 0:
                shift[i] = max(shift[i], -m)
    num, den = num.shift(shift), den.shift(shift)
    return Poly(ring, num.terms), Poly(ring, den.terms)


def parse_poly(ring: PolyRing, text: str) -> Poly:
    num, den = parse_fraction(ring, text)
    try:
        return exact_divide(num, den)
    except (NotDivisibleError, UnsupportedRingError):
        raise ParseError(f"{text!r} is not an element of {ring}", text, 0) from None


def parse_factored(ring: PolyRing, text: str) -> tuple[object, list[tuple[Poly, int]]]:
    """Split ``u*p1^r1*p2^r2...`` at top-level ``*`` into a unit and factor list.

    Each non-constant top-level factor is taken as a declared irreducible;
    repeated bases are merged.
    """
    pieces = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0 and text[i + 1:i + 2] != "*" and text[i - 1:i] != "*":
            pieces.append((start, text[start:i]))
            start = i + 1
    pieces.append((start, text[start:]))
    unit = ring.coeffs.one()
    factors: list[list] = []
    for offset, piece in pieces:
        stripped = piece.lstrip()
        if stripped.startswith("-"):
            unit = -unit
            offset += len(piece) - len(stripped) + 1
            piece = stripped[1:]
        m = re.fullmatch(r"\s*(.*?)\s*(?:(?:\^|\*\*)\s*\(?\s*(\d+)\s*\)?)?\s*", piece, re.S)
        base_txt, k = m.group(1), int(m.group(2) or 1)
        if base_txt.startswith("(") and base_txt.endswith(")") and _balanced(base_txt[1:-1]):
            base_txt = base_txt[1:-1]
        try:
            base = parse_poly(ring, base_txt)
        except ParseError as exc:
            raise ParseError(str(exc).split(" (line")[0], text, offset + exc.pos) from None
        if base.is_zero():
            raise ParseError("zero factor", text, offset)
        if base.is_constant():
            unit = unit * ring.coeffs.coerce(base.constant_coeff()) ** k if k else unit
            continue
        for entry in factors:
            if entry[0] == base:
                entry[1] += k
                break
        else:
            factors.append([base, k])
    return unit, [(b, k) for b, k in factors]


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def product(polys: Iterable[Poly], ring: PolyRing) -> Poly:
    return reduce(lambda a, b: a * b, polys, ring.one())
