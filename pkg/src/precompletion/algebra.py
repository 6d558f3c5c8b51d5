"""Exact arithmetic over Q: polynomials, localized fractions, truncated series.

A ``Polynomial`` lives in Q[x_1..x_n] for a fixed ordered tuple of variable
names (its *ring*).  A ``LocalElement`` is a fraction whose denominator has a
nonzero constant term, i.e. an element of the localization of the polynomial
ring at the maximal ideal generated by the variables.  A ``TruncatedSeries``
is a coset of M^K in the power series ring Q[[x_1..x_n]], stored as the unique
representative with every term of total degree below K.

All values are immutable; every operation returns a new object.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from .errors import AmbientMismatch, NotAUnit, ParseError, PrecisionMismatch

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


def grevlex_key(e: Exponent):
    return (sum(e), tuple(-a for a in reversed(e)))


def _check_ring(a, b):
    if a.ring != b.ring:
        raise AmbientMismatch(f"ring {a.ring} vs {b.ring}")


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping[Sequence[int], Scalar] | None = None):
        self.ring = tuple(ring)
        n = len(self.ring)
        clean: Dict[Exponent, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(int(a) for a in m)
            if len(m) != n or any(a < 0 for a in m):
                raise ValueError(f"bad exponent vector {m} for ring {self.ring}")
            c = Fraction(c) + clean.get(m, 0)
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def zero(cls, ring) -> "Polynomial":
        return cls._raw(tuple(ring), {})

    @classmethod
    def constant(cls, ring, c: Scalar) -> "Polynomial":
        ring = tuple(ring)
        c = Fraction(c)
        return cls._raw(ring, {(0,) * len(ring): c} if c else {})

    @classmethod
    def one(cls, ring) -> "Polynomial":
        return cls.constant(ring, 1)

    @classmethod
    def variable(cls, ring, var: Union[str, int]) -> "Polynomial":
        ring = tuple(ring)
        idx = ring.index(var) if isinstance(var, str) else var
        e = [0] * len(ring)
        e[idx] = 1
        return cls._raw(ring, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ring, exponent: Sequence[int], c: Scalar = 1) -> "Polynomial":
        return cls(ring, {tuple(exponent): c})

    @classmethod
    def parse(cls, text: str, ring: Sequence[str]) -> "Polynomial":
        return _Parser(text, tuple(ring)).parse()

    # inspection

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> int | None:
        """Lowest total degree of a term; None for zero."""
        return min((sum(m) for m in self.terms), default=None)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> frozenset:
        """Indices of variables occurring in some term."""
        return frozenset(i for m in self.terms for i, a in enumerate(m) if a)

    def leading(self, key=grevlex_key) -> Tuple[Exponent, Fraction]:
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def sorted_terms(self, key=grevlex_key) -> list:
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def truncate(self, K: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {m: c for m, c in self.terms.items() if sum(m) < K})

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial._raw(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            _check_ring(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        res = dict(self.terms)
        for m, c in other.terms.items():
            v = res.get(m, 0) + c
            if v:
                res[m] = v
            else:
                res.pop(m, None)
        return Polynomial._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Polynomial.one(self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(self.ring, {m: c * v for m, v in self.terms.items()})

    def shift(self, exponent: Exponent) -> "Polynomial":
        return Polynomial._raw(
            self.ring, {tuple(a + b for a, b in zip(m, exponent)): c for m, c in self.terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, ring={self.ring})"

    def __str__(self):
        return format_polynomial(self)

    def embed(self, ring: Sequence[str]) -> "Polynomial":
        """Rewrite in a ring containing all of this polynomial's variables."""
        ring = tuple(ring)
        idx = [ring.index(v) for v in self.ring]
        terms = {}
        for m, c in self.terms.items():
            e = [0] * len(ring)
            for i, a in zip(idx, m):
                e[i] = a
            terms[tuple(e)] = c
        return Polynomial._raw(ring, terms)


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_ring(a, b)
    res: Dict[Exponent, Fraction] = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            res[m] = res.get(m, 0) + c1 * c2
    return Polynomial._raw(a.ring, {m: c for m, c in res.items() if c})


# --- text format -------------------------------------------------------------


def _format_monomial(ring, m) -> str:
    parts = []
    for v, a in zip(ring, m):
        if a == 1:
            parts.append(v)
        elif a > 1:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        mono = _format_monomial(p.ring, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    # expr := term (('+'|'-') term)*
    # term := unary ('*' unary)*
    # unary := '-' unary | power
    # power := atom ('^' INT)?
    # atom := INT ('/' INT)? | IDENT | '(' expr ')'

    def __init__(self, text: str, ring: Tuple[str, ...]):
        self.text = text
        self.ring = ring
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if mt is None:
                raise ParseError(f"cannot tokenize {text[pos:]!r}")
            num, ident, sym = mt.groups()
            if num is not None:
                self.tokens.append(("num", int(num)))
            elif ident is not None:
                self.tokens.append(("id", ident))
            else:
                self.tokens.append(("sym", sym))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, sym):
        kind, val = self.take()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r} in {self.text!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            _, op = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() == ("sym", "*"):
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        p = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            p = p ** val
        return p

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            if self.peek() == ("sym", "/"):
                self.take()
                k2, den = self.take()
                if k2 != "num" or den == 0:
                    raise ParseError(f"bad rational literal in {self.text!r}")
                return Polynomial.constant(self.ring, Fraction(val, den))
            return Polynomial.constant(self.ring, val)
        if kind == "id":
            if val not in self.ring:
                raise ParseError(f"unknown variable {val!r} (ring is {' '.join(self.ring) or 'empty'})")
            return Polynomial.variable(self.ring, val)
        if (kind, val) == ("sym", "("):
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


# --- localization -------------------------------------------------------------


class LocalElement:
    """numerator / denominator with the denominator a unit at the origin."""

    __slots__ = ("numerator", "denominator")
    __hash__ = None  # equality is by cross-multiplication

    def __init__(self, numerator: Polynomial, denominator: Polynomial | None = None):
        if denominator is None:
            denominator = Polynomial.one(numerator.ring)
        _check_ring(numerator, denominator)
        if denominator.constant_term == 0:
            raise NotAUnit(f"denominator {denominator} vanishes at the origin")
        self.numerator = numerator
        self.denominator = denominator

    @property
    def ring(self):
        return self.numerator.ring

    @classmethod
    def of(cls, x, ring=None) -> "LocalElement":
        if isinstance(x, LocalElement):
            return x
        if isinstance(x, Polynomial):
            return cls(x)
        return cls(Polynomial.constant(ring, x))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    @property
    def constant_term(self) -> Fraction:
        return self.numerator.constant_term / self.denominator.constant_term

    def _coerce(self, other):
        if isinstance(other, LocalElement):
            _check_ring(self, other)
            return other
        if isinstance(other, (Polynomial, int, Fraction)):
            return LocalElement.of(other, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.denominator == other.denominator:
            return LocalElement(self.numerator + other.numerator, self.denominator)
        return LocalElement(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return LocalElement(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LocalElement(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return LocalElement(self.numerator ** k, self.denominator ** k)

    def __eq__(self, other):
        if isinstance(other, (Polynomial, int, Fraction)):
            other = LocalElement.of(other, self.ring)
        if not isinstance(other, LocalElement):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def to_series(self, precision: int) -> "TruncatedSeries":
        num = TruncatedSeries(self.numerator, precision)
        if self.denominator == 1:
            return num
        return series_mul(num, series_invert_unit(TruncatedSeries(self.denominator, precision)))

    def __str__(self):
        if self.denominator == 1:
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"

    def __repr__(self):
        return f"LocalElement({str(self)!r})"


# --- truncated series ----------------------------------------------------------


class TruncatedSeries:
    """Coset of M^precision in Q[[x_1..x_n]]."""

    __slots__ = ("representative", "precision")

    def __init__(self, representative: Polynomial, precision: int):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        self.representative = representative.truncate(precision)
        self.precision = precision

    @classmethod
    def one(cls, ring, precision: int) -> "TruncatedSeries":
        return cls(Polynomial.one(ring), precision)

    @property
    def ring(self):
        return self.representative.ring

    @property
    def constant_term(self) -> Fraction:
        return self.representative.constant_term

    def is_zero(self) -> bool:
        return self.representative.is_zero()

    def order(self) -> int:
        """Lowest degree present; equals the precision for the zero coset."""
        o = self.representative.order()
        return self.precision if o is None else o

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise PrecisionMismatch(f"cannot raise precision {self.precision} to {precision}")
        return TruncatedSeries(self.representative, precision)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            _check_ring(self, other)
            if other.precision != self.precision:
                raise PrecisionMismatch(f"precision {self.precision} vs {other.precision}")
            return other
        if isinstance(other, (Polynomial, int, Fraction)):
            if isinstance(other, Polynomial):
                _check_ring(self, other)
            else:
                other = Polynomial.constant(self.ring, other)
            return TruncatedSeries(other, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(self.representative + other.representative, self.precision)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.representative, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(self.representative - other.representative, self.precision)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TruncatedSeries.one(self.ring, self.precision)
        for _ in range(k):
            result = series_mul(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, (Polynomial, int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.precision == other.precision
            and self.representative == other.representative
        )

    def __hash__(self):
        return hash((self.precision, self.representative))

    def __str__(self):
        return f"{self.representative} + O(M^{self.precision})"

    def __repr__(self):
        return f"TruncatedSeries({str(self.representative)!r}, K={self.precision})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_ring(a, b)
    if a.precision != b.precision:
        raise PrecisionMismatch(f"precision {a.precision} vs {b.precision}")
    K = a.precision
    res: Dict[Exponent, Fraction] = {}
    bt = [(m, sum(m), c) for m, c in b.representative.terms.items()]
    for m1, c1 in a.representative.terms.items():
        d1 = sum(m1)
        for m2, d2, c2 in bt:
            if d1 + d2 >= K:
                continue
            m = tuple(x + y for x, y in zip(m1, m2))
            res[m] = res.get(m, 0) + c1 * c2
    rep = Polynomial._raw(a.ring, {m: c for m, c in res.items() if c})
    out = TruncatedSeries.__new__(TruncatedSeries)
    out.representative = rep
    out.precision = K
    return out


def series_invert_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a unit by the Neumann series on its maximal-ideal part.

    Writing a = c*(1 + m) with c the constant term and m in M, the inverse is
    c^-1 * sum_{k<K} (-m)^k, since m^K vanishes at precision K.
    """
    c = a.constant_term
    if c == 0:
        raise NotAUnit(f"{a} has zero constant term")
    K = a.precision
    neg_m = TruncatedSeries(-(a.representative.scale(1 / c) - 1), K)
    total = TruncatedSeries.one(a.ring, K)
    power = total
    for _ in range(1, K):
        power = series_mul(power, neg_m)
        if power.is_zero():
            break
        total = total + power
    return TruncatedSeries(total.representative.scale(1 / c), K)


def is_unit(e) -> bool:
    """Whether e is a unit of the local ring (nonzero constant term)."""
    if isinstance(e, LocalElement):
        return e.numerator.constant_term != 0
    if isinstance(e, (TruncatedSeries, Polynomial)):
        return e.constant_term != 0
    if isinstance(e, (int, Fraction)):
        return e != 0
    raise TypeError(f"cannot test unit-ness of {type(e).__name__}")


# --- polynomials in an extra indeterminate X ---------------------------------------


class XPolynomial:
    """Polynomial in one indeterminate X with LocalElement coefficients.

    ``coefficients[m]`` multiplies X^m; trailing zero coefficients are dropped.
    """

    __slots__ = ("ring", "coefficients")

    def __init__(self, ring: Sequence[str], coefficients: Iterable):
        self.ring = tuple(ring)
        coeffs = [LocalElement.of(c, self.ring) for c in coefficients]
        for c in coeffs:
            _check_ring(self, c)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __iter__(self) -> Iterator[LocalElement]:
        return iter(self.coefficients)

    def evaluate(self, value) -> LocalElement:
        """Exact Horner evaluation at a Polynomial or LocalElement."""
        value = LocalElement.of(value, self.ring)
        result = LocalElement.of(0, self.ring)
        for c in reversed(self.coefficients):
            result = result * value + c
        return result

    def __eq__(self, other):
        if not isinstance(other, XPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.coefficients == other.coefficients

    __hash__ = None

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for m in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[m]
            if c.is_zero():
                continue
            xs = "" if m == 0 else ("X" if m == 1 else f"X^{m}")
            cs = str(c)
            if not xs:
                parts.append(f"({cs})" if len(parts) else cs)
            elif cs == "1":
                parts.append(xs)
            else:
                parts.append(f"({cs})*{xs}")
        return " + ".join(parts)

    def __repr__(self):
        return f"XPolynomial({str(self)!r})"


def substitute(g: XPolynomial, v: TruncatedSeries) -> TruncatedSeries:
    """Evaluate g at the series v by Horner's rule at v's precision."""
    if g.ring != v.ring:
        raise AmbientMismatch(f"ring {g.ring} vs {v.ring}")
    K = v.precision
    result = TruncatedSeries(Polynomial.zero(v.ring), K)
    for c in reversed(g.coefficients):
        result = series_mul(result, v) + c.to_series(K)
    return result
