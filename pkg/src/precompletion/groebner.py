"""Buchberger's algorithm over Q and the ideal operations built on it.

Internally polynomials are plain ``dict`` objects mapping exponent tuples to
Fractions; ``Polynomial`` wrappers are only built at the API boundary.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

from .algebra import Exponent, Polynomial, grevlex_key
from .errors import AmbientMismatch, TooManyVariables, UnitIdeal, ZeroElement, ZeroIdeal

MAX_DIMENSION_VARS = 12


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, or a two-block elimination order.

    ``elim`` with ``split=k`` compares the first k exponents by grevlex and
    breaks ties with grevlex on the rest, so it eliminates the first k
    variables.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self):
        if self.kind == "grevlex":
            return grevlex_key
        if self.kind == "lex":
            return _lex_key
        k = self.split
        return lambda e: (grevlex_key(e[:k]), grevlex_key(e[k:]))


def _lex_key(e):
    return e


GREVLEX = MonomialOrder()
LEX = MonomialOrder("lex")


def elimination(k: int) -> MonomialOrder:
    return MonomialOrder("elim", k)


# --- dict-level kernel ----------------------------------------------------------

_Poly = Dict[Exponent, Fraction]


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(p: _Poly, key) -> Tuple[Exponent, _Poly]:
    lm = max(p, key=key)
    c = p[lm]
    if c == 1:
        return lm, p
    return lm, {m: v / c for m, v in p.items()}


def _sub_shifted(p: _Poly, c: Fraction, shift: Exponent, g: _Poly) -> None:
    # p -= c * x^shift * g, in place
    for m, v in g.items():
        mm = tuple(a + b for a, b in zip(m, shift))
        nv = p.get(mm, 0) - c * v
        if nv:
            p[mm] = nv
        else:
            p.pop(mm, None)


def _reduce(f: _Poly, basis: Sequence[Tuple[Exponent, _Poly]], key) -> _Poly:
    """Full remainder of f on division by monic basis elements."""
    p = dict(f)
    rem: _Poly = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if _divides(lm, m):
                _sub_shifted(p, c, tuple(a - b for a, b in zip(m, lm)), g)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _spoly(f, g) -> _Poly:
    (lf, pf), (lg, pg) = f, g
    l = _lcm(lf, lg)
    sf = tuple(x - y for x, y in zip(l, lf))
    s = {tuple(a + b for a, b in zip(m, sf)): v for m, v in pf.items()}
    _sub_shifted(s, Fraction(1), tuple(x - y for x, y in zip(l, lg)), pg)
    return s


def _buchberger(polys: Iterable[_Poly], key) -> List[Tuple[Exponent, _Poly]]:
    """Reduced Groebner basis as a list of (leading monomial, monic poly)."""
    G: List[Tuple[Exponent, _Poly]] = []
    for p in polys:
        if p:
            G.append(_monic(dict(p), key))
    for lm, _ in G:
        if not any(lm):
            return [(lm, {lm: Fraction(1)})]
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}

    def pair_key(ij):
        l = _lcm(G[ij[0]][0], G[ij[1]][0])
        return (sum(l), key(l), ij)

    while pairs:
        # normal strategy: smallest lcm first
        ij = min(pairs, key=pair_key)
        pairs.discard(ij)
        i, j = ij
        li, lj = G[i][0], G[j][0]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        l = _lcm(li, lj)
        if any(
            k != i and k != j
            and _divides(G[k][0], l)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        h = _reduce(_spoly(G[i], G[j]), G, key)
        if h:
            lm, h = _monic(h, key)
            if not any(lm):
                return [(lm, {lm: Fraction(1)})]
            n = len(G)
            G.append((lm, h))
            pairs.update((k, n) for k in range(n))
    return _interreduce(G, key)


def _interreduce(G, key):
    # drop elements whose leading monomial is divisible by another's
    keep = []
    for idx, (lm, g) in enumerate(G):
        redundant = False
        for jdx, (lm2, _) in enumerate(G):
            if jdx == idx or not _divides(lm2, lm):
                continue
            if lm2 != lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append((lm, g))
    out = []
    for idx, (lm, g) in enumerate(keep):
        others = [t for k, t in enumerate(keep) if k != idx]
        tail = dict(g)
        c = tail.pop(lm)
        r = _reduce(tail, others, key)
        r[lm] = c
        out.append(_monic(r, key))
    out.sort(key=lambda t: key(t[0]))
    return out


def _divide_exact(a: _Poly, b: _Poly, key) -> _Poly:
    lb = max(b, key=key)
    cb = b[lb]
    p = dict(a)
    q: _Poly = {}
    while p:
        m = max(p, key=key)
        if not _divides(lb, m):
            raise ArithmeticError("inexact division")
        shift = tuple(x - y for x, y in zip(m, lb))
        c = p[m] / cb
        q[shift] = q.get(shift, 0) + c
        _sub_shifted(p, c, shift, b)
    return q


# --- ideal handles -----------------------------------------------------------------


def _same_ring(items: Sequence[Polynomial], ring) -> None:
    for p in items:
        if p.ring != ring:
            raise AmbientMismatch(f"generator {p} lives in {p.ring}, not {ring}")


class IdealHandle:
    """An ideal of Q[ring] given by generators, with a compute-once basis."""

    def __init__(self, generators: Iterable[Polynomial], order: MonomialOrder = GREVLEX, ring=None):
        gens = tuple(generators)
        if ring is None:
            if not gens:
                raise ValueError("ring required for an ideal without generators")
            ring = gens[0].ring
        self.ring = tuple(ring)
        _same_ring(gens, self.ring)
        self.generators = gens
        self.order = order
        self._basis = None
        self._lock = threading.Lock()

    @classmethod
    def parse(cls, texts: Iterable[str], ring, order: MonomialOrder = GREVLEX) -> "IdealHandle":
        return cls([Polynomial.parse(t, ring) for t in texts], order, ring)

    @property
    def basis(self) -> Tuple[Polynomial, ...]:
        if self._basis is None:
            with self._lock:
                if self._basis is None:
                    key = self.order.key()
                    G = _buchberger((g.terms for g in self.generators), key)
                    self._basis = tuple(Polynomial._raw(self.ring, p) for _, p in G)
        return self._basis

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def leading_monomials(self) -> List[Exponent]:
        key = self.order.key()
        return [max(g.terms, key=key) for g in self.basis]

    def is_unit(self) -> bool:
        return len(self.basis) == 1 and self.basis[0] == 1

    def is_zero(self) -> bool:
        return not self.basis

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.basis)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.basis)

    def plus(self, *elements: Polynomial) -> "IdealHandle":
        return IdealHandle(self.generators + tuple(elements), self.order, self.ring)

    def with_order(self, order: MonomialOrder) -> "IdealHandle":
        return IdealHandle(self.generators, order, self.ring)

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.basis) + ")"

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"IdealHandle([{gens}], ring={self.ring})"


def maximal_ideal(ring) -> IdealHandle:
    ring = tuple(ring)
    return IdealHandle([Polynomial.variable(ring, v) for v in ring], ring=ring)


def groebner_basis(I: IdealHandle) -> Tuple[Polynomial, ...]:
    return I.basis


def normal_form(f: Polynomial, I: IdealHandle) -> Polynomial:
    if f.ring != I.ring:
        raise AmbientMismatch(f"{f} is not in {I.ring}")
    key = I.order.key()
    basis = [(max(g.terms, key=key), g.terms) for g in I.basis]
    return Polynomial._raw(I.ring, _reduce(f.terms, basis, key))


def ideal_equal(I: IdealHandle, J: IdealHandle) -> bool:
    if I.ring != J.ring:
        raise AmbientMismatch(f"{I.ring} vs {J.ring}")
    if I.order != J.order:
        J = J.with_order(I.order)
    return I.basis == J.basis


def ideal_intersection(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I cap J via t*I + (1-t)*J, eliminating the auxiliary t."""
    if I.ring != J.ring:
        raise AmbientMismatch(f"{I.ring} vs {J.ring}")
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return IdealHandle([], I.order, ring)
    if I.is_unit():
        return IdealHandle(J.basis, I.order, ring)
    if J.is_unit():
        return IdealHandle(I.basis, I.order, ring)
    polys = []
    for g in I.basis:
        polys.append({(1,) + m: c for m, c in g.terms.items()})
    for g in J.basis:
        p = {}
        for m, c in g.terms.items():
            p[(0,) + m] = c
            p[(1,) + m] = -c
        polys.append(p)
    G = _buchberger(polys, elimination(1).key())
    gens = [Polynomial._raw(ring, {m[1:]: c for m, c in p.items()}) for lm, p in G if lm[0] == 0]
    return IdealHandle(gens, I.order, ring)


def ideal_quotient(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f) = (I cap (f)) / f."""
    if f.is_zero():
        raise ZeroElement("quotient by zero")
    if f.ring != I.ring:
        raise AmbientMismatch(f"{f} is not in {I.ring}")
    if f.degree() == 0:
        return IdealHandle(I.basis, I.order, I.ring)
    cap = ideal_intersection(I, IdealHandle([f], I.order, I.ring))
    key = I.order.key()
    gens = [Polynomial._raw(I.ring, _divide_exact(g.terms, f.terms, key)) for g in cap.basis]
    return IdealHandle(gens, I.order, I.ring)


def ideal_quotient_ideal(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """(I : J) as the intersection of (I : g) over generators g of J."""
    gens = [g for g in J.generators if not g.is_zero()]
    if not gens:
        raise ZeroIdeal("quotient by the zero ideal")
    result = ideal_quotient(I, gens[0])
    for g in gens[1:]:
        if result.is_zero():
            break
        result = ideal_intersection(result, ideal_quotient(I, g))
    return result


def saturation(I: IdealHandle, f: Polynomial) -> IdealHandle:
    """(I : f^inf) by iterating quotients until they stabilize."""
    current = I
    while True:
        nxt = ideal_quotient(current, f)
        if ideal_equal(nxt, current):
            return current
        current = nxt


def is_homogeneous(I: IdealHandle) -> bool:
    return all(g.is_homogeneous() for g in I.generators)


def independent_set(I: IdealHandle) -> Tuple[int, ...]:
    """A largest set of variable indices independent modulo LT(I)."""
    if I.is_unit():
        raise UnitIdeal("1 is in the ideal")
    n = I.nvars
    if n > MAX_DIMENSION_VARS:
        raise TooManyVariables(f"dimension search is capped at {MAX_DIMENSION_VARS} variables, got {n}")
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in I.leading_monomials()]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = frozenset(S)
            if not any(sup <= s for sup in supports):
                return S
    raise AssertionError("unreachable: the empty set is always independent")


def dimension(I: IdealHandle) -> int:
    """Krull dimension of Q[ring]/I."""
    return len(independent_set(I))
