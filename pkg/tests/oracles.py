"""Brute-force reference implementations used to check the real kernels.

None of these share code with the package beyond the Polynomial container.
"""
from fractions import Fraction
from itertools import combinations, product
import random

from precompletion.algebra import Polynomial


def random_monomial_ideal(rng: random.Random, max_vars=5, max_gens=4, max_deg=3):
    n = rng.randint(1, max_vars)
    ring = tuple(f"x{k}" for k in range(1, n + 1))
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        d = rng.randint(1, max_deg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        gens.append(tuple(e))
    return ring, gens


def monomial_polys(ring, exps):
    return [Polynomial.monomial(ring, e) for e in exps]


def covers(gens, n):
    """All variable subsets meeting the support of every generator."""
    out = []
    for r in range(n + 1):
        for S in combinations(range(n), r):
            if all(any(g[v] > 0 for v in S) for g in gens):
                out.append(frozenset(S))
    return out


def minimal_primes_oracle(gens, n):
    cs = covers(gens, n)
    return {S for S in cs if not any(T < S for T in cs)}


def dimension_oracle(gens, n):
    """Largest variable set U containing the support of no generator."""
    best = 0
    for r in range(n + 1):
        for U in combinations(range(n), r):
            U = set(U)
            if all(not {v for v in range(n) if g[v] > 0} <= U for g in gens):
                best = max(best, r)
    return best


def _in_monomial_ideal(m, gens):
    return any(all(a >= b for a, b in zip(m, g)) for g in gens)


def socle_monomials_oracle(gens, n):
    """Monomials m outside I with x_i*m in I for every i."""
    if any(all(g[v] == 0 for g in gens) for v in range(n)):
        return []
    box = [range(max(g[v] for g in gens)) for v in range(n)]
    found = []
    for m in product(*box):
        if _in_monomial_ideal(m, gens):
            continue
        if all(_in_monomial_ideal(tuple(a + (k == v) for k, a in enumerate(m)), gens) for v in range(n)):
            found.append(m)
    return found


def _monomials_of_degree(n, d):
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for head in range(d, -1, -1):
        for tail in _monomials_of_degree(n - 1, d - head):
            out.append((head,) + tail)
    return out


def _rank(rows):
    rows = [dict(r) for r in rows if r]
    rank = 0
    pivots = {}
    for r in rows:
        r = dict(r)
        for col, prow in pivots.items():
            if col in r:
                c = r[col]
                for k, v in prow.items():
                    r[k] = r.get(k, Fraction(0)) - c * v
                    if r[k] == 0:
                        del r[k]
        if r:
            col = min(r)
            inv = 1 / r[col]
            pivots[col] = {k: v * inv for k, v in r.items()}
            rank += 1
    return rank


def homogeneous_membership_oracle(f: Polynomial, gens, ring):
    """f in (gens) for homogeneous f and gens, by linear algebra in degree deg f."""
    if f.is_zero():
        return True
    d = f.degree()
    n = len(ring)
    rows = []
    for g in gens:
        if g.is_zero() or g.degree() > d:
            continue
        for m in _monomials_of_degree(n, d - g.degree()):
            rows.append((g * Polynomial.monomial(ring, m)).terms)
    base = _rank(rows)
    return _rank(rows + [f.terms]) == base


def truncated_product_oracle(a: Polynomial, b: Polynomial, K: int) -> Polynomial:
    terms = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            if sum(m) < K:
                terms[m] = terms.get(m, 0) + c1 * c2
    return Polynomial(a.ring, terms)
