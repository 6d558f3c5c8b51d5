"""Ring invariants of T = Q[[x]]/I for homogeneous I.

Every verdict is either exact (backed by ideal equalities that can be
recomputed from the recorded data) or an explicit ``Undecided`` with a
reason code.  Randomness only proposes candidate linear forms; it never
certifies anything.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple, Union

from .algebra import Polynomial
from .errors import PreconditionViolated, UnitIdeal
from .groebner import (
    IdealHandle,
    dimension,
    ideal_equal,
    ideal_intersection,
    ideal_quotient,
    ideal_quotient_ideal,
    is_homogeneous,
    maximal_ideal,
    saturation,
)

DECOMPOSITION_UNSUPPORTED = "DecompositionUnsupported"
PROBABILISTIC_BUDGET = "ProbabilisticBudget"
REQUIRED_AGREEMENTS = 3
_SPLIT_DEPTH = 24


@dataclass(frozen=True)
class Undecided:
    reason: str

    def __str__(self):
        return f"Undecided({self.reason})"


def decided(value) -> bool:
    return not isinstance(value, Undecided)


@dataclass(frozen=True)
class PrimeWitness:
    generators: Tuple[Polynomial, ...]
    quotient_dimension: int

    def __str__(self):
        gens = ", ".join(str(g) for g in self.generators) or "0"
        return f"({gens})"


def _prime_ideal(p: PrimeWitness, ring) -> IdealHandle:
    return IdealHandle(p.generators, ring=ring)


def _require_proper(I: IdealHandle) -> None:
    if I.is_unit():
        raise UnitIdeal("1 is in the ideal")


# --- minimal primes ------------------------------------------------------------------


def _minimal_covers(supports: List[frozenset], n: int) -> List[Tuple[int, ...]]:
    covers: List[Tuple[int, ...]] = []
    for size in range(n + 1):
        for S in combinations(range(n), size):
            s = frozenset(S)
            if any(frozenset(c) <= s for c in covers):
                continue
            if all(sup & s for sup in supports):
                covers.append(S)
    return covers


def _monomial_primes(I: IdealHandle) -> List[IdealHandle]:
    supports = [g.support() for g in I.basis]
    ring = I.ring
    return [
        IdealHandle([Polynomial.variable(ring, i) for i in S], ring=ring)
        for S in _minimal_covers(supports, len(ring))
    ]


def _factor(p: Polynomial) -> List[Tuple[Polynomial, int]]:
    import sympy

    if not p.ring:
        return []
    gens = sympy.symbols(p.ring)
    sp = sympy.Poly.from_dict({m: sympy.Rational(c.numerator, c.denominator) for m, c in p.terms.items()},
                              *gens, domain="QQ")
    _, factors = sp.factor_list()
    out = []
    for f, mult in factors:
        terms = {m: Fraction(int(c.p), int(c.q)) for m, c in f.terms()}
        out.append((Polynomial(p.ring, terms), mult))
    out.sort(key=lambda t: (t[0].degree(), str(t[0])))
    return out


def _is_linear(I: IdealHandle) -> bool:
    return all(g.degree() <= 1 for g in I.basis)


def _split_primes(I: IdealHandle, depth: int) -> Optional[List[IdealHandle]]:
    # None means the splitting stalled somewhere below this node
    if I.is_unit():
        return []
    if I.is_monomial():
        return _monomial_primes(I)
    if _is_linear(I):
        return [I]
    if depth >= _SPLIT_DEPTH:
        return None
    for g in I.basis:
        factors = _factor(g)
        if sum(mult for _, mult in factors) < 2:
            continue
        f = factors[0][0]
        left = _split_primes(I.plus(f), depth + 1)
        if left is None:
            return None
        right = _split_primes(saturation(I, f), depth + 1)
        if right is None:
            return None
        return left + right
    if len(I.basis) == 1:
        return [I]  # principal and irreducible
    return None


def _minimalize(primes: List[IdealHandle]) -> List[IdealHandle]:
    uniq: List[IdealHandle] = []
    for P in primes:
        if not any(ideal_equal(P, Q) for Q in uniq):
            uniq.append(P)
    return [P for P in uniq if not any(Q is not P and P.contains_ideal(Q) for Q in uniq)]


def minimal_primes(I: IdealHandle) -> Union[List[PrimeWitness], Undecided]:
    _require_proper(I)
    found = _split_primes(I, 0)
    if found is None:
        return Undecided(DECOMPOSITION_UNSUPPORTED)
    witnesses = [PrimeWitness(tuple(reversed(P.basis)), dimension(P)) for P in _minimalize(found)]
    witnesses.sort(key=lambda w: (-w.quotient_dimension, len(w.generators), str(w)))
    return witnesses


def _prime_intersection(primes: List[PrimeWitness], ring) -> IdealHandle:
    result = _prime_ideal(primes[0], ring)
    for p in primes[1:]:
        result = ideal_intersection(result, _prime_ideal(p, ring))
    return result


def is_reduced(I: IdealHandle, primes=None) -> Union[bool, Undecided]:
    _require_proper(I)
    if I.is_monomial():
        return all(max(m) <= 1 for g in I.basis for m in g.terms)
    if primes is None:
        primes = minimal_primes(I)
    if not decided(primes):
        return primes
    # the intersection of the minimal primes is the radical
    return ideal_equal(I, _prime_intersection(primes, I.ring))


def is_equidimensional(primes) -> Union[bool, Undecided]:
    if not decided(primes):
        return primes
    return len({p.quotient_dimension for p in primes}) <= 1


# --- depth --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientCheck:
    """One recorded equality test (base : divisor) == base."""

    base: Tuple[Polynomial, ...]
    divisor: Tuple[Polynomial, ...]  # one element, or the generators of M
    holds: bool

    def recompute(self, ring) -> bool:
        base = IdealHandle(self.base, ring=ring)
        if len(self.divisor) == 1:
            q = ideal_quotient(base, self.divisor[0])
        else:
            q = ideal_quotient_ideal(base, IdealHandle(self.divisor, ring=ring))
        return ideal_equal(q, base)


@dataclass(frozen=True)
class SocleTranscript:
    ideal: Tuple[Polynomial, ...]
    quotient_basis: Tuple[Polynomial, ...]
    verdict: bool
    witness: Optional[Polynomial] = None


def socle_test(I: IdealHandle) -> SocleTranscript:
    """Exact test of (I : M) == I, extracting a socle element when it fails."""
    M = maximal_ideal(I.ring)
    Q = ideal_quotient_ideal(I, M)
    if ideal_equal(Q, I):
        return SocleTranscript(I.basis, Q.basis, True)
    witness = next(g for g in Q.basis if not I.contains(g))
    return SocleTranscript(I.basis, Q.basis, False, witness)


def _socle_equal(J: IdealHandle) -> bool:
    # (J : M) is contained in every (J : x_i), so one equality settles it
    ring = J.ring
    variables = [Polynomial.variable(ring, i) for i in range(len(ring))]
    for v in variables:
        if ideal_equal(ideal_quotient(J, v), J):
            return True
    return socle_test(J).verdict


def depth_at_least_one(I: IdealHandle) -> SocleTranscript:
    """M not in Ass(T), decided by the socle equality."""
    _require_proper(I)
    if not I.ring:
        # Q itself: depth 0
        return SocleTranscript(I.basis, (Polynomial.one(()),), False, Polynomial.one(()))
    return socle_test(I)


def is_nonzerodivisor(I: IdealHandle, f: Polynomial) -> bool:
    return ideal_equal(ideal_quotient(I, f), I)


def candidate_linear_forms(ring, trials: int, seed: int):
    """Variables, then sums of two variables, then seeded random forms."""
    n = len(ring)
    var = [Polynomial.variable(ring, i) for i in range(n)]
    yield from var
    for i, j in combinations(range(n), 2):
        yield var[i] + var[j]
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(-5, 5) for _ in range(n)]
        if not any(coeffs):
            coeffs[rng.randrange(n)] = 1
        yield Polynomial(ring, {tuple(int(k == i) for k in range(n)): c for i, c in enumerate(coeffs) if c})


@dataclass
class DepthCertificate:
    regular_sequence: List[Polynomial] = field(default_factory=list)
    steps: List[QuotientCheck] = field(default_factory=list)
    depth_lower_bound: int = 0
    depth_is_zero: bool = False
    socle_witness: Optional[Polynomial] = None
    note: str = ""

    def reverify(self, ring) -> bool:
        return all(step.recompute(ring) == step.holds for step in self.steps)


def depth_at_least_two(
    I: IdealHandle, trials: int = 20, seed: int = 0, primes=None
) -> Tuple[Union[bool, Undecided], DepthCertificate]:
    if not is_homogeneous(I):
        raise PreconditionViolated("depth search requires a homogeneous ideal")
    if I.nvars < 2:
        raise PreconditionViolated("depth >= 2 needs at least two variables")
    _require_proper(I)
    cert = DepthCertificate()
    M = maximal_ideal(I.ring)
    first = depth_at_least_one(I)
    cert.steps.append(QuotientCheck(I.basis, M.generators, first.verdict))
    if not first.verdict:
        cert.depth_is_zero = True
        cert.socle_witness = first.witness
        cert.note = "M is associated: depth 0"
        return False, cert
    cert.depth_lower_bound = 1

    failures = 0
    candidates = candidate_linear_forms(I.ring, trials, seed)
    for l1 in candidates:
        if not is_nonzerodivisor(I, l1):
            continue
        J = I.plus(l1)
        if _socle_equal(J):
            cert.regular_sequence.append(l1)
            cert.steps.append(QuotientCheck(I.basis, (l1,), True))
            cert.steps.append(QuotientCheck(J.basis, M.generators, True))
            cert.depth_lower_bound = 2
            for l2 in candidate_linear_forms(I.ring, trials, seed + 1):
                if is_nonzerodivisor(J, l2):
                    cert.regular_sequence.append(l2)
                    cert.steps.append(QuotientCheck(J.basis, (l2,), True))
                    break
            return True, cert
        failures += 1
        if failures >= REQUIRED_AGREEMENTS:
            break
    if failures >= REQUIRED_AGREEMENTS:
        if primes is None:
            primes = minimal_primes(I)
        if decided(primes):
            cert.note = f"{failures} independent nonzerodivisors all left M associated"
            return False, cert
    cert.note = f"candidate budget exhausted after {failures} agreeing failures"
    return Undecided(PROBABILISTIC_BUDGET), cert


# --- embedding dimension and windows ------------------------------------------------------------


def _rank(rows: List[List[Fraction]]) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / p[col]
                rows[r] = [a - f * b for a, b in zip(rows[r], p)]
        rank += 1
    return rank


def embedding_dimension(I: IdealHandle) -> int:
    """n minus the rank of the linear parts of the generators in M/M^2."""
    gens = [g for g in I.generators if not g.is_zero()]
    if I.is_unit() or any(g.constant_term != 0 for g in gens):
        raise UnitIdeal("ideal is not contained in the maximal ideal")
    n = I.nvars
    rows = []
    for g in gens:
        row = [Fraction(0)] * n
        for m, c in g.terms.items():
            if sum(m) == 1:
                row[m.index(1)] = c
        rows.append(row)
    return n - _rank(rows)


def noncat_window(I: IdealHandle, threshold: int, primes=None, dim=None) -> Union[Optional[PrimeWitness], Undecided]:
    """First minimal prime P with threshold < dim(T/P) < dim T."""
    if primes is None:
        primes = minimal_primes(I)
    if not decided(primes):
        return primes
    if dim is None:
        dim = dimension(I)
    for p in primes:
        if threshold < p.quotient_dimension < dim:
            return p
    return None


# --- aggregate report ---------------------------------------------------------------------------------


@dataclass
class InvariantReport:
    dimension: int
    minimal_primes: Union[List[PrimeWitness], Undecided]
    reduced: Union[bool, Undecided]
    equidimensional: Union[bool, Undecided]
    depth1: bool
    depth1_transcript: SocleTranscript
    depth2: Union[bool, Undecided]
    depth2_certificate: Optional[DepthCertificate]
    embedding_dimension: int
    noncat_window_1: Union[Optional[PrimeWitness], Undecided]
    noncat_window_2: Union[Optional[PrimeWitness], Undecided]
    integers_are_nonzerodivisors: bool = True  # coefficients are Q, so integers are units

    @property
    def is_field(self) -> bool:
        return self.embedding_dimension == 0

    @property
    def is_regular(self) -> bool:
        return self.dimension == self.embedding_dimension

    @property
    def is_domain(self) -> Union[bool, Undecided]:
        if not decided(self.minimal_primes) or not decided(self.reduced):
            return Undecided(DECOMPOSITION_UNSUPPORTED)
        return self.reduced and len(self.minimal_primes) == 1


def compute_invariants(I: IdealHandle, trials: int = 20, seed: int = 0) -> InvariantReport:
    _require_proper(I)
    dim = dimension(I)
    primes = minimal_primes(I)
    reduced = is_reduced(I, primes)
    equi = is_equidimensional(primes)
    d1 = depth_at_least_one(I)
    if not d1.verdict or I.nvars < 2:
        depth2, cert = False, None
    else:
        depth2, cert = depth_at_least_two(I, trials, seed, primes)
    return InvariantReport(
        dimension=dim,
        minimal_primes=primes,
        reduced=reduced,
        equidimensional=equi,
        depth1=d1.verdict,
        depth1_transcript=d1,
        depth2=depth2,
        depth2_certificate=cert,
        embedding_dimension=embedding_dimension(I),
        noncat_window_1=noncat_window(I, 1, primes, dim),
        noncat_window_2=noncat_window(I, 2, primes, dim),
    )
