import random

import pytest

from precompletion.algebra import Polynomial
from precompletion.errors import PreconditionViolated, UnitIdeal
from precompletion.groebner import IdealHandle, ideal_equal, ideal_quotient_ideal, maximal_ideal
from precompletion.invariants import (
    DECOMPOSITION_UNSUPPORTED,
    Undecided,
    candidate_linear_forms,
    compute_invariants,
    depth_at_least_one,
    depth_at_least_two,
    embedding_dimension,
    is_equidimensional,
    is_reduced,
    minimal_primes,
    noncat_window,
    socle_test,
)

from oracles import minimal_primes_oracle, monomial_polys, random_monomial_ideal, socle_monomials_oracle


def I(ring, *gens):
    return IdealHandle.parse(gens, tuple(ring.split()))


def var_sets(primes, ring):
    out = set()
    for p in primes:
        S = set()
        for g in p.generators:
            assert g.is_monomial() and g.degree() == 1
            (m,) = g.terms
            S.add(m.index(1))
        out.add(frozenset(S))
    return out


def test_minimal_primes_examples():
    ps = minimal_primes(I("x y z w", "x*y", "x*z"))
    assert [str(p) for p in ps] == ["(x)", "(y, z)"]
    assert [p.quotient_dimension for p in ps] == [3, 2]
    ps = minimal_primes(I("x y", "x^2 - y^2"))
    assert sorted(str(p) for p in ps) == ["(x + y)", "(x - y)"]
    assert [str(p) for p in minimal_primes(I("x y z", "x^2"))] == ["(x)"]
    assert [str(p) for p in minimal_primes(IdealHandle([], ring=("x", "y")))] == ["(0)"]


def test_minimal_primes_non_monomial_split():
    # (x*y - z^2) is irreducible and principal
    ps = minimal_primes(I("x y z", "x*y - z^2"))
    assert len(ps) == 1 and ps[0].quotient_dimension == 2
    ps = minimal_primes(I("x y z", "x*z - y*z", "z^2"))
    assert [str(p) for p in ps] == ["(z)"]


def test_minimal_primes_unsupported_is_undecided():
    # twisted cubic: prime, but not principal and no generator factors
    tc = I("x y z w", "x*z - y^2", "y*w - z^2", "x*w - y*z")
    assert minimal_primes(tc) == Undecided(DECOMPOSITION_UNSUPPORTED)
    assert is_reduced(tc) == Undecided(DECOMPOSITION_UNSUPPORTED)


def test_minimal_primes_oracle_random():
    rng = random.Random(5)
    for _ in range(80):
        ring, exps = random_monomial_ideal(rng)
        J = IdealHandle(monomial_polys(ring, exps), ring=ring)
        assert var_sets(minimal_primes(J), ring) == minimal_primes_oracle(exps, len(ring))


def test_reduced_and_equidimensional():
    assert is_reduced(I("x y z", "x*y")) is True
    assert is_reduced(I("x y z", "x^2")) is False
    assert is_reduced(I("x y", "x^2 - y^2")) is True
    assert is_reduced(I("x y", "x^3 - x^2*y")) is False
    assert is_equidimensional(minimal_primes(I("x y z", "x*y"))) is True
    assert is_equidimensional(minimal_primes(I("x y z w", "x*y", "x*z"))) is False


def test_socle_examples():
    t = socle_test(I("x y", "x^2", "x*y"))
    assert t.verdict is False and str(t.witness) == "x"
    assert socle_test(I("x y z", "x*y")).verdict is True
    assert depth_at_least_one(IdealHandle([], ring=())).verdict is False


def test_socle_agrees_with_monomial_oracle():
    rng = random.Random(8)
    for _ in range(80):
        ring, exps = random_monomial_ideal(rng, max_vars=4)
        J = IdealHandle(monomial_polys(ring, exps), ring=ring)
        t = socle_test(J)
        assert t.verdict == (not socle_monomials_oracle(exps, len(ring)))
        if not t.verdict:
            assert not J.contains(t.witness)
            for k in range(len(ring)):
                assert J.contains(t.witness * Polynomial.variable(ring, k))


def test_depth_two_certificates():
    ok, cert = depth_at_least_two(I("x y z w", "x*y", "x*z"))
    assert ok is True
    assert [str(l) for l in cert.regular_sequence] == ["w", "x + y"]
    assert cert.reverify(("x", "y", "z", "w"))
    ok, cert = depth_at_least_two(I("x y z", "x^2"))
    assert ok is True and [str(l) for l in cert.regular_sequence] == ["y", "z"]
    ok, cert = depth_at_least_two(I("x y", "x^2 - y^2"))
    assert ok is False and cert.depth_lower_bound == 1
    ok, cert = depth_at_least_two(I("x y", "x^2", "x*y"))
    assert ok is False and cert.depth_is_zero


def test_depth_two_preconditions():
    with pytest.raises(PreconditionViolated):
        depth_at_least_two(I("x y", "x^2 - y"))
    with pytest.raises(PreconditionViolated):
        depth_at_least_two(IdealHandle([], ring=("x",)))


def test_candidates_are_seeded():
    ring = ("a", "b", "c")
    a = [str(l) for l in candidate_linear_forms(ring, 5, 3)]
    b = [str(l) for l in candidate_linear_forms(ring, 5, 3)]
    assert a == b and a[:6] == ["a", "b", "c", "a + b", "a + c", "b + c"]


def test_embedding_dimension():
    assert embedding_dimension(I("x y z", "x*y")) == 3
    assert embedding_dimension(I("x y z", "x - y", "z^2")) == 2
    assert embedding_dimension(IdealHandle([], ring=("x", "y"))) == 2
    with pytest.raises(UnitIdeal):
        embedding_dimension(I("x y", "1 + x"))


def test_noncat_windows():
    J = I("x y1 y2 z1 z2", "x*y1", "x*y2")
    assert str(noncat_window(J, 1)) == "(y1, y2)"
    assert str(noncat_window(J, 2)) == "(y1, y2)"
    J = I("x y z w", "x*y", "x*z")
    assert str(noncat_window(J, 1)) == "(y, z)"
    assert noncat_window(J, 2) is None


def test_reduced_implies_depth_one():
    rng = random.Random(21)
    seen = 0
    for _ in range(60):
        ring, exps = random_monomial_ideal(rng, max_vars=4)
        J = IdealHandle(monomial_polys(ring, exps), ring=ring)
        rep = compute_invariants(J)
        if rep.reduced is True and rep.dimension >= 1:
            seen += 1
            assert rep.depth1 is True
    assert seen > 5


def test_certificates_reverify_and_transcripts_match():
    rng = random.Random(2)
    for _ in range(40):
        ring, exps = random_monomial_ideal(rng, max_vars=4)
        J = IdealHandle(monomial_polys(ring, exps), ring=ring)
        rep = compute_invariants(J)
        if rep.depth2_certificate is not None:
            assert rep.depth2_certificate.reverify(ring)
        t = rep.depth1_transcript
        Q = ideal_quotient_ideal(IdealHandle(t.ideal, ring=ring), maximal_ideal(ring))
        assert ideal_equal(Q, J) == t.verdict
