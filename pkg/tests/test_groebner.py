import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from precompletion.algebra import Polynomial
from precompletion.errors import TooManyVariables, UnitIdeal, ZeroElement, ZeroIdeal
from precompletion.groebner import (
    LEX,
    IdealHandle,
    _buchberger,
    _reduce,
    _spoly,
    dimension,
    groebner_basis,
    ideal_equal,
    ideal_intersection,
    ideal_quotient,
    ideal_quotient_ideal,
    independent_set,
    maximal_ideal,
    normal_form,
    saturation,
)
from precompletion.algebra import grevlex_key

from oracles import dimension_oracle, homogeneous_membership_oracle, monomial_polys, random_monomial_ideal

R3 = ("x", "y", "z")


def I(*gens, ring=R3, order=None):
    h = IdealHandle.parse(gens, ring)
    return h.with_order(order) if order else h


def P(s, ring=R3):
    return Polynomial.parse(s, ring)


def test_twisted_cubic_lex():
    J = I("y - x^2", "z - x^3", order=LEX)
    assert J.contains(P("y^3 - z^2"))
    # lex basis eliminates x: some basis element lives in y, z alone
    assert any(all(e[0] == 0 for e in g.terms) for g in J.basis)
    assert J.contains(P("x*z - y^2"))
    assert not J.contains(P("x - y"))


def test_reduced_basis_is_canonical():
    a = I("x^2 - y", "x*y - z")
    b = I("x*y - z", "x^2 - y", "x^3 - x*y")
    assert a.basis == b.basis
    assert all(g.leading()[1] == 1 for g in a.basis)


def test_s_polynomials_reduce_to_zero():
    J = I("x^2 + y*z", "x*y - z^2", "y^3 - x*z")
    key = grevlex_key
    G = _buchberger([g.terms for g in J.generators], key)
    for f, g in combinations(G, 2):
        assert _reduce(_spoly(f, g), G, key) == {}


def test_intersection_and_quotients():
    assert ideal_intersection(I("x"), I("y", "z")) == I("x*y", "x*z")
    assert ideal_quotient(I("x*y", "x*z"), P("x")) == I("y", "z")
    R2 = ("x", "y")
    assert ideal_quotient_ideal(I("x^2", "x*y", ring=R2), maximal_ideal(R2)) == I("x", ring=R2)
    # with a third variable x*z is not in the ideal, so nothing new appears
    assert ideal_quotient_ideal(I("x^2", "x*y"), maximal_ideal(R3)) == I("x^2", "x*y")
    assert saturation(I("x^2*y", "x^3"), P("x")) == IdealHandle([Polynomial.one(R3)], ring=R3)
    with pytest.raises(ZeroElement):
        ideal_quotient(I("x"), Polynomial.zero(R3))
    with pytest.raises(ZeroIdeal):
        ideal_quotient_ideal(I("x"), IdealHandle([], ring=R3))


def test_dimension_examples():
    assert dimension(I("x*y")) == 2
    assert dimension(I("x*y", "x*z", ring=("x", "y", "z", "w"))) == 3
    assert dimension(IdealHandle([], ring=R3)) == 3
    assert dimension(I("x", "y", "z")) == 0
    with pytest.raises(UnitIdeal):
        independent_set(I("1"))
    many = tuple(f"v{k}" for k in range(13))
    with pytest.raises(TooManyVariables):
        dimension(IdealHandle([], ring=many))


poly3 = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 3), st.integers(-3, 3).filter(bool), min_size=1, max_size=3
).map(lambda d: Polynomial(R3, d))


@settings(max_examples=30, deadline=None)
@given(st.lists(poly3, min_size=1, max_size=3), poly3)
def test_normal_form_idempotent_and_membership(gens, f):
    J = IdealHandle(gens, ring=R3)
    r = normal_form(f, J)
    assert normal_form(r, J) == r
    assert J.contains(f - r)
    for g in gens:
        assert J.contains(g * f)


@settings(max_examples=30, deadline=None)
@given(st.lists(poly3, min_size=1, max_size=2), poly3, poly3)
def test_quotient_monotone_and_contains_base(gens, f, g):
    J = IdealHandle(gens, ring=R3)
    Jf = ideal_quotient(J, f)
    assert Jf.contains_ideal(J)
    Jfg = ideal_quotient(J, f * g)
    assert Jfg.contains_ideal(Jf)
    for h in Jf.generators:
        assert J.contains(h * f)


def test_membership_agrees_with_linear_algebra():
    rng = random.Random(7)
    for _ in range(40):
        # random homogeneous binomial ideals in 3 variables
        gens = []
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(1, 3)
            mons = [(a, b, d - a - b) for a in range(d + 1) for b in range(d + 1 - a)]
            m1, m2 = rng.sample(mons, 2) if len(mons) > 1 else (mons[0], mons[0])
            gens.append(Polynomial(R3, {m1: 1, m2: rng.choice([-1, 2])}))
        J = IdealHandle(gens, ring=R3)
        d = rng.randint(1, 4)
        mons = [(a, b, d - a - b) for a in range(d + 1) for b in range(d + 1 - a)]
        f = Polynomial(R3, {m: rng.randint(-2, 2) for m in rng.sample(mons, min(2, len(mons)))})
        assert J.contains(f) == homogeneous_membership_oracle(f, gens, R3)


def test_dimension_matches_independent_set_oracle():
    rng = random.Random(3)
    for _ in range(60):
        ring, exps = random_monomial_ideal(rng)
        J = IdealHandle(monomial_polys(ring, exps), ring=ring)
        assert dimension(J) == dimension_oracle(exps, len(ring))


def test_permuting_variables_and_generators():
    rng = random.Random(11)
    for _ in range(20):
        ring, exps = random_monomial_ideal(rng, max_vars=4)
        perm = list(range(len(ring)))
        rng.shuffle(perm)
        moved = [tuple(e[perm[k]] for k in range(len(ring))) for e in exps]
        rng.shuffle(moved)
        a = IdealHandle(monomial_polys(ring, exps), ring=ring)
        b = IdealHandle(monomial_polys(ring, moved), ring=ring)
        assert dimension(a) == dimension(b)
        assert len(a.basis) == len(b.basis)


def test_groebner_basis_generates_same_ideal():
    J = I("x^2 - y*z", "x*y - z^2")
    G = IdealHandle(groebner_basis(J), ring=R3)
    assert ideal_equal(G, J)
    for g in J.generators:
        assert G.contains(g)
