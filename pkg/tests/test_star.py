from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from starquant import (EnvelopeMismatch, GaussianObservable, PhasePolynomial,
                       Scalar, bidiff_M, conjugate, s_map, star, star_commutator)

from conftest import observables, polynomials
from oracles import bopp_star

Q = PhasePolynomial.coordinate_q(0, 1)
P = PhasePolynomial.coordinate_p(0, 1)
I_HALF = Scalar(Fraction(0), Fraction(1, 2))


def obs(poly, rate=0):
    return GaussianObservable(poly, rate)


def random_polynomial(rng: random.Random, dim: int, max_degree: int,
                      min_lambda: int, max_lambda: int, terms: int) -> PhasePolynomial:
    out = {}
    for _ in range(rng.randint(1, terms)):
        k = rng.randint(min_lambda, max_lambda)
        alpha = tuple(rng.randint(0, max_degree) for _ in range(dim))
        beta = tuple(rng.randint(0, max_degree) for _ in range(dim))
        c = Scalar(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                   Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        out[(k, alpha, beta)] = c
    return PhasePolynomial(dim, out)


def test_product_anchors():
    assert star(obs(Q), obs(P)) == obs(Q * P + PhasePolynomial.lam(1, 1, I_HALF))
    assert star(obs(P), obs(Q)) == obs(Q * P - PhasePolynomial.lam(1, 1, I_HALF))
    assert star_commutator(obs(Q), obs(P)) == obs(PhasePolynomial.lam(1, 1, Scalar(Fraction(0), Fraction(1))))


def test_ccr_in_two_dimensions():
    for k in range(2):
        for l in range(2):
            qk = obs(PhasePolynomial.coordinate_q(k, 2))
            pl = obs(PhasePolynomial.coordinate_p(l, 2))
            expect = (PhasePolynomial.lam(2, 1, Scalar(Fraction(0), Fraction(1)))
                      if k == l else PhasePolynomial.zero(2))
            assert star_commutator(qk, pl) == obs(expect)
            assert star_commutator(qk, obs(PhasePolynomial.coordinate_q(l, 2))).is_zero()
            assert star_commutator(pl, obs(PhasePolynomial.coordinate_p(k, 2))).is_zero()


def test_bidiff_symmetry_and_leading_orders():
    f, g = obs(Q * Q * P), obs(P * P + Q)
    assert bidiff_M(f, g, 0) == f * g
    for b in range(4):
        lhs = bidiff_M(f, g, b)
        rhs = bidiff_M(g, f, b).scale(Scalar.of((-1) ** b))
        assert lhs == rhs


@given(polynomials(dim=1, max_terms=3, max_degree=2, min_lambda=-1, max_lambda=1),
       observables(dim=1, rate=1, max_terms=3, max_degree=2))
@settings(max_examples=30)
def test_star_matches_shifted_word_oracle(f, g):
    assert star(obs(f), g) == bopp_star(f, g)


def test_star_matches_oracle_with_envelopes_dim2():
    rng = random.Random(7041)
    for _ in range(10):
        f = random_polynomial(rng, 2, 2, 0, 1, 2)
        g = GaussianObservable(random_polynomial(rng, 2, 2, 0, 1, 2), rng.randint(0, 2))
        assert star(obs(f), g) == bopp_star(f, g)


def test_associativity_on_seeded_triples():
    rng = random.Random(20260819)
    for dim in (1, 2):
        for _ in range(30):
            f = obs(random_polynomial(rng, dim, 2, -1, 1, 2))
            g = obs(random_polynomial(rng, dim, 2, -1, 1, 2))
            h = obs(random_polynomial(rng, dim, 2, -1, 1, 2))
            assert star(star(f, g), h) == star(f, star(g, h))


def test_associativity_with_envelope_on_the_right():
    rng = random.Random(99)
    for _ in range(10):
        f = obs(random_polynomial(rng, 1, 2, 0, 1, 2))
        g = obs(random_polynomial(rng, 1, 2, 0, 1, 2))
        h = GaussianObservable(random_polynomial(rng, 1, 2, 0, 1, 2), 1)
        assert star(star(f, g), h) == star(f, star(g, h))


@given(polynomials(dim=1, max_terms=3), polynomials(dim=1, max_terms=3))
def test_involution_and_classical_limit(f, g):
    fo, go = obs(f), obs(g)
    # conjugation reverses the product
    assert conjugate(star(fo, go)) == star(conjugate(go), conjugate(fo))
    # lambda-order-zero part of the product of lambda-free factors is pointwise
    product = star(fo, go)
    if not product.is_zero() and f.is_lambda_free() and g.is_lambda_free():
        zero_part = product.body.lambda_components().get(0, PhasePolynomial.zero(1))
        assert zero_part == f * g


@given(polynomials(dim=1, max_terms=3), polynomials(dim=1, max_terms=3))
def test_commutator_leading_order_is_poisson(f, g):
    if not (f.is_lambda_free() and g.is_lambda_free()):
        return
    bracket = star_commutator(obs(f), obs(g))
    poisson = f.diff_q(0) * g.diff_p(0) - f.diff_p(0) * g.diff_q(0)
    # [f, g] = i lambda {f, g} + O(lambda^3)
    first = bracket.body.lambda_components().get(1, PhasePolynomial.zero(1))
    assert first == poisson.scale(Scalar(Fraction(0), Fraction(1)))


def test_degree_termination_bound():
    f = obs(Q ** 3 * P ** 2)
    g = obs(P ** 4)
    assert bidiff_M(f, g, 7).is_zero()
    assert not star(f, g).is_zero()


def test_envelope_product_rates_add():
    f = GaussianObservable(Q, 1)
    g = GaussianObservable(P, 2)
    assert star(f, g).rate == 3
    with pytest.raises(EnvelopeMismatch):
        star(f, g) + GaussianObservable(Q, 1)


def test_s_map_examples_and_inverse():
    qp = Q * P
    assert s_map(obs(qp)) == obs(qp - PhasePolynomial.lam(1, 1, I_HALF))
    assert s_map(obs(qp), "backward") == obs(qp + PhasePolynomial.lam(1, 1, I_HALF))
    # base functions and pure momenta are fixed points
    assert s_map(obs(Q * Q)) == obs(Q * Q)
    assert s_map(obs(P ** 3)) == obs(P ** 3)


@given(observables(dim=2, rate=1, max_terms=3, max_degree=2))
def test_s_map_round_trip_and_conjugation(f):
    assert s_map(s_map(f, "forward"), "backward") == f
    # S-bar = S^{-1}: conjugation swaps the direction
    assert conjugate(s_map(f, "forward")) == s_map(conjugate(f), "backward")
