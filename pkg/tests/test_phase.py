from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from starquant import (ActionData, GaussianObservable, PhasePolynomial,
                       PhaseMismatch, PhaseSymbol, Scalar, conjugate_by_phase,
                       evolve, phase_star)

from conftest import polynomials
from test_star import random_polynomial

Q = PhasePolynomial.coordinate_q(0, 1)
P = PhasePolynomial.coordinate_p(0, 1)
I = Scalar(Fraction(0), Fraction(1))

S_QUAD = ActionData(Q * Q * Fraction(1, 2))
S_CUBE = ActionData(Q ** 3)


def test_phase_construction_and_tau_bookkeeping():
    sym = PhaseSymbol(S_QUAD, {Fraction(1): Q, Fraction(1): P})
    assert sym.terms == {Fraction(1): P}
    both = PhaseSymbol(S_QUAD, {Fraction(0): Q}) + PhaseSymbol(S_QUAD, {Fraction(1): P})
    assert both.sorted_terms() == [(Fraction(0), Q), (Fraction(1), P)]
    # cancelling amplitudes drop the tau slot entirely
    gone = both + PhaseSymbol(S_QUAD, {Fraction(1): P.scale(-1)})
    assert gone.terms == {Fraction(0): Q}
    assert PhaseSymbol(S_QUAD).is_zero()


def test_pointwise_mul_adds_phases():
    a = PhaseSymbol.pure_phase(S_QUAD, Fraction(1, 2))
    b = PhaseSymbol.pure_phase(S_QUAD, Fraction(1, 3))
    assert a.pointwise_mul(b) == PhaseSymbol.pure_phase(S_QUAD, Fraction(5, 6))


def test_phase_derivative_rule():
    # d/dq e^{i tau S/lambda} = i tau S' lambda^{-1} e^{i tau S/lambda}
    tau = Fraction(3, 2)
    sym = PhaseSymbol.pure_phase(S_CUBE, tau)
    expect = PhaseSymbol(
        S_CUBE, {tau: S_CUBE.gradient[0].scale(I * tau).mul_lambda(-1)})
    assert sym.diff_q(0) == expect
    assert sym.diff_p(0).is_zero()


def test_bare_phases_compose_under_star():
    # no momentum dependence, so the star product of two phases is pointwise
    a = phase_star(PhaseSymbol.pure_phase(S_CUBE, 1),
                   PhaseSymbol.pure_phase(S_CUBE, 2))
    assert a == PhaseSymbol.pure_phase(S_CUBE, 3)
    unit = phase_star(PhaseSymbol.pure_phase(S_CUBE, 1),
                      PhaseSymbol.pure_phase(S_CUBE, -1))
    assert unit == PhaseSymbol.from_polynomial(S_CUBE, PhasePolynomial.one(1))


def test_momentum_against_phase():
    # p * e^{i tau S/lambda} = (p + tau S'/2) e^{...}, and the reverse
    # order flips the sign of the shift
    for s, tau in ((S_QUAD, Fraction(1)), (S_CUBE, Fraction(-2, 3))):
        phase = PhaseSymbol.pure_phase(s, tau)
        shift = s.gradient[0].scale(Fraction(tau, 2))
        assert phase_star(P, phase) == PhaseSymbol(s, {tau: P + shift})
        assert phase_star(phase, P) == PhaseSymbol(s, {tau: P - shift})


def test_phase_star_requires_an_action():
    with pytest.raises(PhaseMismatch):
        phase_star(P, Q)
    with pytest.raises(PhaseMismatch):
        phase_star(PhaseSymbol.pure_phase(S_QUAD, 1),
                   PhaseSymbol.pure_phase(S_CUBE, 1))
    with pytest.raises(ValueError):
        phase_star(GaussianObservable(P, 1), PhaseSymbol.pure_phase(S_QUAD, 1))


def test_conjugation_matches_evolution_on_the_stated_grid():
    hams = [P, P * P, P ** 3]
    for s in (S_QUAD, S_CUBE):
        for h in hams:
            for t in (1, -1):
                direct = conjugate_by_phase(h, s, t)
                flowed = evolve(GaussianObservable(h), t, s)
                assert direct == flowed.body, (h, s.action, t)


def test_conjugation_matches_evolution_at_rational_times():
    rng = random.Random(987654)
    for _ in range(10):
        h = random_polynomial(rng, 1, 3, 0, 1, 3)
        t = Fraction(rng.randint(-2, 2), rng.randint(1, 4))
        s = S_CUBE if rng.random() < 0.5 else S_QUAD
        assert conjugate_by_phase(h, s, t) == evolve(GaussianObservable(h), t, s).body


def test_conjugation_two_dimensional():
    q1 = PhasePolynomial.coordinate_q(0, 2)
    q2 = PhasePolynomial.coordinate_q(1, 2)
    p1 = PhasePolynomial.coordinate_p(0, 2)
    p2 = PhasePolynomial.coordinate_p(1, 2)
    s = ActionData(q1 * q1 * q2)
    h = p1 * p2 + q2 * p1
    direct = conjugate_by_phase(h, s, Fraction(1, 2))
    flowed = evolve(GaussianObservable(h), Fraction(1, 2), s)
    assert direct == flowed.body


@given(polynomials(dim=1, max_terms=3, max_degree=3))
@settings(max_examples=30)
def test_conjugation_matches_evolution_property(h):
    assert conjugate_by_phase(h, S_CUBE, 1) == evolve(GaussianObservable(h), 1, S_CUBE).body


def test_conjugation_group_property():
    h = P ** 3 + Q * P
    once = conjugate_by_phase(h, S_CUBE, Fraction(1, 3))
    twice = conjugate_by_phase(once, S_CUBE, Fraction(2, 3))
    assert twice == conjugate_by_phase(h, S_CUBE, 1)
    assert conjugate_by_phase(once, S_CUBE, Fraction(-1, 3)) == h


def test_conjugation_rejects_envelopes():
    with pytest.raises(ValueError):
        conjugate_by_phase(GaussianObservable(P, 2), S_QUAD, 1)


def test_phase_star_termination_bound():
    # expansion stops once momentum derivatives are exhausted; symbols of
    # p-degree a and b never produce lambda orders past a + b
    rng = random.Random(31415)
    for _ in range(6):
        f = PhaseSymbol(S_CUBE, {Fraction(1): random_polynomial(rng, 1, 2, 0, 0, 2)})
        g = PhaseSymbol(S_CUBE, {Fraction(-1): random_polynomial(rng, 1, 2, 0, 0, 2)})
        prod = phase_star(f, g)
        for _tau, amp in prod.sorted_terms():
            assert amp.min_lambda_order() >= -(f.degree_p() + g.degree_p())
