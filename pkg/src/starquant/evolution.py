"""Exact Heisenberg evolution generated by a configuration-space action.

For a real polynomial action S(q) the generator

    L f = (i/lambda) [S, f]_*

splits into the classical fiber transport L0 f = -sum_k (d_k S) d, f/dp_k
and a tail R of odd bidifferential orders b >= 3,

    R = sum_{b odd >= 3} i^(b+1) 2^(1-b) / b! * lambda^(b-1)
        * sum_{|a|=b} (b!/a!) (d_q^a S) d_p^a ,

because S has no momentum dependence.  Both parts commute: R is built
from q-coefficients and pure p-derivatives, which pass through the
fiber translation p -> p - t dS untouched.  The flow therefore
factorizes exactly as

    A_t = (fiber flow at t) o exp(t R),

and exp(t R) is a finite sum on polynomials since every application of
R spends three momentum degrees.  No truncation happens anywhere; the
result is a polynomial in t which we evaluate at exact rational times.

The time-one flow transports the flat-state constructions onto the
graph of dS: state, ideal membership and operator realization at t = 1
are all pullbacks along A_{-1}.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterator, Sequence

from .errors import DimensionMismatch
from .gns import SchrodingerOperator, gelfand_member0, omega0, pi0
from .observables import GaussianObservable, Observable, PhasePolynomial
from .scalars import IntegralValue, Rat, Scalar, i_power


class ActionData:
    """A real, lambda-free polynomial action S(q) with its exact gradient."""

    __slots__ = ("dim", "action", "gradient")

    def __init__(self, action: PhasePolynomial):
        if not action.is_base_only():
            raise ValueError("action must depend on q only")
        if not action.is_lambda_free():
            raise ValueError("action must not involve lambda")
        if not action.is_real():
            raise ValueError("action must have real coefficients")
        self.dim = action.dim
        self.action = action
        self.gradient: tuple[PhasePolynomial, ...] = tuple(
            action.diff_q(k) for k in range(action.dim))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ActionData) and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    def __repr__(self) -> str:
        return f"ActionData({self.action!r})"


def _check_dims(f: GaussianObservable, s: ActionData) -> None:
    if f.dim != s.dim:
        raise DimensionMismatch(f"observable dim {f.dim} vs action dim {s.dim}")


def fiber_flow(f: Observable, t: Rat, s: ActionData) -> GaussianObservable:
    """Pull back along the fiber translation p_k -> p_k - t d_k S."""
    obs = GaussianObservable.of(f)
    _check_dims(obs, s)
    t = Fraction(t)
    shifts = [g.scale(-t) for g in s.gradient]
    return obs.substitute_momenta(shifts)


def _compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, slots - 1):
            yield (head,) + tail


def _source_apply(f: GaussianObservable, s: ActionData) -> GaussianObservable:
    """One application of the odd-order tail R to f."""
    n = f.dim
    out = GaussianObservable.zero(n)
    top = min(f.degree_p(), s.action.degree_q())
    for b in range(3, top + 1, 2):
        for a in _compositions(b, n):
            ds = s.action
            for j, e in enumerate(a):
                for _ in range(e):
                    ds = ds.diff_q(j)
            if ds.is_zero():
                continue
            df = f
            for j, e in enumerate(a):
                for _ in range(e):
                    df = df.diff_p(j)
            if df.is_zero():
                continue
            denom = 1
            for e in a:
                denom *= factorial(e)
            coeff = i_power(b + 1) * Fraction(1, 2 ** (b - 1) * denom)
            out = out + (GaussianObservable(ds) * df).scale(coeff).mul_lambda(b - 1)
    return out


def _exp_source(f: GaussianObservable, t: Fraction, s: ActionData) -> GaussianObservable:
    """exp(t R) f, a finite sum on this tier."""
    acc = f
    term = f
    m = 0
    while True:
        m += 1
        term = _source_apply(term, s)
        if term.is_zero():
            return acc
        acc = acc + term.scale(Fraction(t ** m, factorial(m)))


def evolve(f: Observable, t: Rat, s: ActionData) -> GaussianObservable:
    """The exact Heisenberg flow A_t f for rational t.

    Solves df/dt = (i/lambda) [S, f]_* with A_0 f = f by the commuting
    factorization described in the module docstring.
    """
    obs = GaussianObservable.of(f)
    _check_dims(obs, s)
    t = Fraction(t)
    return fiber_flow(_exp_source(obs, t, s), t, s)


def evolve_t_polynomial(f: Observable, s: ActionData) -> list[GaussianObservable]:
    """A_t f as an exact polynomial in the time variable.

    Returns the coefficient list [c_0, c_1, ...] with
    A_t f = sum_m c_m t^m; evaluating at rational t reproduces evolve.
    Useful for checking the Heisenberg equation as a polynomial
    identity rather than at sampled times.
    """
    obs = GaussianObservable.of(f)
    _check_dims(obs, s)
    n = obs.dim

    # exp(tR) f: R^m f / m! enters at t-degree m
    source_layers: list[GaussianObservable] = [obs]
    term = obs
    m = 0
    while True:
        m += 1
        term = _source_apply(term, s)
        if term.is_zero():
            break
        source_layers.append(term.scale(Fraction(1, factorial(m))))

    # fiber flow with symbolic t: expand prod_k (p_k - t d_k S)^(beta_k)
    def flow_layers(g: GaussianObservable) -> list[PhasePolynomial]:
        out: list[PhasePolynomial] = [PhasePolynomial.zero(n)]
        neg_grad = [grad.scale(-1) for grad in s.gradient]
        pk = [PhasePolynomial.coordinate_p(k, n) for k in range(n)]
        for (l, alpha, beta), c in g.body.terms.items():
            partial: list[PhasePolynomial] = [
                PhasePolynomial(n, {(l, alpha, (0,) * n): c})]
            for k, bk in enumerate(beta):
                for _ in range(bk):
                    # multiply the t-polynomial by (p_k - t d_k S)
                    nxt = [PhasePolynomial.zero(n)] * (len(partial) + 1)
                    for deg, poly in enumerate(partial):
                        nxt[deg] = nxt[deg] + poly * pk[k]
                        nxt[deg + 1] = nxt[deg + 1] + poly * neg_grad[k]
                    partial = nxt
            while len(out) < len(partial):
                out.append(PhasePolynomial.zero(n))
            for deg, poly in enumerate(partial):
                out[deg] = out[deg] + poly
        return out

    coeffs: list[GaussianObservable] = []
    for m, layer in enumerate(source_layers):
        for deg, poly in enumerate(flow_layers(layer)):
            idx = m + deg
            while len(coeffs) <= idx:
                coeffs.append(GaussianObservable.zero(n))
            coeffs[idx] = coeffs[idx] + GaussianObservable(poly, obs.rate)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs or [GaussianObservable.zero(n)]


def t_operator_apply(f: Observable, t: Rat, r: int, s: ActionData) -> GaussianObservable:
    """The lambda-order-r part of the dressed flow T_t = (fiber flow)^{-1} A_t.

    For f of homogeneous lambda-order zero this is lambda^r T_t^{(r)} f.
    The order-one part vanishes identically for this star product; that
    is observed, not assumed.
    """
    if r < 1:
        raise ValueError("order must be a positive integer")
    obs = GaussianObservable.of(f)
    _check_dims(obs, s)
    dressed = fiber_flow(evolve(obs, t, s), -Fraction(t), s)
    picked = {key: c for key, c in dressed.body.terms.items() if key[0] == r}
    body = PhasePolynomial(obs.dim, picked)
    return GaussianObservable(body, 0 if body.is_zero() else dressed.rate)


def omega1(f: Observable, s: ActionData) -> IntegralValue:
    """The transported state: integrate over the graph of dS."""
    return omega0(evolve(f, -1, s))


def gelfand_member1(f: Observable, s: ActionData) -> bool:
    """Membership in the null ideal of the transported state."""
    return gelfand_member0(evolve(f, -1, s))


def pi1(f: Observable, s: ActionData) -> SchrodingerOperator:
    """Operator realization induced by the transported state.

    Under the unitary identification of the two base-function models the
    dressed observable acts exactly like its pullback at time -1.
    """
    return pi0(evolve(f, -1, s))
