"""The Weyl star product and the symmetrization map on T*R^n.

Convention.  We expand the product as

    f * g = sum_b (1/b!) (i*lambda/2)^b M_b(f, g),

where M_b applies b copies of the mixed bidifferential operator

    D = sum_k ( d/dq^k (x) d/dp_k  -  d/dp_k (x) d/dq^k )

to f (x) g and restricts to the diagonal.  The prefactor is pinned by
two anchors rather than taken on faith: with it, q * p = q p + i*lambda/2
and [q, p]_* = i*lambda, which is exactly what the Schrodinger-type
representation demands when p acts as -i*lambda d/dq.  Any other
normalization of D or of the prefactor breaks one of those anchors.

M_b is symmetric for even b and antisymmetric for odd b, so the star
commutator keeps only the odd-b terms, each counted twice.

The symmetrization map S = exp(-(i*lambda/2) * Delta) with
Delta = sum_k d^2/(dq^k dp_k) intertwines the two orderings used by the
state constructions; its inverse is the conjugate map with the opposite
sign.  On our tier every series below terminates: each application of D
spends one momentum derivative on one of the two factors, so b never
exceeds the combined p-degree, and Delta strictly lowers p-degree.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterator

from .errors import DimensionMismatch
from .observables import GaussianObservable, Observable, PhasePolynomial
from .scalars import I, ONE, Scalar, i_power


def _compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, slots - 1):
            yield (head,) + tail


class _DerivCache:
    """Incremental mixed partial derivatives of a fixed observable."""

    def __init__(self, f: GaussianObservable):
        self.n = f.dim
        zero = (0,) * self.n
        self.cache: dict[tuple[tuple[int, ...], tuple[int, ...]], GaussianObservable] = {
            (zero, zero): f}

    def get(self, aq: tuple[int, ...], ap: tuple[int, ...]) -> GaussianObservable:
        key = (aq, ap)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        for i, e in enumerate(aq):
            if e:
                prev = self.get(aq[:i] + (e - 1,) + aq[i + 1:], ap)
                val = prev.diff_q(i)
                break
        else:
            for i, e in enumerate(ap):
                if e:
                    prev = self.get(aq, ap[:i] + (e - 1,) + ap[i + 1:])
                    val = prev.diff_p(i)
                    break
            else:  # pragma: no cover - root is preloaded
                raise AssertionError
        self.cache[key] = val
        return val


def bidiff_M(f: Observable, g: Observable, b: int) -> GaussianObservable:
    """The b-th mixed bidifferential term M_b(f, g).

    Expanding D^b multinomially over the 2n commuting slot operators
    gives

        M_b(f,g) = sum_{|a|+|c|=b} b!/(a! c!) (-1)^{|c|}
                   (d_q^a d_p^c f) (d_p^a d_q^c g).
    """
    if b < 0:
        raise ValueError("negative bidifferential order")
    fo, go = GaussianObservable.of(f), GaussianObservable.of(g)
    if fo.dim != go.dim:
        raise DimensionMismatch(f"dim {fo.dim} vs {go.dim}")
    n = fo.dim
    if fo.is_zero() or go.is_zero():
        return GaussianObservable.zero(n)
    if b == 0:
        return fo * go
    df, dg = _DerivCache(fo), _DerivCache(go)
    fact_b = factorial(b)
    out = GaussianObservable.zero(n)
    for combo in _compositions(b, 2 * n):
        a, c = combo[:n], combo[n:]
        left = df.get(a, c)
        if left.is_zero():
            continue
        right = dg.get(c, a)
        if right.is_zero():
            continue
        denom = 1
        for e in combo:
            denom *= factorial(e)
        coeff = Scalar.of(Fraction((-1) ** sum(c) * fact_b, denom))
        out = out + (left * right).scale(coeff)
    return out


def _order_bound(f: GaussianObservable, g: GaussianObservable) -> int:
    """Largest b for which M_b(f, g) can be nonzero."""
    bound = f.degree_p() + g.degree_p()
    # without an envelope, a factor also dies once all its variables
    # are differentiated away
    if f.rate == 0:
        bound = min(bound, max((sum(a) + sum(p) for (_, a, p) in f.body.terms), default=0))
    if g.rate == 0:
        bound = min(bound, max((sum(a) + sum(p) for (_, a, p) in g.body.terms), default=0))
    return max(bound, 0)


def star(f: Observable, g: Observable) -> GaussianObservable:
    """Weyl star product f * g; exact and terminating on this tier."""
    fo, go = GaussianObservable.of(f), GaussianObservable.of(g)
    if fo.dim != go.dim:
        raise DimensionMismatch(f"dim {fo.dim} vs {go.dim}")
    if fo.is_zero() or go.is_zero():
        return GaussianObservable.zero(fo.dim)
    out = fo * go
    for b in range(1, _order_bound(fo, go) + 1):
        term = bidiff_M(fo, go, b)
        if term.is_zero():
            continue
        coeff = i_power(b) * Fraction(1, 2 ** b * factorial(b))
        out = out + term.scale(coeff).mul_lambda(b)
    return out


def star_commutator(f: Observable, g: Observable) -> GaussianObservable:
    """[f, g]_* computed from the odd-b terms only.

    M_b(f, g) = (-1)^b M_b(g, f), so even orders cancel in the
    commutator and odd orders double.
    """
    fo, go = GaussianObservable.of(f), GaussianObservable.of(g)
    if fo.dim != go.dim:
        raise DimensionMismatch(f"dim {fo.dim} vs {go.dim}")
    out = GaussianObservable.zero(fo.dim)
    if fo.is_zero() or go.is_zero():
        return out
    for b in range(1, _order_bound(fo, go) + 1, 2):
        term = bidiff_M(fo, go, b)
        if term.is_zero():
            continue
        coeff = i_power(b) * Fraction(2, 2 ** b * factorial(b))
        out = out + term.scale(coeff).mul_lambda(b)
    return out


def s_map(f: Observable, direction: str = "forward") -> GaussianObservable:
    """Apply S = exp(-(i*lambda/2) Delta) (forward) or its conjugate inverse.

    Delta = sum_k d^2/(dq^k dp_k) lowers p-degree, so the exponential
    series terminates.  The backward direction flips the sign in the
    exponent and is both the inverse and the complex conjugate of the
    forward map.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    obs = GaussianObservable.of(f)
    sign_i = -I if direction == "forward" else I
    out = obs
    term = obs
    phase = ONE
    m = 0
    while True:
        m += 1
        nxt = GaussianObservable.zero(obs.dim)
        for k in range(obs.dim):
            nxt = nxt + term.diff_q(k).diff_p(k)
        if nxt.is_zero():
            break
        term = nxt
        phase = phase * sign_i
        coeff = phase * Fraction(1, 2 ** m * factorial(m))
        out = out + term.scale(coeff).mul_lambda(m)
    return out
