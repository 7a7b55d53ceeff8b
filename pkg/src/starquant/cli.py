"""Command-line front end.

Every pipeline stage is a subcommand over expressions in q, p, lambda
and i.  Output is deterministic: --json emits canonical JSON (exact
rationals as "num/den" strings, terms in canonical order), the default
pretty mode prints grammar-conformant expressions that parse back.

Exit codes: 0 success, 2 parse/usage error, 3 precondition failure
(turning point, Hamilton-Jacobi violation, non-member, ...).  Errors go
to stderr as a one-line JSON body with the diagnostic attached.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import render
from .errors import (DimensionMismatch, EnvelopeMismatch, GridTooCoarse,
                     HamiltonJacobiViolated, NonIntegrable, NotInIdeal,
                     PhaseMismatch, TurningPointError)
from .evolution import ActionData, evolve, gelfand_member1, omega1, pi1
from .gns import (gelfand_member0, inner0, momenta_decompose, omega0, pi0,
                  project_H0, weyl_symmetrize_oracle)
from .observables import GaussianObservable, PhasePolynomial
from .parsing import (ObservableParseError, parse_complex_constant,
                      parse_observable, parse_rational)
from .phase import conjugate_by_phase
from .star import s_map, star, star_commutator
from .wkb import (GridFunction1D, WKBSolution, eigenproblem_hierarchy,
                  solve_transport_1d, transport_residuals_1d)

_PRECONDITION_ERRORS = (HamiltonJacobiViolated, TurningPointError, NonIntegrable,
                        NotInIdeal, EnvelopeMismatch, GridTooCoarse, PhaseMismatch,
                        DimensionMismatch, ValueError)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse with JSON usage errors, matching the error contract."""

    def error(self, message):
        sys.stderr.write(json.dumps({"error": "UsageError", "message": message}) + "\n")
        raise SystemExit(2)


def _color_enabled() -> bool:
    return sys.stdout.isatty() and os.environ.get("STARQUANT_COLOR") != "0"


def _label(text: str) -> str:
    if _color_enabled():
        return f"\x1b[36m{text}\x1b[0m"
    return text


# -- shared argument plumbing ------------------------------------------


def _common_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--dim", type=int, default=1, metavar="N",
                        help="phase-space dimension n (default 1)")
    parser.add_argument("--envelope", default="0", metavar="C",
                        help="Gaussian envelope rate c in exp(-c|q|^2), rational")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--json", action="store_true", help="canonical JSON output")
    mode.add_argument("--pretty", action="store_true",
                      help="human-readable output (default)")


def _rate(args) -> Fraction:
    rate = parse_rational(args.envelope)
    if rate < 0:
        raise ValueError("envelope rate must be nonnegative")
    return rate


def _obs(args, text: str) -> GaussianObservable:
    if args.dim < 1:
        raise ValueError("dimension must be at least 1")
    return parse_observable(text, args.dim, _rate(args))


def _poly(args, text: str) -> PhasePolynomial:
    return parse_observable(text, args.dim, 0).body


def _action(args) -> ActionData:
    return ActionData(_poly(args, args.action))


def _obs_out(result: GaussianObservable) -> tuple[dict, str]:
    return render.observable_json(result), render.pretty_observable(result)


def _value_out(value) -> tuple[dict, str]:
    return render.value_json(value), render.pretty_value(value)


def _op_out(op) -> tuple[dict, str]:
    return render.operator_json(op), render.pretty_operator(op)


# -- subcommand handlers -----------------------------------------------


def _cmd_star(args):
    return _obs_out(star(_obs(args, args.f), _obs(args, args.g)))


def _cmd_commutator(args):
    return _obs_out(star_commutator(_obs(args, args.f), _obs(args, args.g)))


def _cmd_smap(args):
    direction = "backward" if args.inverse else "forward"
    return _obs_out(s_map(_obs(args, args.f), direction))


def _cmd_project(args):
    return _obs_out(project_H0(_obs(args, args.f)))


def _cmd_omega0(args):
    return _value_out(omega0(_obs(args, args.f)))


def _cmd_inner0(args):
    return _value_out(inner0(_obs(args, args.f), _obs(args, args.g)))


def _cmd_ideal0(args):
    f = _obs(args, args.f)
    member = gelfand_member0(f)
    payload: dict = {"member": member}
    lines = [f"{_label('member:')} {'yes' if member else 'no'}"]
    if member and f.rate == 0:
        parts = momenta_decompose(f.body)
        payload["parts"] = [
            {"index": k + 1, "terms": render.observable_terms_json(g)}
            for k, g in enumerate(parts)
        ]
        for k, g in enumerate(parts):
            lines.append(f"g_{k + 1} = {render.pretty_polynomial(g)}")
    return payload, "\n".join(lines)


def _cmd_pi0(args):
    return _op_out(pi0(_obs(args, args.f)))


def _cmd_weyl_check(args):
    if args.dim < 1:
        raise ValueError("dimension must be at least 1")
    n, top = args.dim, args.max_degree
    checked = 0
    mismatches = []
    for alpha, beta in _monomials_upto(n, top):
        f = GaussianObservable(PhasePolynomial.monomial(n, 0, alpha, beta))
        lhs = pi0(f)
        rhs = weyl_symmetrize_oracle(alpha, beta)
        checked += 1
        if lhs != rhs:
            mismatches.append({"q": list(alpha), "p": list(beta)})
    payload = {"dim": n, "max_degree": top, "checked": checked,
               "mismatches": mismatches, "all_equal": not mismatches}
    verdict = "all equal" if not mismatches else f"{len(mismatches)} mismatches"
    return payload, f"{_label('weyl check:')} {checked} monomials, {verdict}"


def _monomials_upto(n: int, top: int):
    def exponents(total, slots):
        if slots == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for rest in exponents(total - head, slots - 1):
                yield (head,) + rest

    for degree in range(top + 1):
        for qdeg in range(degree + 1):
            for alpha in exponents(qdeg, n):
                for beta in exponents(degree - qdeg, n):
                    yield alpha, beta


def _cmd_evolve(args):
    t = parse_rational(args.t)
    return _obs_out(evolve(_obs(args, args.f), t, _action(args)))


def _cmd_omega1(args):
    return _value_out(omega1(_obs(args, args.f), _action(args)))


def _cmd_ideal1(args):
    f = _obs(args, args.f)
    s = _action(args)
    member = gelfand_member1(f, s)
    payload: dict = {"member": member}
    lines = [f"{_label('member:')} {'yes' if member else 'no'}"]
    if member and f.rate == 0:
        # constructive witness: pull back, split over the p_k, push forward
        pulled = momenta_decompose(evolve(f, -1, s).body)
        parts = []
        for k, g in enumerate(pulled):
            factor = evolve(GaussianObservable(g), 1, s)
            generator = evolve(
                GaussianObservable(PhasePolynomial.coordinate_p(k, s.dim)), 1, s)
            parts.append({"index": k + 1,
                          "factor": render.observable_terms_json(factor.body),
                          "generator": render.observable_terms_json(generator.body)})
            lines.append(f"g_{k + 1} = {render.pretty_polynomial(factor.body)}"
                         f"   (generator {render.pretty_polynomial(generator.body)})")
        payload["parts"] = parts
    return payload, "\n".join(lines)


def _cmd_pi1(args):
    return _op_out(pi1(_obs(args, args.f), _action(args)))


def _cmd_phase_conj(args):
    t = parse_rational(args.t)
    h = _poly(args, args.h)
    s = _action(args)
    result = conjugate_by_phase(h, s, t)
    direct = evolve(GaussianObservable(h), t, s)
    matches = direct.rate == 0 and direct.body == result
    payload = {
        "observable": render.observable_json(GaussianObservable(result)),
        "matches_evolve": matches,
    }
    text = (f"{render.pretty_polynomial(result)}\n"
            f"{_label('matches evolve:')} {'yes' if matches else 'no'}")
    return payload, text


def _cmd_wkb_hierarchy(args):
    ham = _poly(args, args.ham)
    s = _action(args)
    energy = parse_rational(args.energy)
    hierarchy = eigenproblem_hierarchy(ham, s, energy, args.order)
    payload = render.hierarchy_json(hierarchy)
    lines = []
    for j, op in enumerate(hierarchy.orders):
        lines.append(f"{_label(f'D_{j} =')} {render.pretty_operator(op)}")
    return payload, "\n".join(lines)


def _cmd_wkb_solve1d(args):
    a, b = args.interval
    if not b > a:
        raise ValueError("interval must satisfy a < b")
    n = args.samples
    pad = max(4, 2 * (args.order + 1))
    if args.sprime_expr is not None:
        poly = parse_observable(args.sprime_expr, 1, 0).body
        if not poly.is_base_only() or not poly.is_lambda_free() or not poly.is_real():
            raise ValueError("S' must be a real polynomial in q alone")
        sprime = GridFunction1D.from_callable(
            lambda x: _poly_at(poly, x), a, b, n, pad)
    else:
        data = np.loadtxt(args.sprime_file, dtype=float)
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError("S' file must have two columns: q and S'(q)")
        sprime = GridFunction1D.from_samples(data[:, 0], data[:, 1], a, b, n, pad)
    boundary = complex(parse_complex_constant(args.bc))
    orders = []
    prev = None
    for r in range(args.order + 1):
        phi = solve_transport_1d(sprime, prev, boundary if r == 0 else 0.0)
        orders.append(phi)
        prev = phi
    solution = WKBSolution(sprime, orders)
    report = transport_residuals_1d(sprime, orders, args.tol)
    payload = render.solution_json(solution)
    payload["residuals"] = {"norms": report.norms, "tol": report.tol,
                            "passed": report.passed}
    lines = []
    for r, phi in enumerate(orders):
        peak = float(np.max(np.abs(phi.interior())))
        lines.append(f"{_label(f'phi_{r}:')} max|phi| = {peak:.6g}, "
                     f"residual = {report.norms[r]:.3e}")
    lines.append(f"{_label('residual check:')} "
                 f"{'passed' if report.passed else 'FAILED'} at tol {report.tol:g}")
    return payload, "\n".join(lines)


def _poly_at(poly: PhasePolynomial, x: float) -> float:
    total = Fraction(0)
    for (k, alpha, beta), c in poly.terms.items():
        total += c.re * Fraction(x) ** alpha[0]
    return float(total)


# -- parser construction -----------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="starquant",
                             description="exact Weyl star-product workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(name, handler, help_text, **kwargs):
        p = sub.add_parser(name, help=help_text, **kwargs)
        _common_flags(p)
        p.set_defaults(handler=handler)
        return p

    p = leaf("star", _cmd_star, "star product F * G")
    p.add_argument("f")
    p.add_argument("g")

    p = leaf("commutator", _cmd_commutator, "star commutator [F, G]")
    p.add_argument("f")
    p.add_argument("g")

    p = leaf("smap", _cmd_smap, "apply the equivalence map S (or its inverse)")
    p.add_argument("f")
    p.add_argument("--inverse", action="store_true")

    p = leaf("omega0", _cmd_omega0, "flat-state expectation of F")
    p.add_argument("f")

    p = leaf("inner0", _cmd_inner0, "GNS inner product of F and G")
    p.add_argument("f")
    p.add_argument("g")

    p = leaf("ideal0", _cmd_ideal0, "null-ideal membership and decomposition")
    p.add_argument("f")

    p = leaf("project", _cmd_project, "project onto base functions")
    p.add_argument("f")

    p = leaf("pi0", _cmd_pi0, "operator representation of F")
    p.add_argument("f")

    p = leaf("weyl-check", _cmd_weyl_check, "compare pi0 with symmetrized words")
    p.add_argument("--max-degree", type=int, required=True, metavar="D")

    p = leaf("evolve", _cmd_evolve, "Heisenberg evolution A_t F")
    p.add_argument("f")
    p.add_argument("--t", required=True, metavar="T")
    p.add_argument("--action", required=True, metavar="S")

    for name, handler, text in (
            ("omega1", _cmd_omega1, "transported-state expectation"),
            ("ideal1", _cmd_ideal1, "transported null-ideal membership"),
            ("pi1", _cmd_pi1, "transported operator representation")):
        p = leaf(name, handler, text)
        p.add_argument("f")
        p.add_argument("--action", required=True, metavar="S")

    wkb = sub.add_parser("wkb", help="transport hierarchy and 1-d solver")
    wkb_sub = wkb.add_subparsers(dest="wkb_command", required=True)

    p = wkb_sub.add_parser("hierarchy", help="lambda-split eigenproblem operators")
    _common_flags(p)
    p.set_defaults(handler=_cmd_wkb_hierarchy)
    p.add_argument("--ham", required=True, metavar="H")
    p.add_argument("--action", required=True, metavar="S")
    p.add_argument("--energy", required=True, metavar="E")
    p.add_argument("--order", type=int, required=True, metavar="R")

    p = wkb_sub.add_parser("solve1d", help="solve the transport recursion on a grid")
    _common_flags(p)
    p.set_defaults(handler=_cmd_wkb_solve1d)
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--sprime-expr", metavar="EXPR")
    source.add_argument("--sprime-file", metavar="FILE")
    p.add_argument("--interval", nargs=2, type=float, required=True,
                   metavar=("A", "B"))
    p.add_argument("--samples", type=int, required=True, metavar="N")
    p.add_argument("--order", type=int, required=True, metavar="R")
    p.add_argument("--bc", required=True, metavar="VALUE",
                   help="boundary value of phi_0 at q = A")
    p.add_argument("--tol", type=float, default=1e-5)

    p = leaf("phase-conj", _cmd_phase_conj,
             "conjugate H by the phase of S and compare with evolve")
    p.add_argument("h")
    p.add_argument("--t", required=True, metavar="T")
    p.add_argument("--action", required=True, metavar="S")

    return parser


def _emit_error(exc: Exception, code: int) -> int:
    body: dict = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ObservableParseError):
        body["line"] = exc.line
        body["column"] = exc.column
    residual = getattr(exc, "residual", None)
    if residual is not None:
        body["residual"] = render.observable_terms_json(residual)
    sys.stderr.write(json.dumps(body) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    try:
        payload, pretty = args.handler(args)
    except ObservableParseError as exc:
        return _emit_error(exc, 2)
    except OSError as exc:  # unreadable --sprime-file
        return _emit_error(exc, 2)
    except _PRECONDITION_ERRORS as exc:
        return _emit_error(exc, 3)
    if args.json:
        sys.stdout.write(render.dumps(payload))
    else:
        sys.stdout.write(pretty + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
