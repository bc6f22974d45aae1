"""Command-line front end.

Subcommands: ``stirling``, ``eppf``, ``vweights``, ``boundary``, ``sample``
and ``decompose``. JSON output is wrapped in an envelope carrying the
package version, the parsed configuration, the scalar mode and the
tolerances in force. Exact rationals print as ``"p/q"``, log-domain values
as ``{sign, log10}``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure (a JSON
diagnostic is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .boundary import (DEFAULT_PROBES, _resolve_mode, DEFAULT_TOL, PascalGraph, conditional_law, level_profile,
                       parse_graph, parse_path, path_limit, pathology_diagnostic)
from .gibbs import (GibbsLaw, TwoParam, VArray, block_count_law, check_addition_rule,
                    eppf_gibbs, eppf_two_param, phi_weights, psi_weights)
from .moments import INF, recover_mixture
from .numerics import LogScalar, NumericalFailure, QuadratureError, QuadratureSpec, is_exact, to_exact
from .sampling import THREADS_ENV, lln_experiment, mc_statistic
from .stirling import (asymptotic_alpha0, asymptotic_alpha_pos, bell_polynomial, build_triangle,
                       normalize_alpha, stirling_number, stirling_spec, w_weights)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def jsonable(x):
    """Lossless JSON encoding of the package's scalar types."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(x, LogScalar):
        return x.to_json()
    if isinstance(x, dict):
        return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    return str(x)


def _envelope(args, mode: str, tolerances: dict, result) -> dict:
    # thread count is left out so equal seeds give byte-identical output
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "threads", "output")}
    return {"version": __version__, "command": args.command, "config": jsonable(cfg),
            "mode": mode, "tolerances": jsonable(tolerances), "result": jsonable(result)}


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _rational(text: str):
    return normalize_alpha(text) if text.strip().lower() in ("-inf", "inf") else to_exact(text)


# ---------------------------------------------------------------------------
# law construction shared by eppf and vweights


def _law_from_args(args):
    """``TwoParam`` for closed-form laws, ``GibbsLaw`` for tables."""
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
    get = lambda k: getattr(args, k, None) if getattr(args, k, None) is not None else cfg.get(k)  # noqa: E731
    kind = get("law") or cfg.get("type") or "phi"
    alpha = get("alpha")
    if kind == "phi":
        if alpha is None or get("theta") is None and get("m") is None:
            raise ValueError("phi law needs --alpha and --theta (or --m)")
        a = _rational(str(alpha))
        if get("m") is not None:
            return TwoParam(a, m=_count(get("m")))
        th = str(get("theta"))
        return TwoParam(a, theta=math.inf if th == "inf" else to_exact(th))
    if kind == "phi_inf":
        if get("m") is None:
            raise ValueError("phi_inf law needs --m")
        return TwoParam("-inf", m=_count(get("m")))
    N = int(get("N") or 10)
    if kind == "psi":
        if alpha is None or get("s") is None:
            raise ValueError("psi law needs --alpha and --s")
        return GibbsLaw(psi_weights(float(to_exact(str(alpha))), float(get("s")), N))
    if kind == "custom":
        if get("file") is None:
            raise ValueError("custom law needs --file with n,k,value rows")
        with open(get("file")) as fh:
            return GibbsLaw(VArray.from_csv(_rational(str(alpha)), fh.read()))
    raise ValueError(f"unknown law type {kind!r}")


def _count(m):
    return math.inf if str(m) == "inf" else int(m)


def _law_table(law, N: Optional[int]) -> VArray:
    if isinstance(law, TwoParam):
        return VArray.from_function(law.alpha, N or 10, lambda n, k: phi_weights(law.alpha, law, n, k))
    return law.V.truncate(N) if N and N <= law.N else law.V


# ---------------------------------------------------------------------------
# subcommands


def cmd_stirling(args, out) -> int:
    if args.triangle:
        spec = parse_graph(args.triangle).spec
    else:
        spec = stirling_spec(_rational(args.alpha))
    if args.asymptotic:
        a = spec.alpha
        k = args.k
        if k is None:
            raise ValueError("--asymptotic needs --k")
        dp = stirling_number(args.n, k, a, mode="log")
        if a == 0:
            est = asymptotic_alpha0(args.n, k)
        elif a != normalize_alpha("-inf") and 0 < a < 1:
            est = asymptotic_alpha_pos(args.n, k, float(a))
        else:
            raise ValueError("asymptotic estimates exist for 0 <= alpha < 1")
        res = {"n": args.n, "k": k, "dp": dp, "estimate": est, "ratio": math.exp(dp.log - est.log)}
        out.write(_dump(_envelope(args, "log", {}, res)))
        return 0
    tri = build_triangle(spec, args.n, args.mode, k_max=args.kmax)
    if args.format == "csv":
        out.write(tri.to_csv())
    else:
        res = [{"n": n, "k": k, "value": v} for n, k, v in tri.entries()]
        out.write(_dump(_envelope(args, args.mode, {}, res)))
    return 0


def cmd_eppf(args, out) -> int:
    law = _law_from_args(args)
    res: dict = {}
    exact = isinstance(law, TwoParam) and (law.kind != "regular" or is_exact(law.theta))
    if args.parts:
        parts = tuple(int(p) for p in args.parts.split(","))
        res["parts"] = list(parts)
        res["value"] = eppf_two_param(law, parts) if isinstance(law, TwoParam) else eppf_gibbs(law, parts)
    if args.normalize:
        res["normalization"] = {str(n): sum(block_count_law(law, n), 0) for n in range(1, args.nmax + 1)}
    if args.check_addition:
        rep = check_addition_rule(law, args.nmax, tol=args.tol)
        res["checked"] = rep.checked
        res["violations"] = [{"composition": list(c), "residual": r} for c, r in rep.violations]
        res["max_residual"] = rep.max_residual
    if not res:
        raise ValueError("nothing to do: give --parts, --normalize or --check-addition")
    out.write(_dump(_envelope(args, "exact" if exact else "float",
                              {"addition_rel_tol": args.tol}, res)))
    return 0


def cmd_vweights(args, out) -> int:
    law = _law_from_args(args)
    V = _law_table(law, args.N)
    if args.format == "csv":
        out.write(V.to_csv())
        return 0
    W = w_weights(V.alpha, V.N)
    sums = {str(n): sum((V[n, k] * bell_polynomial(n, k, W) for k in range(1, n + 1)), 0)
            for n in range(1, V.N + 1)}
    res = {"alpha": V.alpha, "N": V.N, "rows": [list(r) for r in V.rows],
           "recursion_residual": V.max_relative_residual(), "min_entry": V.min_entry(),
           "row_sums": sums}
    tol = {}
    if not V.exact:
        q = QuadratureSpec()
        tol = {"quadrature_abs": q.abs_tol, "quadrature_rel": q.rel_tol, "negativity": 1e-8}
    out.write(_dump(_envelope(args, "exact" if V.exact else "float", tol, res)))
    return 0


def _parse_target(text: str, graph):
    a, _, b = text.partition(":")
    if isinstance(graph, PascalGraph):
        return (int(a), int(b))
    return (a, int(b))


def cmd_boundary(args, out) -> int:
    tol = {"cauchy_rel_tol": args.tol, "diverge_factor": 10}
    if args.target:
        head, _, lvl = args.target.partition(":")
        graph = parse_graph(args.graph, n_hint=int(lvl or 3))
        target = _parse_target(args.target, graph)
        if not graph.contains(target):
            raise ValueError(f"target {args.target} is not a node of {args.graph}")
        levels = {}
        for n in range(max(graph.level(graph.root), 1), min(args.nmax, graph.level(target)) + 1):
            law = conditional_law(graph, target, n, args.mode)
            prof = level_profile(graph, target, n, args.mode)
            key = (lambda v: str(v[1])) if isinstance(graph, PascalGraph) else (lambda v: v[0])
            levels[str(n)] = {"law": {key(v): p for v, p in law.items()},
                              "profile": {key(v): p for v, p in prof.items()}}
        res = {"graph": args.graph, "target": args.target, "levels": levels}
        mode = _resolve_mode(args.mode, graph.level(target), graph.exact_capable)
        if args.diagnostic and args.graph == "pathology":
            if args.seed is None:
                raise ValueError("--diagnostic needs --seed")
            res["diagnostic"] = pathology_diagnostic(target[1], min(args.nmax, target[1]),
                                                     args.reps, args.seed)
        out.write(_dump(_envelope(args, mode, tol, res)))
        return 0
    if args.path:
        graph = parse_graph(args.graph)
        if not isinstance(graph, PascalGraph):
            raise ValueError("path limits need a Pascal-type graph")
        probes = [int(float(p)) for p in args.probes.split(",")] if args.probes else list(DEFAULT_PROBES)
        est = path_limit(graph, parse_path(args.path), probes, args.nmax, args.tol, args.mode,
                         workers=args.threads)
        out.write(_dump(_envelope(args, est.mode, tol, est.to_json())))
        return 0
    raise ValueError("give --target or --path")


def cmd_sample(args, out) -> int:
    if args.seed is None:
        raise ValueError("sampling needs --seed")
    if args.law == "crp":
        if args.alpha is None or args.theta is None:
            raise ValueError("crp needs --alpha and --theta")
        rep = lln_experiment(to_exact(args.alpha), to_exact(args.theta), args.n, args.reps,
                             args.seed, args.stat, threads=args.threads)
    elif args.law == "coupon":
        if args.m is None:
            raise ValueError("coupon needs --m")
        rep = mc_statistic("coupon", {"m": args.m}, args.n, args.reps, args.seed, args.stat,
                           threads=args.threads)
    else:
        if args.alpha is None or args.m is None:
            raise ValueError("dirichlet needs --alpha and --m")
        rep = mc_statistic("dirichlet", {"alpha": to_exact(args.alpha), "m": args.m}, args.n,
                           args.reps, args.seed, args.stat, threads=args.threads)
    res = rep.to_json()
    res["values_head"] = rep.values[:10]
    out.write(_dump(_envelope(args, "float", {"z_sigmas": 3}, res)))
    return 0


def _read_column(path: str) -> list:
    with open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if rows and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]
    pairs = sorted((int(r[0]), r[1].strip()) for r in rows)
    if [p[0] for p in pairs] != list(range(1, len(pairs) + 1)):
        raise ValueError("u file must list n = 1..N")
    return [to_exact(v) if "/" in v or "." not in v and "e" not in v.lower() else float(v)
            for _, v in pairs]


def cmd_decompose(args, out) -> int:
    u = _read_column(args.u)
    if args.mode == "float":
        u = [float(x) for x in u]
    elif args.mode == "exact":
        u = [to_exact(x) for x in u]
    support = [INF if s.strip() == "inf" else to_exact(s) for s in args.support.split(",")]
    fit = recover_mixture(u, _rational(args.alpha), support, mode=args.mode, tol=args.tol)
    res = {"q": {("inf" if p == INF else str(jsonable(p))): w for p, w in zip(fit.support, fit.q)},
           "residual": fit.residual, "verdict": fit.verdict, "method": fit.method}
    out.write(_dump(_envelope(args, fit.method, {"residual_tol": args.tol}, res)))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gibbspart", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--output", help="write to this file instead of stdout")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("stirling", help="triangle dumps and asymptotic ratios")
    s.add_argument("--alpha", default="0", help="type alpha (p/q, decimal or -inf)")
    s.add_argument("--triangle", help="stirling:A, pascal or qpascal:Q (overrides --alpha)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--kmax", type=int)
    s.add_argument("--mode", choices=["exact", "log"], default="exact")
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--asymptotic", action="store_true", help="ratio of [n,k] to its estimate")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_stirling)

    def law_flags(q):
        q.add_argument("--law", choices=["phi", "phi_inf", "psi", "custom"])
        q.add_argument("--alpha")
        q.add_argument("--theta")
        q.add_argument("--m")
        q.add_argument("--s", type=float)
        q.add_argument("--file", help="n,k,value CSV for a custom V array")
        q.add_argument("--config", help="JSON law description {type, alpha, theta|m|s, N, file}")
        q.add_argument("--N", type=int)

    e = sub.add_parser("eppf", help="evaluate, normalize, addition-rule sweep")
    law_flags(e)
    e.add_argument("--parts", help="composition, e.g. 3,2,2")
    e.add_argument("--normalize", action="store_true")
    e.add_argument("--check-addition", action="store_true")
    e.add_argument("--nmax", type=int, default=6)
    e.add_argument("--tol", type=float, default=1e-10)
    e.set_defaults(func=cmd_eppf)

    v = sub.add_parser("vweights", help="V tables and recursion residuals")
    law_flags(v)
    v.add_argument("--format", choices=["csv", "json"], default="json")
    v.set_defaults(func=cmd_vweights)

    b = sub.add_parser("boundary", help="conditional laws, path limits, pathology demo")
    b.add_argument("--graph", default="stirling:0",
                   help="stirling:ALPHA, pascal, qpascal:Q or pathology")
    b.add_argument("--target", help="NU:KAPPA, or LETTER:NU for the pathology graph")
    b.add_argument("--path", help='"c*nu^e", "c*log(nu)", "const:m" or a nu,kappa file')
    b.add_argument("--probes", help="comma-separated levels")
    b.add_argument("--nmax", type=int, default=4)
    b.add_argument("--tol", type=float, default=DEFAULT_TOL)
    b.add_argument("--mode", choices=["auto", "exact", "log"], default="auto")
    b.add_argument("--diagnostic", action="store_true", help="backward-sampling check (pathology)")
    b.add_argument("--reps", type=int, default=1000)
    b.add_argument("--seed", type=int)
    b.add_argument("--threads", type=int)
    b.set_defaults(func=cmd_boundary)

    m = sub.add_parser("sample", help="Monte Carlo reports on block counts",
                       epilog=f"default thread count comes from ${THREADS_ENV}")
    m.add_argument("--law", choices=["crp", "coupon", "dirichlet"], required=True)
    m.add_argument("--alpha")
    m.add_argument("--theta")
    m.add_argument("--m", type=int)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--reps", type=int, default=100)
    m.add_argument("--seed", type=int)
    m.add_argument("--stat", choices=["kn", "kn_over_logn", "kn_over_npow"], default="kn")
    m.add_argument("--threads", type=int)
    m.set_defaults(func=cmd_sample)

    d = sub.add_parser("decompose", help="mixture recovery from a first column")
    d.add_argument("--alpha", required=True)
    d.add_argument("--u", required=True, help="CSV with rows n,value")
    d.add_argument("--support", required=True, help="e.g. 1,2,3,inf or a theta/s grid")
    d.add_argument("--mode", choices=["auto", "exact", "float"], default="auto")
    d.add_argument("--tol", type=float, default=1e-10)
    d.set_defaults(func=cmd_decompose)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except NumericalFailure as exc:
        diag = {"error": "numerical_failure", "message": str(exc)}
        if isinstance(exc, QuadratureError):
            r = exc.result
            diag["quadrature"] = {"value": r.value, "error": r.error, "subdivisions": r.subdivisions}
        buf = io.StringIO(_dump({"version": __version__, "command": args.command,
                                 "result": jsonable(diag)}))
        code = 2
    except (ValueError, IndexError, KeyError, OSError, ZeroDivisionError) as exc:
        sys.stderr.write(_dump({"error": "invalid_input", "message": str(exc)}))
        return 1
    text = buf.getvalue()
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
