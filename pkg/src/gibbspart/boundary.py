"""Graded graphs, conditional laws of the block-count chain and path limits.

For a target node ``x`` at level ``nu`` the conditional law of the chain at
level ``n`` is ``P(K_n = y | K_nu = x) = d(y) d_y^x / d(x)``, where ``d`` is
the dimension (total root-to-node path weight) and ``d_y^x`` the extended
dimension (total path weight from ``y`` to ``x``). ``V_y^x = d_y^x / d(x)``
is the harmonic profile of ``x``; its limits along regular paths make up
the boundary.

Scalar modes: ``"exact"`` (ints/Fractions), ``"log"`` (float64 natural logs)
and ``"auto"`` (exact when the level is at most ``EXACT_MAX_LEVEL`` and the
graph has rational weights).
"""

from __future__ import annotations

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Optional, Sequence

import numpy as np

from .numerics import NEG_INF, LogScalar, format_exact, is_exact, to_exact
from .stirling import (TriangleSpec, build_triangle, dimension_column, extended_dimensions_exact,
                       log_dimension_row, log_extended_dimensions, normalize_alpha,
                       pascal_spec, qpascal_spec, stirling_spec, w_weight)

EXACT_MAX_LEVEL = 200
DEFAULT_PROBES = (100, 1000, 2000, 4000, 8000, 16000)
DEFAULT_TOL = 1e-3


def _resolve_mode(mode: str, level: int, exact_capable: bool) -> str:
    if mode == "auto":
        return "exact" if level <= EXACT_MAX_LEVEL and exact_capable else "log"
    if mode not in ("exact", "log"):
        raise ValueError(f"mode must be 'exact', 'log' or 'auto', got {mode!r}")
    if mode == "exact" and not exact_capable:
        raise ValueError("exact mode needs rational edge weights")
    return mode


def _log(x) -> float:
    return math.log(x) if x > 0 else NEG_INF


# ---------------------------------------------------------------------------
# graphs


class PascalGraph:
    """Pascal-type graph over a :class:`TriangleSpec`; nodes are ``(n, k)``."""

    def __init__(self, spec: TriangleSpec, name: Optional[str] = None):
        self.spec = spec
        self.name = name or spec.kind
        self.k_min = spec.k_min
        self.root = spec.root

    @property
    def exact_capable(self) -> bool:
        return self.spec.exact_capable

    def level(self, node) -> int:
        return node[0]

    def contains(self, node) -> bool:
        n, k = node
        return n >= self.k_min and self.k_min <= k <= n

    def nodes(self, n: int) -> list:
        return [(n, k) for k in range(self.k_min, n + 1)]

    def predecessors(self, node) -> list:
        n, k = node
        out = []
        if n - 1 >= self.k_min:
            if k <= n - 1:
                out.append(((n - 1, k), self.spec.gamma(n - 1, k)))
            if k - 1 >= self.k_min:
                out.append(((n - 1, k - 1), self.spec.delta(n - 1, k - 1)))
        return out

    def edge_weight(self, u, v):
        (n, k), (m, j) = u, v
        if m != n + 1:
            return 0
        if j == k:
            return self.spec.gamma(n, k)
        if j == k + 1:
            return self.spec.delta(n, k)
        return 0

    def dimension_level(self, n: int, mode: str, k_max: Optional[int] = None) -> dict:
        """``{node: d(node)}`` (exact) or ``{node: log d(node)}`` over level ``n``."""
        top = n if k_max is None else min(n, k_max)
        if mode == "exact":
            tri = build_triangle(self.spec, n, "exact", k_max=top)
            return {(n, k): tri.value(n, k) for k in range(self.k_min, top + 1)}
        row = log_dimension_row(self.spec, n, k_max=top)
        return {(n, k): float(row[k - self.k_min]) for k in range(self.k_min, top + 1)}

    def dimension(self, node, mode: str):
        n, k = node
        return self.dimension_level(n, mode, k_max=k)[node]

    def extended_level(self, target, n: int, mode: str) -> dict:
        """``{node: d_node^target}`` over level ``n`` (logs in log mode)."""
        nu, kappa = target
        if mode == "exact":
            row = extended_dimensions_exact(self.spec, nu, kappa, n)[n]
        else:
            row = [float(x) for x in log_extended_dimensions(self.spec, nu, kappa, n)[n]]
        return {(n, k): row[k - self.k_min] for k in range(self.k_min, min(n, kappa) + 1)}

    def profile_rows(self, target, n_max: int, mode: str) -> list:
        """``V^target`` on levels ``k_min..n_max`` as lists indexed from ``k_min``."""
        nu, kappa = target
        if mode == "exact":
            ext = extended_dimensions_exact(self.spec, nu, kappa, n_max)
            D = self.dimension(target, "exact")
            return [[Fraction(ext[n][k - self.k_min]) / D if k <= kappa else Fraction(0)
                     for k in range(self.k_min, n + 1)] for n in range(self.k_min, n_max + 1)]
        ext = log_extended_dimensions(self.spec, nu, kappa, n_max)
        lD = self.dimension(target, "log")
        return [[math.exp(float(ext[n][k - self.k_min]) - lD) if k <= kappa else 0.0
                 for k in range(self.k_min, n + 1)] for n in range(self.k_min, n_max + 1)]


class GradedGraph:
    """Explicit finite graded graph with weighted edges between consecutive levels.

    ``levels[i]`` lists the nodes of level ``level_offset + i``; ``edges``
    maps a node to ``[(child, weight), ...]``.
    """

    def __init__(self, levels: Sequence[Sequence[Hashable]], edges: dict, root: Hashable,
                 level_offset: int = 0, name: str = "graph"):
        self.levels = [list(lv) for lv in levels]
        self.edges = {u: list(vs) for u, vs in edges.items()}
        self.root = root
        self.level_offset = level_offset
        self.name = name
        self._level = {}
        for i, lv in enumerate(self.levels):
            for v in lv:
                self._level[v] = i + level_offset
        if self._level.get(root) != level_offset:
            raise ValueError("root must be the only node of the first level")
        self._pred: dict = {v: [] for v in self._level}
        for u, vs in self.edges.items():
            for v, w in vs:
                if w < 0:
                    raise ValueError(f"negative edge weight on {u}->{v}")
                if self._level[v] != self._level[u] + 1:
                    raise ValueError(f"edge {u}->{v} does not go up one level")
                self._pred[v].append((u, w))
        self._dims = {root: 1}
        for lv in self.levels[1:]:
            for v in lv:
                self._dims[v] = sum((self._dims[u] * w for u, w in self._pred[v]), 0)
                if not self._pred[v]:
                    raise ValueError(f"node {v} is unreachable from the root")

    exact_capable = True

    @property
    def top_level(self) -> int:
        return self.level_offset + len(self.levels) - 1

    def level(self, node) -> int:
        return self._level[node]

    def contains(self, node) -> bool:
        return node in self._level

    def nodes(self, n: int) -> list:
        return list(self.levels[n - self.level_offset])

    def predecessors(self, node) -> list:
        return list(self._pred[node])

    def edge_weight(self, u, v):
        return sum((w for x, w in self.edges.get(u, []) if x == v), 0)

    def dimension_level(self, n: int, mode: str) -> dict:
        d = {v: self._dims[v] for v in self.nodes(n)}
        return d if mode == "exact" else {v: _log(x) for v, x in d.items()}

    def dimension(self, node, mode: str):
        d = self._dims[node]
        return d if mode == "exact" else _log(d)

    def extended_level(self, target, n: int, mode: str) -> dict:
        nu = self.level(target)
        h = {target: 1}
        for m in range(nu - 1, n - 1, -1):
            h = {u: sum((w * h.get(v, 0) for v, w in self.edges.get(u, [])), 0)
                 for u in self.nodes(m)}
        out = {v: h.get(v, 0) for v in self.nodes(n)}
        return out if mode == "exact" else {v: _log(x) for v, x in out.items()}


def stirling_graph(alpha) -> PascalGraph:
    return PascalGraph(stirling_spec(alpha), name=f"stirling:{alpha}")


def pascal_graph() -> PascalGraph:
    return PascalGraph(pascal_spec(), name="pascal")


def qpascal_graph(q) -> PascalGraph:
    return PascalGraph(qpascal_spec(q), name=f"qpascal:{q}")


def pathology_graph(N: int) -> GradedGraph:
    """Root ``("root", 0)``; level 1 holds ``a1, c1``; each later level
    ``a_n, b_n, c_n``. Edges ``a -> a, b``, ``b -> b``, ``c -> b, c``, all of
    weight 1. Nodes are ``(letter, level)``."""
    if N < 3:
        raise ValueError("pathology graph needs N >= 3")
    root = ("root", 0)
    levels = [[root], [("a", 1), ("c", 1)]]
    edges = {root: [(("a", 1), 1), (("c", 1), 1)]}
    for n in range(2, N + 1):
        levels.append([("a", n), ("b", n), ("c", n)])
        edges[("a", n - 1)] = [(("a", n), 1), (("b", n), 1)]
        edges[("c", n - 1)] = [(("b", n), 1), (("c", n), 1)]
        if n > 2:
            edges[("b", n - 1)] = [(("b", n), 1)]
    return GradedGraph(levels, edges, root, level_offset=0, name="pathology")


def parse_graph(text: str, n_hint: int = 0):
    """``stirling:ALPHA``, ``pascal``, ``qpascal:Q`` or ``pathology``."""
    name, _, arg = text.partition(":")
    if name == "stirling":
        return stirling_graph(normalize_alpha(arg))
    if name == "pascal":
        return pascal_graph()
    if name == "qpascal":
        return qpascal_graph(to_exact(arg))
    if name == "pathology":
        return pathology_graph(max(n_hint, 3))
    raise ValueError(f"unknown graph {text!r}")


# ---------------------------------------------------------------------------
# dimensions and conditional laws


def dimension(graph, node, mode: str = "exact"):
    """Root-to-node path weight; ``0`` for nodes outside the graph."""
    if not graph.contains(node):
        return 0 if mode == "exact" else LogScalar.zero()
    m = _resolve_mode(mode, graph.level(node), graph.exact_capable)
    d = graph.dimension(node, m)
    return d if m == "exact" else LogScalar.from_log(d) if d > NEG_INF else LogScalar.zero()


def conditional_law(graph, target, n: int, mode: str = "auto") -> dict:
    """``{node: P(K_n = node | K_nu = target)}`` over level ``n``.

    Exact mode returns Fractions summing to exactly 1; log mode floats.
    """
    nu = graph.level(target)
    if not graph.level(graph.root) <= n <= nu:
        raise ValueError(f"level {n} outside root..{nu}")
    m = _resolve_mode(mode, nu, graph.exact_capable)
    ext = graph.extended_level(target, n, m)
    dn = graph.dimension_level(n, m)
    D = graph.dimension(target, m)
    if m == "exact":
        if D == 0:
            raise ValueError(f"target {target} has dimension 0")
        return {v: Fraction(dn[v] * ext.get(v, 0)) / D for v in dn}
    if D == NEG_INF:
        raise ValueError(f"target {target} has dimension 0")
    return {v: math.exp(dn[v] + ext[v] - D) if v in ext and ext[v] > NEG_INF and dn[v] > NEG_INF
            else 0.0 for v in dn}


def level_profile(graph, target, n: int, mode: str = "auto") -> dict:
    """Extended dimensions ``d_y^target`` over level ``n``, normalized to sum 1.

    This is the shape of the harmonic profile ``V^target`` on one level (as
    opposed to :func:`conditional_law`, which weights it by ``d(y)``).
    """
    nu = graph.level(target)
    m = _resolve_mode(mode, nu, graph.exact_capable)
    ext = graph.extended_level(target, n, m)
    if m == "exact":
        tot = sum(ext.values())
        return {v: Fraction(x) / tot for v, x in ext.items()}
    top = max(ext.values())
    tot = sum(math.exp(x - top) for x in ext.values())
    return {v: math.exp(x - top) / tot for v, x in ext.items()}


def cotransition(graph, u, v, mode: str = "exact"):
    """``P(K_{n-1} = u | K_n = v) = d(u) w(u, v) / d(v)``."""
    m = _resolve_mode(mode, graph.level(v), graph.exact_capable)
    w = graph.edge_weight(u, v)
    if m == "exact":
        dv = graph.dimension(v, "exact")
        if dv == 0:
            raise ValueError(f"node {v} has dimension 0")
        return Fraction(graph.dimension(u, "exact") * w) / dv if w else Fraction(0)
    dv = graph.dimension(v, "log")
    if dv == NEG_INF:
        raise ValueError(f"node {v} has dimension 0")
    return math.exp(graph.dimension(u, "log") + math.log(w) - dv) if w > 0 else 0.0


def sample_backward(graph, start, rng: np.random.Generator) -> list:
    """Draw the chain from ``start`` down to the root with exact
    co-transition probabilities; returns the path root first."""
    path = [start]
    v = start
    while v != graph.root:
        preds = graph.predecessors(v)
        if len(preds) == 1:
            v = preds[0][0]
        else:
            logs = [graph.dimension(u, "log") + _log(w) for u, w in preds]
            top = max(logs)
            p = [math.exp(x - top) for x in logs]
            r = rng.random() * sum(p)
            i = 0
            while i < len(p) - 1 and r >= p[i]:
                r -= p[i]
                i += 1
            v = preds[i][0]
        path.append(v)
    return path[::-1]


class BackwardSampler:
    """Repeated backward sampling from one start node of a Pascal-type graph,
    with the co-transition tables precomputed once."""

    def __init__(self, graph: PascalGraph, start):
        self.graph, self.start = graph, start
        nu, kappa = start
        k0 = graph.k_min
        spec = graph.spec
        ks = np.arange(k0, kappa + 1)
        # log dimensions of every level up to nu, columns k0..kappa
        tri = build_triangle(spec, nu, "log", k_max=kappa)
        self.logd = np.asarray(tri.table)
        # probability of stepping back along the gamma edge from (n, k)
        self.p_stay = {}
        for n in range(k0 + 1, nu + 1):
            i = n - k0
            prev = self.logd[i - 1]
            lg = np.array([math.log(spec.gamma(n - 1, int(k))) if k <= n - 1 and spec.gamma(n - 1, int(k)) > 0
                           else NEG_INF for k in ks])
            with np.errstate(invalid="ignore"):
                stay = np.where(np.isfinite(prev), prev + lg, NEG_INF)
            cur = self.logd[i]
            with np.errstate(invalid="ignore"):
                self.p_stay[n] = np.where(np.isfinite(cur), np.exp(stay - cur), 0.0)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """``size`` paths as an array ``[replicate, level - k_min]`` of ``k``."""
        nu, kappa = self.start
        k0 = self.graph.k_min
        out = np.empty((size, nu - k0 + 1), dtype=np.int64)
        k = np.full(size, kappa, dtype=np.int64)
        out[:, -1] = k
        for n in range(nu, k0, -1):
            u = rng.random(size)
            stay = u < self.p_stay[n][k - k0]
            k = np.where(stay, k, k - 1)
            out[:, n - 1 - k0] = k
        return out


# ---------------------------------------------------------------------------
# closed form for V[n,1] and monotonicity


def vn1_closed(alpha, n: int, nu: int, kappa: int, mode: str = "exact"):
    """``P(K_n = 1 | K_nu = kappa)`` for the type-``alpha`` Stirling graph:
    ``sum_j C(nu-n, j-n) [nu-j, kappa-1] W_j / [nu, kappa]`` over the size
    ``j`` of the block of element 1. ``alpha = -inf`` uses ``W_j = 1``."""
    a = normalize_alpha(alpha)
    if not (1 <= n <= nu and 1 <= kappa <= nu):
        raise IndexError("need 1 <= n <= nu and 1 <= kappa <= nu")
    spec = stirling_spec(a)
    m = _resolve_mode(mode, nu, spec.exact_capable)
    top = nu - kappa + 1
    if top < n:
        return Fraction(0) if m == "exact" else 0.0
    if m == "exact":
        col = [1] + [0] * (nu - n) if kappa == 1 else dimension_column(spec, kappa - 1, nu - n, "exact")
        D = build_triangle(spec, nu, "exact", k_max=kappa).value(nu, kappa)
        tot = 0
        for j in range(n, top + 1):
            tot += math.comb(nu - n, j - n) * col[nu - j] * w_weight(a, j)
        return Fraction(tot) / D
    col = [0.0] + [NEG_INF] * (nu - n) if kappa == 1 else dimension_column(spec, kappa - 1, nu - n, "log")
    lD = float(log_dimension_row(spec, nu, k_max=kappa)[kappa - 1])
    fa = None if a == NEG_INF else float(a)
    terms = []
    for j in range(n, top + 1):
        lw = 0.0 if fa is None else math.lgamma(j - fa) - math.lgamma(1 - fa)
        lc = math.lgamma(nu - n + 1) - math.lgamma(j - n + 1) - math.lgamma(nu - j + 1)
        terms.append(lc + col[nu - j] + lw)
    t = np.array(terms)
    return float(math.exp(np.logaddexp.reduce(t) - lD))


@dataclass
class MonotonicityReport:
    n: int
    nu: int
    values: list
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def monotonicity_check(graph, n: int, nu: int) -> MonotonicityReport:
    """Exact check that ``V^{nu,kappa}`` on the first column at level ``n``
    is nonincreasing in ``kappa``."""
    if not isinstance(graph, PascalGraph):
        graph = stirling_graph(graph)
    k0 = graph.k_min
    node = (n, k0)
    d_node = graph.dimension(node, "exact")
    vals = []
    for kappa in range(k0, nu + 1):
        D = graph.dimension((nu, kappa), "exact")
        if D == 0:
            vals.append(None)
            continue
        ext = graph.extended_level((nu, kappa), n, "exact").get(node, 0)
        vals.append(Fraction(ext) / D)
    rep = MonotonicityReport(n, nu, vals)
    for i in range(len(vals) - 1):
        if vals[i] is not None and vals[i + 1] is not None and vals[i + 1] > vals[i]:
            rep.violations.append((k0 + i, vals[i], vals[i + 1]))
    return rep


# ---------------------------------------------------------------------------
# paths and limits


@dataclass(frozen=True)
class PathSpec:
    """Map ``nu -> kappa_nu`` along with a label for reports."""

    fn: Callable[[int], int] = field(compare=False)
    label: str = "path"

    def __call__(self, nu: int) -> int:
        return int(self.fn(nu))


def power_path(c: float, e: float) -> PathSpec:
    return PathSpec(lambda nu: max(1, round(c * nu ** e)), f"{c}*nu^{e}")


def log_path(c: float) -> PathSpec:
    return PathSpec(lambda nu: max(1, round(c * math.log(nu))), f"{c}*log(nu)")


def const_path(m: int) -> PathSpec:
    return PathSpec(lambda nu: m, f"const:{m}")


def table_path(table: dict, label: str = "table") -> PathSpec:
    tab = {int(k): int(v) for k, v in table.items()}
    return PathSpec(lambda nu: tab[nu], label)


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


def parse_path(text: str) -> PathSpec:
    """``c*nu^e``, ``c*log(nu)``, ``const:m`` or a file of ``nu,kappa`` lines."""
    t = text.replace(" ", "")
    m = re.fullmatch(rf"({_NUM})\*nu\^({_NUM})", t)
    if m:
        return power_path(float(m.group(1)), float(m.group(2)))
    m = re.fullmatch(rf"({_NUM})\*log\(nu\)", t)
    if m:
        return log_path(float(m.group(1)))
    m = re.fullmatch(r"const:(\d+)", t)
    if m:
        return const_path(int(m.group(1)))
    if os.path.exists(text):
        tab = {}
        with open(text) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("nu"):
                    continue
                a, b = line.split(",")[:2]
                tab[int(a)] = int(b)
        return table_path(tab, label=text)
    raise ValueError(f"cannot parse path {text!r}")


def reconstruct_rows(graph: PascalGraph, first_column: Sequence, n_max: int) -> list:
    """Fill ``V`` on levels ``k_min..n_max`` from ``V[n, k_min]`` via
    ``V[n+1,k+1] = (V[n,k] - gamma V[n+1,k]) / delta``.

    ``first_column[i]`` is ``V[k_min + i, k_min]``; the root entry must be 1.
    """
    k0, spec = graph.k_min, graph.spec
    rows = [[first_column[0]]]
    for n in range(k0, n_max):
        prev = rows[-1]
        row = [first_column[n + 1 - k0]]
        for k in range(k0, n + 1):
            row.append((prev[k - k0] - spec.gamma(n, k) * row[k - k0]) / spec.delta(n, k))
        rows.append(row)
    return rows


def recursion_residual(graph: PascalGraph, rows: Sequence) -> float:
    k0, spec = graph.k_min, graph.spec
    worst = 0.0
    for i in range(len(rows) - 1):
        n = k0 + i
        for k in range(k0, n + 1):
            r = rows[i][k - k0] - spec.gamma(n, k) * rows[i + 1][k - k0] \
                - spec.delta(n, k) * rows[i + 1][k + 1 - k0]
            worst = max(worst, abs(float(r)))
    return worst


@dataclass
class BoundaryEstimate:
    """Limit estimate of ``V^{nu,kappa_nu}`` along a path.

    ``verdict`` comes from a finite Cauchy-type heuristic on the probe
    schedule: ``converged`` when the last relative gap of the first column
    is below ``tol``; ``diverged`` when some entry moves by more than
    ``10*tol`` in opposite directions across two gaps; else ``undecided``.
    """

    path: str
    probes: list
    kappas: list
    first_columns: list
    gaps: list
    verdict: str
    estimates: list
    direct: list
    reconstruction_gap: float
    recursion_residual: float
    tol: float
    mode: str

    def to_json(self) -> dict:
        def enc(x):
            return format_exact(x) if is_exact(x) and not isinstance(x, int) else float(x)
        return {
            "path": self.path, "probes": self.probes, "kappas": self.kappas,
            "first_columns": [[enc(x) for x in col] for col in self.first_columns],
            "gaps": self.gaps, "verdict": self.verdict, "verdict_rule": "heuristic",
            "estimates": [[enc(x) for x in row] for row in self.estimates],
            "residuals": {"reconstruction_vs_direct": self.reconstruction_gap,
                          "recursion": self.recursion_residual},
            "tol": self.tol, "mode": self.mode,
        }


def _verdict(cols: list, tol: float) -> tuple:
    gaps, signed = [], []
    for a, b in zip(cols, cols[1:]):
        d = [float(y) - float(x) for x, y in zip(a, b)]
        rel = [abs(di) / max(abs(float(y)), abs(float(x)), 1e-12) for di, x, y in zip(d, a, b)]
        gaps.append(max(rel) if rel else 0.0)
        signed.append([di if r > 10 * tol else 0.0 for di, r in zip(d, rel)])
    if gaps and gaps[-1] < tol:
        return gaps, "converged"
    for i in range(len(signed)):
        for j in range(i + 1, len(signed)):
            if any(x * y < 0 for x, y in zip(signed[i], signed[j])):
                return gaps, "diverged"
    return gaps, "undecided"


def path_limit(graph: PascalGraph, path: PathSpec, probes: Sequence[int] = DEFAULT_PROBES,
               n_max: int = 5, tol: float = DEFAULT_TOL, mode: str = "auto",
               workers: Optional[int] = None) -> BoundaryEstimate:
    """Track ``V^{nu,kappa_nu}`` over ``probes`` and estimate its limit.

    Only the first column is monitored for convergence; the full table at
    the last probe is rebuilt from it by the backward recursion and compared
    with the directly computed one.
    """
    probes = sorted(int(p) for p in probes)
    if not probes:
        raise ValueError("need at least one probe level")
    k0 = graph.k_min

    def one(nu):
        kappa = path(nu)
        if not graph.contains((nu, kappa)):
            raise ValueError(f"path gives invalid node ({nu}, {kappa})")
        m = _resolve_mode(mode, nu, graph.exact_capable)
        return kappa, m, graph.profile_rows((nu, kappa), n_max, m)

    if workers is None:
        workers = int(os.environ.get("GIBBSPART_THREADS", "1"))
    if workers > 1 and len(probes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, probes))
    else:
        results = [one(nu) for nu in probes]
    kappas = [r[0] for r in results]
    cols = [[row[0] for row in r[2][1:]] for r in results]
    gaps, verdict = _verdict(cols, tol)
    direct = results[-1][2]
    first = [row[0] for row in direct]
    est = reconstruct_rows(graph, first, n_max)
    rgap = max(abs(float(x) - float(y)) for ra, rb in zip(est, direct) for x, y in zip(ra, rb))
    return BoundaryEstimate(path.label, probes, kappas, cols, gaps, verdict, est, direct,
                            rgap, recursion_residual(graph, est), tol,
                            "/".join(sorted({r[1] for r in results})))


# ---------------------------------------------------------------------------
# pathology example


def pathology_masses(nu: int, n: int) -> dict:
    """Closed forms at level ``n >= 2`` for the target ``b_nu``:
    ``profile`` is ``(nu-n, 1, nu-n) / (2(nu-n)+1)`` on ``(a_n, b_n, c_n)``
    and ``law`` is ``(nu-n, 2(n-1), nu-n) / (2(nu-1))``."""
    if not 2 <= n <= nu:
        raise ValueError("need 2 <= n <= nu")
    t = nu - n
    prof = {("a", n): Fraction(t, 2 * t + 1), ("b", n): Fraction(1, 2 * t + 1),
            ("c", n): Fraction(t, 2 * t + 1)}
    law = {("a", n): Fraction(t, 2 * (nu - 1)), ("b", n): Fraction(2 * (n - 1), 2 * (nu - 1)),
           ("c", n): Fraction(t, 2 * (nu - 1))}
    return {"profile": prof, "law": law}


def pathology_diagnostic(nu: int, n_probe: int, reps: int, seed: int) -> dict:
    """Backward chains from ``b_nu``: fraction still in a ``b`` node at level
    ``n_probe``. The exact value ``(n_probe-1)/(nu-1)`` vanishes as ``nu``
    grows, so the chain almost surely sits in the ``a`` or ``c`` line."""
    g = pathology_graph(nu)
    rng = np.random.default_rng(seed)
    hits = 0
    through_a1 = 0
    for _ in range(reps):
        path = sample_backward(g, ("b", nu), rng)
        hits += path[n_probe][0] == "b"
        through_a1 += path[1] == ("a", 1)
    p = hits / reps
    return {"nu": nu, "n_probe": n_probe, "reps": reps, "seed": seed,
            "fraction_b": p, "exact_fraction_b": (n_probe - 1) / (nu - 1),
            "fraction_through_a1": through_a1 / reps, "exact_through_a1": 0.5,
            "stderr_b": math.sqrt(max(p * (1 - p), 1e-300) / reps)}
