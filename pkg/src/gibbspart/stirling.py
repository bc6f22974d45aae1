"""Generalized Stirling triangles and other Pascal-type weighted triangles.

A Pascal-type triangle has nodes ``(n, k)`` with ``k_min <= k <= n`` and two
outgoing edges per node: ``(n, k) -> (n+1, k)`` with weight ``gamma(n, k)``
and ``(n, k) -> (n+1, k+1)`` with weight ``delta(n, k)``. The dimension
``d(n, k)`` is the total weight of root-to-node paths. For the generalized
Stirling triangle of type ``alpha`` (``gamma = n - alpha*k``, or ``k`` when
``alpha = -inf``; ``delta = 1``) the dimensions are the generalized Stirling
numbers ``[n, k]_alpha``.

Two scalar modes are supported everywhere: ``"exact"`` (ints/Fractions,
needs rational parameters) and ``"log"`` (natural logs in float64).
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .numerics import (NEG_INF, LogScalar, falling_factorial, format_exact,
                       log_rising_factorial, mittag_leffler_density,
                       rising_factorial, to_exact)

DEFAULT_K_MAX = 512
SUM_FORMULA_MAX_N = 25


def normalize_alpha(alpha):
    """Return ``-inf`` for the coupon-collector type, a Fraction when
    ``alpha`` has an exact representation, else a float."""
    if isinstance(alpha, str):
        s = alpha.strip().lower()
        if s in ("-inf", "-infinity", "neg_inf"):
            return NEG_INF
        return to_exact(s)
    if isinstance(alpha, float):
        if alpha == NEG_INF:
            return NEG_INF
        if math.isnan(alpha) or alpha == math.inf:
            raise ValueError(f"invalid alpha {alpha}")
        return to_exact(alpha)
    return to_exact(alpha)


def _check_mode(mode: str) -> None:
    if mode not in ("exact", "log"):
        raise ValueError(f"mode must be 'exact' or 'log', got {mode!r}")


@dataclass(frozen=True)
class TriangleSpec:
    """Edge multiplicities of a Pascal-type triangle.

    ``kind`` is one of ``"stirling"``, ``"pascal"``, ``"qpascal"`` or
    ``"custom"``. Custom triangles take ``gamma_fn(n, k)`` and
    ``delta_fn(n, k)`` (``delta_fn`` defaults to 1) and are rooted at
    ``(k_min, k_min)``.
    """

    kind: str
    alpha: object = None
    q: object = None
    gamma_fn: Optional[Callable] = field(default=None, compare=False)
    delta_fn: Optional[Callable] = field(default=None, compare=False)
    custom_k_min: int = 1

    def __post_init__(self):
        if self.kind == "stirling":
            a = normalize_alpha(self.alpha)
            if a != NEG_INF and a >= 1:
                raise ValueError(f"Stirling triangle needs alpha < 1, got {a}")
            object.__setattr__(self, "alpha", a)
        elif self.kind == "qpascal":
            q = to_exact(self.q) if not isinstance(self.q, float) else self.q
            if q <= 0:
                raise ValueError("q must be positive")
            object.__setattr__(self, "q", q)
        elif self.kind == "custom":
            if self.gamma_fn is None:
                raise ValueError("custom triangle needs gamma_fn")
        elif self.kind != "pascal":
            raise ValueError(f"unknown triangle kind {self.kind!r}")

    @property
    def k_min(self) -> int:
        if self.kind in ("pascal", "qpascal"):
            return 0
        if self.kind == "custom":
            return self.custom_k_min
        return 1

    @property
    def root(self) -> tuple:
        return (self.k_min, self.k_min)

    @property
    def exact_capable(self) -> bool:
        if self.kind == "stirling":
            return self.alpha == NEG_INF or isinstance(self.alpha, Fraction)
        if self.kind == "qpascal":
            return isinstance(self.q, Fraction)
        return True

    def gamma(self, n: int, k: int):
        if self.kind == "stirling":
            return k if self.alpha == NEG_INF else n - self.alpha * k
        if self.kind == "pascal":
            return 1
        if self.kind == "qpascal":
            return self.q ** (k - 1)
        return self.gamma_fn(n, k)

    def delta(self, n: int, k: int):
        if self.kind == "custom" and self.delta_fn is not None:
            return self.delta_fn(n, k)
        return 1

    def gamma_row(self, n: int, ks: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        if self.kind == "stirling":
            if self.alpha == NEG_INF:
                return ks.copy()
            return n - float(self.alpha) * ks
        if self.kind == "pascal":
            return np.ones_like(ks)
        if self.kind == "qpascal":
            return float(self.q) ** (ks - 1)
        return np.array([float(self.gamma_fn(n, int(k))) for k in ks])

    def delta_row(self, n: int, ks: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        if self.kind == "custom" and self.delta_fn is not None:
            return np.array([float(self.delta_fn(n, int(k))) for k in ks])
        return np.ones_like(ks)


def stirling_spec(alpha) -> TriangleSpec:
    return TriangleSpec("stirling", alpha=alpha)


def pascal_spec() -> TriangleSpec:
    return TriangleSpec("pascal")


def qpascal_spec(q) -> TriangleSpec:
    return TriangleSpec("qpascal", q=q)


def offset_stirling_spec(alpha, offset) -> TriangleSpec:
    """Stirling-type triangle with ``gamma(m, j) = m - offset - alpha*(j-1)``.

    ``offset == alpha`` recovers the ordinary type-``alpha`` triangle.
    """
    a, x = normalize_alpha(alpha), normalize_alpha(offset)
    if a == NEG_INF:
        raise ValueError("offset triangles are defined for finite alpha only")
    return TriangleSpec("custom", gamma_fn=lambda m, j: m - x - a * (j - 1))


def _log_weight(w: np.ndarray, valid: np.ndarray) -> np.ndarray:
    # weights on nonexistent nodes (k > n) are ignored
    w = np.where(valid, w, 0.0)
    if np.any(w < 0):
        raise ValueError("log mode needs nonnegative edge weights")
    with np.errstate(divide="ignore"):
        return np.log(w)


# ---------------------------------------------------------------------------
# triangle tables


@dataclass(frozen=True)
class StirlingTriangle:
    """Dimension table ``d(n, k)`` for ``k_min <= k <= min(n, k_max)``.

    In exact mode ``table[i][j]`` holds ``d(k_min + i, k_min + j)``; in log
    mode ``table`` is a 2-D float array of natural logs (``-inf`` for zero).
    """

    spec: TriangleSpec
    mode: str
    N: int
    k_max: int
    table: object

    def value(self, n: int, k: int):
        k0 = self.spec.k_min
        if not (k0 <= n <= self.N):
            raise IndexError(f"level {n} outside table")
        if k > self.k_max:
            raise IndexError(f"k={k} outside band k <= {self.k_max}")
        if self.mode == "exact":
            if k < k0 or k > n:
                return 0
            return self.table[n - k0][k - k0]
        if k < k0 or k > n:
            return LogScalar.zero()
        return LogScalar.from_log(float(self.table[n - k0, k - k0]))

    __getitem__ = lambda self, nk: self.value(*nk)  # noqa: E731

    def entries(self):
        k0 = self.spec.k_min
        for n in range(k0, self.N + 1):
            for k in range(k0, min(n, self.k_max) + 1):
                yield n, k, self.value(n, k)

    def to_csv(self, stream=None) -> str:
        """CSV rows ``n,k,value``; exact values as ``p/q``, log values as
        ``sign,log10_magnitude``."""
        buf = stream if stream is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.mode == "exact":
            w.writerow(["n", "k", "value"])
            for n, k, v in self.entries():
                w.writerow([n, k, format_exact(v)])
        else:
            w.writerow(["n", "k", "sign", "log10_magnitude"])
            for n, k, v in self.entries():
                w.writerow([n, k, v.sign, "" if v.sign == 0 else repr(v.log10)])
        return buf.getvalue() if stream is None else ""


def build_triangle(spec: TriangleSpec, N: int, mode: str = "exact",
                   k_max: Optional[int] = None) -> StirlingTriangle:
    """Solve the forward recursion ``d(n+1,k) = delta(n,k-1) d(n,k-1) +
    gamma(n,k) d(n,k)`` from ``d(root) = 1`` up to level ``N``."""
    _check_mode(mode)
    k0 = spec.k_min
    if N < k0:
        raise ValueError(f"N must be >= {k0}")
    k_max = N if k_max is None else min(k_max, N)
    if k_max < k0:
        raise ValueError("k_max below the root column")
    if mode == "exact":
        if not spec.exact_capable:
            raise ValueError("exact mode needs rational parameters")
        rows = [[1]]
        for n in range(k0, N):
            prev = rows[-1]
            top = min(n + 1, k_max)
            row = []
            for k in range(k0, top + 1):
                v = 0
                if k - 1 >= k0:
                    v += spec.delta(n, k - 1) * prev[k - 1 - k0]
                if k <= min(n, k_max):
                    g = spec.gamma(n, k)
                    if g < 0:
                        raise ValueError(f"negative multiplicity at {(n, k)}")
                    v += g * prev[k - k0]
                row.append(v)
            rows.append(row)
        return StirlingTriangle(spec, mode, N, k_max, rows)
    width = k_max - k0 + 1
    table = np.full((N - k0 + 1, width), NEG_INF)
    table[0, 0] = 0.0
    ks = np.arange(k0, k_max + 1)
    for i, n in enumerate(range(k0, N)):
        table[i + 1] = _log_forward_step(spec, n, ks, table[i])
    return StirlingTriangle(spec, mode, N, k_max, table)


def _log_forward_step(spec: TriangleSpec, n: int, ks: np.ndarray, row: np.ndarray) -> np.ndarray:
    valid = ks <= n
    lg = _log_weight(spec.gamma_row(n, ks), valid)
    ld = _log_weight(spec.delta_row(n, ks), valid)
    out = np.empty_like(row)
    with np.errstate(invalid="ignore"):
        stay = lg + row
        up = ld[:-1] + row[:-1]
    stay[~np.isfinite(row)] = NEG_INF
    out[0] = stay[0]
    out[1:] = np.logaddexp(stay[1:], np.where(np.isfinite(row[:-1]), up, NEG_INF))
    out[ks > n + 1] = NEG_INF
    return out


def log_dimension_row(spec: TriangleSpec, N: int, k_max: int = DEFAULT_K_MAX,
                      start: Optional[tuple] = None) -> np.ndarray:
    """Rolling band-limited log DP; returns ``log d(N, k)`` for
    ``k = k_min .. k_max`` in O(k_max) memory.

    ``start=(n, k)`` computes extended dimensions from that node instead of
    the root.
    """
    k0 = spec.k_min
    n_start, k_start = start if start is not None else spec.root
    k_max = max(min(k_max, N), k_start)
    ks = np.arange(k0, k_max + 1)
    row = np.full(ks.size, NEG_INF)
    row[k_start - k0] = 0.0
    for n in range(n_start, N):
        row = _log_forward_step(spec, n, ks, row)
    return row


def dimension_column(spec: TriangleSpec, K: int, M: int, mode: str = "exact") -> list:
    """``[d(m, K) for m = 0..M]``, zero below the triangle.

    Log mode returns natural logs (``-inf`` for zero) from a rolling pass.
    """
    _check_mode(mode)
    k0 = spec.k_min
    if K < k0:
        raise IndexError(f"column {K} below k_min={k0}")
    zero = 0 if mode == "exact" else NEG_INF
    out = [zero] * (M + 1)
    if M < K:
        return out
    if mode == "exact":
        tri = build_triangle(spec, M, "exact", k_max=K)
        for m in range(K, M + 1):
            out[m] = tri.value(m, K)
        return out
    ks = np.arange(k0, K + 1)
    row = np.full(ks.size, NEG_INF)
    row[0] = 0.0
    if k0 == K:
        out[k0] = 0.0
    for n in range(k0, M):
        row = _log_forward_step(spec, n, ks, row)
        if n + 1 >= K:
            out[n + 1] = float(row[K - k0])
    return out


def log_extended_dimensions(spec: TriangleSpec, nu: int, kappa: int, n_keep: int) -> dict:
    """Backward log DP from the target ``(nu, kappa)``.

    Returns ``{n: array}`` for every level ``n <= n_keep`` (and the root
    level) where ``array[k - k_min] = log d_{n,k}^{nu,kappa}``. One pass of
    O(nu * kappa) work covers all source nodes at once.
    """
    k0 = spec.k_min
    ks = np.arange(k0, kappa + 1)
    h = np.full(ks.size, NEG_INF)
    h[kappa - k0] = 0.0
    keep = {nu: h.copy()} if nu <= n_keep else {}
    shifted = np.empty_like(h)
    for n in range(nu - 1, k0 - 1, -1):
        valid = ks <= n
        lg = _log_weight(spec.gamma_row(n, ks), valid)
        ld = _log_weight(spec.delta_row(n, ks), valid)
        shifted[:-1] = h[1:]
        shifted[-1] = NEG_INF
        with np.errstate(invalid="ignore"):
            a = np.where(np.isfinite(h), lg + h, NEG_INF)
            b = np.where(np.isfinite(shifted), ld + shifted, NEG_INF)
        h = np.logaddexp(a, b)
        h[ks > n] = NEG_INF
        if n <= n_keep:
            keep[n] = h.copy()
    return keep


def extended_dimensions_exact(spec: TriangleSpec, nu: int, kappa: int, n_keep: int) -> dict:
    """Exact counterpart of :func:`log_extended_dimensions`; ``{n: list}``."""
    k0 = spec.k_min
    h = [0] * (kappa - k0 + 1)
    h[kappa - k0] = 1
    keep = {nu: list(h)} if nu <= n_keep else {}
    for n in range(nu - 1, k0 - 1, -1):
        new = []
        for k in range(k0, kappa + 1):
            if k > n:
                new.append(0)
                continue
            v = spec.gamma(n, k) * h[k - k0]
            if k + 1 <= kappa:
                v += spec.delta(n, k) * h[k + 1 - k0]
            new.append(v)
        h = new
        if n <= n_keep:
            keep[n] = list(h)
    return keep


# ---------------------------------------------------------------------------
# Stirling numbers


def stirling_number(n: int, k: int, alpha, mode: str = "exact"):
    """Generalized Stirling number ``[n, k]_alpha`` (exact value or LogScalar)."""
    _check_mode(mode)
    if not (1 <= k <= n):
        raise IndexError(f"need 1 <= k <= n, got n={n}, k={k}")
    spec = stirling_spec(alpha)
    if mode == "exact":
        return build_triangle(spec, n, "exact", k_max=k).value(n, k)
    row = log_dimension_row(spec, n, k_max=k)
    return LogScalar.from_log(float(row[k - 1]))


def _stirling_or_zero(n: int, k: int, alpha):
    # extends [n, k] with [0, 0] = 1 and zero outside the triangle
    if n == 0 and k == 0:
        return 1
    if k < 1 or k > n:
        return 0
    return stirling_number(n, k, alpha)


def stirling_sum_formula(n: int, k: int, alpha):
    """Direct sum over the levels at which a path changes column.

    The chain ``0 = n_0 < n_1 < ... < n_k = n`` records the last level spent
    in each column; column ``j`` contributes ``prod(nu - alpha*j)`` over the
    levels strictly between ``n_{j-1}`` and ``n_j`` (``j**(...)`` for
    ``alpha = -inf``).
    """
    if not (1 <= k <= n):
        raise IndexError(f"need 1 <= k <= n, got n={n}, k={k}")
    if n > SUM_FORMULA_MAX_N:
        raise ValueError(f"direct summation limited to n <= {SUM_FORMULA_MAX_N}")
    a = normalize_alpha(alpha)
    total = 0
    for inner in itertools.combinations(range(1, n), k - 1):
        chain = (0,) + inner + (n,)
        term = 1
        for j in range(1, k + 1):
            lo, hi = chain[j - 1], chain[j]
            if a == NEG_INF:
                term *= j ** (hi - lo - 1)
            else:
                for v in range(lo + 1, hi):
                    term *= v - a * j
        total += term
    return total


def stirling_genfun_coefficient(n: int, k: int, alpha) -> Fraction:
    """Coefficient of ``x**n`` in ``n!/(alpha**k k!) (1 - (1-x)**alpha)**k``,
    by truncated power-series arithmetic in exact rationals."""
    a = normalize_alpha(alpha)
    if a == NEG_INF or a == 0:
        raise ValueError("generating function needs finite nonzero alpha")
    # coefficients of 1 - (1-x)^alpha
    c = [Fraction(1)]
    for i in range(1, n + 1):
        c.append(c[-1] * (i - 1 - a) / i)
    h = [Fraction(0)] + [-ci for ci in c[1:]]
    power = [Fraction(1)] + [Fraction(0)] * n
    for _ in range(k):
        nxt = [Fraction(0)] * (n + 1)
        for i, pi in enumerate(power):
            if pi:
                for j in range(1, n + 1 - i):
                    nxt[i + j] += pi * h[j]
        power = nxt
    return power[n] * math.factorial(n) / (a ** k * math.factorial(k))


def w_weight(alpha, j: int):
    """``W_j = (1-alpha)_{j-1}`` (1 for ``alpha = -inf``)."""
    a = normalize_alpha(alpha)
    if a == NEG_INF:
        return 1
    return rising_factorial(1 - a, j - 1)


def w_weights(alpha, N: int) -> list:
    """``[W_1, ..., W_N]`` for type ``alpha``."""
    return [w_weight(alpha, j) for j in range(1, N + 1)]


def bell_polynomial(n: int, k: int, W, zero=0):
    """Partial Bell polynomial ``B_{n,k}(W)``.

    ``W`` is a sequence with ``W[0] = W_1`` or a callable ``j -> W_j``. Uses
    ``B_{n,k} = sum_j C(n-1, j-1) W_j B_{n-j,k-1}`` (the block holding
    element 1 has size ``j``). Arithmetic follows the type of the weights;
    pass ``zero=LogScalar.zero()`` for log-domain weights.
    """
    if not (1 <= k <= n):
        raise IndexError(f"need 1 <= k <= n, got n={n}, k={k}")
    if callable(W):
        wf = W
    else:
        if len(W) < n - k + 1:
            raise ValueError(f"need W_1..W_{n - k + 1}, got {len(W)} weights")
        wf = lambda j: W[j - 1]  # noqa: E731
    # B[m][r] for m <= n, r <= k
    B = [[zero] * (k + 1) for _ in range(n + 1)]
    B[0][0] = zero + 1
    for r in range(1, k + 1):
        for m in range(r, n - (k - r) + 1):
            acc = zero
            for j in range(1, m - r + 2):
                acc = acc + math.comb(m - 1, j - 1) * wf(j) * B[m - j][r - 1]
            B[m][r] = acc
    return B[n][k]


def bell_polynomial_bruteforce(n: int, k: int, W):
    """Sum of ``prod W_{|A|}`` over set partitions of ``[n]`` into ``k`` blocks."""
    from .gibbs import set_partitions  # local import: gibbs imports this module
    total = 0
    for blocks in set_partitions(n):
        if len(blocks) == k:
            term = 1
            for b in blocks:
                term *= W[len(b) - 1]
            total += term
    return total


# ---------------------------------------------------------------------------
# extended dimensions


def extended_dimension(n: int, k: int, nu: int, kappa: int, spec: TriangleSpec,
                       mode: str = "exact"):
    """Total weight of paths from ``(n, k)`` to ``(nu, kappa)``."""
    _check_mode(mode)
    k0 = spec.k_min
    if not (k0 <= k <= n) or not (k0 <= kappa <= nu):
        raise IndexError("node outside the triangle")
    if nu < n:
        raise IndexError("target level below source level")
    if kappa < k or kappa - k > nu - n:
        return 0 if mode == "exact" else LogScalar.zero()
    if mode == "exact":
        row = {k: 1}
        for m in range(n, nu):
            new = {}
            for j, v in row.items():
                if j <= kappa:
                    new[j] = new.get(j, 0) + spec.gamma(m, j) * v
                if j + 1 <= kappa:
                    new[j + 1] = new.get(j + 1, 0) + spec.delta(m, j) * v
            row = new
        return row.get(kappa, 0)
    row = log_dimension_row(spec, nu, k_max=kappa, start=(n, k))
    return LogScalar.from_log(float(row[kappa - k0]))


def offset_stirling_number(N: int, K: int, alpha, offset, mode: str = "exact"):
    """``[N, K]`` of the triangle ``gamma(m, j) = m - offset - alpha*(j-1)``."""
    _check_mode(mode)
    if N == 0 and K == 0:
        return 1 if mode == "exact" else LogScalar.from_value(1)
    if not (1 <= K <= N):
        return 0 if mode == "exact" else LogScalar.zero()
    spec = offset_stirling_spec(alpha, offset)
    if mode == "exact":
        return build_triangle(spec, N, "exact", k_max=K).value(N, K)
    row = log_dimension_row(spec, N, k_max=K)
    return LogScalar.from_log(float(row[K - 1]))


def extended_dimension_closed(n: int, k: int, nu: int, kappa: int, alpha,
                              mode: str = "exact"):
    """Extended dimension of the type-``alpha`` Stirling triangle as a single
    Stirling-type number ``[nu-n+1, kappa-k+1]`` with offset ``k*alpha - n + 1``.

    The offset enters the first column's multiplicity
    (``gamma(m, j) = m - offset - alpha*(j-1)``), so the shifted triangle
    has the multiplicities of the original one re-rooted at ``(n, k)``.
    """
    a = normalize_alpha(alpha)
    if a == NEG_INF:
        raise ValueError("no closed form for alpha = -inf; use extended_dimension")
    if nu < n or kappa < k:
        return 0 if mode == "exact" else LogScalar.zero()
    return offset_stirling_number(nu - n + 1, kappa - k + 1, a, k * a - n + 1, mode)


# ---------------------------------------------------------------------------
# asymptotics


def asymptotic_alpha0(nu: int, kappa: int) -> LogScalar:
    """``Gamma(nu) / (Gamma(kappa) Gamma(1+s)) (log nu)**(kappa-1)`` with
    ``s = kappa / log nu``; estimates ``[nu, kappa]_0``."""
    if nu < 3 or not (1 <= kappa <= nu):
        raise ValueError("need nu >= 3 and 1 <= kappa <= nu")
    L = math.log(nu)
    s = kappa / L
    return LogScalar.from_log(
        math.lgamma(nu) - math.lgamma(kappa) - math.lgamma(1 + s) + (kappa - 1) * math.log(L))


def asymptotic_alpha_pos(n: int, k: int, alpha: float) -> LogScalar:
    """``Gamma(n)/Gamma(k) n**-alpha alpha**(1-k) g_alpha(s)``, ``s = k/n**alpha``;
    estimates ``[n, k]_alpha`` for ``0 < alpha < 1``."""
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    s = k / n ** alpha
    g = mittag_leffler_density(alpha, s)
    return LogScalar.from_log(math.lgamma(n) - math.lgamma(k) - alpha * math.log(n)
                              + (1 - k) * math.log(alpha) + math.log(g))


def gt1_ratio(n: int, m: int, alpha, mode: str = "log"):
    """``|alpha|**m m! [n, m]_alpha / (m|alpha|)_n``; tends to 1 in ``n``."""
    _check_mode(mode)
    a = normalize_alpha(alpha)
    if a == NEG_INF or a >= 0:
        raise ValueError("gt1_ratio needs finite alpha < 0")
    if not (1 <= m <= n):
        raise ValueError("need 1 <= m <= n")
    b = -a
    if mode == "exact":
        return b ** m * math.factorial(m) * stirling_number(n, m, a) \
            / rising_factorial(m * b, n)
    st = stirling_number(n, m, a, mode="log")
    fb = float(b)
    return math.exp(m * math.log(fb) + math.lgamma(m + 1) + st.log
                    - log_rising_factorial(m * fb, n))


def ratio_limit_neg(nu: int, n: int, k: int, m: int, alpha) -> tuple:
    """``(lhs, rhs)`` with ``lhs = d_{n,k}^{nu,m} / [nu, m]_alpha`` through the
    closed extended-dimension form and ``rhs = |alpha|**k (m)_k / (|alpha| m)_n``,
    its ``nu -> inf`` limit."""
    a = normalize_alpha(alpha)
    if a == NEG_INF or a >= 0:
        raise ValueError("ratio_limit_neg needs finite alpha < 0")
    if not (1 <= k <= m) or n < k or nu < max(n, m):
        raise ValueError("need 1 <= k <= m, k <= n and nu >= max(n, m)")
    num = extended_dimension_closed(n, k, nu, m, a, mode="log")
    den = stirling_number(nu, m, a, mode="log")
    b = float(-a)
    rhs = math.exp(k * math.log(b) + math.log(falling_factorial(m, k))
                   - log_rising_factorial(b * m, n))
    return math.exp(num.log - den.log), rhs
