"""EPPFs of Gibbs form ``p(lambda) = V[n,k] * prod W[lambda_j]``.

For type ``alpha`` the weights are ``W_j = (1 - alpha)_{j-1}`` and the
``V`` array solves the backward recursion
``V[n,k] = gamma(n,k) V[n+1,k] + V[n+1,k+1]`` with ``V[1,1] = 1``.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .numerics import (NEG_INF, NumericalFailure, QuadratureSpec, format_exact, integrate,
                       is_exact, log_mittag_leffler_density, log_stable_density, rising_factorial,
                       falling_factorial, stable_density, to_exact)
from .stirling import (bell_polynomial, build_triangle, normalize_alpha, stirling_spec, w_weight,
                       w_weights)


# ---------------------------------------------------------------------------
# combinatorics


def compositions(n: int, k: Optional[int] = None) -> Iterator[tuple]:
    """All compositions of ``n`` (optionally with exactly ``k`` parts)."""
    if n < 1:
        return
    ks = range(1, n + 1) if k is None else [k]
    for kk in ks:
        for cuts in itertools.combinations(range(1, n), kk - 1):
            b = (0,) + cuts + (n,)
            yield tuple(b[i + 1] - b[i] for i in range(kk))


def set_partitions(n: int) -> Iterator[list]:
    """Set partitions of ``{1..n}`` as lists of blocks ordered by least
    element, generated from restricted growth strings."""
    if n == 0:
        yield []
        return
    a = [0] * n

    def rec(i, m):
        if i == n:
            blocks = [[] for _ in range(m + 1)]
            for idx, lab in enumerate(a):
                blocks[lab].append(idx + 1)
            yield [tuple(b) for b in blocks]
            return
        for lab in range(m + 2):
            a[i] = lab
            yield from rec(i + 1, max(m, lab))

    a[0] = 0
    yield from rec(1, 0)


def restricted_growth_string(blocks: Sequence[Sequence[int]], n: int) -> tuple:
    lab = [0] * n
    for j, b in enumerate(sorted(blocks, key=min)):
        for e in b:
            lab[e - 1] = j
    return tuple(lab)


def blocks_from_labels(labels: Sequence[int]) -> list:
    """Blocks (ordered by least element) of a label sequence."""
    seen: dict = {}
    for i, lab in enumerate(labels):
        seen.setdefault(lab, []).append(i + 1)
    return [tuple(b) for b in seen.values()]


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class TwoParam:
    """Parameters of the two-parameter (Ewens-Pitman) family.

    For ``alpha < 0`` give either ``theta = m*|alpha|`` or ``m``; ``m`` may
    be ``inf`` (all singletons) or ``0`` (one block). ``alpha = -inf`` needs
    ``m``. For ``0 <= alpha < 1``, ``theta >= -alpha`` or ``theta = inf``.
    """

    alpha: object
    theta: object = None
    m: object = None

    def __post_init__(self):
        a = normalize_alpha(self.alpha)
        object.__setattr__(self, "alpha", a)
        theta, m = self.theta, self.m
        if a == NEG_INF:
            if m is None:
                m = theta
            theta = None
            m = _as_count(m)
        elif a < 0:
            if m is None:
                if theta is None:
                    raise ValueError("alpha < 0 needs theta = m|alpha| or m")
                if theta == math.inf:
                    m = math.inf
                else:
                    ratio = to_exact(theta) / -a
                    if ratio.denominator != 1:
                        raise ValueError(f"theta must be an integer multiple of |alpha|, got {theta}")
                    m = int(ratio)
            m = _as_count(m)
            theta = math.inf if m == math.inf else m * -a
        else:
            if a >= 1:
                raise ValueError("alpha must be < 1")
            if theta is None:
                raise ValueError("theta required for alpha >= 0")
            if theta != math.inf:
                theta = to_exact(theta) if not isinstance(theta, float) or math.isfinite(theta) else theta
                if theta < -a:
                    raise ValueError(f"need theta >= -alpha, got theta={theta}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "m", m)

    @property
    def kind(self) -> str:
        if self.theta == math.inf or self.m == math.inf:
            return "singleton"
        if self.m == 0:
            return "one_block"
        if self.alpha == NEG_INF:
            return "coupon"
        return "regular"


def _as_count(m):
    if m == math.inf:
        return math.inf
    if m is None:
        raise ValueError("m required")
    mm = to_exact(m)
    if mm.denominator != 1 or mm < 0:
        raise ValueError(f"m must be a nonnegative integer or inf, got {m}")
    return int(mm)


# ---------------------------------------------------------------------------
# V arrays


@dataclass(frozen=True)
class VArray:
    """Triangular array ``V[n,k]``, ``1 <= k <= n <= N``, of a given type."""

    alpha: object
    rows: tuple

    @property
    def N(self) -> int:
        return len(self.rows)

    def __getitem__(self, nk):
        n, k = nk
        if not 1 <= n <= self.N:
            raise IndexError(f"n={n} outside 1..{self.N}")
        if not 1 <= k <= n:
            return 0
        return self.rows[n - 1][k - 1]

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for row in self.rows for v in row)

    def gamma(self, n: int, k: int):
        a = self.alpha
        return k if a == NEG_INF else n - a * k

    def first_column(self) -> list:
        return [row[0] for row in self.rows]

    def recursion_residuals(self) -> list:
        """``V[n,k] - gamma V[n+1,k] - V[n+1,k+1]`` for ``n < N``."""
        out = []
        for n in range(1, self.N):
            for k in range(1, n + 1):
                out.append(self[n, k] - self.gamma(n, k) * self[n + 1, k] - self[n + 1, k + 1])
        return out

    def max_relative_residual(self) -> float:
        worst = 0.0
        for n in range(1, self.N):
            for k in range(1, n + 1):
                r = self[n, k] - self.gamma(n, k) * self[n + 1, k] - self[n + 1, k + 1]
                scale = max(abs(float(self[n, k])), abs(float(self.gamma(n, k) * self[n + 1, k])),
                            abs(float(self[n + 1, k + 1])), 1e-300)
                worst = max(worst, abs(float(r)) / scale)
        return worst

    def is_valid(self, tol: float = 0.0) -> bool:
        if self.rows[0][0] != 1:
            return False
        if any(v < -tol for row in self.rows for v in row):
            return False
        if self.exact and tol == 0:
            return all(r == 0 for r in self.recursion_residuals())
        return self.max_relative_residual() <= max(tol, 1e-10)

    def min_entry(self):
        return min(v for row in self.rows for v in row)

    def mix(self, other: "VArray", weight) -> "VArray":
        """``weight * self + (1 - weight) * other``."""
        if other.alpha != self.alpha or other.N != self.N:
            raise ValueError("can only mix arrays of equal type and size")
        return VArray(self.alpha, tuple(
            tuple(weight * a + (1 - weight) * b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.rows, other.rows)))

    def truncate(self, N: int) -> "VArray":
        return VArray(self.alpha, self.rows[:N])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for n, row in enumerate(self.rows, start=1):
            for k, v in enumerate(row, start=1):
                w.writerow([n, k, format_exact(v) if is_exact(v) else repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, alpha, text: str) -> "VArray":
        entries = {}
        for rec in csv.DictReader(io.StringIO(text)):
            v = rec["value"]
            entries[int(rec["n"]), int(rec["k"])] = to_exact(v) if "/" in v or v.lstrip("-").isdigit() \
                else float(v)
        N = max(n for n, _ in entries)
        return cls(normalize_alpha(alpha),
                   tuple(tuple(entries.get((n, k), 0) for k in range(1, n + 1))
                         for n in range(1, N + 1)))

    @classmethod
    def from_function(cls, alpha, N: int, f) -> "VArray":
        return cls(normalize_alpha(alpha),
                   tuple(tuple(f(n, k) for k in range(1, n + 1)) for n in range(1, N + 1)))

    @classmethod
    def from_first_column(cls, alpha, u: Sequence) -> "VArray":
        """Fill the triangle from ``V[n,1] = u[n-1]`` via
        ``V[n+1,k+1] = V[n,k] - gamma(n,k) V[n+1,k]``."""
        a = normalize_alpha(alpha)
        N = len(u)
        rows = [[u[0]]]
        for n in range(1, N):
            prev = rows[-1]
            row = [u[n]]
            for k in range(1, n + 1):
                g = k if a == NEG_INF else n - a * k
                row.append(prev[k - 1] - g * row[k - 1])
            rows.append(row)
        return cls(a, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# named solutions


def phi_weights(alpha, theta, n: int, k: int):
    """``phi[n,k](alpha, theta) = (theta+alpha)_{k-1,alpha} / (theta+1)_{n-1}``.

    For ``alpha = -inf`` pass ``theta = m`` to get ``(m)_k / m**n``. Infinite
    ``theta`` (or ``m``) yields the all-singletons law; ``m = 0`` for
    ``alpha < 0`` yields the one-block law.
    """
    p = theta if isinstance(theta, TwoParam) else _two_param(alpha, theta)
    if not 1 <= k <= n:
        raise IndexError(f"need 1 <= k <= n, got n={n}, k={k}")
    kind = p.kind
    if kind == "singleton":
        return 1 if k == n else 0
    if kind == "one_block":
        return Fraction(1) / w_weight(p.alpha, n) if k == 1 else 0
    if kind == "coupon":
        return Fraction(falling_factorial(p.m, k), p.m ** n)
    a, th = p.alpha, p.theta
    num = rising_factorial(th + a, k - 1, a)
    den = rising_factorial(th + 1, n - 1)
    return Fraction(num) / den if is_exact(th) else num / den


def _two_param(alpha, theta) -> TwoParam:
    a = normalize_alpha(alpha)
    if a == NEG_INF:
        return TwoParam(a, m=theta)
    return TwoParam(a, theta=theta)


def phi_varray(alpha, theta, N: int) -> VArray:
    p = _two_param(alpha, theta)
    return VArray.from_function(p.alpha, N, lambda n, k: phi_weights(p.alpha, p, n, k))


def singleton_varray(alpha, N: int) -> VArray:
    return VArray.from_function(alpha, N, lambda n, k: 1 if k == n else 0)


def one_block_varray(alpha, N: int) -> VArray:
    return VArray.from_function(alpha, N, lambda n, k: Fraction(1) / w_weight(alpha, n) if k == 1 else 0)


# ---------------------------------------------------------------------------
# psi(alpha|s): boundary laws for 0 < alpha < 1


def psi_v_first_column(alpha: float, s: float, n: int,
                       spec: Optional[QuadratureSpec] = None,
                       method: str = "mittag-leffler") -> float:
    """``V[n,1]`` of the conditioned law ``psi(alpha|s)``.

    ``method="mittag-leffler"`` integrates
    ``y**(n-1-alpha) (1-y)**(-1-alpha) g_alpha(s (1-y)**-alpha)`` over ``(0,1)``;
    ``method="stable"`` integrates ``y**(n-1-alpha) f_alpha(t (1-y))`` with
    ``t = s**(-1/alpha)``. The substitution ``y = u**(1/(n-alpha))`` removes
    the endpoint singularity. ``s = 0`` and ``s = inf`` give the one-block
    and all-singletons laws.
    """
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be >= 1")
    if s == 0:
        return 1.0 / float(w_weight(to_exact(alpha), n))
    if s == math.inf:
        return 1.0 if n == 1 else 0.0
    if s < 0:
        raise ValueError("s must be nonnegative")
    spec = spec or QuadratureSpec()
    log_poch = math.lgamma(n - alpha) - math.lgamma(1 - alpha)
    p = 1.0 / (n - alpha)

    def one_minus_y(u):
        return -math.expm1(p * math.log(u)) if u > 0 else 1.0

    if method == "mittag-leffler":
        lgs = log_mittag_leffler_density(alpha, s)

        def kern_y(u):
            # y in (0, 1/2] through y = u**p
            z = one_minus_y(u)
            return z ** (-1 - alpha) * math.exp(log_mittag_leffler_density(alpha, s * z ** -alpha) - lgs)

        e = n - 1 - alpha

        def kern_w(w):
            # y in (1/2, 1) in the original variable w = s (1-y)**-alpha
            base = -math.expm1(math.log(s / w) / alpha)
            return base ** e * math.exp(log_mittag_leffler_density(alpha, w) - lgs)

        r1 = integrate(kern_y, 0.0, 0.5 ** (n - alpha), spec)
        w0 = s * 2.0 ** alpha
        r2 = integrate(kern_w, w0, w0 + 1.0, spec)
        r3 = integrate(kern_w, w0 + 1.0, math.inf, spec)
        val = (alpha * s * p * r1.value + r2.value + r3.value) / math.gamma(1 - alpha)
    elif method == "stable":
        t = s ** (-1 / alpha)
        lft = log_stable_density(alpha, t)
        e = n - 1 - alpha

        def kern_y(u):
            # y in (0, 1/2] through y = u**p
            return math.exp(log_stable_density(alpha, t * one_minus_y(u)) - lft)

        def kern_x(x):
            # y in (1/2, 1) through x = t (1-y)
            return (1 - x / t) ** e * math.exp(log_stable_density(alpha, x) - lft) / t

        r = p * integrate(kern_y, 0.0, 0.5 ** (n - alpha), spec).value
        if t / 2 <= 1:
            r += integrate(kern_x, 0.0, t / 2, spec).value
        else:
            r += integrate(kern_x, 0.0, 1.0, spec).value
            r += integrate(lambda v: math.exp(v) * kern_x(math.exp(v)), 0.0, math.log(t / 2), spec).value
        val = alpha * r / (math.gamma(1 - alpha) * t ** alpha)
    else:
        raise ValueError(f"unknown method {method!r}")
    return val * math.exp(-log_poch)


def psi_weights(alpha: float, s: float, N: int, spec: Optional[QuadratureSpec] = None,
                neg_tol: float = 1e-8, strict: bool = True) -> VArray:
    """``V`` array of ``psi(alpha|s)`` rebuilt from its quadrature first column.

    The reconstruction subtracts nearly equal numbers; entries below
    ``-neg_tol`` raise :class:`NumericalFailure` when ``strict``.
    """
    u = [psi_v_first_column(alpha, s, n, spec) for n in range(1, N + 1)]
    u[0] = 1.0
    V = VArray.from_first_column(float(alpha), u)
    if strict and N > 1 and V.min_entry() < -neg_tol:
        raise NumericalFailure(
            f"psi({alpha}|{s}) reconstruction has entry {V.min_entry():.3e} < -{neg_tol}")
    return V


# ---------------------------------------------------------------------------
# Gibbs laws


@dataclass(frozen=True)
class GibbsLaw:
    """EPPF of Gibbs form for type ``alpha`` with mixing array ``V``."""

    V: VArray

    @property
    def alpha(self):
        return self.V.alpha

    @property
    def N(self) -> int:
        return self.V.N

    def W(self, j: int):
        return w_weight(self.alpha, j)

    def eppf(self, parts: Sequence[int]):
        return eppf_gibbs(self, parts)

    def block_count_law(self, n: int) -> list:
        return block_count_law(self, n)


def phi_law(alpha, theta, N: int) -> GibbsLaw:
    return GibbsLaw(phi_varray(alpha, theta, N))


def eppf_gibbs(law: GibbsLaw, parts: Sequence[int]):
    """``V[n,k] * prod W[parts]``."""
    parts = tuple(parts)
    if not parts or any(p < 1 for p in parts):
        raise ValueError("parts must be positive integers")
    n, k = sum(parts), len(parts)
    if n > law.N:
        raise IndexError(f"n={n} exceeds the V table (N={law.N})")
    out = law.V[n, k]
    for p in parts:
        out = out * w_weight(law.alpha, p)
    return out


def eppf_two_param(p: TwoParam, parts: Sequence[int]):
    """Two-parameter EPPF
    ``(theta+alpha)_{k-1,alpha} / (theta+1)_{n-1} * prod (1-alpha)_{parts-1}``."""
    parts = tuple(parts)
    if not parts or any(x < 1 for x in parts):
        raise ValueError("parts must be positive integers")
    n, k = sum(parts), len(parts)
    v = phi_weights(p.alpha, p, n, k)
    for x in parts:
        v = v * w_weight(p.alpha, x)
    return v


def set_partition_probability(law, blocks: Sequence[Sequence[int]]):
    parts = tuple(len(b) for b in blocks)
    if isinstance(law, TwoParam):
        return eppf_two_param(law, parts)
    return eppf_gibbs(law, parts)


@dataclass
class AdditionReport:
    n_max: int
    checked: int
    violations: list = field(default_factory=list)
    max_residual: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def check_addition_rule(law, n_max: int, tol: float = 1e-10) -> AdditionReport:
    """Residuals ``p(lambda) - sum_{mu} p(mu)`` over compositions of
    ``n <= n_max``, where ``mu`` adds one to a part or appends a part 1.

    Exact laws must give exactly zero; float laws are held to a relative
    ``tol``.
    """
    eppf = (lambda lam: eppf_two_param(law, lam)) if isinstance(law, TwoParam) \
        else (lambda lam: eppf_gibbs(law, lam))
    if not isinstance(law, TwoParam) and n_max + 1 > law.N:
        raise ValueError("n_max + 1 must not exceed the table size")
    rep = AdditionReport(n_max, 0)
    for n in range(1, n_max + 1):
        for lam in compositions(n):
            lhs = eppf(lam)
            rhs = eppf(lam + (1,))
            for i in range(len(lam)):
                rhs = rhs + eppf(lam[:i] + (lam[i] + 1,) + lam[i + 1:])
            r = lhs - rhs
            rep.checked += 1
            if is_exact(r):
                bad = r != 0
                mag = abs(float(r))
            else:
                mag = abs(float(r))
                bad = mag > tol * max(abs(float(lhs)), 1e-300)
            rep.max_residual = max(rep.max_residual, mag)
            if bad:
                rep.violations.append((lam, r))
    return rep


def block_count_law(law, n: int) -> list:
    """``[P(K_n = k) for k = 1..n]`` with ``P(K_n=k) = V[n,k] B_{n,k}(W)``."""
    if isinstance(law, TwoParam):
        V = lambda k: phi_weights(law.alpha, law, n, k)  # noqa: E731
        alpha = law.alpha
    else:
        if n > law.N:
            raise IndexError(f"n={n} exceeds the V table")
        V = lambda k: law.V[n, k]  # noqa: E731
        alpha = law.alpha
    # B_{n,k}(W) for the type-alpha weights is the Stirling number [n, k]
    vals = [V(k) for k in range(1, n + 1)]
    top = max((k for k, v in enumerate(vals, start=1) if v != 0), default=0)
    if top == 0:
        return vals
    tri = build_triangle(stirling_spec(alpha), n, "exact", k_max=top)
    return [v * tri.value(n, k) if v != 0 else v for k, v in enumerate(vals, start=1)]


def cond_partition_prob(alpha, blocks: Sequence[Sequence[int]], k: int):
    """``P(Pi_n = blocks | K_n = k) = prod W[|A_j|] / B_{n,k}(W)``; free of V."""
    if len(blocks) != k:
        raise ValueError(f"partition has {len(blocks)} blocks, expected {k}")
    n = sum(len(b) for b in blocks)
    if sorted(e for b in blocks for e in b) != list(range(1, n + 1)):
        raise ValueError("blocks must partition {1..n}")
    W = w_weights(alpha, n)
    num = 1
    for b in blocks:
        num = num * W[len(b) - 1]
    return Fraction(num) / bell_polynomial(n, k, W) if is_exact(num) else num / bell_polynomial(n, k, W)


# ---------------------------------------------------------------------------
# classification


@dataclass
class GibbsClassification:
    """Outcome of :func:`classify_gibbs`.

    ``kind`` is ``"gibbs"`` (with ``alpha``), ``"trivial"`` (``detail`` names
    the law) or ``"not_gibbs"``.
    """

    kind: str
    alpha: object = None
    detail: str = ""
    addition_violations: list = field(default_factory=list)
    W: list = field(default_factory=list)


def _close(x, y, tol) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(float(x) - float(y)) <= tol * max(abs(float(x)), abs(float(y)), 1e-300)


def classify_gibbs(p_values: dict, tol: float = 1e-9) -> GibbsClassification:
    """Recover the type ``alpha`` of an EPPF given on all compositions of
    ``n <= n_max`` (``n_max >= 4``).

    The ratios ``r_j = W_{j+1}/W_j`` are read off as
    ``r_j / r_1 = p(j+1, 1) / p(j, 2)``; geometric tilting fixes ``r_1``.
    The EPPF is Gibbs when ``p / prod W`` depends only on ``(n, k)`` and
    ``r_j`` is affine in ``j``; then ``r_j`` is proportional to
    ``j - alpha`` (constant ``r`` meaning ``alpha = -inf``).
    """
    p = {tuple(k): v for k, v in p_values.items()}
    n_max = max(sum(c) for c in p)
    if n_max < 4:
        raise ValueError("need EPPF values for all compositions of n <= 4")
    for n in range(1, n_max + 1):
        for c in compositions(n):
            if c not in p:
                raise ValueError(f"missing EPPF value for {c}")
    for c, v in p.items():
        for perm in set(itertools.permutations(c)):
            if not _close(p[perm], v, tol):
                return GibbsClassification("not_gibbs", detail=f"asymmetric at {c} vs {perm}")
    violations = []
    for n in range(1, n_max):
        for lam in compositions(n):
            rhs = p[lam + (1,)]
            for i in range(len(lam)):
                rhs = rhs + p[lam[:i] + (lam[i] + 1,) + lam[i + 1:]]
            if not _close(p[lam], rhs, tol):
                violations.append((lam, p[lam] - rhs))
    if violations:
        return GibbsClassification("not_gibbs", detail="addition rule fails",
                                   addition_violations=violations)
    if p[(1,)] == 0 or not _close(p[(1,)], 1, tol):
        return GibbsClassification("not_gibbs", detail="p(1) != 1")
    if abs(float(p[(1, 1)])) <= tol:
        return GibbsClassification("trivial", detail="one_block")
    if abs(float(p[(2,)])) <= tol:
        return GibbsClassification("trivial", detail="singleton")
    # q[j] = r_j / r_1 for j = 1..n_max-2
    q = []
    for j in range(1, n_max - 1):
        den = p[(j, 2)]
        if abs(float(den)) <= tol * 1e-6:
            return GibbsClassification("not_gibbs", detail=f"p({j},2) vanishes")
        q.append(p[(j + 1, 1)] / den)
    W = [1]
    for qj in q:
        W.append(W[-1] * qj)
    # Gibbs factorization within each (n, k)
    for n in range(3, n_max + 1):
        for k in range(2, n):
            ref = None
            for c in compositions(n, k):
                prod = 1
                for x in c:
                    prod = prod * W[x - 1]
                val = p[c] / prod
                if ref is None:
                    ref = val
                elif not _close(val, ref, tol):
                    return GibbsClassification("not_gibbs", detail=f"no product form at n={n}, k={k}")
    diffs = [q[j + 1] - q[j] for j in range(len(q) - 1)]
    for j, d in enumerate(diffs[1:], start=2):
        if not _close(d, diffs[0], tol) and abs(float(d - diffs[0])) > tol:
            return GibbsClassification("not_gibbs", detail=f"W ratios not arithmetic at j={j}")
    slope = diffs[0] if diffs else None
    if slope is None:
        return GibbsClassification("not_gibbs", detail="not enough data")
    if abs(float(slope)) <= tol:
        alpha = NEG_INF
    elif slope < 0:
        return GibbsClassification("not_gibbs", detail="W ratios decrease (negative slope)")
    else:
        alpha = 1 - 1 / slope
    return GibbsClassification("gibbs", alpha=alpha, W=W)


class NotRepresentable(ValueError):
    """Weights ``V[n,k] = V_k / c_n`` that match no two-parameter law."""

    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (first inconsistency at index {index})")
        self.index = index


def _affine_fit(ratios: Sequence, label: str, tol: float):
    # ratios[i] corresponds to index i + 1; returns (intercept, slope)
    if len(ratios) < 2:
        raise ValueError(f"need at least three {label} values")
    slope = ratios[1] - ratios[0]
    intercept = ratios[0] - slope
    for i, r in enumerate(ratios[2:], start=3):
        if not _close(r, intercept + slope * i, tol) and abs(float(r - intercept - slope * i)) > tol:
            raise NotRepresentable(f"{label} ratios are not affine", i)
    return intercept, slope


def classify_ratio_weights(V_k: Sequence, c_n: Sequence, tol: float = 1e-9) -> TwoParam:
    """Invert ``V[n,k] = V_k / c_n`` to the two-parameter law.

    The recursion forces ``V_{k+1}/V_k - a k = c_{n+1}/c_n - b n = t``;
    ``(a, b, t)`` are fitted and reduced by tilting to ``(alpha, theta)``.
    """
    if any(v < 0 for v in V_k) or any(c <= 0 for c in c_n):
        raise ValueError("need V_k >= 0 and c_n > 0")
    pos = [v for v in V_k]
    K = len(pos)
    while K and pos[K - 1] == 0:
        K -= 1
    if K < 2:
        raise NotRepresentable("V_k must be positive for k = 1, 2", 2)
    if any(v == 0 for v in pos[:K]):
        raise NotRepresentable("V_k vanishes before its tail", pos.index(0) + 1)
    tc, b = _affine_fit([c_n[i + 1] / c_n[i] for i in range(len(c_n) - 1)], "c_n", tol)
    v_ratios = [pos[i + 1] / pos[i] for i in range(min(K, len(pos) - 1))]
    if len(v_ratios) >= 2:
        tv, a = _affine_fit(v_ratios, "V_k", tol)
    else:
        # a single ratio: intercept must equal t from c_n
        tv, a = tc, v_ratios[0] - tc
    if not _close(tv, tc, tol) and abs(float(tv - tc)) > tol:
        raise NotRepresentable("V_k and c_n give different constants", 1)
    t = tc
    if K < len(pos):
        # V_{K+1} = 0 forces t + a K = 0
        if not abs(float(t + a * K)) <= tol:
            raise NotRepresentable("V_k vanishes off the lattice", K + 1)
    if b < 0:
        raise NotRepresentable("c_n ratios decrease", 2)
    if abs(float(b)) <= tol:
        if a >= 0:
            raise NotRepresentable("b = 0 needs a < 0", 1)
        m = t / -a
        mm = round(float(m))
        if abs(float(m) - mm) > tol or mm < 1:
            raise NotRepresentable("t/|a| must be a positive integer", 1)
        return TwoParam(NEG_INF, m=mm)
    alpha, theta = a / b, t / b
    if alpha >= 1:
        raise NotRepresentable("alpha >= 1", 1)
    if alpha < 0:
        m = theta / -alpha
        mm = round(float(m))
        if abs(float(m) - mm) > tol or mm < 1:
            raise NotRepresentable("theta must be a positive multiple of |alpha|", 1)
        return TwoParam(alpha, m=mm)
    return TwoParam(alpha, theta=theta)
