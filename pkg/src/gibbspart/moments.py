"""First-column reconstruction and mixture decompositions of V arrays.

Every solution of the backward recursion is fixed by its first column
``u_n = V[n,1]``. For ``alpha < 0`` the extreme solutions are ``phi(alpha,
m|alpha|)`` (first column ``1/(m|alpha|+1)_{n-1}``) and the singleton law
(``m = inf``); for ``alpha = 0`` they are ``phi(0, theta)``; for
``0 < alpha < 1`` they are ``psi(alpha|s)``. A first column is a mixture of
extremes exactly when its reconstructed triangle is nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import nnls

from .gibbs import VArray, psi_v_first_column
from .numerics import NEG_INF, is_exact, rising_factorial, to_exact
from .stirling import normalize_alpha

INF = math.inf


def reconstruct_varray(u: Sequence, alpha) -> VArray:
    """Triangle with first column ``u`` (``u[0] = V[1,1] = 1``) built by
    ``V[n+1,k+1] = V[n,k] - gamma(n,k) V[n+1,k]``. Entries may come out
    negative; that is what :func:`nonnegativity_verdict` looks for."""
    if len(u) < 1 or u[0] != 1:
        raise ValueError("first column must start with u_1 = 1")
    return VArray.from_first_column(alpha, list(u))


def extract_first_column(V: VArray) -> list:
    return V.first_column()


def delta_alpha_paper(u: Sequence, alpha) -> list:
    """``(D u)_n = u_n - (n + 1 - alpha) u_{n+1}`` for ``n = 1..len(u)-1``.

    Kept for comparison only: the recursion needs ``(n - alpha)`` here, so
    this operator does not reproduce ``V[n+1,2]``.
    """
    a = normalize_alpha(alpha)
    if a == NEG_INF:
        raise ValueError("operator defined for finite alpha")
    if len(u) < 2:
        raise ValueError("need at least two terms")
    return [u[i] - (i + 2 - a) * u[i + 1] for i in range(len(u) - 1)]


def kernel_column(alpha, point, N: int, mode: str = "exact") -> list:
    """First column of the extreme law indexed by ``point``:

    * ``alpha < 0``: ``point = m`` (or ``inf``) gives ``phi(alpha, m|alpha|)``;
    * ``alpha = 0``: ``point = theta`` gives ``phi(0, theta)``;
    * ``0 < alpha < 1``: ``point = s`` gives ``psi(alpha|s)`` (float only).
    """
    a = normalize_alpha(alpha)
    if point == INF:
        return [1] + [0] * (N - 1)
    if a == NEG_INF:
        m = int(point)
        return [Fraction(1, m ** (n - 1)) if mode == "exact" else float(m) ** (1 - n)
                for n in range(1, N + 1)]
    if a < 0:
        m = to_exact(point)
        if m.denominator != 1 or m < 1:
            raise ValueError("support points must be positive integers or inf")
        base = m * -a + 1
    elif a == 0:
        base = to_exact(point) + 1 if mode == "exact" else float(point) + 1
    else:
        return [1.0] + [psi_v_first_column(float(a), float(point), n) for n in range(2, N + 1)]
    if mode == "exact":
        return [Fraction(1) / rising_factorial(base, n - 1) for n in range(1, N + 1)]
    b = float(base)
    return [math.exp(-(math.lgamma(b + n - 1) - math.lgamma(b))) for n in range(1, N + 1)]


def hausdorff_forward(q: dict, alpha, N: int, mode: str = "exact") -> list:
    """``u_n = sum_m q_m / (m|alpha| + 1)_{n-1}`` with the ``inf`` atom adding
    the singleton column. Also accepts ``alpha = 0`` (``theta`` support) and
    ``0 < alpha < 1`` (``s`` support)."""
    if any(w < 0 for w in q.values()):
        raise ValueError("mixture weights must be nonnegative")
    tot = sum(q.values())
    if (is_exact(tot) and tot != 1) or abs(float(tot) - 1) > 1e-12:
        raise ValueError("mixture weights must sum to 1")
    u = [0] * N
    for pt, w in q.items():
        col = kernel_column(alpha, pt, N, mode)
        for i in range(N):
            u[i] = u[i] + w * col[i]
    return u


@dataclass
class NonnegativityVerdict:
    ok: bool
    position: Optional[tuple] = None
    value: object = None


def nonnegativity_verdict(u: Sequence, alpha, tol: float = 0.0) -> NonnegativityVerdict:
    """First entry (row-major) of the reconstructed triangle below ``-tol``."""
    V = reconstruct_varray(u, alpha)
    for n, row in enumerate(V.rows, start=1):
        for k, v in enumerate(row, start=1):
            if v < -tol:
                return NonnegativityVerdict(False, (n, k), v)
    return NonnegativityVerdict(True)


@dataclass
class MixtureFit:
    support: list
    q: list
    residual: float
    method: str
    verdict: str
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.q))


def _solve_exact(A: list, b: list) -> Optional[list]:
    # Gaussian elimination over the rationals; None if singular
    n = len(b)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = Fraction(M[r][c]) / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [Fraction(M[i][n]) / M[i][i] for i in range(n)]


def recover_mixture(u: Sequence, alpha, support: Sequence, mode: str = "auto",
                    tol: float = 1e-10) -> MixtureFit:
    """Fit ``u`` as a mixture of the extreme first columns on ``support``.

    Exact mode solves the square system on the first ``len(support)`` rows in
    rational arithmetic and checks the rest; float mode runs NNLS on the
    row-scaled kernel. The residual is the max absolute misfit over all rows.
    """
    a = normalize_alpha(alpha)
    N = len(u)
    S = len(support)
    exact_ok = (all(is_exact(x) for x in u) and (a == NEG_INF or a <= 0) and S <= N
                and all(p == INF or is_exact(to_exact(p)) for p in support))
    if mode == "auto":
        mode = "exact" if exact_ok else "float"
    if mode == "exact":
        if not exact_ok:
            raise ValueError("exact recovery needs exact u, alpha <= 0, rational support, |support| <= N")
        cols = [kernel_column(a, p, N, "exact") for p in support]
        A = [[cols[j][i] for j in range(S)] for i in range(N)]
        sol = _solve_exact(A[:S], list(u[:S]))
        if sol is not None:
            resid = max(abs(sum(A[i][j] * sol[j] for j in range(S)) - u[i]) for i in range(N))
            neg = any(x < 0 for x in sol)
            verdict = "ok" if resid == 0 and not neg else ("negative_weights" if neg else "inconsistent")
            return MixtureFit(list(support), sol, float(resid), "exact", verdict,
                              {"residual_exact": resid})
        mode = "float"
    cols = [kernel_column(a, p, N, "float") for p in support]
    A = np.array([[float(c[i]) for c in cols] for i in range(N)])
    b = np.array([float(x) for x in u])
    scale = np.maximum(np.abs(A).max(axis=1), np.abs(b))
    scale[scale == 0] = 1.0
    q, _ = nnls(A / scale[:, None], b / scale, maxiter=50 * S)
    resid = float(np.max(np.abs(A @ q - b)))
    verdict = "ok" if resid <= tol else "residual_above_tol"
    return MixtureFit(list(support), [float(x) for x in q], resid, "nnls", verdict,
                      {"condition": float(np.linalg.cond(A / scale[:, None]))})
