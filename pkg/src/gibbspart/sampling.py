"""Samplers for exchangeable partitions and Monte Carlo harnesses.

Reproducibility: a run with master seed ``S`` is split into fixed-size
replicate blocks; block ``b`` draws from
``np.random.SeedSequence(S, spawn_key=(b,))``. Block sizes never depend on
the number of worker threads and block results are merged in block order,
so serial and threaded runs give identical numbers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .numerics import NEG_INF, is_exact, to_exact
from .stirling import normalize_alpha

FREQ_BLOCK = 1 << 16
LLN_BLOCK = 250
THREADS_ENV = "GIBBSPART_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Generator for replicate block ``block`` of master seed ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _run_blocks(fn: Callable[[int, int], object], total: int, block: int,
                threads: Optional[int]) -> list:
    # fn(block_index, block_size) -> result; results kept in block order
    sizes = [min(block, total - i * block) for i in range((total + block - 1) // block)]
    threads = default_threads() if threads is None else threads
    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, range(len(sizes)), sizes))
    return [fn(b, s) for b, s in enumerate(sizes)]


# ---------------------------------------------------------------------------
# single partitions


@dataclass(frozen=True)
class PartitionSample:
    """Block sizes in order of appearance; ``labels[i]`` is the block of
    element ``i+1`` when kept."""

    sizes: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError("block sizes must be positive")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def K(self) -> int:
        return len(self.sizes)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "PartitionSample":
        rgs = canonical_labels(np.asarray(labels)[None, :])[0]
        sizes = np.bincount(rgs)
        return cls(tuple(int(s) for s in sizes), tuple(int(x) for x in rgs))


def _check_crp(alpha, theta):
    a = float(normalize_alpha(alpha))
    if a == NEG_INF:
        raise ValueError("use sample_coupon for alpha = -inf")
    if a >= 1:
        raise ValueError("alpha must be < 1")
    th = float(theta)
    if not math.isfinite(th):
        raise ValueError("theta must be finite")
    m = None
    if a < 0:
        r = th / -a
        m = round(r)
        if abs(r - m) > 1e-9 or m < 1:
            raise ValueError("alpha < 0 needs theta = m|alpha| with integer m >= 1")
    elif th < -a:
        raise ValueError("need theta >= -alpha")
    return a, th, m


def sample_crp(alpha, theta, n: int, rng: np.random.Generator) -> PartitionSample:
    """Sequential two-parameter construction: element ``i+1`` joins a block
    of size ``n_j`` w.p. ``(n_j - alpha)/(theta + i)`` and opens a new one
    w.p. ``(theta + K alpha)/(theta + i)``."""
    a, th, m = _check_crp(alpha, theta)
    if n < 1:
        raise ValueError("n must be >= 1")
    sizes = np.zeros(n, dtype=float)
    labels = np.zeros(n, dtype=np.int64)
    sizes[0] = 1
    K = 1
    for i in range(1, n):
        new_w = 0.0 if (m is not None and K >= m) else max(th + K * a, 0.0)
        u = rng.random() * (th + i)
        if u < new_w:
            sizes[K] = 1
            labels[i] = K
            K += 1
            continue
        cum = np.cumsum(sizes[:K] - a)
        j = min(int(np.searchsorted(cum, u - new_w, side="right")), K - 1)
        sizes[j] += 1
        labels[i] = j
    return PartitionSample(tuple(int(s) for s in sizes[:K]), tuple(int(x) for x in labels))


def sample_coupon(m: int, n: int, rng: np.random.Generator) -> PartitionSample:
    """Blocks are the classes of ``n`` iid uniform draws from ``m`` labels."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    return PartitionSample.from_labels(rng.integers(m, size=n))


def sample_dirichlet_paintbox(alpha, m: int, n: int, rng: np.random.Generator) -> PartitionSample:
    """Symmetric Dirichlet(|alpha|) masses on ``m`` intervals (normalized
    Gamma draws); ``n`` iid uniform points are grouped by interval."""
    a = float(normalize_alpha(alpha))
    if not (a < 0 and math.isfinite(a)):
        raise ValueError("alpha must be finite and negative")
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    g = rng.gamma(-a, size=m)
    cum = np.cumsum(g / g.sum())
    pts = rng.random(n)
    return PartitionSample.from_labels(np.minimum(np.searchsorted(cum, pts, side="right"), m - 1))


# ---------------------------------------------------------------------------
# vectorized batches (rows are replicates)


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel each row by order of first appearance (restricted growth)."""
    labels = np.asarray(labels, dtype=np.int64)
    R, n = labels.shape
    if n == 0:
        return labels.copy()
    width = int(labels.max()) + 1
    table = np.full((R, width), -1, dtype=np.int64)
    nxt = np.zeros(R, dtype=np.int64)
    out = np.empty_like(labels)
    rows = np.arange(R)
    for i in range(n):
        lab = labels[:, i]
        cur = table[rows, lab]
        fresh = cur < 0
        cur = np.where(fresh, nxt, cur)
        table[rows[fresh], lab[fresh]] = nxt[fresh]
        nxt = nxt + fresh
        out[:, i] = cur
    return out


def crp_batch(alpha, theta, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` CRP partitions of ``[n]`` as restricted growth strings."""
    a, th, m = _check_crp(alpha, theta)
    labels = np.zeros((size, n), dtype=np.int64)
    sizes = np.zeros((size, n), dtype=float)
    sizes[:, 0] = 1
    K = np.ones(size, dtype=np.int64)
    cols = np.arange(n)
    rows = np.arange(size)
    for i in range(1, n):
        w = np.where(cols[None, :] < K[:, None], sizes - a, 0.0)
        new_w = np.maximum(th + K * a, 0.0)
        if m is not None:
            new_w = np.where(K >= m, 0.0, new_w)
        w[rows, np.minimum(K, n - 1)] += new_w
        cum = np.cumsum(w, axis=1)
        u = rng.random(size) * (th + i)
        j = (cum <= u[:, None]).sum(axis=1)
        j = np.minimum(j, K)
        labels[:, i] = j
        sizes[rows, j] += 1
        K = K + (j == K)
    return labels


def coupon_batch(m: int, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if m < 1:
        raise ValueError("m must be >= 1")
    return canonical_labels(rng.integers(m, size=(size, n)))


def dirichlet_batch(alpha, m: int, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    a = float(normalize_alpha(alpha))
    if not (a < 0 and math.isfinite(a)):
        raise ValueError("alpha must be finite and negative")
    g = rng.gamma(-a, size=(size, m))
    cum = np.cumsum(g / g.sum(axis=1, keepdims=True), axis=1)
    pts = rng.random((size, n))
    idx = (pts[:, :, None] >= cum[:, None, :]).sum(axis=2)
    return canonical_labels(np.minimum(idx, m - 1))


def partition_frequencies(batch: Callable[[int, np.random.Generator], np.ndarray], n: int,
                          reps: int, seed: int, threads: Optional[int] = None,
                          drop_last: bool = False) -> dict:
    """Counts of each restricted growth string over ``reps`` replicates.

    ``batch(size, rng)`` returns label rows; with ``drop_last`` the last
    element is deleted before counting (the deletion-consistency check).
    """
    def one(b, size):
        lab = batch(size, block_rng(seed, b))
        if drop_last:
            lab = lab[:, :-1]
        width = lab.shape[1]
        codes = (lab * (width ** np.arange(width))[None, :]).sum(axis=1)
        u, c = np.unique(codes, return_counts=True)
        return dict(zip(u.tolist(), c.tolist()))

    total: dict = {}
    for part in _run_blocks(one, reps, FREQ_BLOCK, threads):
        for k, v in part.items():
            total[k] = total.get(k, 0) + v
    width = n - 1 if drop_last else n
    out = {}
    for code, c in sorted(total.items()):
        rgs = tuple((code // width ** i) % width for i in range(width)) if width > 1 else (0,)
        out[rgs] = c
    return out


@dataclass
class FrequencyReport:
    reps: int
    cells: list
    max_abs_z: float
    sigmas: float

    @property
    def ok(self) -> bool:
        return self.max_abs_z <= self.sigmas


def compare_frequencies(counts: dict, exact: dict, reps: int, sigmas: float = 4.0) -> FrequencyReport:
    """Per-cell z-scores ``(count - R p) / sqrt(R p (1-p))``; a zero-probability
    cell with a nonzero count scores ``inf``."""
    cells, worst = [], 0.0
    for key in sorted(set(exact) | set(counts)):
        p = float(exact.get(key, 0))
        c = counts.get(key, 0)
        if p <= 0:
            z = 0.0 if c == 0 else math.inf
        elif p >= 1:
            z = 0.0 if c == reps else math.inf
        else:
            z = (c - reps * p) / math.sqrt(reps * p * (1 - p))
        cells.append((key, c, p, z))
        worst = max(worst, abs(z))
    return FrequencyReport(reps, cells, worst, sigmas)


# ---------------------------------------------------------------------------
# block counts


def exact_mean_Kn(alpha, theta, n: int, mode: str = "auto"):
    """``E[K_n]`` from ``E[K_{i+1}] = E[K_i] + (theta + alpha E[K_i])/(theta + i)``.

    For ``alpha = 0`` this is ``sum_j theta/(theta + j - 1)``. For
    ``alpha = -inf`` pass ``theta = m``: ``m (1 - (1 - 1/m)**n)``. Exact
    rationals for rational inputs and ``n <= 2000`` (``mode="auto"``).
    """
    a = normalize_alpha(alpha)
    if n < 1:
        raise ValueError("n must be >= 1")
    if a == NEG_INF:
        m = int(theta)
        if m < 1:
            raise ValueError("m must be >= 1")
        if mode == "float":
            return m * -math.expm1(n * math.log1p(-1 / m)) if m > 1 else 1.0
        return m * (1 - Fraction(m - 1, m) ** n)
    if mode == "auto":
        mode = "exact" if n <= 2000 and not isinstance(theta, float) else "float"
    if mode == "exact":
        th = to_exact(theta)
        if a == 0:
            return sum((th / (th + j - 1) for j in range(1, n + 1)), Fraction(0))
        E = Fraction(1)
        for i in range(1, n):
            E += (th + a * E) / (th + i)
        return E
    th, fa = float(theta), float(a)
    if fa == 0:
        return math.fsum(th / (th + j - 1) for j in range(1, n + 1))
    E = 1.0
    for i in range(1, n):
        E += (th + fa * E) / (th + i)
    return E


def k_chain_batch(alpha: float, theta: float, n: int, size: int, rng: np.random.Generator,
                  chunk: int = 4096) -> np.ndarray:
    """``K_n`` for ``size`` replicates by simulating only the block count:
    a new block opens at step ``i+1`` w.p. ``(theta + K alpha)/(theta + i)``."""
    a, th, m = _check_crp(alpha, theta)
    K = np.ones(size, dtype=np.int64)
    i = 1
    while i < n:
        steps = min(chunk, n - i)
        U = rng.random((steps, size))
        for s in range(steps):
            p = (th + K * a) / (th + i + s)
            if m is not None:
                p = np.where(K >= m, 0.0, p)
            K += U[s] < p
        i += steps
    return K


@dataclass
class MCReport:
    """Monte Carlo summary of a per-replicate statistic."""

    reps: int
    seed: int
    statistic: str
    values: np.ndarray = field(repr=False)
    mean: float = 0.0
    variance: float = 0.0
    stderr: float = 0.0
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_values(cls, values: np.ndarray, seed: int, statistic: str, **extra) -> "MCReport":
        v = np.asarray(values, dtype=float)
        var = float(v.var(ddof=1)) if v.size > 1 else 0.0
        return cls(int(v.size), seed, statistic, v, float(v.mean()), var,
                   math.sqrt(var / v.size), dict(extra))

    def to_json(self) -> dict:
        return {"reps": self.reps, "seed": self.seed, "statistic": self.statistic,
                "mean": self.mean, "variance": self.variance, "stderr": self.stderr,
                **self.extra}


def _normalizer(alpha: float, n: int, stat: str) -> float:
    if stat == "kn":
        return 1.0
    if stat == "kn_over_logn":
        return math.log(n)
    if stat == "kn_over_npow":
        return n ** alpha if alpha > 0 else 1.0
    raise ValueError(f"unknown statistic {stat!r}")


def lln_experiment(alpha, theta, n: int, reps: int, seed: int, stat: str = "kn",
                   threads: Optional[int] = None) -> MCReport:
    """Simulate ``K_n`` over ``reps`` replicates and compare the mean of
    ``K_n`` with :func:`exact_mean_Kn` (z-score in standard errors)."""
    a, th, _ = _check_crp(alpha, theta)
    norm = _normalizer(a, n, stat)
    parts = _run_blocks(lambda b, s: k_chain_batch(a, th, n, s, block_rng(seed, b)),
                        reps, LLN_BLOCK, threads)
    K = np.concatenate(parts)
    exact = exact_mean_Kn(alpha, theta, n, mode="float")
    kmean = float(K.mean())
    kse = float(K.std(ddof=1) / math.sqrt(K.size)) if K.size > 1 else 0.0
    rep = MCReport.from_values(K / norm, seed, stat, alpha=a, theta=th, n=n,
                               exact_mean_Kn=exact, mean_Kn=kmean,
                               z_mean_Kn=(kmean - exact) / kse if kse > 0 else 0.0,
                               frac_K_eq_max=float(np.mean(K == K.max())))
    return rep


def mc_statistic(sampler: str, params: dict, n: int, reps: int, seed: int, stat: str = "kn",
                 threads: Optional[int] = None) -> MCReport:
    """Block counts from any of the samplers (``crp``, ``coupon``, ``dirichlet``)."""
    if sampler == "crp":
        return lln_experiment(params["alpha"], params["theta"], n, reps, seed, stat, threads)
    if sampler == "coupon":
        fn = lambda s, r: coupon_batch(params["m"], n, s, r)  # noqa: E731
        alpha = 0.0
    elif sampler == "dirichlet":
        fn = lambda s, r: dirichlet_batch(params["alpha"], params["m"], n, s, r)  # noqa: E731
        alpha = float(params["alpha"])
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    block = max(1, min(FREQ_BLOCK, (1 << 22) // max(n, 1)))
    parts = _run_blocks(lambda b, s: fn(s, block_rng(seed, b)).max(axis=1) + 1, reps, block, threads)
    K = np.concatenate(parts)
    return MCReport.from_values(K / _normalizer(alpha, n, stat), seed, stat, n=n, mean_Kn=float(K.mean()))
