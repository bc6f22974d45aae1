import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from gibbspart.gibbs import (TwoParam, block_count_law, eppf_two_param, restricted_growth_string,
                             set_partitions)
from gibbspart.sampling import (MCReport, PartitionSample, block_rng, canonical_labels,
                                compare_frequencies, coupon_batch, crp_batch, dirichlet_batch,
                                exact_mean_Kn, k_chain_batch, lln_experiment, mc_statistic,
                                partition_frequencies, sample_coupon, sample_crp,
                                sample_dirichlet_paintbox)

F = Fraction
NEG_INF = float("-inf")


def exact_partition_law(p: TwoParam, n: int) -> dict:
    return {restricted_growth_string(b, n): eppf_two_param(p, [len(x) for x in b])
            for b in set_partitions(n)}


def within_3se(hits, reps, p):
    return abs(hits / reps - p) <= 3 * math.sqrt(p * (1 - p) / reps) + 1e-12


# single samplers

def test_partition_sample_invariants():
    s = PartitionSample.from_labels([4, 4, 1, 4, 2])
    assert s.sizes == (3, 1, 1) and s.n == 5 and s.K == 3
    with pytest.raises(ValueError):
        PartitionSample(())


@given(st.integers(0, 2 ** 32), st.integers(1, 30))
def test_samplers_are_partitions(seed, n):
    rng = np.random.default_rng(seed)
    for s in (sample_crp(0.5, 1.0, n, rng), sample_crp(-1, 3, n, rng),
              sample_coupon(4, n, rng), sample_dirichlet_paintbox(-0.5, 3, n, rng)):
        assert sum(s.sizes) == n and s.K >= 1
    assert sample_crp(-1, 3, n, rng).K <= 3
    assert sample_crp(F(-1, 2), 1, n, rng).K <= 2


def test_trivial_cases():
    rng = np.random.default_rng(0)
    assert sample_crp(0, 1, 1, rng).K == 1
    assert all(sample_coupon(1, 9, rng).K == 1 for _ in range(20))
    assert all(sample_crp(-1, 1, 9, rng).K == 1 for _ in range(20))


def test_crp_one_block_probability():
    rng = np.random.default_rng(12)
    reps = 100_000
    hits = sum(sample_crp(0, 1, 3, rng).K == 1 for _ in range(reps))
    assert within_3se(hits, reps, 1 / 3)


def test_coupon_block_counts():
    rng = block_rng(5, 0)
    reps = 100_000
    K = coupon_batch(2, 2, reps, rng).max(axis=1) + 1
    assert within_3se(int(np.sum(K == 1)), reps, 0.5)
    K = coupon_batch(3, 4, reps, rng).max(axis=1) + 1
    for k in (1, 2, 3):
        p = math.perm(3, k) * int(sympy.functions.combinatorial.numbers.stirling(4, k)) / 81
        assert within_3se(int(np.sum(K == k)), reps, p)
    law = block_count_law(TwoParam(NEG_INF, m=3), 4)
    assert [float(x) for x in law[:3]] == pytest.approx(
        [math.perm(3, k) * int(sympy.functions.combinatorial.numbers.stirling(4, k)) / 81
         for k in (1, 2, 3)])


def test_negative_alpha_two_blocks():
    rng = block_rng(9, 0)
    reps = 100_000
    K = crp_batch(-1, 2, 2, reps, rng).max(axis=1) + 1
    assert within_3se(int(np.sum(K == 1)), reps, 2 / 3)


def test_canonical_labels():
    lab = np.array([[3, 3, 0, 7], [1, 2, 1, 2]])
    assert canonical_labels(lab).tolist() == [[0, 0, 1, 2], [0, 1, 0, 1]]


# frequency comparisons (reduced replicate counts; the full runs are acceptance tests)

LAWS = [("crp(0,1)", lambda s, r, n: crp_batch(0, 1, n, s, r), TwoParam(0, 1)),
        ("crp(1/2,1/2)", lambda s, r, n: crp_batch(0.5, 0.5, n, s, r), TwoParam(F(1, 2), F(1, 2))),
        ("crp(-1,2)", lambda s, r, n: crp_batch(-1, 2, n, s, r), TwoParam(-1, 2)),
        ("coupon(3)", lambda s, r, n: coupon_batch(3, n, s, r), TwoParam(NEG_INF, m=3)),
        ("dirichlet(-1/2,3)", lambda s, r, n: dirichlet_batch(-0.5, 3, n, s, r),
         TwoParam(F(-1, 2), m=3))]


@pytest.mark.parametrize("name,batch,law", LAWS, ids=[x[0] for x in LAWS])
@pytest.mark.parametrize("n", [3, 4])
def test_partition_frequencies(name, batch, law, n):
    reps = 200_000
    counts = partition_frequencies(lambda s, r: batch(s, r, n), n, reps, seed=2024)
    rep = compare_frequencies(counts, exact_partition_law(law, n), reps)
    assert rep.ok, rep.cells
    assert sum(counts.values()) == reps


@pytest.mark.parametrize("name,batch,law", LAWS, ids=[x[0] for x in LAWS])
def test_deletion_consistency(name, batch, law):
    n, reps = 4, 200_000
    counts = partition_frequencies(lambda s, r: batch(s, r, n), n, reps, seed=77, drop_last=True)
    assert compare_frequencies(counts, exact_partition_law(law, n - 1), reps).ok


def test_compare_frequencies_flags_mismatch():
    exact = {(0, 0): 0.5, (0, 1): 0.5}
    rep = compare_frequencies({(0, 0): 6000, (0, 1): 4000}, exact, 10_000)
    assert not rep.ok
    rep = compare_frequencies({(0, 0): 5000, (0, 1): 4999, (1, 1): 1}, exact, 10_000)
    assert rep.max_abs_z == math.inf


# exact means

def test_exact_mean_examples():
    assert exact_mean_Kn(0, 1, 3) == F(11, 6)
    assert exact_mean_Kn(F(1, 3), F(2, 5), 1) == 1
    law = block_count_law(TwoParam(F(1, 2), 0), 4)
    assert exact_mean_Kn(F(1, 2), 0, 4) == sum(k * p for k, p in enumerate(law, start=1))
    assert exact_mean_Kn(0, 5, 200, mode="float") == pytest.approx(
        sum(5 / (5 + j - 1) for j in range(1, 201)), rel=1e-14)


@pytest.mark.parametrize("p", [TwoParam(0, F(3, 2)), TwoParam(F(1, 2), F(1, 2)), TwoParam(-1, 3),
                               TwoParam(F(1, 4), F(-1, 4)), TwoParam(NEG_INF, m=4)], ids=str)
def test_exact_mean_matches_enumeration(p):
    theta = p.m if p.alpha == NEG_INF else p.theta
    for n in range(1, 7):
        law = exact_partition_law(p, n)
        mean = sum(len(set(rgs)) * pr for rgs, pr in law.items())
        assert exact_mean_Kn(p.alpha, theta, n) == mean


def test_bernoulli_representation():
    # alpha = 0: K_n is a sum of independent Bernoulli(theta/(theta+j-1))
    th = F(3)
    for n in range(1, 7):
        pk = [F(0)] * (n + 1)
        pk[0] = F(1)
        for j in range(1, n + 1):
            q = th / (th + j - 1)
            pk = [pk[k] * (1 - q) + (pk[k - 1] * q if k else 0) for k in range(n + 1)]
        assert pk[1:] == block_count_law(TwoParam(0, th), n)


# Monte Carlo harness

def test_k_chain_matches_exact_law():
    reps, n = 100_000, 6
    K = k_chain_batch(0.5, 1.0, n, reps, block_rng(1, 0))
    law = block_count_law(TwoParam(F(1, 2), 1), n)
    for k in range(1, n + 1):
        assert within_3se(int(np.sum(K == k)), reps, float(law[k - 1]))


def test_lln_small():
    rep = lln_experiment(0, 5, 2000, 400, seed=3)
    assert abs(rep.extra["z_mean_Kn"]) < 3
    assert rep.reps == 400 and rep.stderr > 0
    js = rep.to_json()
    assert js["seed"] == 3 and js["statistic"] == "kn"


def test_negative_alpha_concentration():
    # K_n -> m; at n = 500, m = 3 the exact P(K_n = 3) is 0.98807...
    law = block_count_law(TwoParam(-1, 3), 500)
    p3 = float(law[2])
    assert p3 == pytest.approx(0.98807166543, rel=1e-9)
    rep = lln_experiment(-1, 3, 500, 1000, seed=11)
    frac = rep.extra["frac_K_eq_max"]
    assert abs(frac - p3) <= 3 * math.sqrt(p3 * (1 - p3) / 1000)


def test_mc_statistic_samplers():
    r1 = mc_statistic("coupon", {"m": 5}, 8, 2000, seed=1)
    exact = float(exact_mean_Kn(NEG_INF, 5, 8))
    assert abs(r1.extra["mean_Kn"] - exact) < 4 * r1.stderr
    r2 = mc_statistic("dirichlet", {"alpha": -1.0, "m": 4}, 6, 2000, seed=1)
    exact = float(exact_mean_Kn(-1, 4, 6))
    assert abs(r2.extra["mean_Kn"] - exact) < 4 * r2.stderr
    with pytest.raises(ValueError):
        mc_statistic("urn", {}, 5, 10, seed=0)


def test_mc_report_from_values():
    r = MCReport.from_values(np.array([1.0, 2.0, 3.0]), seed=0, statistic="kn")
    assert (r.mean, r.variance) == (2.0, 1.0)
    assert r.stderr == pytest.approx(1 / math.sqrt(3))


# determinism

def test_reproducible_across_threads():
    a = lln_experiment(0.5, 0.0, 3000, 1000, seed=42, threads=1)
    b = lln_experiment(0.5, 0.0, 3000, 1000, seed=42, threads=4)
    assert a.values.tobytes() == b.values.tobytes()
    c1 = partition_frequencies(lambda s, r: crp_batch(0, 1, 4, s, r), 4, 150_000, seed=5, threads=1)
    c2 = partition_frequencies(lambda s, r: crp_batch(0, 1, 4, s, r), 4, 150_000, seed=5, threads=3)
    assert c1 == c2


def test_invalid_parameters():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        sample_crp(-1, 1.5, 5, rng)
    with pytest.raises(ValueError):
        sample_crp(0.5, -0.7, 5, rng)
    with pytest.raises(ValueError):
        sample_dirichlet_paintbox(0.5, 3, 5, rng)
    with pytest.raises(ValueError):
        sample_coupon(0, 5, rng)
    with pytest.raises(ValueError):
        exact_mean_Kn(0, 1, 0)
