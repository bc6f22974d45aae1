import math
from fractions import Fraction

import numpy as np
import pytest

from gibbspart.boundary import (BackwardSampler, GradedGraph, conditional_law, const_path,
                                cotransition, dimension, level_profile, log_path,
                                monotonicity_check, parse_graph, parse_path, pascal_graph,
                                path_limit, pathology_diagnostic, pathology_graph,
                                pathology_masses, power_path, qpascal_graph, reconstruct_rows,
                                sample_backward, stirling_graph, table_path, vn1_closed)
from gibbspart.gibbs import phi_weights
from gibbspart.numerics import log_rising_factorial
from gibbspart.stirling import dimension_column, stirling_number, stirling_spec

NEG_INF = float("-inf")
F = Fraction
ALPHAS = [F(-2), F(-1), F(-1, 2), F(0), F(1, 4), F(1, 2), F(3, 4), NEG_INF]


def test_dimension_examples():
    assert dimension(pascal_graph(), (4, 2)) == 6
    g = pathology_graph(20)
    for nu in range(2, 21):
        assert dimension(g, ("b", nu)) == 2 * (nu - 1)
    assert dimension(g, ("root", 0)) == 1
    assert dimension(g, ("z", 3)) == 0
    sg = stirling_graph(F(1, 2))
    for n in range(1, 9):
        for k in range(1, n + 1):
            assert dimension(sg, (n, k)) == stirling_number(n, k, F(1, 2))
    ld = dimension(sg, (300, 4), mode="log")
    assert ld.log == pytest.approx(stirling_number(300, 4, 0.5, "log").log, rel=1e-12)


def test_conditional_law_examples():
    g0 = stirling_graph(0)
    assert conditional_law(g0, (3, 2), 2) == {(2, 1): F(1, 3), (2, 2): F(2, 3)}
    law = conditional_law(g0, (6, 3), 6)
    assert law[(6, 3)] == 1 and sum(law.values()) == 1
    pg = pascal_graph()
    for nu in range(1, 13):
        for kappa in range(0, nu + 1):
            rows = pg.profile_rows((nu, kappa), nu, "exact")
            for n in range(0, nu + 1):
                for k in range(0, n + 1):
                    assert rows[n][k] == F(math.comb(nu - n, kappa - k) if kappa >= k else 0,
                                           math.comb(nu, kappa))


def test_conditional_law_errors():
    with pytest.raises(ValueError):
        conditional_law(stirling_graph(0), (3, 2), 4)


def test_conditional_law_log_mode_matches_exact():
    g = stirling_graph(F(1, 2))
    ex = conditional_law(g, (40, 6), 5, mode="exact")
    lg = conditional_law(g, (40, 6), 5, mode="log")
    for v in ex:
        assert lg[v] == pytest.approx(float(ex[v]), rel=1e-11, abs=1e-300)


def test_cotransition_examples():
    g0 = stirling_graph(0)
    assert cotransition(g0, (2, 1), (3, 2)) == F(1, 3)
    for k in (1, 2):
        assert cotransition(g0, (1, 1), (2, k)) == 1
    pg = pathology_graph(12)
    for nu in range(2, 13):
        # chain from b_nu reaches a_1 with probability 1/2
        assert conditional_law(pg, ("b", nu), 1)[("a", 1)] == F(1, 2)


def _compose_cotransitions(graph, target, n):
    probs = {target: F(1)}
    for m in range(graph.level(target), n, -1):
        nxt = {}
        for v, p in probs.items():
            for u, _ in graph.predecessors(v):
                nxt[u] = nxt.get(u, 0) + p * cotransition(graph, u, v)
        probs = nxt
    return probs


@pytest.mark.parametrize("graph", [stirling_graph(F(1, 2)), stirling_graph(NEG_INF),
                                   stirling_graph(-2), pascal_graph(), qpascal_graph(F(3)),
                                   pathology_graph(12)], ids=lambda g: g.name)
def test_cotransition_composition(graph):
    top = 12
    targets = graph.nodes(top)
    for t in targets[: 4]:
        if dimension(graph, t) == 0:
            continue
        for n in range(graph.level(graph.root), top + 1, 3):
            law = conditional_law(graph, t, n, mode="exact")
            comp = _compose_cotransitions(graph, t, n)
            assert {v: p for v, p in law.items() if p} == {v: p for v, p in comp.items() if p}


@pytest.mark.parametrize("alpha", ALPHAS, ids=str)
def test_vn1_closed_matches_dp(alpha):
    g = stirling_graph(alpha)
    for nu in range(1, 13):
        for kappa in range(1, nu + 1):
            for n in range(1, nu + 1):
                law = conditional_law(g, (nu, kappa), n, mode="exact")
                assert vn1_closed(alpha, n, nu, kappa) == law[(n, 1)]


def test_vn1_examples_and_log():
    assert vn1_closed(0, 2, 3, 2) == F(1, 3)
    assert vn1_closed(F(1, 2), 5, 5, 1) == 1
    assert vn1_closed(F(1, 3), 50, 400, 7, mode="log") == pytest.approx(
        float(vn1_closed(F(1, 3), 50, 400, 7, mode="exact")), rel=1e-10)
    with pytest.raises(IndexError):
        vn1_closed(0, 4, 3, 2)


@pytest.mark.parametrize("alpha", ALPHAS, ids=str)
def test_monotonicity(alpha):
    for nu in range(2, 13):
        for n in range(1, nu + 1):
            assert monotonicity_check(alpha, n, nu).ok


def test_monotonicity_pascal():
    rep = monotonicity_check(pascal_graph(), 3, 12)
    assert rep.ok and rep.values[0] == 1


def test_disc_regime_block_count_tends_to_one():
    # P(K_n = m) under phi(-1, m) is nondecreasing in n and tends to 1
    spec = stirling_spec(-1)
    for m in range(1, 5):
        col = dimension_column(spec, m, 2000, "log")
        prev = 0.0
        for n in range(m, 2001):
            logphi_n = math.lgamma(m) - log_rising_factorial(m + 1.0, n - 1)
            p = math.exp(logphi_n + col[n])
            assert p >= prev - 1e-10
            prev = p
        assert prev > 1 - 2 * m * m / 2000
    # spot check against the exact value at small n
    assert math.exp(math.lgamma(3) - log_rising_factorial(4.0, 9) + dimension_column(spec, 3, 10, "log")[10]) \
        == pytest.approx(float(phi_weights(-1, 3, 10, 3) * stirling_number(10, 3, -1)), rel=1e-12)


# path limits

def test_pascal_path_limit():
    s = 0.3
    est = path_limit(pascal_graph(), power_path(s, 1.0), probes=(1000, 2500, 5000, 10_000), n_max=5)
    for n in range(0, 6):
        for k in range(0, n + 1):
            assert abs(est.estimates[n][k] - s ** k * (1 - s) ** (n - k)) < 1e-3
    assert est.verdict == "converged"
    assert est.recursion_residual < 10 * est.tol


def test_ewens_log_path():
    est = path_limit(stirling_graph(0), log_path(2.0), probes=(1000, 10_000, 100_000), n_max=4)
    assert est.first_columns[-1][0] == pytest.approx(1 / 3, rel=0.05)


def test_discrete_path_limit():
    target = [float(phi_weights(-1, 2, n, 1)) for n in range(2, 6)]
    for nu, tol in ((200, 2e-3), (400, 1e-3)):
        est = path_limit(stirling_graph(-1), const_path(2), probes=(nu,), n_max=5, mode="exact")
        assert est.mode == "exact"
        for got, want in zip(est.first_columns[-1], target):
            assert abs(float(got) - want) < tol


def test_cont_regime_verdicts():
    g = stirling_graph(0.5)
    est = path_limit(g, power_path(1.0, 0.5), n_max=4)
    assert est.verdict == "converged"
    assert est.recursion_residual < 10 * est.tol
    probes = (1000, 2000, 4000, 8000, 16000)
    osc = table_path({nu: round((1 if i % 2 else 2) * math.sqrt(nu)) for i, nu in enumerate(probes)},
                     "oscillating")
    assert path_limit(g, osc, probes=probes, n_max=3).verdict == "diverged"


def test_reconstruct_rows_exact():
    g = stirling_graph(F(1, 2))
    rows = g.profile_rows((12, 4), 8, "exact")
    rebuilt = reconstruct_rows(g, [r[0] for r in rows], 8)
    assert rebuilt == rows


def test_path_limit_is_thread_independent():
    g = stirling_graph(0.5)
    a = path_limit(g, power_path(1.0, 0.5), probes=(300, 600, 1200), n_max=3, workers=1)
    b = path_limit(g, power_path(1.0, 0.5), probes=(300, 600, 1200), n_max=3, workers=3)
    assert a.to_json() == b.to_json()


def test_parse_path_and_graph(tmp_path):
    assert parse_path("2*nu^0.5")(100) == 20
    assert parse_path("3*log(nu)")(1000) == round(3 * math.log(1000))
    assert parse_path("const:4")(10 ** 6) == 4
    f = tmp_path / "path.csv"
    f.write_text("nu,kappa\n100,3\n200,5\n")
    assert parse_path(str(f))(200) == 5
    with pytest.raises(ValueError):
        parse_path("nu squared")
    assert parse_graph("stirling:-1/2").spec.alpha == F(-1, 2)
    assert parse_graph("qpascal:2").spec.q == 2
    assert parse_graph("pathology", 10).top_level == 10
    with pytest.raises(ValueError):
        parse_graph("hexagon")


# pathology example

def test_pathology_structure():
    g = pathology_graph(5)
    assert g.nodes(1) == [("a", 1), ("c", 1)]
    assert sorted(u for u, _ in g.predecessors(("b", 3))) == [("a", 2), ("b", 2), ("c", 2)]
    with pytest.raises(ValueError):
        pathology_graph(2)
    with pytest.raises(ValueError):
        GradedGraph([["r"], ["x"]], {"r": [("x", -1)]}, "r")


def test_pathology_masses():
    for nu in range(3, 21):
        g = pathology_graph(nu)
        for n in range(2, nu + 1):
            closed = pathology_masses(nu, n)
            assert level_profile(g, ("b", nu), n, mode="exact") == closed["profile"]
            assert conditional_law(g, ("b", nu), n, mode="exact") == closed["law"]
            t = nu - n
            assert closed["profile"][("b", n)] == F(1, 2 * t + 1)
    # both tend to (1/2, 0, 1/2) at a fixed level
    prof = pathology_masses(10 ** 6, 3)["profile"]
    assert float(prof[("a", 3)]) == pytest.approx(0.5, abs=1e-6)
    assert float(prof[("b", 3)]) < 1e-6
    point = conditional_law(pathology_graph(10), ("a", 10), 4, mode="exact")
    assert point[("a", 4)] == 1 and point[("b", 4)] == 0


def test_pathology_diagnostic():
    d = pathology_diagnostic(1000, 10, 2000, seed=7)
    assert abs(d["fraction_b"] - d["exact_fraction_b"]) < 3 * d["stderr_b"] + 1e-12
    se = math.sqrt(0.25 / 2000)
    assert abs(d["fraction_through_a1"] - 0.5) < 3 * se
    assert pathology_diagnostic(1000, 10, 2000, seed=7) == d


# backward sampling

def test_backward_sampler_matches_hypergeometric():
    g = pascal_graph()
    nu, kappa, n = 40, 15, 10
    paths = BackwardSampler(g, (nu, kappa)).sample(np.random.default_rng(3), 10_000)
    ks = paths[:, n]
    for k in range(0, n + 1):
        p = math.comb(n, k) * math.comb(nu - n, kappa - k) / math.comb(nu, kappa)
        se = math.sqrt(p * (1 - p) / 10_000)
        assert abs(np.mean(ks == k) - p) <= 3 * se + 1e-12


def test_sample_backward_pathology_and_root():
    g = pathology_graph(100)
    rng = np.random.default_rng(11)
    hits = sum(sample_backward(g, ("b", 100), rng)[1] == ("a", 1) for _ in range(4000))
    assert abs(hits / 4000 - 0.5) < 3 * math.sqrt(0.25 / 4000)
    sg = stirling_graph(0)
    assert sample_backward(sg, (1, 1), rng) == [(1, 1)]
    p = sample_backward(sg, (9, 4), rng)
    assert p[0] == (1, 1) and p[-1] == (9, 4)
    assert all(b[0] == a[0] + 1 and b[1] - a[1] in (0, 1) for a, b in zip(p, p[1:]))
