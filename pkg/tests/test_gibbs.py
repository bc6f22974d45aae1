import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from gibbspart.gibbs import (GibbsLaw, NotRepresentable, TwoParam, VArray, block_count_law,
                             blocks_from_labels, check_addition_rule, classify_gibbs,
                             classify_ratio_weights, compositions, cond_partition_prob,
                             eppf_gibbs, eppf_two_param, one_block_varray, phi_law, phi_varray,
                             phi_weights, psi_v_first_column, psi_weights,
                             restricted_growth_string, set_partition_probability,
                             set_partitions, singleton_varray)
from gibbspart.numerics import NumericalFailure, rising_factorial
from gibbspart.stirling import bell_polynomial, stirling_number, w_weights

NEG_INF = float("-inf")
F = Fraction

PHI_GRID = [(F(-1), m) for m in (1, 2, 3, 4)] + [(F(0), th) for th in (F(1, 2), F(1), F(2))] \
    + [(F(1, 2), th) for th in (F(0), F(1, 2), F(1))] + [(NEG_INF, m) for m in (1, 2, 3, 4)]


def builtin_laws(N):
    laws = [phi_law(a, th if a >= 0 or a == NEG_INF else th * -a, N) for a, th in PHI_GRID]
    laws.append(GibbsLaw(singleton_varray(F(1, 2), N)))
    laws.append(GibbsLaw(one_block_varray(F(-1), N)))
    laws.append(GibbsLaw(phi_varray(0, 1, N).mix(phi_varray(0, 2, N), F(1, 3))))
    return laws


# combinatorics

@pytest.mark.parametrize("n", range(1, 9))
def test_set_partition_count(n):
    parts = list(set_partitions(n))
    assert len(parts) == sympy.bell(n)
    assert len({restricted_growth_string(p, n) for p in parts}) == len(parts)


@pytest.mark.parametrize("n", range(1, 9))
def test_composition_count(n):
    assert len(list(compositions(n))) == 2 ** (n - 1)
    for k in range(1, n + 1):
        assert len(list(compositions(n, k))) == math.comb(n - 1, k - 1)


def test_blocks_from_labels():
    assert blocks_from_labels([5, 5, 2, 5, 7]) == [(1, 2, 4), (3,), (5,)]


# parameters

def test_two_param_domain():
    assert TwoParam(-1, 3).m == 3
    assert TwoParam(F(-1, 2), m=4).theta == 2
    assert TwoParam(-1, math.inf).kind == "singleton"
    assert TwoParam(-1, m=0).kind == "one_block"
    assert TwoParam(NEG_INF, m=3).kind == "coupon"
    assert TwoParam(F(1, 2), F(-1, 2)).kind == "regular"
    for bad in [(-1, F(3, 2)), (F(1, 2), -1), (1, 1), (0, None)]:
        with pytest.raises(ValueError):
            TwoParam(*bad)
    with pytest.raises(ValueError):
        TwoParam(NEG_INF)


# EPPF values

def test_eppf_examples():
    p = TwoParam(F(1, 2), F(1, 2))
    assert eppf_two_param(p, (2,)) == F(1, 3)
    assert eppf_two_param(p, (1, 1)) == F(2, 3)
    for a, th in PHI_GRID:
        assert eppf_two_param(TwoParam(a, th) if a >= 0 else TwoParam(a, m=th), (1,)) == 1
    q = TwoParam(0, 1)
    e = lambda lam: eppf_two_param(q, lam)  # noqa: E731
    assert e((3, 2, 2)) == e((4, 2, 2)) + 2 * e((3, 3, 2)) + e((3, 2, 2, 1))
    law = phi_law(0, 1, 3)
    assert eppf_gibbs(law, (2, 1)) == F(1, 6)
    assert eppf_gibbs(phi_law(NEG_INF, 2, 2), (1, 1)) == F(1, 2)
    with pytest.raises(ValueError):
        eppf_two_param(q, (2, 0))


def test_phi_examples():
    assert phi_weights(0, 1, 2, 1) == F(1, 2)
    assert phi_weights(0, 1, 3, 1) == F(1, 6)
    V = phi_varray(0, 1, 3)
    assert V[2, 1] == 2 * V[3, 1] + V[3, 2]
    assert V[3, 2] == F(1, 6)
    for a, th in PHI_GRID:
        assert phi_weights(a, th if a >= 0 or a == NEG_INF else th * -a, 1, 1) == 1
    assert phi_weights(NEG_INF, 2, 2, 1) == F(1, 2)


@pytest.mark.parametrize("a,th", PHI_GRID, ids=str)
def test_phi_solves_recursion(a, th):
    theta = th if a >= 0 or a == NEG_INF else th * -a
    V = phi_varray(a, theta, 20)
    assert V.exact
    assert all(r == 0 for r in V.recursion_residuals())
    assert V.is_valid()


def test_phi_closed_form_against_direct_product():
    # (theta + alpha)_{k-1, alpha} / (theta + 1)_{n-1} written out as loops
    a, th = F(1, 3), F(5, 7)
    for n in range(1, 9):
        for k in range(1, n + 1):
            num = 1
            for i in range(1, k):
                num *= th + i * a
            den = 1
            for i in range(1, n):
                den *= th + i
            assert phi_weights(a, th, n, k) == F(num) / den


def test_degenerate_phi_laws():
    # V_{2,2} = 0 is the one-block law; m = inf the singleton law
    p0 = TwoParam(-1, m=0)
    for n in range(1, 7):
        for k in range(1, n + 1):
            assert phi_weights(-1, p0, n, k) == (F(1) / rising_factorial(2, n - 1) if k == 1 else 0)
    assert phi_weights(-1, p0, 2, 2) == 0
    sing = TwoParam(0, math.inf)
    for lam in compositions(5):
        assert eppf_two_param(sing, lam) == (1 if set(lam) == {1} else 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_eppf_sums_to_one(n):
    for law in builtin_laws(8):
        total = sum(set_partition_probability(law, b) for b in set_partitions(n))
        assert total == 1


@pytest.mark.parametrize("a,th", PHI_GRID, ids=str)
def test_two_param_matches_gibbs(a, th):
    theta = th if a >= 0 or a == NEG_INF else th * -a
    law = phi_law(a, theta, 8)
    p = TwoParam(a, m=theta) if a == NEG_INF else TwoParam(a, theta)
    for n in range(1, 9):
        for lam in compositions(n):
            assert eppf_two_param(p, lam) == eppf_gibbs(law, lam)


def test_eppf_symmetry():
    for law in builtin_laws(7):
        for n in range(1, 8):
            for lam in compositions(n):
                vals = {eppf_gibbs(law, perm) for perm in set(itertools.permutations(lam))}
                assert len(vals) == 1


def test_addition_rule_exact():
    assert check_addition_rule(TwoParam(F(1, 2), F(1, 2)), 7).violations == []
    for law in builtin_laws(8):
        rep = check_addition_rule(law, 7)
        assert rep.ok and rep.max_residual == 0
        assert rep.checked == 2 ** 7 - 1


def test_addition_rule_detects_corruption():
    V = phi_varray(F(1, 2), F(1, 2), 8)
    rows = [list(r) for r in V.rows]
    rows[4][2] += F(1, 1000)
    bad = GibbsLaw(VArray(V.alpha, tuple(tuple(r) for r in rows)))
    assert not check_addition_rule(bad, 7).ok
    with pytest.raises(ValueError):
        check_addition_rule(bad, 8)


@given(st.fractions(0, 1), st.sampled_from([(F(-1), 1), (F(-1), 3), (F(0), 1), (F(0), 2)]),
       st.sampled_from([(F(-1), 2), (F(0), F(1, 2))]))
def test_mixtures_stay_in_class(w, pa, pb):
    if pa[0] != pb[0]:
        pb = (pa[0], 2 if pa[0] == 0 else 4)
    A = phi_varray(pa[0], pa[1], 9)
    B = phi_varray(pb[0], pb[1], 9)
    M = A.mix(B, w)
    assert M.is_valid()
    assert check_addition_rule(GibbsLaw(M), 6).ok


def test_block_count_law_examples():
    assert block_count_law(phi_law(0, 1, 3), 3) == [F(1, 3), F(1, 2), F(1, 6)]
    assert block_count_law(GibbsLaw(singleton_varray(0, 5)), 5) == [0, 0, 0, 0, 1]
    assert block_count_law(phi_law(NEG_INF, 2, 2), 2)[0] == F(1, 2)
    for n in range(1, 8):
        law = block_count_law(phi_law(0, 1, n), n)
        # uniform permutation: cycle counts are c(n,k)/n!
        assert law == [F(stirling_number(n, k, 0), math.factorial(n)) for k in range(1, n + 1)]


def test_cond_partition_prob():
    assert cond_partition_prob(0, [(1, 2), (3,)], 2) == F(1, 3)
    assert cond_partition_prob(F(1, 2), [(1,), (2,), (3,)], 3) == 1
    for k in range(1, 5):
        total = sum(cond_partition_prob(F(1, 2), b, k) for b in set_partitions(4) if len(b) == k)
        assert total == 1
    with pytest.raises(ValueError):
        cond_partition_prob(0, [(1, 2)], 2)


def test_varray_csv_round_trip():
    V = phi_varray(F(1, 2), F(1, 3), 6)
    assert VArray.from_csv(F(1, 2), V.to_csv()) == V
    Vf = psi_weights(0.5, 1.0, 5)
    back = VArray.from_csv(0.5, Vf.to_csv())
    assert back.rows == Vf.rows


# classification

def _p_table(eppf, n_max=5):
    return {lam: eppf(lam) for n in range(1, n_max + 1) for lam in compositions(n)}


@pytest.mark.parametrize("a,th", PHI_GRID, ids=str)
def test_classify_round_trip(a, th):
    p = TwoParam(a, m=th) if a == NEG_INF or a < 0 else TwoParam(a, th)
    if p.m == 1:
        # one block of m=1 means K_n = 1: same EPPF as the one-block law
        res = classify_gibbs(_p_table(lambda lam: eppf_two_param(p, lam)))
        assert res.kind == "trivial" and res.detail == "one_block"
        return
    res = classify_gibbs(_p_table(lambda lam: eppf_two_param(p, lam)))
    assert res.kind == "gibbs" and res.alpha == a


def test_classify_mixture_and_trivial():
    A, B = phi_law(0, 1, 6), phi_law(0, 2, 6)
    mix = _p_table(lambda lam: (eppf_gibbs(A, lam) + eppf_gibbs(B, lam)) / 2)
    assert classify_gibbs(mix).alpha == 0
    sing = _p_table(lambda lam: eppf_gibbs(GibbsLaw(singleton_varray(0, 6)), lam))
    assert classify_gibbs(sing).detail == "singleton"
    one = _p_table(lambda lam: eppf_gibbs(GibbsLaw(one_block_varray(0, 6)), lam))
    assert classify_gibbs(one).detail == "one_block"


def test_classify_flags_perturbation():
    p = _p_table(lambda lam: eppf_two_param(TwoParam(F(1, 2), F(1, 2)), lam))
    p[(2,)] += F(1, 100)
    res = classify_gibbs(p)
    assert res.kind == "not_gibbs" and res.addition_violations


def test_classify_needs_n4():
    with pytest.raises(ValueError):
        classify_gibbs(_p_table(lambda lam: eppf_two_param(TwoParam(0, 1), lam), 3))


def test_classify_ratio_weights():
    a, b, t = F(1, 2), F(1), F(1)
    V_k = [rising_factorial(t + a, k - 1, a) for k in range(1, 8)]
    c_n = [rising_factorial(t + b, n - 1, b) for n in range(1, 8)]
    p = classify_ratio_weights(V_k, c_n)
    assert (p.alpha, p.theta) == (F(1, 2), F(1))
    th = F(2)
    p = classify_ratio_weights([th ** k for k in range(1, 8)],
                               [rising_factorial(th, n) for n in range(1, 8)])
    assert (p.alpha, p.theta) == (0, 2)
    with pytest.raises(NotRepresentable) as ei:
        classify_ratio_weights([1, 2, 3, 5, 8, 13], [1] * 6)
    assert ei.value.index >= 1


def test_classify_ratio_weights_negative_and_coupon():
    # phi(-1, 3): V_k = (3)_{k}↓ style weights, c_n = (4)_{n-1}
    V = phi_varray(-1, 3, 7)
    c_n = [rising_factorial(4, n - 1) for n in range(1, 8)]
    V_k = [V[7, k] * c_n[6] for k in range(1, 8)]
    p = classify_ratio_weights(V_k, c_n)
    assert p.alpha == -1 and p.m == 3
    c_n = [F(3) ** (n - 1) for n in range(1, 8)]
    V_k = [phi_weights(NEG_INF, 3, 7, k) * c_n[6] for k in range(1, 8)]
    p = classify_ratio_weights(V_k, c_n)
    assert p.alpha == NEG_INF and p.m == 3


# psi

def test_psi_dual_forms_agree():
    a = psi_v_first_column(0.5, 1.0, 2)
    b = psi_v_first_column(0.5, 1.0, 2, method="stable")
    assert abs(a - b) < 1e-8
    for alpha in (0.2, 0.5, 0.8):
        for s in (0.3, 1.0, 3.0):
            for n in (2, 4, 7):
                x = psi_v_first_column(alpha, s, n)
                y = psi_v_first_column(alpha, s, n, method="stable")
                assert x == pytest.approx(y, rel=1e-9)


def test_psi_endpoints():
    for alpha in (0.3, 0.5, 0.7):
        for n in (2, 3, 5):
            W = float(rising_factorial(1 - alpha, n - 1))
            assert psi_v_first_column(alpha, 0.0, n) * W == pytest.approx(1, rel=1e-14)
            assert psi_v_first_column(alpha, 1e-3, n) * W == pytest.approx(1, abs=1e-2)
            assert psi_v_first_column(alpha, math.inf, n) == 0
        assert psi_v_first_column(alpha, math.inf, 1) == 1


def test_psi_half_first_moment_check():
    # for alpha = 1/2, n = 2 the integrand is explicit; compare with mpmath
    import mpmath
    s, al = 1.0, 0.5
    g = lambda x: mpmath.exp(-x * x / 4) / mpmath.sqrt(mpmath.pi)  # noqa: E731
    f = lambda y: y ** (1 - al) * (1 - y) ** (-1 - al) * g(s * (1 - y) ** (-al))  # noqa: E731
    val = s * al / (math.gamma(1 - al) * float(g(s))) * mpmath.quad(f, [0, 0.5, 0.9, 0.99, 1])
    assert psi_v_first_column(al, s, 2) * (1 - al) == pytest.approx(float(val), rel=1e-9)


def test_psi_weights_valid():
    V = psi_weights(0.5, 1.0, 10)
    assert V[1, 1] == 1
    assert V.min_entry() >= -1e-8
    W = w_weights(0.5, 10)
    for n in range(1, 11):
        assert sum(V[n, k] * bell_polynomial(n, k, W) for k in range(1, n + 1)) == \
            pytest.approx(1, abs=1e-6)
    assert V.max_relative_residual() < 1e-10


def test_psi_weights_strict_failure():
    with pytest.raises(NumericalFailure):
        psi_weights(0.5, 1.0, 40)
    V = psi_weights(0.5, 1.0, 40, strict=False)
    assert V.min_entry() < -1e-8
