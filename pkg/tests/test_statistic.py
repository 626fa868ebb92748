from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treecorr.counting import all_colorings, brute_WH, colorful_probability, xh_dp
from treecorr.graphs import (
    Graph,
    ParameterError,
    center,
    complement,
    sample_correlated_pair,
    sample_independent_pair,
)
from treecorr.statistic import (
    StatConfig,
    beta,
    default_t,
    evaluate,
    f_exact,
    f_tilde,
    g_exact,
    gamma_h,
    scale_factors,
    threshold,
    z_tilde,
)
from treecorr.trees import enumerate_free_trees, path_tree, sub_n


def test_beta_examples():
    assert beta(5, 2, 0.5, 0.5) == pytest.approx(4 / 60, rel=1e-15)
    assert beta(2, 1, 0.5, 1.0) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(ParameterError):
        beta(3, 3, 0.5, 0.5)


@given(st.integers(8, 3000), st.integers(1, 7), st.floats(0.01, 0.99), st.floats(0.05, 1.0))
def test_beta_matches_factorials(n, k, q, rho):
    want = (rho / (q * (1 - q))) ** k / math.perm(n, k + 1)
    assert beta(n, k, q, rho) == pytest.approx(want, rel=1e-12)


def test_threshold_examples():
    assert threshold(StatConfig(k=7, rho=0.99)) == pytest.approx(9.99, abs=0.005)
    assert threshold(StatConfig(k=6, rho=1.0)) == 5.5


def test_scale_identity():
    n, q, rho = 30, 0.2, 0.7
    fam = enumerate_free_trees(4)
    sf = scale_factors(n, fam, q, rho)
    for h, a_h in zip(fam, sf.a_h):
        assert sf.beta * h.aut == pytest.approx(a_h * sf.sigma2 ** (-fam.k), rel=1e-12)


def test_beta_sign_rule():
    assert beta(10, 3, 0.3, -0.2) < 0
    assert beta(10, 2, 0.3, -0.2) > 0


def test_gamma_example():
    # 2-edge path, n=4, q=0.5: 4 * 3! * 0.25 / 2
    assert gamma_h(path_tree(2), 4, 0.5) == 3.0


def test_gamma_is_the_mean_count():
    n, q, draws = 8, 0.3, 3000
    h = path_tree(2)
    counts = np.array([brute_WH(sample_independent_pair(n, q, (1, i))[0], h) for i in range(draws)])
    se = counts.std(ddof=1) / math.sqrt(draws)
    assert abs(counts.mean() - gamma_h(h, n, q)) <= 3 * se


def test_complete_graph_count_is_sub_n():
    kn = Graph(7, [(i, j) for i in range(7) for j in range(i + 1, 7)])
    for h in enumerate_free_trees(4):
        assert brute_WH(kn, h) == sub_n(h, 7)


def test_config_validation():
    with pytest.raises(ParameterError, match="edge-count"):
        StatConfig(k=3, rho=0.0)
    with pytest.raises(ParameterError):
        StatConfig(k=3, rho=0.5, c=1.0)
    with pytest.raises(ParameterError):
        StatConfig(k=0, rho=0.5)
    with pytest.raises(ParameterError):
        StatConfig(k=3, rho=0.5, mode="bogus")
    assert StatConfig(k=3, rho=0.5, mode="signed-cc").mode == "signed"
    assert StatConfig(k=3, rho=0.5, mode="unsigned-cc").mode == "unsigned"
    assert StatConfig(k=5, rho=0.5).colorings == default_t(5) == 65


def pair(n, q, rho, seed):
    p = sample_correlated_pair(n, q, rho, seed)
    return p.a, p.b


def test_f_exact_by_hand_k1():
    a = Graph(3, [(0, 1)], q=0.5)
    b = Graph(3, [(0, 1), (1, 2)], q=0.5)
    cfg = StatConfig(k=1, rho=0.5, mode="exact")
    wa = math.fsum(center(a).values[np.triu_indices(3, 1)])
    wb = math.fsum(center(b).values[np.triu_indices(3, 1)])
    want = beta(3, 1, 0.5, 0.5) * 2 * wa * wb
    assert f_exact(a, b, cfg).value == pytest.approx(want, rel=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_complement_invariance_bit_exact(seed):
    a, b = pair(9, 0.25, 0.6, seed)
    cfg = StatConfig(k=3, rho=0.6, mode="exact")
    assert f_exact(a, b, cfg).value == f_exact(complement(a), complement(b), cfg).value


@pytest.mark.parametrize("seed", range(5))
def test_relabel_invariance_bit_exact(seed):
    a, b = pair(9, 0.3, 0.6, seed)
    gen = np.random.default_rng(seed)
    cfg = StatConfig(k=3, rho=0.6, mode="exact")
    base = f_exact(a, b, cfg).value
    assert f_exact(a.relabel(gen.permutation(9)), b, cfg).value == base
    assert f_exact(a, b.relabel(gen.permutation(9)), cfg).value == base


def _all_coloring_means(g, m, k):
    cols = all_colorings(g.n, k)
    return [math.fsum(xh_dp(m, h, None, cols)) / len(cols) for h in enumerate_free_trees(k)]


@pytest.mark.parametrize("k", [1, 2])
def test_ftilde_unbiased_over_all_colorings(k):
    a, b = pair(5, 0.5, 0.8, 3)
    xa = _all_coloring_means(a, center(a).values, k)
    xb = _all_coloring_means(b, center(b).values, k)
    y = math.fsum(h.aut * x * z for h, x, z in zip(enumerate_free_trees(k), xa, xb))
    r = colorful_probability(k)
    want = f_exact(a, b, StatConfig(k=k, rho=0.8, q=0.5, mode="exact")).value
    assert beta(5, k, 0.5, 0.8) * y / r**2 == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_unsigned_unbiased_over_all_colorings():
    k, q = 2, 0.5
    a, b = pair(5, q, 0.8, 4)
    r = colorful_probability(k)
    fam = enumerate_free_trees(k)
    xa = _all_coloring_means(a, a.adjacency(), k)
    xb = _all_coloring_means(b, b.adjacency(), k)
    z = math.fsum(
        h.aut * (x - r * gamma_h(h, 5, q)) * (w - r * gamma_h(h, 5, q)) for h, x, w in zip(fam, xa, xb)
    )
    g = g_exact(a, b, StatConfig(k=k, rho=0.8, q=q, mode="unsigned-exact")).value
    assert beta(5, k, q, 0.8) * z / r**2 == pytest.approx(g, rel=1e-9, abs=1e-12)


def test_identical_graphs_give_positive_mean():
    cfg = StatConfig(k=2, rho=0.8, q=0.5, mode="exact")
    vals = [f_exact(a, a, cfg).value for a, _ in (sample_independent_pair(8, 0.5, (2, i)) for i in range(100))]
    assert np.mean(vals) > 0


def test_zero_matrix_counts_vanish():
    for h in enumerate_free_trees(3):
        assert xh_dp(np.zeros((6, 6)), h, None, np.arange(6) % 4) == 0.0


def test_mse_decreases_with_colorings():
    a, b = pair(12, 0.3, 0.9, 5)
    exact = f_exact(a, b, StatConfig(k=3, rho=0.9, q=0.3, mode="exact")).value
    mse = []
    for t in (10, 100, 1000):
        cfg = StatConfig(k=3, rho=0.9, q=0.3, t=t)
        errs = [(f_tilde(a, b, cfg, (t, s)).value - exact) ** 2 for s in range(20)]
        mse.append(np.mean(errs))
    assert mse[0] > mse[1] > mse[2]


def test_estimators_are_deterministic():
    a, b = pair(40, 0.2, 0.9, 1)
    cfg = StatConfig(k=3, rho=0.9, q=0.2, t=20)
    r1, r2 = f_tilde(a, b, cfg, (1, 2)), f_tilde(a, b, cfg, (1, 2))
    assert r1.value == r2.value
    assert f_tilde(a, b, cfg, (1, 3)).value != r1.value
    assert z_tilde(a, b, cfg, 5).value == z_tilde(a, b, cfg, 5).value


def test_many_colorings_approach_exact():
    a, b = pair(10, 0.3, 0.9, 2)
    exact = evaluate(a, b, StatConfig(k=2, rho=0.9, q=0.3, mode="exact")).value
    est = evaluate(a, b, StatConfig(k=2, rho=0.9, q=0.3, t=40000), seed=7).value
    assert est == pytest.approx(exact, rel=0.1)


def test_evaluate_dispatch_and_decision():
    a, b = pair(8, 0.5, 0.9, 0)
    for mode in ("exact", "signed", "unsigned", "unsigned-exact"):
        res = evaluate(a, b, StatConfig(k=2, rho=0.9, q=0.5, t=10, mode=mode), seed=1)
        assert res.decision == ("correlated" if res.value >= res.threshold else "independent")
        assert res.correlated == (res.decision == "correlated")
        assert res.wall_ms >= 0


def test_size_mismatch():
    with pytest.raises(ParameterError):
        evaluate(Graph(5, [(0, 1)]), Graph(6, [(0, 1)]), StatConfig(k=2, rho=0.5, mode="exact"))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0.25, 0.5, 0.125]))
def test_complement_property(seed, q):
    a, b = pair(7, q, 0.5, seed)
    cfg = StatConfig(k=2, rho=0.5, mode="exact")
    assert f_exact(a, b, cfg).value == f_exact(complement(a), complement(b), cfg).value
