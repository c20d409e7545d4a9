import math
import warnings

import numpy as np
import pytest
from scipy.linalg import solve_banded

from netinterp.chain import (
    DistanceChain,
    UnsupportedRegimeError,
    approx_limiting_distribution,
    empirical_hitting_time,
    exact_limiting_distribution,
    expected_hitting_time,
    fit_rate,
    layer_uniformity_oracle,
)
from netinterp.graph import Graph
from netinterp.interpolate import InterpolationConfig


def power_iteration_average(P: np.ndarray, tol: float = 1e-15, max_iter: int = 2_000_000) -> np.ndarray:
    """Time-averaged stationary vector of a period-2 chain: average two consecutive iterates."""
    x = np.full(P.shape[0], 1.0 / P.shape[0])
    for _ in range(max_iter):
        y = x @ P
        z = y @ P
        if np.abs(z - x).sum() < tol:
            break
        x = z
    avg = 0.5 * (x + x @ P)
    return avg / avg.sum()


def hitting_time_oracle(d_o: int, d_t: int, chain: DistanceChain) -> float:
    """Solve h_i = 1 + phi(i) h_{i-1} + (1 - phi(i)) h_{i+1} on i = d_t+1..d_m with h_{d_t} = 0."""
    idx = np.arange(d_t + 1, chain.d_m + 1)
    m = len(idx)
    ab = np.zeros((3, m))
    for r, i in enumerate(idx):
        a = chain.phi(int(i))
        ab[1, r] = 1.0
        if r > 0:
            ab[2, r - 1] = -a
        if r < m - 1:
            ab[0, r + 1] = -(1.0 - a)
    h = solve_banded((1, 1), ab, np.ones(m))
    return float(h[d_o - d_t - 1])


def test_transition_matrix_is_stochastic_birth_death():
    ch = DistanceChain.logistic(30, 2.0, 7)
    P = ch.transition_matrix()
    assert np.allclose(P.sum(axis=1), 1.0, atol=1e-15)
    assert P[0, 1] == 1.0 and P[30, 29] == 1.0 and P[7, 6] == 0.5
    assert np.count_nonzero(P - np.diag(np.diag(P, 1), 1) - np.diag(np.diag(P, -1), -1)) == 0


def test_two_state_chain():
    dist = exact_limiting_distribution(DistanceChain.logistic(1, 1.0, 0))
    assert dist.weights.tolist() == [0.5, 0.5]


@pytest.mark.parametrize("s,d_t", [(1.0, 10), (10.0, 10), (0.5, 3), (5.0, 30)])
def test_exact_matches_power_iteration(s, d_t):
    ch = DistanceChain.logistic(60, s, d_t)
    exact = exact_limiting_distribution(ch).weights
    oracle = power_iteration_average(ch.transition_matrix())
    assert 0.5 * np.abs(exact - oracle).sum() < 1e-10
    assert exact.sum() == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("d_m,s,d_t", [(60, 1.0, 10), (1225, 1.0, 10), (1225, 10.0, 10), (5000, 0.3, 100)])
def test_detailed_balance(d_m, s, d_t):
    ch = DistanceChain.logistic(d_m, s, d_t)
    v = exact_limiting_distribution(ch).weights
    up = np.array([1.0 - ch.phi(i) for i in range(d_m)])
    down = np.array([ch.phi(i + 1) for i in range(d_m)])
    assert np.max(np.abs(v[:-1] * up - v[1:] * down)) < 1e-12
    assert np.all(v >= 0)


def test_closed_form_close_to_exact_for_small_rate():
    exact = exact_limiting_distribution(DistanceChain.logistic(1225, 1.0, 10)).as_dict()
    approx = approx_limiting_distribution(10, 1.0, d_m=1225)
    gaps = [abs(exact[k] - w) for k, w in approx.as_dict().items()]
    assert max(gaps) < 1e-3
    assert approx.weights.sum() == pytest.approx(1.0, abs=1e-12)


def test_closed_form_is_symmetric_and_degrades_with_spread():
    approx = approx_limiting_distribution(10, 10.0, d_m=1225).as_dict()
    for k in range(1, 10):
        assert approx[10 + k] == approx[10 - k]
    exact = exact_limiting_distribution(DistanceChain.logistic(1225, 10.0, 10)).as_dict()
    gap10 = max(abs(exact[k] - w) for k, w in approx.items())
    exact1 = exact_limiting_distribution(DistanceChain.logistic(1225, 1.0, 10)).as_dict()
    gap1 = max(abs(exact1[k] - w) for k, w in approx_limiting_distribution(10, 1.0).as_dict().items())
    assert gap10 > gap1


def test_closed_form_warns_on_violated_hypotheses():
    with pytest.warns(UserWarning):
        res = approx_limiting_distribution(1, 1.0)
    assert res.warnings
    with pytest.warns(UserWarning):
        approx_limiting_distribution(10, 1.0, d_m=15)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        approx_limiting_distribution(10, 1.0, d_m=100)


@pytest.mark.parametrize("s", [0.5, 1.0, 5.0, 10.0])
@pytest.mark.parametrize("d_t", [0, 2, 10])
def test_hitting_time_matches_linear_system(s, d_t):
    for d_m in (40, 300, 2000):
        ch = DistanceChain.logistic(d_m, s, d_t)
        for d_o in sorted({d_t + 1, d_t + 7, d_m // 2, d_m - 3, d_m}):
            if d_o <= d_t:
                continue
            h, _ = expected_hitting_time(d_o, d_t, d_m, s)
            ref = hitting_time_oracle(d_o, d_t, ch)
            assert h == pytest.approx(ref, rel=1e-10), (d_m, d_o)


def test_hitting_time_term_counts():
    assert expected_hitting_time(1000, 10, 100_000, 1.0)[1] == 9
    assert expected_hitting_time(1000, 10, 100_000, 10.0)[1] == 27


def test_hitting_time_edge_cases():
    assert expected_hitting_time(10, 10, 100, 1.0) == (0.0, 0)
    h, _ = expected_hitting_time(20, 10, 1000, 0.01)
    assert h == pytest.approx(10.0, abs=1e-6)
    with pytest.raises(UnsupportedRegimeError):
        expected_hitting_time(5, 10, 100, 1.0)
    with pytest.raises(ValueError):
        expected_hitting_time(200, 10, 100, 1.0)
    with pytest.raises(ValueError):
        expected_hitting_time(20, 10, 100, 0.0)


def test_hitting_time_increases_with_rate():
    hs = [expected_hitting_time(500, 0, 10**6, s)[0] for s in (1, 5, 25, 125, 625)]
    assert all(a < b for a, b in zip(hs, hs[1:]))


def test_fit_rate():
    assert fit_rate(100, 0, 10**5, 100) == 50
    fits = [fit_rate(500, 0, 10**6, t, grid_step=10) for t in (600, 900, 1400, 2500, 5000)]
    assert fits == sorted(fits)
    # the fitted grid value is at least as close as its neighbours
    s = fit_rate(500, 0, 10**6, 2500, grid_step=10)
    gap = lambda x: abs(expected_hitting_time(500, 0, 10**6, x)[0] - 2500)
    assert gap(s) <= gap(s + 10) and (s == 10 or gap(s) <= gap(s - 10))
    with pytest.raises(ValueError):
        fit_rate(100, 0, 10**5, 50)


def test_empirical_hitting_time_zero_when_already_there():
    g = Graph(5, [(0, 1)])
    h = Graph(5, [(0, 1), (1, 2), (2, 3)])
    sample = empirical_hitting_time(g, h, InterpolationConfig(s=1.0, d_t=2), trials=5)
    assert sample.times.tolist() == [0.0] * 5
    assert sample.seeds == [0, 1, 2, 3, 4]


def test_empirical_hitting_time_parallel_equals_serial():
    g = Graph(8, [(0, 1), (2, 3), (4, 5)])
    h = Graph.complete(8)
    cfg = InterpolationConfig(s=2.0, d_t=3, seed=40)
    a = empirical_hitting_time(g, h, cfg, trials=12)
    b = empirical_hitting_time(g, h, cfg, trials=12, workers=2)
    assert a.times.tolist() == b.times.tolist()
    assert set(a.quantiles()) == {0.05, 0.25, 0.5, 0.75, 0.95}


@pytest.mark.parametrize("edges", [[], [(0, 1)], [(0, 1), (1, 2)], [(0, 1), (1, 2), (0, 2)]])
def test_layer_uniformity(edges):
    tgt = Graph(3, edges)
    verdict = layer_uniformity_oracle(tgt, s=1.0, d_t=1)
    assert verdict.uniform and verdict.max_layer_spread < 1e-10
    assert verdict.stationary.sum() == pytest.approx(1.0)
    # distance marginal of the graph chain equals the distance-chain weights
    marg = np.array([verdict.stationary[verdict.layer_of == k].sum() for k in range(4)])
    exact = exact_limiting_distribution(DistanceChain.logistic(3, 1.0, 1)).weights
    assert np.allclose(marg, exact, atol=1e-10)


def test_layer_uniformity_without_false_edges():
    tgt = Graph(3, [(0, 1), (1, 2)])
    verdict = layer_uniformity_oracle(tgt, s=1.0, d_t=1, allow_false_edges=False)
    assert verdict.uniform
    assert verdict.off_support_mass < 1e-10
    with pytest.raises(ValueError):
        layer_uniformity_oracle(Graph(5))
