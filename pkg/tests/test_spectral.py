import math

import numpy as np
import pytest

from netinterp.generators import SbmSpec, sbm
from netinterp.graph import Graph
from netinterp.interpolate import InterpolationConfig
from netinterp.spectral import (
    ClusterAssignment,
    SbmExperiment,
    adjacency_matrix,
    eigen_symmetric,
    normalized_adjacency,
    recovery_rate,
    sbm_transition_experiment,
    scenario_labels,
    spectral_cluster,
    subspace_distance,
)


def test_normalized_adjacency_entries():
    g = Graph(4, [(0, 1), (0, 2)])  # vertex 3 isolated
    N = normalized_adjacency(g)
    assert N[0, 1] == pytest.approx(1 / math.sqrt(2 * 1))
    assert np.all(N[3] == 0) and np.all(N[:, 3] == 0)
    assert np.array_equal(N, N.T)
    # spectrum of a normalized adjacency lies in [-1, 1] with top eigenvalue 1
    g2, _ = sbm(SbmSpec((10, 10), 0.8, 0.2), seed=0)
    w = eigen_symmetric(normalized_adjacency(g2)).eigenvalues
    assert w[0] == pytest.approx(1.0, abs=1e-12) and w[-1] >= -1 - 1e-12
    with pytest.raises(ValueError):
        normalized_adjacency(Graph(3, directed=True))


def test_jacobi_agrees_with_lapack():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(12, 12))
    M = M + M.T
    a, b = eigen_symmetric(M, "lapack"), eigen_symmetric(M, "jacobi")
    assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-10)
    assert np.all(np.diff(a.eigenvalues) <= 0)
    # eigenvectors agree up to sign
    for j in range(12):
        assert abs(abs(a.eigenvectors[:, j] @ b.eigenvectors[:, j]) - 1) < 1e-8
    assert np.allclose(M @ b.eigenvectors, b.eigenvectors * b.eigenvalues, atol=1e-9)
    with pytest.raises(ValueError):
        eigen_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        eigen_symmetric(M, "qr")


def test_subspace_distance_known_angles():
    e = np.eye(4)
    U = e[:, :2]
    assert subspace_distance(U, U) == 0.0
    assert subspace_distance(U, e[:, 2:]) == pytest.approx(1.0)
    th = 0.3
    V = np.column_stack([e[:, 0], math.cos(th) * e[:, 1] + math.sin(th) * e[:, 2]])
    assert subspace_distance(U, V) == pytest.approx(math.sin(th), abs=1e-15)
    # basis rotation inside the same subspace does not matter
    R = np.array([[math.cos(1.0), -math.sin(1.0)], [math.sin(1.0), math.cos(1.0)]])
    assert subspace_distance(U, U @ R) < 1e-15
    with pytest.raises(ValueError):
        subspace_distance(U, 2 * U)
    with pytest.raises(ValueError):
        subspace_distance(U, e[:, :3])


def test_recovery_rate():
    truth = np.array([0, 0, 1, 1, 2, 2])
    assert recovery_rate(np.array([2, 2, 0, 0, 1, 1]), truth) == 1.0
    assert recovery_rate(np.array([0, 0, 0, 0, 0, 0]), truth) == pytest.approx(1 / 3)
    assert recovery_rate(np.array([0, 1, 1, 1, 2, 2]), truth) == pytest.approx(5 / 6)
    assert recovery_rate(ClusterAssignment(np.zeros(6, dtype=int), 3), truth) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        recovery_rate(np.zeros(3, dtype=int), truth)


def test_spectral_cluster_recovers_planted_blocks():
    g, labels = sbm(SbmSpec((30, 30, 30), 0.9, 0.05), seed=2)
    res = spectral_cluster(g, 3, seed=0)
    assert recovery_rate(res, labels) == 1.0
    assert spectral_cluster(g, 1).labels.tolist() == [0] * 90
    # accepts a precomputed matrix and is seed-deterministic
    N = normalized_adjacency(g)
    assert np.array_equal(spectral_cluster(N, 3, seed=0).labels, res.labels)


def test_scenario_labels():
    rng = np.random.default_rng(0)
    start, target = scenario_labels("split", 120, rng)
    assert np.bincount(start).tolist() == [60, 60]
    assert np.bincount(target).tolist() == [60, 30, 30]
    _, ind = scenario_labels("independent", 120, rng)
    assert np.bincount(ind).tolist() == [40, 40, 40]
    with pytest.raises(ValueError):
        scenario_labels("merge", 120, rng)
    with pytest.raises(ValueError):
        scenario_labels("split", 10, rng)


def test_small_experiment_end_state():
    exp = sbm_transition_experiment("split", n=48, cfg=InterpolationConfig(seed=1), stride=10)
    rows = exp.rows
    assert rows[0]["step"] == 0 and rows[-1]["step"] == exp.total_steps
    assert rows[-1]["d"] == 0
    assert rows[-1]["subspace_distance"] < 1e-12
    assert rows[-1]["recovery"] == 1.0
    assert rows[-1]["eig1"] == pytest.approx(1.0)
    # linear interpolation endpoints reproduce the graph spectra
    n = 48
    first = [x for p, _, _, x in exp.linear_spectra if p == 0]
    last_pt = max(p for p, *_ in exp.linear_spectra)
    last = [x for p, _, _, x in exp.linear_spectra if p == last_pt]
    start_spec = [x for s, _, x in exp.spectra if s == 0]
    end_spec = [x for s, _, x in exp.spectra if s == exp.total_steps]
    assert np.allclose(first, start_spec, atol=1e-12) and np.allclose(last, end_spec, atol=1e-12)
    assert len(first) == n


def test_detection_fraction():
    exp = SbmExperiment("split", np.zeros(3), 100)
    exp.rows = [{"step": s, "recovery": r} for s, r in [(0, 0.5), (50, 0.97), (60, 0.9), (80, 1.0), (100, 1.0)]]
    assert exp.detection_fraction(0.95) == 0.8
    assert exp.window_mean("recovery", 0.0, 0.1) == 0.5
    exp.rows[-1]["recovery"] = 0.5
    assert exp.detection_fraction(0.95) == 1.0


def test_adjacency_matrix_roundtrip():
    g, _ = sbm(SbmSpec((5, 5), 0.5, 0.5), seed=1)
    A = adjacency_matrix(g)
    assert A.sum() == 2 * g.number_of_edges()
    assert {(u, v) for u, v in zip(*np.nonzero(np.triu(A)))} == g.edge_set()
