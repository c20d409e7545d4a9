"""Spectral tools for tracking community structure along an interpolation.

Covers the symmetrically normalized adjacency matrix, its dominant
eigenspaces, the distance between those subspaces, spectral clustering, and
the block-split change-point experiment built from them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.cluster import KMeans

from .generators import planted_sbm
from .graph import Graph
from .interpolate import InterpolationConfig, interpolate


@dataclass
class SymmetricSpectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns aligned with eigenvalues

    def top(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, :k]


@dataclass
class ClusterAssignment:
    labels: np.ndarray
    k: int


def adjacency_matrix(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    for u, nbrs in enumerate(g.succ):
        if nbrs:
            A[u, list(nbrs)] = 1.0
    return A


def normalize_adjacency(A: np.ndarray) -> np.ndarray:
    """``D^-1/2 A D^-1/2``; rows and columns of isolated vertices stay zero."""
    deg = A.sum(axis=1)
    inv = np.zeros_like(deg)
    nz = deg > 0
    inv[nz] = 1.0 / np.sqrt(deg[nz])
    return A * inv[:, None] * inv[None, :]


def normalized_adjacency(g: Graph) -> np.ndarray:
    if g.directed:
        raise ValueError("normalized adjacency is defined for undirected graphs")
    return normalize_adjacency(adjacency_matrix(g))


def _check_symmetric(m: np.ndarray, tol: float = 1e-12) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.size and np.max(np.abs(m - m.T)) > tol:
        raise ValueError("matrix is not symmetric")


def jacobi_eigh(m: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a symmetric matrix.

    Sweeps plane rotations until the off-diagonal Frobenius norm drops below
    ``tol`` times the matrix norm. Returns unsorted eigenvalues and the
    matrix of eigenvectors.
    """
    a = np.array(m, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta**2 would overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def eigen_symmetric(m: np.ndarray, method: str = "lapack") -> SymmetricSpectrum:
    """Full eigendecomposition with eigenvalues in descending order.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``"jacobi"`` uses the
    rotation solver above and is meant for small matrices and cross-checks.
    """
    m = np.asarray(m, dtype=float)
    _check_symmetric(m)
    if method == "lapack":
        w, v = np.linalg.eigh(m)
    elif method == "jacobi":
        w, v = jacobi_eigh(m)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(-w, kind="stable")
    return SymmetricSpectrum(w[order], v[:, order])


def subspace_distance(u: np.ndarray, v: np.ndarray, tol: float = 1e-8) -> float:
    """``sqrt(1 - sigma_min(U^T V)^2)`` for bases with orthonormal columns.

    Evaluated as the largest singular value of ``(I - U U^T) V``, which is
    the same quantity without the cancellation near zero distance.
    """
    u, v = np.atleast_2d(u), np.atleast_2d(v)
    if u.shape != v.shape:
        raise ValueError(f"basis shapes differ: {u.shape} vs {v.shape}")
    k = u.shape[1]
    for b in (u, v):
        if np.max(np.abs(b.T @ b - np.eye(k))) > tol:
            raise ValueError("basis columns are not orthonormal")
    if np.array_equal(u, v):
        return 0.0
    resid = v - u @ (u.T @ v)
    return float(min(np.linalg.norm(resid, 2), 1.0))


def spectral_embedding(N: np.ndarray, k: int) -> np.ndarray:
    """Row-normalized top-``k`` eigenvectors of a normalized adjacency matrix."""
    return _row_normalize(eigen_symmetric(N).top(k))


def _cluster_embedding(X: np.ndarray, k: int, seed: int, n_init: int) -> np.ndarray:
    km = KMeans(n_clusters=k, n_init=n_init, random_state=seed)
    return km.fit_predict(X)


def spectral_cluster(g: Graph | np.ndarray, k: int, seed: int = 0, n_init: int = 10) -> ClusterAssignment:
    """Normalized spectral clustering: top-``k`` eigenvectors, row normalization, k-means.

    ``g`` may be a graph or an already normalized adjacency matrix. k-means
    keeps the best of ``n_init`` seeded restarts by inertia.
    """
    N = normalized_adjacency(g) if isinstance(g, Graph) else np.asarray(g)
    n = N.shape[0]
    if k <= 1:
        return ClusterAssignment(np.zeros(n, dtype=int), 1)
    labels = _cluster_embedding(spectral_embedding(N, k), k, seed, n_init)
    return ClusterAssignment(np.asarray(labels, dtype=int), k)


def recovery_rate(assignment: ClusterAssignment | np.ndarray, truth) -> float:
    """Best agreement fraction over all relabelings of the assignment (k <= 5)."""
    pred = np.asarray(assignment.labels if isinstance(assignment, ClusterAssignment) else assignment)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError("assignment and truth differ in length")
    k = int(max(pred.max(initial=0), truth.max(initial=0))) + 1
    if isinstance(assignment, ClusterAssignment):
        k = max(k, assignment.k)
    if k > 5:
        raise ValueError("recovery rate enumerates permutations and is limited to k <= 5")
    conf = np.zeros((k, k), dtype=np.int64)
    np.add.at(conf, (pred, truth), 1)
    best = max(sum(conf[i, perm[i]] for i in range(k)) for perm in itertools.permutations(range(k)))
    return best / len(truth)


# -- block-split change-point experiment -----------------------------------

SCENARIOS = ("split", "independent")


@dataclass
class SbmExperiment:
    scenario: str
    truth: np.ndarray
    total_steps: int
    rows: list[dict] = field(default_factory=list)
    spectra: list[tuple[int, int, float]] = field(default_factory=list)
    linear_spectra: list[tuple[int, float, int, float]] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    def window_mean(self, name: str, lo: float, hi: float) -> float:
        """Mean of a column over sampled rows whose step fraction lies in ``[lo, hi]``."""
        frac = self.column("step") / max(self.total_steps, 1)
        sel = (frac >= lo) & (frac <= hi)
        return float(self.column(name)[sel].mean())

    def detection_fraction(self, threshold: float = 0.95) -> float:
        """Step fraction after which recovery stays at or above ``threshold``."""
        rec = self.column("recovery")
        frac = self.column("step") / max(self.total_steps, 1)
        below = np.nonzero(rec < threshold)[0]
        if len(below) == 0:
            return 0.0
        if below[-1] + 1 >= len(rec):
            return 1.0
        return float(frac[below[-1] + 1])


def scenario_labels(scenario: str, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Planted labels of the 2-block start and 3-block target graphs."""
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    if n % 4 or n % 3:
        raise ValueError("n must be divisible by 3 and 4")
    start = np.repeat([0, 1], n // 2)
    if scenario == "split":
        target = np.repeat([0, 1, 2], [n // 2, n // 4, n // 4])
    else:
        target = rng.permutation(np.repeat([0, 1, 2], n // 3))
    return start, target


def sbm_transition_experiment(
    scenario: str = "split",
    n: int = 120,
    p: float = 0.9,
    q: float = 0.1,
    cfg: InterpolationConfig | None = None,
    stride: int = 25,
    k: int = 3,
    linear_points: int | None = None,
    cluster_seed: int = 0,
) -> SbmExperiment:
    """Interpolate a 2-block SBM into a 3-block SBM and track spectral structure.

    Start graph, target graph and labels are drawn from seeds derived from
    ``cfg.seed``. At step 0, every ``stride`` steps and at the final step the
    rows record recovery of the target blocks, the subspace distance between
    the current and final top-``k`` eigenspaces, and the top ``k``
    eigenvalues. The full spectrum goes to ``spectra``; ``linear_spectra``
    holds the spectra of equispaced convex combinations of the start and
    target normalized adjacency matrices.
    """
    cfg = cfg or InterpolationConfig(s=1.0, d_t=0, stop_mode="until_target")
    rng = np.random.default_rng(cfg.seed)
    start_labels, truth = scenario_labels(scenario, n, rng)
    seeds = rng.integers(0, 2**63 - 1, size=2)
    start = planted_sbm(start_labels, p, q, int(seeds[0]))
    target = planted_sbm(truth, p, q, int(seeds[1]))
    trace = interpolate(start, target, cfg)
    T = len(trace)

    N_target = normalized_adjacency(target)
    target_basis = eigen_symmetric(N_target).top(k)
    exp = SbmExperiment(scenario, truth, T)

    A = adjacency_matrix(start)
    sample_at = set(range(0, T + 1, max(stride, 1))) | {T}
    d = trace.d0
    for i in range(T + 1):
        if i > 0:
            st = trace.steps[i - 1]
            A[st.u, st.v] = A[st.v, st.u] = 1.0 - A[st.u, st.v]
            d = st.d
        if i not in sample_at:
            continue
        N = normalize_adjacency(A)
        spec = eigen_symmetric(N)
        labels = _cluster_embedding(_row_normalize(spec.top(k)), k, cluster_seed, 10)
        row = {
            "step": i,
            "d": d,
            "recovery": recovery_rate(ClusterAssignment(labels, k), truth),
            "subspace_distance": subspace_distance(spec.top(k), target_basis),
        }
        for j in range(k):
            row[f"eig{j + 1}"] = float(spec.eigenvalues[j])
        exp.rows.append(row)
        exp.spectra.extend((i, j, float(x)) for j, x in enumerate(spec.eigenvalues))

    N0 = normalized_adjacency(start)
    points = linear_points or len(exp.rows)
    for t_idx, t in enumerate(np.linspace(0.0, 1.0, points)):
        w = eigen_symmetric((1.0 - t) * N0 + t * N_target).eigenvalues
        exp.linear_spectra.extend((t_idx, float(t), j, float(x)) for j, x in enumerate(w))
    return exp


def _row_normalize(X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    return np.divide(X, norms, out=np.zeros_like(X), where=norms > 0)
