"""Analysis of the birth-death chain on edit distances.

The edit process moves from distance ``i`` to ``i - 1`` with probability
``phi(i)`` and to ``i + 1`` otherwise, so its distance sequence is a
birth-death chain on ``0..d_m``. This module provides its stationary
(time-averaged) distribution, a closed-form approximation of it near the
target distance, expected hitting times, rate fitting, and a brute-force
check of the full graph-space chain for tiny graphs.
"""

from __future__ import annotations

import itertools
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, max_edit_distance
from .interpolate import AdvancingProbability, InterpolationConfig, interpolate, logistic

MACHINE_EPS = sys.float_info.epsilon


class UnsupportedRegimeError(ValueError):
    """The closed-form hitting time only covers starts at or above the target distance."""


@dataclass(frozen=True)
class DistanceChain:
    d_m: int
    phi: AdvancingProbability

    @classmethod
    def logistic(cls, d_m: int, s: float, d_t: int) -> "DistanceChain":
        return cls(d_m, AdvancingProbability(s, d_t, d_m))

    def transition_matrix(self) -> np.ndarray:
        m = self.d_m
        P = np.zeros((m + 1, m + 1))
        for i in range(m + 1):
            a = self.phi(i)
            if i > 0:
                P[i, i - 1] = a
            if i < m:
                P[i, i + 1] = 1.0 - a
        return P

    def log_probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        """``log phi(i)`` and ``log(1 - phi(i))`` for ``i = 0..d_m`` without cancellation."""
        p = self.phi
        i = np.arange(self.d_m + 1)
        with np.errstate(divide="ignore"):
            if p.sigmoid is logistic:
                x = (i - p.d_t) / p.s
                log_adv = -np.logaddexp(0.0, -x)
                log_reg = -np.logaddexp(0.0, x)
            else:
                vals = np.array([p(int(k)) for k in i])
                log_adv, log_reg = np.log(vals), np.log1p(-vals)
        log_adv[p.d_t] = log_reg[p.d_t] = math.log(0.5)
        log_adv[0], log_reg[0] = -np.inf, 0.0
        log_adv[-1], log_reg[-1] = 0.0, -np.inf
        return log_adv, log_reg


@dataclass
class LimitingDistribution:
    states: np.ndarray
    weights: np.ndarray
    method: str
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[int, float]:
        return {int(k): float(w) for k, w in zip(self.states, self.weights)}

    def rows(self) -> list[tuple[int, float]]:
        return [(int(k), float(w)) for k, w in zip(self.states, self.weights)]


def exact_limiting_distribution(chain: DistanceChain) -> LimitingDistribution:
    """Stationary vector of the distance chain, accumulated in log space.

    Uses ``v[i+1] = v[i] (1 - phi(i)) / phi(i+1)`` and normalizes with
    log-sum-exp so that large ``d_m`` and small rates do not underflow.
    """
    if chain.d_m < 1:
        raise ValueError("d_m must be at least 1")
    log_adv, log_reg = chain.log_probabilities()
    log_v = np.zeros(chain.d_m + 1)
    log_v[1:] = np.cumsum(log_reg[:-1] - log_adv[1:])
    log_v -= np.logaddexp.reduce(log_v)
    return LimitingDistribution(np.arange(chain.d_m + 1), np.exp(log_v), "exact_eigenvector")


def approx_limiting_distribution(
    d_t: int, s: float, k_range=None, d_m: int | None = None
) -> LimitingDistribution:
    """Closed-form approximation of the stationary weights at ``d_t - k`` and ``d_t + k``.

    Valid for small ``s`` relative to ``d_t**2``; assumes ``d_t >= 2`` and
    ``d_m >= 2 d_t``. Violated assumptions are reported in ``warnings``
    rather than raised.
    """
    notes = []
    if d_t < 2:
        notes.append(f"d_t={d_t} < 2")
    if d_m is not None and d_m < 2 * d_t:
        notes.append(f"d_m={d_m} < 2*d_t={2 * d_t}")
    if k_range is None:
        k_range = range(0, max(d_t, 1))
    ks = np.array(sorted(set(int(k) for k in k_range)))
    if len(ks) and (ks.min() < 0 or ks.max() >= max(d_t, 1)):
        notes.append("k outside 0 <= k < d_t")
    i = np.arange(0, d_t - 1)
    denom = 2.0 * (math.exp(-(d_t - 1) * d_t / (2 * s)) + 2.0 * np.exp(-i * (i + 1) / (2 * s)).sum())
    num = np.exp(-ks * (ks - 1) / (2 * s)) + np.exp(-ks * (ks + 1) / (2 * s))
    vals = num / denom
    states, weights = [], []
    for k, w in zip(ks, vals):
        for st in sorted({d_t - k, d_t + k}):
            states.append(st)
            weights.append(w)
    order = np.argsort(states)
    if notes:
        warnings.warn("approximation hypotheses violated: " + "; ".join(notes), stacklevel=2)
    return LimitingDistribution(
        np.asarray(states)[order], np.asarray(weights)[order], "closed_form_approx", notes
    )


def hitting_time_terms(d_o: int, d_t: int, d_m: int, s: float):
    """Yield the series terms of the expected hitting time, largest first.

    Term ``j`` collects the paths that climb ``j`` levels above each
    intermediate distance before returning. Away from the upper boundary
    (``j <= d_m - d_o``) it equals
    ``exp(-j(j+1)/2s) (1 - exp(-j(d_o-d_t)/s)) / (1 - exp(-j/s))``; closer
    to ``d_m`` the inner geometric sum is cut at the boundary, which keeps the
    series exact for every ``d_o <= d_m``.
    """
    gap = d_o - d_t
    for j in range(1, d_m - d_t):
        kmax = min(gap, d_m - d_t - j)
        head = math.exp(-j * (j + 1) / (2 * s))
        if head == 0.0:
            return
        yield head * math.expm1(-j * kmax / s) / math.expm1(-j / s)


def expected_hitting_time(
    d_o: int, d_t: int, d_m: int, s: float, tol: float = MACHINE_EPS
) -> tuple[float, int]:
    """Expected number of steps to first reach ``d_t`` from ``d_o``.

    Terms are summed until one drops below ``tol``. Returns the value and the
    number of terms kept, counting the leading ``d_o - d_t`` as the first.
    """
    if not s > 0:
        raise ValueError("rate must be positive")
    if d_o < d_t:
        raise UnsupportedRegimeError(f"d_o={d_o} < d_t={d_t}")
    if d_o > d_m:
        raise ValueError(f"d_o={d_o} exceeds d_m={d_m}")
    if d_o == d_t:
        return 0.0, 0
    total = 0.0
    used = 1
    for term in hitting_time_terms(d_o, d_t, d_m, s):
        if term < tol:
            break
        total += term
        used += 1
    return (d_o - d_t) + 2.0 * total, used


def fit_rate(
    d_o: int,
    d_t: int,
    d_m: int,
    target_steps: float,
    grid_step: float = 50,
    tol: float = MACHINE_EPS,
    max_points: int = 100_000,
) -> float:
    """Grid rate whose expected hitting time is closest to ``target_steps``.

    The grid is ``grid_step, 2*grid_step, ...``. Hitting time increases with
    the rate, so the scan stops at the first grid point at or above the
    target. Ties go to the smaller rate.
    """
    if target_steps < d_o - d_t:
        raise ValueError("target_steps is below the minimum possible hitting time d_o - d_t")
    best_s, best_gap = grid_step, math.inf
    for m in range(1, max_points + 1):
        s = grid_step * m
        h, _ = expected_hitting_time(d_o, d_t, d_m, s, tol)
        gap = abs(h - target_steps)
        if gap < best_gap:
            best_s, best_gap = s, gap
        if h >= target_steps:
            break
    return best_s


@dataclass
class HittingTimeSample:
    times: np.ndarray
    seeds: list[int]

    @property
    def mean(self) -> float:
        return float(self.times.mean())

    @property
    def var(self) -> float:
        return float(self.times.var(ddof=1)) if len(self.times) > 1 else 0.0

    def quantiles(self, qs=(0.05, 0.25, 0.5, 0.75, 0.95)) -> dict[float, float]:
        return {q: float(np.quantile(self.times, q)) for q in qs}


def _first_passage(args) -> int:
    start, target, cfg = args
    return len(interpolate(start, target, cfg))


def empirical_hitting_time(
    start: Graph, target: Graph, cfg: InterpolationConfig, trials: int, workers: int = 1
) -> HittingTimeSample:
    """First-passage step counts to ``cfg.d_t`` over independent trials.

    Trial ``i`` uses seed ``cfg.seed + i``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = cfg.to_dict()
    base["stop_mode"] = "until_distance"
    seeds = [cfg.seed + i for i in range(trials)]
    jobs = [(start, target, InterpolationConfig(**{**base, "seed": sd})) for sd in seeds]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            times = list(ex.map(_first_passage, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        times = [_first_passage(j) for j in jobs]
    return HittingTimeSample(np.asarray(times, dtype=float), seeds)


@dataclass
class LayerVerdict:
    target_mask: int
    pairs: list[tuple[int, int]]
    stationary: np.ndarray  # indexed by edge bitmask
    layer_of: np.ndarray
    max_layer_spread: float
    off_support_mass: float
    uniform: bool

    def layer_weights(self, layer: int) -> np.ndarray:
        return self.stationary[self.layer_of == layer]


def graph_space_chain(
    target: Graph, s: float = 1.0, d_t: int = 1, allow_false_edges: bool = True
) -> tuple[np.ndarray, list[tuple[int, int]], int]:
    """Dense transition matrix of the edit process over all graphs on ``target.n`` vertices.

    States are bitmasks over the vertex pairs. Advancing and regressing
    moves are chosen uniformly; without false edges a state with no shared
    edge to delete advances instead.
    """
    n = target.n
    pairs = [(u, v) for u, v in itertools.permutations(range(n), 2) if target.directed or u < v]
    d_m = len(pairs)
    t_mask = sum(1 << b for b, (u, v) in enumerate(pairs) if target.has_edge(u, v))
    phi = AdvancingProbability(s, min(d_t, d_m), d_m)
    N = 1 << d_m
    P = np.zeros((N, N))
    for x in range(N):
        diff = x ^ t_mask
        i = diff.bit_count()
        adv = [b for b in range(d_m) if diff >> b & 1]
        if allow_false_edges:
            reg = [b for b in range(d_m) if not diff >> b & 1]
        else:
            reg = [b for b in range(d_m) if not diff >> b & 1 and t_mask >> b & 1]
        p_adv = phi(i)
        if not reg:
            p_adv = 1.0
        if not adv:
            p_adv = 0.0
        for b in adv:
            P[x, x ^ (1 << b)] += p_adv / len(adv)
        for b in reg:
            P[x, x ^ (1 << b)] += (1.0 - p_adv) / len(reg)
    return P, pairs, t_mask


def stationary_vector(P: np.ndarray) -> np.ndarray:
    """Solve ``v P = v`` with ``sum(v) = 1`` (the time average for periodic chains)."""
    N = P.shape[0]
    A = np.vstack([P.T - np.eye(N), np.ones((1, N))])
    b = np.zeros(N + 1)
    b[-1] = 1.0
    v, *_ = np.linalg.lstsq(A, b, rcond=None)
    v[np.abs(v) < 1e-15] = 0.0
    return v


def layer_uniformity_oracle(
    target: Graph, s: float = 1.0, d_t: int = 1, allow_false_edges: bool = True, tol: float = 1e-10
) -> LayerVerdict:
    """Check by full enumeration that stationary mass is uniform within each layer.

    Without false edges, also measures the mass outside the subgraphs of
    the target, which should vanish.
    """
    if target.n > 4 or max_edit_distance(target.n, target.directed) > 12:
        raise ValueError("graph-space enumeration is limited to n <= 4")
    P, pairs, t_mask = graph_space_chain(target, s, d_t, allow_false_edges)
    v = stationary_vector(P)
    N = len(v)
    layer_of = np.array([(x ^ t_mask).bit_count() for x in range(N)])
    if allow_false_edges:
        eligible = np.ones(N, dtype=bool)
    else:
        eligible = np.array([(x & ~t_mask) == 0 for x in range(N)])
    off_support = float(v[~eligible].sum())
    spread = 0.0
    for layer in np.unique(layer_of[eligible]):
        w = v[eligible & (layer_of == layer)]
        spread = max(spread, float(w.max() - w.min()))
    uniform = spread <= tol and off_support <= tol
    return LayerVerdict(t_mask, pairs, v, layer_of, spread, off_support, uniform)
