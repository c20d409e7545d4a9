"""Clustering statistics, computed in batch or maintained along an edit trace."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .interpolate import Trace, default_stat_stride


class TraceReplayError(RuntimeError):
    """A trace does not replay consistently on the given start graph."""


def _require_undirected(g: Graph) -> None:
    if g.directed:
        raise ValueError("clustering statistics are defined for undirected graphs only")


def local_clustering(g: Graph, v: int) -> float:
    _require_undirected(g)
    nbrs = g.adj[v]
    k = len(nbrs)
    if k < 2:
        return 0.0
    links = sum(len(g.adj[a] & nbrs) for a in nbrs) // 2
    return links / (k * (k - 1) / 2)


def triangle_counts(g: Graph) -> list[int]:
    """Number of triangles through each vertex."""
    _require_undirected(g)
    tri = [0] * g.n
    adj = g.adj
    for u in range(g.n):
        for v in adj[u]:
            if v <= u:
                continue
            for w in adj[u] & adj[v]:
                if w > v:
                    tri[u] += 1
                    tri[v] += 1
                    tri[w] += 1
    return tri


def _mean_cc(tri, deg) -> float:
    tri = np.asarray(tri, dtype=np.float64)
    deg = np.asarray(deg, dtype=np.int64)
    pairs = (deg * (deg - 1) // 2).astype(np.float64)
    cc = np.divide(tri, pairs, out=np.zeros_like(tri), where=pairs > 0)
    return float(cc.mean()) if len(cc) else 0.0


def _global_cc(triangles: int, wedges: int) -> float:
    return 3 * triangles / wedges if wedges else 0.0


def mean_clustering(g: Graph) -> float:
    """Mean local clustering over all vertices; vertices of degree < 2 count as 0."""
    return _mean_cc(triangle_counts(g), [len(a) for a in g.adj])


def global_clustering(g: Graph) -> float:
    """Closed wedges over all wedges (3 x triangles / wedges); 0 when there are no wedges."""
    tri = triangle_counts(g)
    wedges = sum(len(a) * (len(a) - 1) // 2 for a in g.adj)
    return _global_cc(sum(tri) // 3, wedges)


@dataclass
class StatRow:
    step: int
    d: int
    edges: int
    mean_cc: float
    global_cc: float
    extra: dict[str, float] = field(default_factory=dict)

    FIELDS = ("step", "d", "edges", "mean_cc", "global_cc")

    def as_tuple(self) -> tuple:
        return (self.step, self.d, self.edges, self.mean_cc, self.global_cc)


def graph_stats(g: Graph, step: int = 0, d: int = 0) -> StatRow:
    return StatRow(step, d, g.number_of_edges(), mean_clustering(g), global_clustering(g))


class ClusteringCounter:
    """Exact triangle and wedge counters kept current under edge toggles.

    Toggling ``(u, v)`` costs ``O(min(deg u, deg v))``. Coefficients are
    derived from the integer counters on demand, so they match a batch
    recomputation exactly.
    """

    def __init__(self, g: Graph):
        _require_undirected(g)
        self.g = g
        self.tri = triangle_counts(g)
        self.deg = [len(a) for a in g.adj]
        self.triangles = sum(self.tri) // 3
        self.wedges = sum(k * (k - 1) // 2 for k in self.deg)

    def toggle(self, u: int, v: int) -> bool:
        """Toggle the edge in the underlying graph and update counters."""
        adj = self.g.adj
        a, b = adj[u], adj[v]
        common = a & b if len(a) <= len(b) else b & a
        c = len(common)
        present = self.g.toggle_edge(u, v)
        if present:
            self.wedges += self.deg[u] + self.deg[v]
            self.deg[u] += 1
            self.deg[v] += 1
            sgn = 1
        else:
            self.deg[u] -= 1
            self.deg[v] -= 1
            self.wedges -= self.deg[u] + self.deg[v]
            sgn = -1
        self.triangles += sgn * c
        self.tri[u] += sgn * c
        self.tri[v] += sgn * c
        for w in common:
            self.tri[w] += sgn
        return present

    def mean_cc(self) -> float:
        return _mean_cc(self.tri, self.deg)

    def global_cc(self) -> float:
        return _global_cc(self.triangles, self.wedges)

    def row(self, step: int, d: int) -> StatRow:
        return StatRow(step, d, self.g.number_of_edges(), self.mean_cc(), self.global_cc())


def stats_along_trace(start: Graph, trace: Trace, every: int | None = None) -> list[StatRow]:
    """Replay ``trace`` from ``start`` and sample statistics.

    Rows are taken at step 0, every ``every`` steps, and at the final step.
    Each edit is checked against its recorded sign and direction.
    """
    if start.n != trace.n or start.directed != trace.directed:
        raise TraceReplayError("trace does not belong to this start graph")
    if every is None:
        every = default_stat_stride(start.n, len(trace))
    if every < 1:
        raise ValueError("stride must be >= 1")
    counter = ClusteringCounter(start.copy())
    rows = [counter.row(0, trace.d0)]
    last = len(trace.steps)
    d = trace.d0
    for i, st in enumerate(trace.steps, 1):
        present = counter.toggle(st.u, st.v)
        if present != ((st.sign > 0) == st.advancing) or st.d != d + (-1 if st.advancing else 1):
            raise TraceReplayError(f"step {i} ({st}) is inconsistent with the replayed graph")
        d = st.d
        if i % every == 0 or i == last:
            rows.append(counter.row(i, d))
    return rows
