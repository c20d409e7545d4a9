"""Growth-model baselines (uniform attachment, preferential attachment,
triangle closing) and their edge-deleting counterparts.

A baseline starts from a clique and adds nodes until its edge count reaches
that of a target snapshot. When a later snapshot has fewer edges, edges are
removed one at a time instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .graph import Graph, edit_distance, max_edit_distance
from .stats import ClusteringCounter, StatRow

Model = Literal["uniform", "preferential", "triangle_closing"]
MODELS = ("uniform", "preferential", "triangle_closing")


@dataclass(frozen=True)
class GrowthSpec:
    model: Model = "uniform"
    m: int = 1
    m_r: int = 1
    p_r: float = 0.5
    m_n: int = 1
    p_n: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown growth model {self.model!r}")
        if self.model == "triangle_closing":
            if self.m_r < 1 or self.m_n < 0:
                raise ValueError("triangle closing needs m_r >= 1 and m_n >= 0")
        elif self.m < 1:
            raise ValueError("m must be >= 1")
        if not (0 <= self.p_r <= 1 and 0 <= self.p_n <= 1):
            raise ValueError("probabilities must lie in [0, 1]")

    def start_clique_size(self) -> int:
        if self.model == "triangle_closing":
            return self.m_r + self.m_n + 1
        return self.m

    def expected_degree(self) -> float:
        if self.model == "triangle_closing":
            return self.m_r * self.p_r + self.m_n * self.p_n
        return float(self.m)


def plan_growth(g: Graph, spec: GrowthSpec, rng: random.Random, node: int, active: int) -> list[tuple[int, int]]:
    """Edges that ``node`` would add toward vertices ``0..active-1``. ``g`` is not modified."""
    adj = g.adj
    cands = [w for w in range(active) if w != node and w not in adj[node]]
    if not cands:
        return []
    if spec.model == "uniform":
        chosen = rng.sample(cands, min(spec.m, len(cands)))
    elif spec.model == "preferential":
        weights = [len(adj[w]) for w in cands]
        if sum(weights) == 0:
            chosen = rng.sample(cands, min(spec.m, len(cands)))
        else:
            chosen = list(dict.fromkeys(rng.choices(cands, weights, k=spec.m)))
    else:
        parents = rng.sample(cands, min(spec.m_r, len(cands)))
        chosen = [w for w in parents if rng.random() < spec.p_r]
        taken = set(chosen)
        pool = sorted(
            {x for w in parents for x in adj[w]} - taken - adj[node] - {node}
        )
        pool = [x for x in pool if x < active]
        picks = rng.sample(pool, min(spec.m_n, len(pool)))
        chosen += [x for x in picks if rng.random() < spec.p_n]
    return [(node, w) for w in chosen]


def grow_step(g: Graph, spec: GrowthSpec, rng: random.Random) -> list[tuple[int, int]]:
    """Append one vertex to ``g`` and connect it per the growth model."""
    node = g.add_vertex()
    edges = plan_growth(g, spec, rng, node, node)
    for u, v in edges:
        g.add_edge(u, v)
    return edges


def _triangles_at(g: Graph, w: int) -> int:
    nb = g.adj[w]
    return sum(len(nb & g.adj[x]) for x in nb) // 2


def plan_decay(g: Graph, spec: GrowthSpec, rng: random.Random) -> tuple[int, int]:
    """Pick an edge to delete: a uniform vertex with neighbors, then a weighted neighbor.

    Neighbor weights are 1 (uniform), 1/degree (preferential) or
    1/(1 + triangles through the neighbor) (triangle closing).
    """
    if g.number_of_edges() == 0:
        raise ValueError("cannot delete from a graph with no edges")
    adj = g.adj
    while True:
        u = rng.randrange(g.n)
        if adj[u]:
            break
    nbrs = sorted(adj[u])
    if spec.model == "uniform":
        v = rng.choice(nbrs)
    elif spec.model == "preferential":
        v = rng.choices(nbrs, [1.0 / len(adj[w]) for w in nbrs])[0]
    else:
        v = rng.choices(nbrs, [1.0 / (1 + _triangles_at(g, w)) for w in nbrs])[0]
    return (u, v)


def decay_step(g: Graph, spec: GrowthSpec, rng: random.Random) -> tuple[int, int]:
    u, v = plan_decay(g, spec, rng)
    g.remove_edge(u, v)
    return (u, v)


@dataclass
class GrowthRecord:
    graph: Graph
    rows: list[StatRow] = field(default_factory=list)
    edits: int = 0
    overshoot: bool = False
    boundaries: list[int] = field(default_factory=list)  # edit index at which each target was met


class _Extrapolator:
    """Shared state for single- and multi-snapshot baselines."""

    def __init__(self, n: int, spec: GrowthSpec, start_clique_size: int, every: int):
        k = min(start_clique_size, n)
        g = Graph(n)
        for u in range(k):
            for v in range(u + 1, k):
                g.add_edge(u, v)
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.counter = ClusteringCounter(g)
        self.active = k
        self.every = every
        self.record = GrowthRecord(g)
        self.target: Graph | None = None
        self.d = 0

    @property
    def g(self) -> Graph:
        return self.counter.g

    def retarget(self, target: Graph) -> None:
        self.target = target
        self.d = edit_distance(self.g, target)
        if not self.record.rows:
            self._emit()

    def _emit(self) -> None:
        rec = self.record
        row = self.counter.row(rec.edits, self.d)
        if rec.rows and rec.rows[-1].step == row.step:
            rec.rows[-1] = row
        else:
            rec.rows.append(row)

    def _toggle(self, u: int, v: int) -> None:
        had = self.g.has_edge(u, v)
        self.counter.toggle(u, v)
        self.d += -1 if had != self.target.has_edge(u, v) else 1
        self.record.edits += 1
        if self.record.edits % self.every == 0:
            self._emit()

    def run_to(self, target: Graph, one_edge_at_a_time: bool) -> None:
        self.retarget(target)
        goal = target.number_of_edges()
        g = self.g
        if goal > max_edit_distance(g.n):
            raise ValueError("target edge count exceeds the complete graph")
        if g.number_of_edges() > goal:
            while g.number_of_edges() > goal:
                self._toggle(*plan_decay(g, self.spec, self.rng))
        while g.number_of_edges() < goal:
            if self.active < g.n:
                node, pool = self.active, self.active
                self.active += 1
            else:
                node, pool = self.rng.randrange(g.n), g.n
            for u, v in plan_growth(g, self.spec, self.rng, node, pool):
                if one_edge_at_a_time and g.number_of_edges() >= goal:
                    break
                self._toggle(u, v)
        self.record.overshoot |= g.number_of_edges() > goal
        self._emit()
        self.record.boundaries.append(self.record.edits)


def extrapolate(
    start_clique_size: int,
    spec: GrowthSpec,
    target: Graph,
    one_edge_at_a_time: bool = False,
    every: int = 1,
) -> GrowthRecord:
    """Grow (or decay) from a clique until the edge count equals that of ``target``.

    The clique occupies vertices ``0..start_clique_size-1`` of a graph on
    ``target.n`` vertices; further vertices join in index order and, once
    all have joined, a uniformly random vertex plays the new node. In burst
    mode a node's edges are added together and the run stops at the first
    step meeting or exceeding the target (``overshoot`` flags the latter).
    """
    ex = _Extrapolator(target.n, spec, start_clique_size, every)
    ex.run_to(target, one_edge_at_a_time)
    return ex.record


def extrapolate_sequence(
    snapshots: Sequence[Graph],
    spec: GrowthSpec,
    start_clique_size: int | None = None,
    every: int = 1,
) -> GrowthRecord:
    """Baseline across several snapshots, adding or removing one edge at a time.

    For each snapshot after the first, the run grows while it has fewer edges
    than that snapshot and decays while it has more.
    """
    if len(snapshots) < 2:
        raise ValueError("need at least two snapshots")
    k = spec.start_clique_size() if start_clique_size is None else start_clique_size
    ex = _Extrapolator(snapshots[0].n, spec, k, every)
    for target in snapshots[1:]:
        ex.run_to(target, True)
    return ex.record
