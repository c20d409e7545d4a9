"""Simple graphs on dense integer vertices and the edge edit distance between them."""

from __future__ import annotations

from typing import Iterable, Iterator


class GraphMismatchError(ValueError):
    """Two graphs cannot be compared (different vertex count or directedness)."""


class Graph:
    """A simple graph on vertices ``0..n-1``.

    Undirected edges are reported canonically as ``(u, v)`` with ``u < v``.
    For directed graphs ``succ[u]`` holds out-neighbors and ``pred[u]``
    in-neighbors; for undirected graphs both names refer to the same lists.
    """

    __slots__ = ("n", "directed", "succ", "pred", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), directed: bool = False):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.directed = directed
        self.succ: list[set[int]] = [set() for _ in range(n)]
        self.pred: list[set[int]] = [set() for _ in range(n)] if directed else self.succ
        self._m = 0
        for u, v in edges:
            self.add_edge(u, v)

    # -- basic queries -------------------------------------------------
    @property
    def adj(self) -> list[set[int]]:
        return self.succ

    def number_of_edges(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self.n

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.succ[u]

    def degree(self, v: int) -> int:
        if self.directed:
            return len(self.succ[v]) + len(self.pred[v])
        return len(self.succ[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges in sorted order."""
        for u in range(self.n):
            for v in sorted(self.succ[u]):
                if self.directed or u < v:
                    yield (u, v)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def copy(self) -> "Graph":
        g = Graph(self.n, directed=self.directed)
        g.succ = [set(s) for s in self.succ]
        g.pred = [set(s) for s in self.pred] if self.directed else g.succ
        g._m = self._m
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.directed == other.directed and self.succ == other.succ

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, m={self._m}, {kind})"

    # -- mutation ------------------------------------------------------
    def _check_pair(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) not allowed")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"vertex pair ({u}, {v}) out of range for n={self.n}")

    def add_edge(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        if v in self.succ[u]:
            return
        self.succ[u].add(v)
        self.pred[v].add(u)
        self._m += 1

    def remove_edge(self, u: int, v: int) -> None:
        self._check_pair(u, v)
        self.succ[u].remove(v)
        self.pred[v].remove(u)
        self._m -= 1

    def toggle_edge(self, u: int, v: int) -> bool:
        """Flip the presence of ``(u, v)`` in place. Returns True if the edge now exists."""
        self._check_pair(u, v)
        if v in self.succ[u]:
            self.succ[u].remove(v)
            self.pred[v].remove(u)
            self._m -= 1
            return False
        self.succ[u].add(v)
        self.pred[v].add(u)
        self._m += 1
        return True

    def add_vertex(self) -> int:
        self.succ.append(set())
        if self.directed:
            self.pred.append(set())
        self.n += 1
        return self.n - 1

    # -- constructors --------------------------------------------------
    @classmethod
    def complete(cls, n: int, directed: bool = False) -> "Graph":
        if directed:
            return cls(n, ((u, v) for u in range(n) for v in range(n) if u != v), directed=True)
        return cls(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def max_edit_distance(n: int, directed: bool = False) -> int:
    """Number of vertex pairs an edge can occupy: C(n, 2), or n(n-1) if directed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return n * (n - 1) if directed else n * (n - 1) // 2


def check_compatible(g: Graph, h: Graph) -> None:
    if g.n != h.n or g.directed != h.directed:
        raise GraphMismatchError(
            f"incompatible graphs: n={g.n}/{h.n}, directed={g.directed}/{h.directed}"
        )


def edit_distance(g: Graph, h: Graph) -> int:
    """Size of the symmetric difference of the edge sets of ``g`` and ``h``."""
    check_compatible(g, h)
    d = 0
    for u in range(g.n):
        a, b = g.succ[u], h.succ[u]
        if g.directed:
            d += len(a ^ b)
        else:
            d += sum(1 for v in a ^ b if v > u)
    return d
