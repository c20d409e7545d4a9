"""Sampleable set of pending edge edits between a current graph and a target.

The ledger stores every vertex pair on which the current graph disagrees with
the target. Those pairs are exactly the advancing moves; every other pair is a
regressing move. A pair's sign is +1 when the target has the edge (so the
advancing move adds it) and -1 when only the current graph has it.

Entries live in a list plus a position map so that insertion, deletion,
membership and uniform sampling are all O(1). Regressing moves are drawn by
rejection over the full pair space.
"""

from __future__ import annotations

import bisect
import random
from typing import Callable, Iterator, NamedTuple

from .graph import Graph, check_compatible, max_edit_distance

REJECTION_CAP = 64


class SignedEdge(NamedTuple):
    u: int
    v: int
    sign: int

    @property
    def edge(self) -> tuple[int, int]:
        return (self.u, self.v)


class NoAdvancingMoveError(LookupError):
    """Raised when an advancing move is requested at edit distance 0."""


class RegressionExhaustedError(LookupError):
    """Raised when no legal regressing move exists under the current policy."""


class MoveLedger:
    def __init__(self, n: int, directed: bool, target: Graph):
        self.n = n
        self.directed = directed
        self.universe = max_edit_distance(n, directed) if n >= 1 else 0
        self._items: list[int] = []
        self._pos: dict[int, int] = {}
        self.target_keys: list[int] = sorted(self.key(u, v) for u, v in target.edges())
        self.target: set[int] = set(self.target_keys)
        # number of entries whose sign is +1 (target edges missing from current)
        self.n_plus = 0
        self.rejections = 0

    @classmethod
    def build(cls, current: Graph, target: Graph) -> "MoveLedger":
        check_compatible(current, target)
        led = cls(current.n, current.directed, target)
        for u in range(current.n):
            diff = current.succ[u] ^ target.succ[u]
            for v in sorted(diff):
                if current.directed or u < v:
                    led._insert(led.key(u, v))
        return led

    # -- keys ----------------------------------------------------------
    def key(self, u: int, v: int) -> int:
        if not self.directed and u > v:
            u, v = v, u
        return u * self.n + v

    def pair(self, key: int) -> tuple[int, int]:
        return divmod(key, self.n)

    def signed(self, key: int) -> SignedEdge:
        u, v = divmod(key, self.n)
        return SignedEdge(u, v, 1 if key in self.target else -1)

    def _rank(self, key: int) -> int:
        u, v = divmod(key, self.n)
        n = self.n
        if self.directed:
            return u * (n - 1) + (v if v < u else v - 1)
        return u * (2 * n - u - 1) // 2 + (v - u - 1)

    def _unrank(self, r: int) -> int:
        n = self.n
        if self.directed:
            u, w = divmod(r, n - 1)
            return u * n + (w if w < u else w + 1)
        # row u starts at u*(2n-u-1)/2; rows are short enough to walk from a float guess
        u = int(((2 * n - 1) - ((2 * n - 1) ** 2 - 8 * r) ** 0.5) // 2)
        u = max(0, min(u, n - 2))
        while u > 0 and u * (2 * n - u - 1) // 2 > r:
            u -= 1
        while (u + 1) * (2 * n - u - 2) // 2 <= r:
            u += 1
        v = r - u * (2 * n - u - 1) // 2 + u + 1
        return u * n + v

    # -- set primitives ------------------------------------------------
    def _insert(self, key: int) -> None:
        self._pos[key] = len(self._items)
        self._items.append(key)
        if key in self.target:
            self.n_plus += 1

    def _remove(self, key: int) -> None:
        i = self._pos.pop(key)
        last = self._items.pop()
        if last != key:
            self._items[i] = last
            self._pos[last] = i
        if key in self.target:
            self.n_plus -= 1

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, edge: tuple[int, int]) -> bool:
        return self.key(*edge) in self._pos

    def __iter__(self) -> Iterator[SignedEdge]:
        return (self.signed(k) for k in self._items)

    def entries(self) -> set[SignedEdge]:
        return {self.signed(k) for k in self._items}

    @property
    def distance(self) -> int:
        return len(self._items)

    @property
    def regressing_count(self) -> int:
        return self.universe - len(self._items)

    def shared_count(self) -> int:
        """Edges present in both current and target graph."""
        return len(self.target_keys) - self.n_plus

    def check(self) -> None:
        """Assert internal consistency; intended for tests and debugging."""
        assert len(self._pos) == len(self._items)
        for i, k in enumerate(self._items):
            assert self._pos[k] == i
        assert self.n_plus == sum(1 for k in self._items if k in self.target)

    # -- sampling ------------------------------------------------------
    def sample_advancing(self, rng: random.Random) -> SignedEdge:
        if not self._items:
            raise NoAdvancingMoveError("edit distance is 0; no advancing move exists")
        return self.signed(self._items[int(rng.random() * len(self._items))])

    def sample_regressing(self, rng: random.Random, allow_false_edges: bool = True) -> SignedEdge:
        """Draw a uniformly random regressing move.

        With ``allow_false_edges`` off only shared edges (whose deletion
        regresses) are eligible.
        """
        if not allow_false_edges:
            return self._sample_shared(rng)
        nz = len(self._items)
        if nz >= self.universe:
            raise RegressionExhaustedError("current graph is the complement of the target")
        if 2 * nz <= self.universe:
            n, pos = self.n, self._pos
            for _ in range(REJECTION_CAP):
                u = int(rng.random() * n)
                v = int(rng.random() * (n - 1))
                if v >= u:
                    v += 1
                if not self.directed and u > v:
                    u, v = v, u
                key = u * n + v
                if key not in pos:
                    return SignedEdge(u, v, 1 if key in self.target else -1)
                self.rejections += 1
        return self.signed(self._dense_zero(rng))

    def _dense_zero(self, rng: random.Random) -> int:
        zeros = self.universe - len(self._items)
        r = int(rng.random() * zeros)
        ranks = sorted(self._rank(k) for k in self._items)
        # ranks[i] - i counts zero slots preceding the i-th nonzero
        gaps = [a - i for i, a in enumerate(ranks)]
        return self._unrank(r + bisect.bisect_right(gaps, r))

    def _sample_shared(self, rng: random.Random) -> SignedEdge:
        shared = self.shared_count()
        if shared <= 0:
            raise RegressionExhaustedError("no shared edge left to delete")
        keys, pos = self.target_keys, self._pos
        for _ in range(REJECTION_CAP):
            key = keys[int(rng.random() * len(keys))]
            if key not in pos:
                return self.signed(key)
            self.rejections += 1
        pool = [k for k in keys if k not in pos]
        return self.signed(pool[int(rng.random() * len(pool))])

    # -- fused operations for the interpolation hot loop ----------------
    def pop_advancing(self, rand: Callable[[], float]) -> int:
        """Sample an advancing move, remove it, and return its key."""
        items = self._items
        i = int(rand() * len(items))
        key = items[i]
        last = items.pop()
        if last != key:
            items[i] = last
            self._pos[last] = i
        del self._pos[key]
        if key in self.target:
            self.n_plus -= 1
        return key

    # -- updates -------------------------------------------------------
    def apply(self, move: SignedEdge, advancing: bool) -> None:
        key = self.key(move.u, move.v)
        expected = 1 if key in self.target else -1
        if advancing:
            if key not in self._pos:
                raise ValueError(f"{move} is not an advancing move")
            if move.sign != expected:
                raise ValueError(f"{move} has the wrong sign")
            self._remove(key)
        else:
            if key in self._pos:
                raise ValueError(f"{move} is not a regressing move")
            if move.sign != expected:
                raise ValueError(f"{move} has the wrong sign")
            self._insert(key)
