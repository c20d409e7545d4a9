"""Random graph generators: Erdos-Renyi and the stochastic block model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class SbmSpec:
    block_sizes: tuple[int, ...]
    p: float
    q: float

    def __post_init__(self):
        if not 0 <= self.q <= self.p <= 1:
            raise ValueError(f"need 0 <= q <= p <= 1, got p={self.p}, q={self.q}")
        if any(b < 0 for b in self.block_sizes):
            raise ValueError("block sizes must be nonnegative")
        object.__setattr__(self, "block_sizes", tuple(int(b) for b in self.block_sizes))

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    def labels(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.block_sizes)), self.block_sizes)


def _from_probabilities(n: int, prob: np.ndarray, rng: np.random.Generator) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < prob
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def erdos_renyi(n: int, p: float, seed: int | None = None) -> Graph:
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    return _from_probabilities(n, np.full(n * (n - 1) // 2, p), np.random.default_rng(seed))


def planted_sbm(labels, p: float, q: float, seed: int | None = None) -> Graph:
    """SBM with arbitrary per-vertex block labels."""
    labels = np.asarray(labels)
    n = len(labels)
    iu, ju = np.triu_indices(n, 1)
    prob = np.where(labels[iu] == labels[ju], p, q)
    return _from_probabilities(n, prob, np.random.default_rng(seed))


def sbm(spec: SbmSpec, seed: int | None = None) -> tuple[Graph, np.ndarray]:
    """Sample an SBM with contiguous blocks. Returns the graph and its planted labels."""
    labels = spec.labels()
    return planted_sbm(labels, spec.p, spec.q, seed), labels
