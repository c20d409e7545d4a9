"""Random edit trajectories from a start graph toward a target graph.

At each step a coin with bias ``phi(d)`` decides whether the next edit moves
one step closer to the target (advancing) or one step away (regressing); the
edit itself is a uniformly random move of the chosen kind.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Literal, NamedTuple, Sequence

from .graph import Graph, check_compatible, max_edit_distance
from .ledger import MoveLedger, RegressionExhaustedError, SignedEdge

StopMode = Literal["until_target", "until_distance", "fixed_steps"]
STOP_MODES = ("until_target", "until_distance", "fixed_steps")


def logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def make_rng(seed: int) -> random.Random:
    """Seeded Mersenne Twister. Independent trials use ``seed + trial_index``."""
    return random.Random(seed)


@dataclass(frozen=True)
class AdvancingProbability:
    """Probability of taking an advancing move at edit distance ``d``.

    ``phi(d) = sigmoid((d - d_t) / s)`` in the interior, with ``phi(0) = 0``
    and ``phi(d_m) = 1`` enforced exactly.
    """

    s: float
    d_t: int
    d_m: int
    sigmoid: Callable[[float], float] = logistic

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"rate s must be positive, got {self.s}")
        if not 0 <= self.d_t <= self.d_m:
            raise ValueError(f"target distance {self.d_t} outside [0, {self.d_m}]")

    def __call__(self, d: int) -> float:
        if d <= 0:
            return 0.0
        if d >= self.d_m:
            return 1.0
        if d == self.d_t:
            return 0.5
        return self.sigmoid((d - self.d_t) / self.s)


def phi(p: AdvancingProbability, d: int) -> float:
    return p(d)


@dataclass
class InterpolationConfig:
    s: float = 1.0
    d_t: int = 0
    stop_mode: StopMode = "until_target"
    steps: int | None = None
    allow_false_edges: bool = True
    seed: int = 0
    stat_sample_every: int | None = None
    max_steps: int | None = None

    def __post_init__(self):
        if self.stop_mode not in STOP_MODES:
            raise ValueError(f"unknown stop mode {self.stop_mode!r}")
        if self.stop_mode == "fixed_steps" and (self.steps is None or self.steps < 0):
            raise ValueError("fixed_steps mode needs steps >= 0")
        if self.d_t < 0:
            raise ValueError("d_t must be nonnegative")

    def to_dict(self) -> dict:
        return asdict(self)


def default_stat_stride(n: int, steps: int) -> int:
    return 1 if n <= 200 else max(1, steps // 2000)


class Step(NamedTuple):
    u: int
    v: int
    sign: int
    advancing: bool
    d: int  # edit distance after the edit


@dataclass
class Trace:
    n: int
    directed: bool
    d0: int
    seed: int
    config: dict = field(default_factory=dict)
    steps: list[Step] = field(default_factory=list)
    fallback_steps: list[int] = field(default_factory=list)
    truncated: bool = False
    stats: list | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def distances(self) -> list[int]:
        """Edit distance before the first step followed by the distance after each step."""
        return [self.d0] + [st.d for st in self.steps]

    @property
    def final_distance(self) -> int:
        return self.steps[-1].d if self.steps else self.d0

    def replay(self, start: Graph, upto: int | None = None) -> Graph:
        g = start.copy()
        for st in self.steps[:upto]:
            g.toggle_edge(st.u, st.v)
        return g


def step(
    g: Graph,
    ledger: MoveLedger,
    p: AdvancingProbability,
    rng: random.Random,
    allow_false_edges: bool = True,
) -> tuple[SignedEdge, bool, bool]:
    """Make one edit to ``g`` in place.

    Returns ``(move, advancing, fallback)``. ``fallback`` is True when a
    regressing move was drawn but none was legal, so an advancing move was
    made instead.
    """
    d = len(ledger)
    advancing = rng.random() < p(d)
    fallback = False
    if advancing:
        move = ledger.sample_advancing(rng)
    else:
        try:
            move = ledger.sample_regressing(rng, allow_false_edges)
        except RegressionExhaustedError:
            if d == 0:
                raise
            move = ledger.sample_advancing(rng)
            advancing = fallback = True
    ledger.apply(move, advancing)
    g.toggle_edge(move.u, move.v)
    return move, advancing, fallback


def interpolate(start: Graph, target: Graph, cfg: InterpolationConfig) -> Trace:
    """Run the edit process from ``start`` toward ``target`` and record every edit."""
    check_compatible(start, target)
    d_m = max_edit_distance(start.n, start.directed) if start.n >= 1 else 0
    if cfg.d_t > d_m:
        raise ValueError(f"target distance {cfg.d_t} exceeds maximum {d_m}")
    g = start.copy()
    ledger = MoveLedger.build(g, target)
    trace = Trace(start.n, start.directed, len(ledger), cfg.seed, cfg.to_dict())
    if d_m == 0:
        return trace
    p = AdvancingProbability(cfg.s, cfg.d_t, d_m)
    rng = make_rng(cfg.seed)

    if cfg.stop_mode == "fixed_steps":
        goal, limit = -1, cfg.steps
    else:
        goal = 0 if cfg.stop_mode == "until_target" else cfg.d_t
        limit = cfg.max_steps

    # Same process as repeated step() calls, with the common advancing
    # branch fused; the two must consume the RNG identically.
    steps = trace.steps
    append = steps.append
    allow = cfg.allow_false_edges
    rand = rng.random
    succ, pred, n, tgt = g.succ, g.pred, g.n, ledger.target
    d = len(ledger)
    while d != goal:
        if limit is not None and len(steps) >= limit:
            trace.truncated = goal >= 0
            break
        if rand() < p(d):
            key = ledger.pop_advancing(rand)
            u, v = divmod(key, n)
            sign = 1 if key in tgt else -1
            if sign > 0:
                succ[u].add(v)
                pred[v].add(u)
                g._m += 1
            else:
                succ[u].discard(v)
                pred[v].discard(u)
                g._m -= 1
            d -= 1
            append(Step(u, v, sign, True, d))
            continue
        try:
            move = ledger.sample_regressing(rng, allow)
            advancing = False
        except RegressionExhaustedError:
            if d == 0:
                raise
            move = ledger.sample_advancing(rng)
            advancing = True
            trace.fallback_steps.append(len(steps))
        ledger.apply(move, advancing)
        g.toggle_edge(move.u, move.v)
        d = len(ledger)
        append(Step(move.u, move.v, move.sign, advancing, d))
    return trace


def interpolate_sequence(snapshots: Sequence[Graph], cfg: InterpolationConfig | None = None) -> list[Trace]:
    """Interpolate each consecutive pair of snapshots; pair ``i`` uses seed ``cfg.seed + i``."""
    if len(snapshots) < 2:
        raise ValueError("need at least two snapshots")
    cfg = cfg or InterpolationConfig()
    traces = []
    for i, (a, b) in enumerate(zip(snapshots, snapshots[1:])):
        pair_cfg = InterpolationConfig(**{**cfg.to_dict(), "seed": cfg.seed + i})
        traces.append(interpolate(a, b, pair_cfg))
    return traces
