"""Reading timestamped edge lists, building cumulative snapshots, and
persisting graphs, traces and statistics tables.

Graph files are sorted edge lists with a one-line header::

    # n=3 directed=0
    0 1
    0 2
    1 2

Trace files record one edit per line as ``direction u v sign`` where the
direction is ``A`` (advancing), ``R`` (regressing) or ``F`` (advancing move
forced because no regressing move was legal).
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph
from .interpolate import Step, Trace

TRACE_MAGIC = "netinterp-trace"
TRACE_VERSION = 1
DAY = 86400


class FormatError(ValueError):
    """Malformed or incompatible input file."""


def _number(tok: str) -> int | float:
    try:
        return int(tok)
    except ValueError:
        return float(tok)


@dataclass
class EventList:
    events: list[tuple[int, int, int | float]] = field(default_factory=list)
    label_map: dict[str, int] = field(default_factory=dict)
    skipped_self_loops: int = 0

    @property
    def n(self) -> int:
        return len(self.label_map)

    def labels(self) -> list[str]:
        out = [""] * self.n
        for lab, i in self.label_map.items():
            out[i] = lab
        return out

    def _index(self, label: str) -> int:
        idx = self.label_map.get(label)
        if idx is None:
            idx = self.label_map[label] = len(self.label_map)
        return idx

    def add(self, a: str, b: str, t) -> None:
        u, v = self._index(a), self._index(b)
        if u == v:
            self.skipped_self_loops += 1
            return
        self.events.append((u, v, t))

    def sort(self) -> None:
        self.events.sort(key=lambda e: e[2])

    @property
    def span(self) -> tuple[float, float]:
        if not self.events:
            raise ValueError("no events")
        return self.events[0][2], self.events[-1][2]


def _lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if line and not line.startswith("#"):
                yield lineno, line


def read_edge_list(path) -> EventList:
    """Parse ``u v [t]`` lines; ``#`` lines are comments.

    Labels map to dense indices in order of first appearance. A missing
    timestamp defaults to the line number. Events come back sorted by time
    (stable for ties).
    """
    ev = EventList()
    for lineno, line in _lines(path):
        toks = line.split()
        if len(toks) not in (2, 3):
            raise FormatError(f"{path}:{lineno}: expected 'u v [t]', got {line!r}")
        try:
            t = _number(toks[2]) if len(toks) == 3 else lineno
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad timestamp {toks[2]!r}") from None
        ev.add(toks[0], toks[1], t)
    ev.sort()
    return ev


def read_author_lists(path, max_authors: int = 10) -> EventList:
    """Parse ``t author1 author2 ...`` lines; each publication becomes a clique of events.

    Publications with more than ``max_authors`` authors are dropped.
    """
    ev = EventList()
    for lineno, line in _lines(path):
        toks = line.split()
        if len(toks) < 2:
            raise FormatError(f"{path}:{lineno}: expected 't author [author ...]'")
        try:
            t = _number(toks[0])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad timestamp {toks[0]!r}") from None
        authors = list(dict.fromkeys(toks[1:]))
        if len(authors) > max_authors:
            continue
        for a in authors:
            ev._index(a)
        for i, a in enumerate(authors):
            for b in authors[i + 1 :]:
                ev.add(a, b, t)
    ev.sort()
    return ev


@dataclass
class SnapshotSet:
    snapshots: list[Graph]
    boundaries: list

    def __len__(self) -> int:
        return len(self.snapshots)


def aggregate_snapshots(
    ev: EventList, cutoffs: Sequence, mode: str = "cumulative", directed: bool = False
) -> SnapshotSet:
    """Snapshot ``k`` holds every pair with at least one event at time ``<= cutoffs[k]``."""
    if mode != "cumulative":
        raise ValueError(f"unsupported aggregation mode {mode!r}")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ValueError("cutoffs must be strictly increasing")
    g = Graph(ev.n, directed=directed)
    snaps = []
    i = 0
    events = ev.events
    for cut in cutoffs:
        while i < len(events) and events[i][2] <= cut:
            u, v, _ = events[i]
            g.add_edge(u, v)
            i += 1
        snaps.append(g.copy())
    return SnapshotSet(snaps, list(cutoffs))


def stride_cutoffs(ev: EventList, stride: float = 100 * DAY, count: int | None = None) -> list:
    """Cutoffs ``t0 + stride, t0 + 2 stride, ...``; the last one covers the final event."""
    t0, t1 = ev.span
    k = max(1, math.ceil((t1 - t0) / stride))
    if count is not None:
        k = min(k, count)
    cuts = [t0 + stride * (j + 1) for j in range(k)]
    cuts[-1] = max(cuts[-1], t1)
    return cuts


# -- graphs ----------------------------------------------------------------

def write_graph(path, g: Graph) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n={g.n} directed={int(g.directed)}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def _parse_header(line: str) -> dict[str, str]:
    out = {}
    for tok in line.lstrip("#").split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            out[k] = v
    return out


def read_graph(path, n: int | None = None, directed: bool | None = None) -> Graph:
    """Read a graph file. Without a header, ``n`` defaults to one past the largest index."""
    header: dict[str, str] = {}
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if not header and "n=" in line:
                    header = _parse_header(line)
                continue
            toks = line.split()
            if len(toks) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                edges.append((int(toks[0]), int(toks[1])))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: vertex ids must be integers") from None
    if n is None:
        n = int(header["n"]) if "n" in header else 1 + max((max(e) for e in edges), default=-1)
    if directed is None:
        directed = header.get("directed", "0") == "1"
    try:
        return Graph(n, edges, directed=directed)
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: {exc}") from None


# -- traces ----------------------------------------------------------------

def write_trace(path, trace: Trace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {TRACE_MAGIC} {TRACE_VERSION}\n")
        fh.write(
            f"# n={trace.n} directed={int(trace.directed)} d0={trace.d0} seed={trace.seed} "
            f"steps={len(trace.steps)} truncated={int(trace.truncated)}\n"
        )
        fh.write("# config=" + json.dumps(trace.config, sort_keys=True) + "\n")
        fallback = set(trace.fallback_steps)
        lines = []
        for i, st in enumerate(trace.steps):
            tag = "F" if i in fallback else ("A" if st.advancing else "R")
            lines.append(f"{tag} {st.u} {st.v} {st.sign}\n")
        fh.writelines(lines)


def read_trace(path) -> Trace:
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().split()
        if first[:2] != ["#", TRACE_MAGIC]:
            raise FormatError(f"{path}: not a trace file")
        if len(first) < 3 or first[2] != str(TRACE_VERSION):
            raise FormatError(f"{path}: unsupported trace version {first[2:]}")
        meta = _parse_header(fh.readline())
        cfg_line = fh.readline()
        if not cfg_line.startswith("# config="):
            raise FormatError(f"{path}: missing config line")
        try:
            trace = Trace(
                n=int(meta["n"]),
                directed=meta["directed"] == "1",
                d0=int(meta["d0"]),
                seed=int(meta["seed"]),
                config=json.loads(cfg_line[len("# config="):]),
                truncated=meta.get("truncated", "0") == "1",
            )
            expected = int(meta["steps"])
        except (KeyError, ValueError) as exc:
            raise FormatError(f"{path}: bad header ({exc})") from None
        d = trace.d0
        for lineno, raw in enumerate(fh, 4):
            toks = raw.split()
            if len(toks) != 4 or toks[0] not in ("A", "R", "F"):
                raise FormatError(f"{path}:{lineno}: bad step line {raw.strip()!r}")
            adv = toks[0] != "R"
            if toks[0] == "F":
                trace.fallback_steps.append(len(trace.steps))
            d += -1 if adv else 1
            trace.steps.append(Step(int(toks[1]), int(toks[2]), int(toks[3]), adv, d))
    if len(trace.steps) != expected:
        raise FormatError(f"{path}: truncated trace ({len(trace.steps)} of {expected} steps)")
    return trace


# -- CSV -------------------------------------------------------------------

def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def write_stats_csv(path, rows) -> None:
    write_csv(path, ("step", "d", "edges", "mean_cc", "global_cc"), (r.as_tuple() for r in rows))


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def ensure_dir(path) -> str:
    os.makedirs(path, exist_ok=True)
    return str(path)
