"""Command-line entry point: ``netinterp <command> ...``.

Every command that writes files puts them in a fresh run directory under
``--out`` (default ``$NETINTERP_OUT`` or ``./runs``) together with a
``manifest.json`` holding the arguments needed to reproduce the run.

Exit codes: 0 on success, 2 on usage errors, 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .chain import (
    DistanceChain,
    approx_limiting_distribution,
    empirical_hitting_time,
    exact_limiting_distribution,
    expected_hitting_time,
    fit_rate,
)
from .generators import SbmSpec, erdos_renyi, sbm
from .graph import edit_distance, max_edit_distance
from .growth import GrowthSpec, extrapolate, extrapolate_sequence
from .interpolate import STOP_MODES, InterpolationConfig, interpolate_sequence
from .snapshots import (
    DAY,
    aggregate_snapshots,
    read_author_lists,
    read_edge_list,
    read_graph,
    read_trace,
    stride_cutoffs,
    write_csv,
    write_graph,
    write_stats_csv,
    write_trace,
)
from .stats import graph_stats, stats_along_trace

log = logging.getLogger("netinterp")

OUT_ENV = "NETINTERP_OUT"


class RunDir:
    """Per-run output directory plus manifest bookkeeping."""

    def __init__(self, args: argparse.Namespace, argv: list[str]):
        base = Path(args.out or os.environ.get(OUT_ENV, "runs"))
        if args.run_dir:
            path = Path(args.run_dir)
        else:
            stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
            path = base / f"{args.command}-{stamp}-seed{getattr(args, 'seed', 0)}"
        path.mkdir(parents=True, exist_ok=True)
        self.path = path
        self.args = args
        self.argv = argv
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.extra: dict = {}
        self.t0 = time.perf_counter()

    def file(self, name: str) -> Path:
        p = self.path / name
        self.outputs.append(name)
        return p

    def finish(self) -> Path:
        config = {k: v for k, v in vars(self.args).items() if k not in ("func", "writes", "out", "run_dir")}
        manifest = {
            "command": self.args.command,
            "argv": _strip_out(self.argv),
            "config": config,
            "seed": getattr(self.args, "seed", None),
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": __version__,
            "duration_s": round(time.perf_counter() - self.t0, 6),
            **self.extra,
        }
        p = self.path / "manifest.json"
        p.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
        return p


def _strip_out(argv: list[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--out", "--run-dir"):
            skip = True
            continue
        if tok.startswith("--out=") or tok.startswith("--run-dir="):
            continue
        out.append(tok)
    return out


# -- commands ----------------------------------------------------------------

def cmd_interpolate(args, run: RunDir) -> None:
    from . import plotting

    graphs = [read_graph(p) for p in args.graphs]
    run.inputs += args.graphs
    cfg = InterpolationConfig(
        s=args.rate,
        d_t=args.target_dist,
        stop_mode=args.mode,
        steps=args.steps,
        allow_false_edges=not args.no_false_edges,
        seed=args.seed,
        stat_sample_every=args.stats_every,
        max_steps=args.max_steps,
    )
    traces = interpolate_sequence(graphs, cfg)
    all_rows, offset, distances = [], 0, []
    for i, (g, tr) in enumerate(zip(graphs, traces)):
        name = "trace.txt" if len(traces) == 1 else f"trace_{i:02d}.txt"
        write_trace(run.file(name), tr)
        dist = tr.distances()
        distances.extend(zip(range(offset, offset + len(dist)), [i] * len(dist), dist))
        if not g.directed:
            rows = stats_along_trace(g, tr, args.stats_every)
            for r in rows:
                r.step += offset
            if all_rows and rows and all_rows[-1].step == rows[0].step:
                rows = rows[1:]
            all_rows.extend(rows)
        offset += len(tr)
    write_csv(run.file("distance.csv"), ("step", "segment", "d"), distances)
    plotting.distance_plot(run.file("distance.svg"), [d for _, _, d in distances], args.target_dist)
    if all_rows:
        write_stats_csv(run.file("stats.csv"), all_rows)
        plotting.clustering_plot(run.file("clustering.svg"), all_rows)
    run.extra["steps"] = [len(t) for t in traces]
    print(f"steps={offset} segments={len(traces)} final_distance={traces[-1].final_distance}")


def cmd_hitting_time(args, run: RunDir | None) -> None:
    if args.empirical:
        from . import plotting

        start, target = read_graph(args.start), read_graph(args.target)
        run.inputs += [args.start, args.target]
        d_m = max_edit_distance(start.n, start.directed)
        d_o = edit_distance(start, target)
        cfg = InterpolationConfig(s=args.rate, d_t=args.dt, stop_mode="until_distance", seed=args.seed)
        sample = empirical_hitting_time(start, target, cfg, args.trials, workers=args.workers)
        write_csv(run.file("hitting_times.csv"), ("trial", "seed", "hitting_time"),
                  [(i, sd, int(t)) for i, (sd, t) in enumerate(zip(sample.seeds, sample.times))])
        analytic = expected_hitting_time(d_o, args.dt, d_m, args.rate, args.tol)[0] if d_o >= args.dt else None
        summary = {"d_o": d_o, "d_m": d_m, "mean": sample.mean, "var": sample.var,
                   "quantiles": sample.quantiles(), "analytic": analytic}
        run.file("summary.json").write_text(json.dumps(summary, indent=2) + "\n")
        plotting.histogram_plot(run.file("hitting_times.svg"), sample.times, analytic)
        print(f"empirical_mean={sample.mean:.6f} analytic={analytic} trials={args.trials}")
        return
    for name in ("do", "dm"):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required unless --empirical is given")
    value, terms = expected_hitting_time(args.do, args.dt, args.dm, args.rate, args.tol)
    print(f"value={value!r} terms_used={terms}")


def cmd_limiting_dist(args, run: RunDir) -> None:
    from . import plotting

    if args.dt > args.dm:
        raise ValueError(f"--dt {args.dt} exceeds --dm {args.dm}")
    exact = exact_limiting_distribution(DistanceChain.logistic(args.dm, args.rate, args.dt))
    if args.approx:
        dist = approx_limiting_distribution(args.dt, args.rate, d_m=args.dm)
        ex = exact.as_dict()
        gap = max(abs(ex[k] - w) for k, w in dist.as_dict().items())
        run.extra["max_gap_vs_exact"] = gap
        print(f"max_component_gap={gap:.3e}")
    else:
        dist = exact
        print(f"sum={dist.weights.sum():.15f}")
    write_csv(run.file("limiting.csv"), ("state", "weight"), dist.rows())
    lo, hi = max(0, args.dt - 6 * int(args.rate + 3)), min(args.dm, args.dt + 6 * int(args.rate + 3))
    window = slice(lo, hi + 1)
    approx_xy = (dist.states, dist.weights) if args.approx else None
    plotting.distribution_plot(run.file("limiting.svg"), (exact.states[window], exact.weights[window]), approx_xy)


def cmd_fit_rate(args, run: RunDir | None) -> None:
    s = fit_rate(args.do, args.dt, args.dm, args.steps, args.grid)
    h, terms = expected_hitting_time(args.do, args.dt, args.dm, s)
    print(f"rate={s:g} expected_hitting_time={h:.3f} terms_used={terms}")


def cmd_generate(args, run: RunDir) -> None:
    if args.model == "er":
        g = erdos_renyi(args.n, args.p, args.seed)
        labels = None
    else:
        blocks = args.blocks or [args.n]
        if sum(blocks) != args.n:
            raise UsageError(f"block sizes sum to {sum(blocks)}, not --n {args.n}")
        g, labels = sbm(SbmSpec(tuple(blocks), args.p, args.q if args.q is not None else args.p), args.seed)
    write_graph(run.file("graph.txt"), g)
    if labels is not None:
        write_csv(run.file("labels.csv"), ("vertex", "block"), enumerate(labels.tolist()))
    density = g.number_of_edges() / max(1, max_edit_distance(g.n))
    print(f"n={g.n} edges={g.number_of_edges()} density={density:.4f}")


def cmd_baseline(args, run: RunDir) -> None:
    from . import plotting

    snaps = [read_graph(p) for p in args.graphs]
    run.inputs += args.graphs
    spec = GrowthSpec(args.model, args.m, args.m_r, args.p_r, args.m_n, args.p_n, args.seed)
    clique = args.clique or spec.start_clique_size()
    if len(snaps) == 1:
        rec = extrapolate(clique, spec, snaps[0], one_edge_at_a_time=args.one_edge, every=args.stats_every)
    else:
        rec = extrapolate_sequence(snaps, spec, clique, every=args.stats_every)
    write_stats_csv(run.file("stats.csv"), rec.rows)
    write_graph(run.file("final_graph.txt"), rec.graph)
    plotting.clustering_plot(run.file("clustering.svg"), rec.rows, label=args.model)
    run.extra.update(edits=rec.edits, overshoot=rec.overshoot, boundaries=rec.boundaries)
    print(f"edits={rec.edits} edges={rec.graph.number_of_edges()} overshoot={rec.overshoot}")


def cmd_sbm_experiment(args, run: RunDir) -> None:
    from . import plotting
    from .spectral import sbm_transition_experiment

    cfg = InterpolationConfig(s=args.rate, d_t=0, stop_mode="until_target", seed=args.seed)
    exp = sbm_transition_experiment(args.scenario, args.n, args.p, args.q, cfg, stride=args.stride, k=args.k)
    keys = ["step", "d", "recovery", "subspace_distance"] + [f"eig{j + 1}" for j in range(args.k)]
    write_csv(run.file("recovery.csv"), keys, ([r[k] for k in keys] for r in exp.rows))
    write_csv(run.file("spectrum.csv"), ("step", "index", "eigenvalue"), exp.spectra)
    write_csv(run.file("linear_spectrum.csv"), ("point", "t", "index", "eigenvalue"), exp.linear_spectra)
    plotting.recovery_plot(run.file("recovery.svg"), exp.rows)
    plotting.spectrum_plot(run.file("spectrum.svg"), exp.spectra, args.k)
    plotting.spectrum_plot(
        run.file("linear_spectrum.svg"), [(t, j, x) for _, t, j, x in exp.linear_spectra], args.k, xlabel="t"
    )
    early, late = exp.window_mean("recovery", 0, 0.1), exp.window_mean("recovery", 0.9, 1.0)
    run.extra.update(total_steps=exp.total_steps, early_recovery=early, late_recovery=late)
    print(f"steps={exp.total_steps} early_recovery={early:.3f} late_recovery={late:.3f} "
          f"final_subspace_distance={exp.rows[-1]['subspace_distance']:.3e}")


def cmd_stats(args, run: RunDir) -> None:
    from . import plotting

    if args.trace:
        if len(args.graphs) != 1:
            raise UsageError("--trace needs exactly one start graph")
        start, tr = read_graph(args.graphs[0]), read_trace(args.trace)
        run.inputs += [args.graphs[0], args.trace]
        rows = stats_along_trace(start, tr, args.every)
        plotting.clustering_plot(run.file("clustering.svg"), rows)
    else:
        run.inputs += args.graphs
        rows = [graph_stats(read_graph(p), step=i) for i, p in enumerate(args.graphs)]
    write_stats_csv(run.file("stats.csv"), rows)
    last = rows[-1]
    print(f"rows={len(rows)} mean_cc={last.mean_cc:.6f} global_cc={last.global_cc:.6f}")


def cmd_aggregate(args, run: RunDir) -> None:
    ev = read_author_lists(args.events, args.max_authors) if args.authors else read_edge_list(args.events)
    run.inputs.append(args.events)
    cutoffs = args.cutoff or stride_cutoffs(ev, args.stride_days * DAY, args.count)
    snaps = aggregate_snapshots(ev, cutoffs, directed=args.directed)
    for i, g in enumerate(snaps.snapshots):
        write_graph(run.file(f"snapshot_{i:02d}.txt"), g)
    write_csv(run.file("labels.csv"), ("vertex", "label"), enumerate(ev.labels()))
    write_csv(run.file("snapshots.csv"), ("snapshot", "cutoff", "edges"),
              [(i, c, g.number_of_edges()) for i, (c, g) in enumerate(zip(cutoffs, snaps.snapshots))])
    print(f"n={ev.n} events={len(ev.events)} snapshots={len(snaps)}")


# -- parser ------------------------------------------------------------------

class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, seed: bool = True) -> None:
    p.add_argument("--out", help=f"base output directory (default ${OUT_ENV} or ./runs)")
    p.add_argument("--run-dir", help="exact run directory to use instead of a timestamped one")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netinterp", description="Random edit interpolation between graph snapshots.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interpolate", help="interpolate between two or more graph files")
    p.add_argument("graphs", nargs="+", help="graph files: start, target[, further snapshots]")
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--target-dist", type=int, default=0)
    p.add_argument("--mode", choices=STOP_MODES, default="until_target")
    p.add_argument("--steps", type=int, help="step count for fixed_steps mode")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--no-false-edges", action="store_true")
    p.add_argument("--stats-every", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_interpolate, writes=True)

    p = sub.add_parser("hitting-time", help="expected (or simulated) hitting time of the target distance")
    p.add_argument("--do", type=int)
    p.add_argument("--dt", type=int, default=0)
    p.add_argument("--dm", type=int)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=sys.float_info.epsilon)
    p.add_argument("--empirical", action="store_true")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--start")
    p.add_argument("--target")
    _add_common(p)
    p.set_defaults(func=cmd_hitting_time, writes=None)

    p = sub.add_parser("limiting-dist", help="stationary distribution of edit distances")
    p.add_argument("--dt", type=int, required=True)
    p.add_argument("--dm", type=int, required=True)
    p.add_argument("--rate", type=float, default=1.0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", default=True)
    g.add_argument("--approx", action="store_true")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_limiting_dist, writes=True)

    p = sub.add_parser("fit-rate", help="grid rate whose expected hitting time matches a step count")
    p.add_argument("--do", type=int, required=True)
    p.add_argument("--dt", type=int, default=0)
    p.add_argument("--dm", type=int, required=True)
    p.add_argument("--steps", type=float, required=True)
    p.add_argument("--grid", type=float, default=50)
    p.set_defaults(func=cmd_fit_rate, writes=False)

    p = sub.add_parser("generate", help="sample an Erdos-Renyi or SBM graph")
    p.add_argument("model", choices=("er", "sbm"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float)
    p.add_argument("--blocks", type=int, nargs="+")
    _add_common(p)
    p.set_defaults(func=cmd_generate, writes=True)

    p = sub.add_parser("baseline", help="growth-model extrapolation toward snapshot edge counts")
    p.add_argument("graphs", nargs="+", help="one target graph, or a snapshot sequence")
    p.add_argument("--model", choices=("uniform", "preferential", "triangle_closing"), default="uniform")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--m-r", type=int, default=1)
    p.add_argument("--p-r", type=float, default=0.5)
    p.add_argument("--m-n", type=int, default=1)
    p.add_argument("--p-n", type=float, default=0.5)
    p.add_argument("--clique", type=int, help="starting clique size (default from the model)")
    p.add_argument("--one-edge", action="store_true", help="add edges one at a time and stop exactly")
    p.add_argument("--stats-every", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_baseline, writes=True)

    p = sub.add_parser("sbm-experiment", help="2-block to 3-block change-point experiment")
    p.add_argument("--scenario", choices=("split", "independent"), default="split")
    p.add_argument("--n", type=int, default=120)
    p.add_argument("--p", type=float, default=0.9)
    p.add_argument("--q", type=float, default=0.1)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--stride", type=int, default=25)
    _add_common(p)
    p.set_defaults(func=cmd_sbm_experiment, writes=True)

    p = sub.add_parser("stats", help="clustering statistics of graphs or along a trace")
    p.add_argument("graphs", nargs="+")
    p.add_argument("--trace")
    p.add_argument("--every", type=int)
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_stats, writes=True)

    p = sub.add_parser("aggregate", help="cumulative snapshots from a timestamped edge list")
    p.add_argument("events")
    p.add_argument("--cutoff", type=float, nargs="+")
    p.add_argument("--stride-days", type=float, default=100)
    p.add_argument("--count", type=int)
    p.add_argument("--authors", action="store_true", help="input lines are 't author author ...'")
    p.add_argument("--max-authors", type=int, default=10)
    p.add_argument("--directed", action="store_true")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_aggregate, writes=True)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    writes = args.writes if args.writes is not None else getattr(args, "empirical", False)
    try:
        run = RunDir(args, argv) if writes else None
        args.func(args, run)
        if run is not None:
            run.finish()
            print(f"outputs: {run.path}")
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"netinterp: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, LookupError, OSError, RuntimeError) as exc:
        print(f"netinterp: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
