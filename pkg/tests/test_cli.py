import json
import subprocess
import sys

import pytest

from netinterp.chain import fit_rate
from netinterp.cli import main
from netinterp.graph import Graph
from netinterp.snapshots import read_csv, read_graph, read_trace, write_graph


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pair(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["generate", "er", "--n", 30, "--p", 0.3, "--seed", 1, "--run-dir", a], capsys)[0] == 0
    assert run(["generate", "sbm", "--n", 30, "--p", 0.9, "--q", 0.1, "--blocks", 15, 15, "--seed", 2,
                "--run-dir", b], capsys)[0] == 0
    return a / "graph.txt", b / "graph.txt"


def test_generate_sbm_density(tmp_path, capsys):
    code, out, _ = run(["generate", "sbm", "--n", 120, "--p", 0.4, "--q", 0.4, "--blocks", 60, 60,
                        "--run-dir", tmp_path / "g"], capsys)
    assert code == 0
    density = float(out.split("density=")[1].split()[0])
    assert abs(density - 0.4) < 0.03
    assert len(read_csv(tmp_path / "g" / "labels.csv")) == 120


def test_interpolate_outputs_and_manifest(tmp_path, capsys, pair):
    rd = tmp_path / "run"
    code, out, _ = run(["interpolate", *pair, "--rate", 2, "--seed", 5, "--stats-every", 3, "--run-dir", rd], capsys)
    assert code == 0 and "final_distance=0" in out
    for name in ("trace.txt", "distance.csv", "distance.svg", "stats.csv", "clustering.svg", "manifest.json"):
        assert (rd / name).stat().st_size > 0
    assert read_trace(rd / "trace.txt").replay(read_graph(pair[0])) == read_graph(pair[1])
    man = json.loads((rd / "manifest.json").read_text())
    assert man["command"] == "interpolate" and man["seed"] == 5
    assert man["inputs"] == [str(p) for p in pair]
    assert "trace.txt" in man["outputs"] and man["version"]
    assert "--run-dir" not in man["argv"]


def test_manifest_rerun_reproduces_outputs(tmp_path, capsys, pair):
    first = tmp_path / "first"
    run(["interpolate", *pair, "--rate", 3, "--seed", 9, "--run-dir", first], capsys)
    argv = json.loads((first / "manifest.json").read_text())["argv"]
    second = tmp_path / "second"
    assert run([*argv, "--run-dir", second], capsys)[0] == 0
    for name in ("trace.txt", "distance.csv", "stats.csv", "distance.svg", "clustering.svg"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_timestamped_run_dir_under_env(tmp_path, capsys, pair, monkeypatch):
    monkeypatch.setenv("NETINTERP_OUT", str(tmp_path / "runs"))
    assert run(["stats", pair[0]], capsys)[0] == 0
    (d,) = (tmp_path / "runs").iterdir()
    assert d.name.startswith("stats-") and (d / "stats.csv").exists()


def test_sequence_interpolation(tmp_path, capsys, pair):
    code, out, _ = run(["interpolate", pair[0], pair[1], pair[0], "--run-dir", tmp_path / "r"], capsys)
    assert code == 0 and "segments=2" in out
    assert (tmp_path / "r" / "trace_01.txt").exists()
    steps = [int(r["step"]) for r in read_csv(tmp_path / "r" / "stats.csv")]
    assert steps == sorted(set(steps))


def test_hitting_time_and_fit_rate(capsys):
    code, out, _ = run(["hitting-time", "--do", 1000, "--dt", 10, "--dm", 100000, "--rate", 10], capsys)
    assert code == 0 and "terms_used=27" in out
    code, out, _ = run(["fit-rate", "--do", 5852, "--dt", 0, "--dm", 1899 * 1898 // 2, "--steps", 21812], capsys)
    assert code == 0
    assert out.startswith(f"rate={fit_rate(5852, 0, 1899 * 1898 // 2, 21812):g} ")


def test_empirical_hitting_time(tmp_path, capsys, pair):
    rd = tmp_path / "h"
    code, out, _ = run(["hitting-time", "--empirical", "--start", pair[0], "--target", pair[1], "--dt", 5,
                        "--trials", 20, "--run-dir", rd], capsys)
    assert code == 0
    rows = read_csv(rd / "hitting_times.csv")
    assert [int(r["seed"]) for r in rows] == list(range(20))
    summary = json.loads((rd / "summary.json").read_text())
    assert summary["analytic"] > 0 and (rd / "hitting_times.svg").exists()


def test_limiting_dist(tmp_path, capsys):
    code, out, _ = run(["limiting-dist", "--dt", 10, "--dm", 200, "--approx", "--run-dir", tmp_path / "l"], capsys)
    assert code == 0 and float(out.split("max_component_gap=")[1].split()[0]) < 1e-3
    code, _, _ = run(["limiting-dist", "--dt", 10, "--dm", 200, "--run-dir", tmp_path / "e"], capsys)
    rows = read_csv(tmp_path / "e" / "limiting.csv")
    assert len(rows) == 201 and abs(sum(float(r["weight"]) for r in rows) - 1) < 1e-12


def test_baseline(tmp_path, capsys, pair):
    rd = tmp_path / "b"
    code, out, _ = run(["baseline", pair[1], "--model", "triangle_closing", "--m-r", 2, "--m-n", 3,
                        "--one-edge", "--run-dir", rd], capsys)
    assert code == 0 and "overshoot=False" in out
    assert read_graph(rd / "final_graph.txt").number_of_edges() == read_graph(pair[1]).number_of_edges()
    code, out, _ = run(["baseline", pair[0], pair[1], "--model", "preferential", "--m", 4,
                        "--run-dir", tmp_path / "b2"], capsys)
    assert code == 0
    assert json.loads((tmp_path / "b2" / "manifest.json").read_text())["boundaries"]


def test_stats_along_trace(tmp_path, capsys, pair):
    run(["interpolate", *pair, "--run-dir", tmp_path / "i"], capsys)
    code, out, _ = run(["stats", pair[0], "--trace", tmp_path / "i" / "trace.txt", "--every", 10,
                        "--run-dir", tmp_path / "s"], capsys)
    assert code == 0
    last = read_csv(tmp_path / "s" / "stats.csv")[-1]
    assert int(last["d"]) == 0


def test_aggregate(tmp_path, capsys):
    from pathlib import Path

    events = Path(__file__).parent / "data" / "events20.txt"
    code, out, _ = run(["aggregate", events, "--cutoff", 100, 200, "--run-dir", tmp_path / "a"], capsys)
    assert code == 0 and "snapshots=2" in out
    g0 = read_graph(tmp_path / "a" / "snapshot_00.txt")
    g1 = read_graph(tmp_path / "a" / "snapshot_01.txt")
    assert (g0.number_of_edges(), g1.number_of_edges()) == (8, 15)


def test_sbm_experiment_small(tmp_path, capsys):
    rd = tmp_path / "x"
    code, out, _ = run(["sbm-experiment", "--n", 48, "--stride", 20, "--run-dir", rd], capsys)
    assert code == 0
    rows = read_csv(rd / "recovery.csv")
    assert float(rows[-1]["recovery"]) >= 0.95 and float(rows[-1]["subspace_distance"]) < 1e-12
    for name in ("spectrum.csv", "linear_spectrum.csv", "recovery.svg", "spectrum.svg", "linear_spectrum.svg"):
        assert (rd / name).exists()


def test_exit_codes(tmp_path, capsys):
    assert run(["nonsense"], capsys)[0] == 2
    assert run(["interpolate"], capsys)[0] == 2
    assert run(["hitting-time", "--do", 5], capsys)[0] == 2
    assert run(["generate", "sbm", "--n", 10, "--p", 0.5, "--blocks", 3, 3, "--run-dir", tmp_path / "z"], capsys)[0] == 2
    code, _, err = run(["interpolate", tmp_path / "missing.txt", tmp_path / "m2.txt", "--run-dir", tmp_path / "r"], capsys)
    assert code == 1 and "error" in err
    g, h = tmp_path / "g.txt", tmp_path / "h.txt"
    write_graph(g, Graph(3))
    write_graph(h, Graph(4))
    assert run(["interpolate", g, h, "--run-dir", tmp_path / "r2"], capsys)[0] == 1
    assert run(["hitting-time", "--do", 3, "--dt", 5, "--dm", 10], capsys)[0] == 1


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "netinterp.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
