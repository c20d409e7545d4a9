"""Line plots of trace statistics and spectra, written next to the CSV outputs.

Figures are saved as SVG with a fixed hash salt and no date stamp so that
repeated runs produce identical files.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams.update(
    {
        "svg.hashsalt": "netinterp",
        "figure.figsize": (6.0, 3.8),
        "axes.spines.top": False,
        "axes.spines.right": False,
        "font.size": 10,
        "legend.frameon": False,
    }
)


def _save(fig, path) -> str:
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return str(path)


def line_plot(
    path,
    series: Mapping[str, tuple[Sequence[float], Sequence[float]]],
    xlabel: str,
    ylabel: str,
    hline: float | None = None,
    title: str | None = None,
) -> str:
    fig, ax = plt.subplots()
    for label, (x, y) in series.items():
        ax.plot(x, y, lw=1.2, label=label)
    if hline is not None:
        ax.axhline(hline, color="k", lw=0.8, ls="--")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend()
    return _save(fig, path)


def distance_plot(path, distances: Sequence[int], d_t: int | None = None) -> str:
    return line_plot(
        path, {"edit distance": (np.arange(len(distances)), distances)}, "step", "edit distance", hline=d_t
    )


def clustering_plot(path, rows, label: str = "interpolation", baselines: Mapping[str, list] | None = None) -> str:
    """Two panels: mean and global clustering coefficient against step."""
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6))
    groups = {label: rows, **(baselines or {})}
    for name, rs in groups.items():
        steps = [r.step for r in rs]
        axes[0].plot(steps, [r.mean_cc for r in rs], lw=1.2, label=name)
        axes[1].plot(steps, [r.global_cc for r in rs], lw=1.2, label=name)
    axes[0].set_ylabel("mean clustering")
    axes[1].set_ylabel("global clustering")
    for ax in axes:
        ax.set_xlabel("step")
    if len(groups) > 1:
        axes[1].legend()
    return _save(fig, path)


def histogram_plot(path, values: Sequence[float], reference: float | None = None, xlabel: str = "hitting time") -> str:
    fig, ax = plt.subplots()
    ax.hist(values, bins=40, color="0.6")
    if reference is not None:
        ax.axvline(reference, color="k", lw=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("trials")
    return _save(fig, path)


def distribution_plot(path, exact: tuple[Sequence, Sequence], approx: tuple[Sequence, Sequence] | None = None) -> str:
    fig, ax = plt.subplots()
    ax.bar(exact[0], exact[1], width=1.0, color="0.7", label="exact")
    if approx is not None:
        ax.plot(approx[0], approx[1], "k.-", lw=1.0, label="closed form")
        ax.legend()
    ax.set_xlabel("edit distance")
    ax.set_ylabel("weight")
    return _save(fig, path)


def spectrum_plot(path, long_rows: Sequence[tuple], highlight: int = 3, xlabel: str = "step") -> str:
    """Scatter of every eigenvalue against step; the top ``highlight`` are drawn in color.

    ``long_rows`` are ``(x, index, eigenvalue)`` triples.
    """
    arr = np.asarray(long_rows, dtype=float)
    fig, ax = plt.subplots()
    if arr.size:
        bulk = arr[:, 1] >= highlight
        ax.scatter(arr[bulk, 0], arr[bulk, 2], s=1, color="0.75", lw=0)
        for j in range(highlight):
            sel = arr[:, 1] == j
            ax.plot(arr[sel, 0], arr[sel, 2], lw=1.2, label=f"eigenvalue {j + 1}")
        ax.legend()
    ax.set_xlabel(xlabel)
    ax.set_ylabel("eigenvalue")
    return _save(fig, path)


def recovery_plot(path, rows: Sequence[dict]) -> str:
    steps = [r["step"] for r in rows]
    return line_plot(
        path,
        {
            "recovery rate": (steps, [r["recovery"] for r in rows]),
            "subspace distance": (steps, [r["subspace_distance"] for r in rows]),
        },
        "step",
        "value",
    )
