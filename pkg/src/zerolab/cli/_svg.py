"""SVG rendering of the plot CSV files (``pip install zerolab[plot]``)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

try:
    import matplotlib
    from cmap import Colormap
except ImportError as e:
    raise ImportError(
        "matplotlib and cmap are required to render SVG figures. "
        "Install them with `pip install matplotlib cmap` or "
        "`pip install zerolab[plot]`."
    ) from e

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_svg"]

COLORMAP = "viridis"

_LABELS = {
    "rate": ("N^{m+1}", "-log p"),
    "kernel-decay": ("FS distance d", "P_N"),
    "scatter-zeros": ("Re z", "Im z"),
}


def _read(path: Path) -> tuple[list[str], np.ndarray]:
    header = path.read_text().splitlines()[0].split(",")
    data = np.genfromtxt(path, delimiter=",", skip_header=1, ndmin=2)
    return header, data


def render_svg(csv_path: str | Path, kind: str) -> Path:
    """Draw the CSV file written by `emit_plot_data` as an SVG next to it."""
    csv_path = Path(csv_path)
    header, data = _read(csv_path)
    colors = Colormap(COLORMAP)
    fig, ax = plt.subplots(figsize=(5, 4))
    if kind == "histogram":
        degrees = np.unique(data[:, 0]) if data.size else []
        for i, N in enumerate(degrees):
            rows = data[data[:, 0] == N]
            color = colors(i / max(1, len(degrees) - 1)).hex
            edges = np.append(rows[:, 1], rows[-1, 2])
            ax.stairs(rows[:, 3], edges, color=color, label=f"N={int(N)}")
        ax.set_xlabel(header[1].removesuffix("_low"))
        ax.set_ylabel("count")
        ax.legend()
    elif kind == "rate":
        ax.plot(data[:, 2], data[:, 3], "o-", color=colors(0.3).hex)
    elif kind == "kernel-decay":
        ax.plot(data[:, 0], data[:, 1], color=colors(0.2).hex, label="P_N")
        ax.plot(data[:, 0], data[:, 2], "--", color=colors(0.8).hex, label="gaussian")
        ax.legend()
    else:
        ax.scatter(data[:, 0], data[:, 1], s=6, color=colors(0.5).hex)
        ax.set_aspect("equal")
    if kind in _LABELS:
        ax.set_xlabel(_LABELS[kind][0])
        ax.set_ylabel(_LABELS[kind][1])
    out = csv_path.with_suffix(".svg")
    fig.savefig(out, format="svg")
    plt.close(fig)
    return out
