"""CSV tables, run manifests and optional SVG plots."""
from __future__ import annotations

import json
import math
import platform
from pathlib import Path

import numpy as np

NUMBER_FORMAT = "%.12e"


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else NUMBER_FORMAT % (value + 0.0)
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    return path


def write_table(path, table: dict) -> Path:
    header = list(table)
    columns = [table[k] for k in header]
    n = len(columns[0]) if columns else 0
    return write_csv(path, header, ([col[i] for col in columns] for i in range(n)))


def read_csv(path):
    """Header and rows as strings; numeric parsing is left to the caller."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def write_manifest(path, *, argv, config, seed, version, wall_time, outputs) -> Path:
    manifest = {
        "command_line": list(argv),
        "config": config,
        "seed": seed,
        "version": version,
        "python": platform.python_version(),
        "wall_time_s": wall_time,
        "outputs": [str(p) for p in outputs],
    }
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


_PHASE_CODES = {"NP": 0, "USP": 1, "FSP": 2, "CFSP": 3}


def phase_heatmap_svg(path, grid) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.colors import ListedColormap

    codes = np.vectorize(lambda p: _PHASE_CODES.get(p, np.nan), otypes=[float])(grid.phase)
    fig, ax = plt.subplots(figsize=(5, 4))
    cmap = ListedColormap(["#dddddd", "#4c72b0", "#dd8452", "#c44e52"])
    ax.pcolormesh(grid.g1_axis, grid.theta_axis / np.pi, codes, cmap=cmap, vmin=-0.5, vmax=3.5,
                  shading="nearest")
    ax.set_xlabel("g1")
    ax.set_ylabel("theta / pi")
    handles = [plt.Rectangle((0, 0), 1, 1, color=cmap(i)) for i in range(4)]
    ax.legend(handles, list(_PHASE_CODES), loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return Path(path)


def line_plot_svg(path, x, curves: dict, xlabel: str, ylabel: str) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for label, y in curves.items():
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return Path(path)
