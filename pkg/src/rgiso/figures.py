"""Optional matplotlib renders of the report data, written next to the
delimited output when the CLI is given --fig. Import cost is paid lazily so
plain runs never load the plotting stack."""

from __future__ import annotations

import math


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def fig_threshold(samples: list[tuple[float, float]], meta: dict, path: str) -> None:
    """Limiting containment profile f(c) over the sampled offsets."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([c for c, _ in samples], [f for _, f in samples], color="#2a5d8f")
    ax.set_xlabel("offset c")
    ax.set_ylabel("limiting containment probability")
    ax.set_title(f"p1={meta['p1']:g} p2={meta['p2']:g} N={meta['N']}")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def fig_region_map(cells: list[tuple[float, float, str]], grid_k: int, path: str) -> None:
    plt = _pyplot()
    fills = {"A": "#f5f5f5", "B1": "#8fb8de", "B2": "#4a6d8c"}
    side = 1.0 / (grid_k + 1)
    fig, ax = plt.subplots(figsize=(5, 5))
    for x, y, region in cells:
        ax.add_patch(
            plt.Rectangle(
                (x - side / 2, y - side / 2), side, side, color=fills[region]
            )
        )
    handles = [plt.Rectangle((0, 0), 1, 1, color=fills[r]) for r in ("A", "B1", "B2")]
    ax.legend(handles, ["A", "B1", "B2"], loc="upper left")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel("p1")
    ax.set_ylabel("p2")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def fig_heatmap(
    cells: list[tuple[float, float, float | None]],
    grid_k: int,
    curves: list[list[tuple[float, float]]],
    path: str,
) -> None:
    plt = _pyplot()
    import numpy as np

    axis = sorted({x for x, _, _ in cells})
    grid = np.full((grid_k, grid_k), np.nan)
    index = {v: i for i, v in enumerate(axis)}
    for x, y, rate in cells:
        if rate is not None:
            grid[index[y], index[x]] = rate
    fig, ax = plt.subplots(figsize=(5.5, 5))
    half = 0.5 / (grid_k + 1)
    extent = (axis[0] - half, axis[-1] + half, axis[0] - half, axis[-1] + half)
    im = ax.imshow(
        grid, origin="lower", cmap="gray_r", vmin=0, vmax=1, extent=extent
    )
    for curve in curves:
        if len(curve) >= 2:
            ax.plot(
                [x for x, _ in curve],
                [y for _, y in curve],
                linestyle="--",
                color="#c23b22",
            )
    fig.colorbar(im, ax=ax, label="containment rate")
    ax.set_xlabel("pattern density")
    ax.set_ylabel("target density")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def fig_count_distribution(
    values: tuple[float, ...],
    counts: tuple[int, ...],
    mu: float,
    path: str,
) -> None:
    """Empirical copy-count pmf as bars with the reference Poisson pmf dotted."""
    plt = _pyplot()
    total = sum(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(values, [c / total for c in counts], width=0.8, color="#9ecae1", label="empirical")
    kmax = int(max(values))
    pmf = [math.exp(-mu)]
    for k in range(kmax):
        pmf.append(pmf[-1] * mu / (k + 1))
    ax.plot(range(kmax + 1), pmf, "o--", color="#c23b22", label="reference")
    ax.set_xlabel("copy count")
    ax.set_ylabel("probability")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def fig_mcis_histogram(
    values: tuple[int, ...],
    counts: tuple[int, ...],
    interval: tuple[int, int] | None,
    path: str,
) -> None:
    plt = _pyplot()
    total = sum(counts)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(values, [c / total for c in counts], width=0.8, color="#9ecae1")
    if interval is not None:
        ax.axvspan(interval[0] - 0.5, interval[1] + 0.5, color="#c23b22", alpha=0.15)
    ax.set_xlabel("common induced subgraph size")
    ax.set_ylabel("frequency")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
