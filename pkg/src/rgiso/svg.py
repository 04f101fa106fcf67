"""Hand-built SVG renderers with deterministic bytes.

No drawing library: output depends only on the input data, so golden tests
can diff the files. Coordinates are fixed-precision; no timestamps or
generated ids.
"""

from __future__ import annotations

_SIZE = 520
_MARGIN = 40
_PLOT = _SIZE - 2 * _MARGIN

_REGION_FILLS = {"A": "#f5f5f5", "B1": "#8fb8de", "B2": "#4a6d8c"}


def _px(frac: float) -> float:
    # unit square x in [0,1] to plot pixels, y flipped separately
    return _MARGIN + frac * _PLOT


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{_SIZE}" height="{_SIZE}" fill="#ffffff"/>',
    ]


def _axes(xlabel: str, ylabel: str) -> list[str]:
    parts = [
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_PLOT}" height="{_PLOT}" '
        f'fill="none" stroke="#000000" stroke-width="1"/>',
        f'<text x="{_SIZE // 2}" y="{_SIZE - 8}" font-family="monospace" '
        f'font-size="13" text-anchor="middle">{xlabel}</text>',
        f'<text x="12" y="{_SIZE // 2}" font-family="monospace" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 12 {_SIZE // 2})">{ylabel}</text>',
    ]
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        px = _fmt(_px(tick))
        py = _fmt(_px(1.0 - tick))
        lab = f"{tick:g}"
        parts.append(
            f'<text x="{px}" y="{_SIZE - _MARGIN + 16}" font-family="monospace" '
            f'font-size="11" text-anchor="middle">{lab}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN - 6}" y="{py}" font-family="monospace" '
            f'font-size="11" text-anchor="end" dominant-baseline="middle">{lab}</text>'
        )
    return parts


def _cell_rect(x: float, y: float, side: float, fill: str) -> str:
    # cell centered on its grid point; y axis points up in data space
    left = _px(x) - side / 2.0
    top = _px(1.0 - y) - side / 2.0
    return (
        f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(side)}" '
        f'height="{_fmt(side)}" fill="{fill}"/>'
    )


def region_map_svg(cells: list[tuple[float, float, str]], grid_k: int) -> str:
    """Unit-square map of region tags, one filled square per grid cell."""
    side = _PLOT / (grid_k + 1)
    parts = _header("parameter regions")
    for x, y, region in cells:
        parts.append(_cell_rect(x, y, side, _REGION_FILLS[region]))
    parts.extend(_axes("p1", "p2"))
    ly = _MARGIN + 12
    for i, region in enumerate(("A", "B1", "B2")):
        lx = _MARGIN + 10 + 70 * i
        parts.append(
            f'<rect x="{lx}" y="{ly}" width="14" height="14" '
            f'fill="{_REGION_FILLS[region]}" stroke="#000000" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{lx + 19}" y="{ly + 11}" font-family="monospace" '
            f'font-size="12">{region}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap_svg(
    cells: list[tuple[float, float, float | None]],
    grid_k: int,
    curves: list[list[tuple[float, float]]],
) -> str:
    """Grayscale rate raster plus dashed threshold-curve overlays.

    cells are (x, y, rate) with rate None for undecided cells (drawn hatched
    as a diagonal stroke). curves are polylines in unit-square coordinates.
    """
    side = _PLOT / (grid_k + 1)
    parts = _header("containment rates")
    for x, y, rate in cells:
        if rate is None:
            left, top = _px(x) - side / 2.0, _px(1.0 - y) - side / 2.0
            parts.append(_cell_rect(x, y, side, "#ffffff"))
            parts.append(
                f'<line x1="{_fmt(left)}" y1="{_fmt(top + side)}" '
                f'x2="{_fmt(left + side)}" y2="{_fmt(top)}" '
                f'stroke="#bbbbbb" stroke-width="1"/>'
            )
            continue
        level = round(255 * (1.0 - rate))
        parts.append(_cell_rect(x, y, side, f"rgb({level},{level},{level})"))
    for curve in curves:
        if len(curve) < 2:
            continue
        pts = " ".join(f"{_fmt(_px(x))},{_fmt(_px(1.0 - y))}" for x, y in curve)
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#c23b22" '
            f'stroke-width="1.5" stroke-dasharray="6 3"/>'
        )
    parts.extend(_axes("pattern density", "target density"))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
