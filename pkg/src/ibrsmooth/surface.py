"""Static SVG heat map of gridded predictions.

Input is a long-format table (x, y, value) covering a complete regular
grid. Output is a self-contained SVG plus a plain-text value matrix (one
row per y level). Rendering is a pure function of the input, so repeated
runs produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .data import Dataset

__all__ = ["GridSurface", "parse_grid", "render_svg", "matrix_text", "write_surface"]

# dark-violet to yellow anchors, interpolated linearly in RGB
_PALETTE = (
    (0.00, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.50, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.00, (253, 231, 37)),
)

_WIDTH, _HEIGHT = 640, 560
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 20, 20, 50


class GridSurface:
    """Values on a complete rectangular grid, axes sorted ascending."""

    def __init__(self, xs: np.ndarray, ys: np.ndarray, z: np.ndarray, names: tuple[str, str, str]):
        self.xs = xs
        self.ys = ys
        self.z = z
        self.names = names


def parse_grid(data: Dataset) -> GridSurface:
    """Arrange (x, y, value) rows into a dense matrix, strictly validated."""
    if data.d != 3:
        raise ValueError(
            f"surface input needs exactly 3 columns (x, y, value), got {data.d}"
        )
    x, y, z = data.values[:, 0], data.values[:, 1], data.values[:, 2]
    xs = np.unique(x)
    ys = np.unique(y)
    if xs.size < 2 or ys.size < 2:
        raise ValueError(
            f"grid must be at least 2 x 2, got {xs.size} x {ys.size} distinct levels"
        )
    if xs.size * ys.size != data.n:
        raise ValueError(
            f"{data.n} rows cannot tile a {xs.size} x {ys.size} grid; "
            "input is not a complete regular grid"
        )
    grid = np.full((ys.size, xs.size), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    for row, (i, j) in enumerate(zip(yi, xi)):
        if not np.isnan(grid[i, j]):
            raise ValueError(f"duplicate grid point at data row {row + 2}")
        grid[i, j] = z[row]
    if np.isnan(grid).any():
        raise ValueError("input is not a complete regular grid (missing cells)")
    return GridSurface(xs, ys, grid, (data.names[0], data.names[1], data.names[2]))


def _color(t: float) -> str:
    for (t0, c0), (t1, c1) in zip(_PALETTE[:-1], _PALETTE[1:]):
        if t <= t1:
            w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            rgb = tuple(int(round(a + w * (b - a))) for a, b in zip(c0, c1))
            return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"
    r, g, b = _PALETTE[-1][1]
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(surface: GridSurface) -> str:
    """Heat map with axis extents labeled; constant surfaces come out flat."""
    z = surface.z
    lo, hi = float(z.min()), float(z.max())
    span = hi - lo
    nx, ny = surface.xs.size, surface.ys.size
    pw = _WIDTH - _MARGIN_L - _MARGIN_R
    ph = _HEIGHT - _MARGIN_T - _MARGIN_B
    cw = pw / nx
    ch = ph / ny
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    for i in range(ny):
        for j in range(nx):
            t = 0.5 if span == 0 else (float(z[i, j]) - lo) / span
            x0 = _MARGIN_L + j * cw
            # y axis points up: row 0 (smallest y) at the bottom
            y0 = _MARGIN_T + (ny - 1 - i) * ch
            parts.append(
                f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{cw + 0.5:.2f}" '
                f'height="{ch + 0.5:.2f}" fill="{_color(t)}"/>'
            )
    xname, yname, zname = surface.names
    x_lo, x_hi = surface.xs[0], surface.xs[-1]
    y_lo, y_hi = surface.ys[0], surface.ys[-1]
    font = 'font-family="monospace" font-size="13"'
    parts += [
        f'<text x="{_MARGIN_L}" y="{_HEIGHT - 18}" {font}>{x_lo:g}</text>',
        f'<text x="{_WIDTH - _MARGIN_R - 30}" y="{_HEIGHT - 18}" {font}>{x_hi:g}</text>',
        f'<text x="{(_WIDTH + _MARGIN_L - _MARGIN_R) / 2:.0f}" y="{_HEIGHT - 18}" {font}>{xname}</text>',
        f'<text x="8" y="{_HEIGHT - _MARGIN_B}" {font}>{y_lo:g}</text>',
        f'<text x="8" y="{_MARGIN_T + 12}" {font}>{y_hi:g}</text>',
        f'<text x="8" y="{(_HEIGHT + _MARGIN_T - _MARGIN_B) / 2:.0f}" {font}>{yname}</text>',
        f'<text x="{_MARGIN_L}" y="{_MARGIN_T - 6}" {font}>{zname}: '
        f"{lo:g} to {hi:g}</text>",
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def matrix_text(surface: GridSurface) -> str:
    """Whitespace-separated value matrix, one row per y level."""
    lines = [" ".join(repr(float(v)) for v in row) for row in surface.z]
    return "\n".join(lines) + "\n"


def write_surface(data: Dataset, svg_path: str | Path, matrix_path: str | Path | None = None) -> GridSurface:
    surface = parse_grid(data)
    Path(svg_path).write_text(render_svg(surface))
    if matrix_path is None:
        matrix_path = Path(svg_path).with_suffix(".txt")
    Path(matrix_path).write_text(matrix_text(surface))
    return surface
