"""Grid parsing and deterministic SVG rendering."""

import numpy as np
import pytest

from ibrsmooth.data import Dataset
from ibrsmooth.surface import matrix_text, parse_grid, render_svg, write_surface


def grid_dataset(nx=3, ny=2, fn=lambda x, y: 10 * x + y, shuffle_seed=None):
    xs = np.linspace(0, 1, nx)
    ys = np.linspace(0, 2, ny)
    rows = [(x, y, fn(x, y)) for y in ys for x in xs]
    values = np.asarray(rows, dtype=float)
    if shuffle_seed is not None:
        values = values[np.random.default_rng(shuffle_seed).permutation(len(rows))]
    return Dataset(names=["x1", "x2", "value"], values=values)


def test_parse_layout():
    surface = parse_grid(grid_dataset())
    assert surface.xs.tolist() == [0.0, 0.5, 1.0]
    assert surface.ys.tolist() == [0.0, 2.0]
    # z[i, j] = value at (xs[j], ys[i])
    assert np.allclose(surface.z, [[0.0, 5.0, 10.0], [2.0, 7.0, 12.0]])


def test_parse_is_order_independent():
    a = parse_grid(grid_dataset(4, 4))
    b = parse_grid(grid_dataset(4, 4, shuffle_seed=5))
    assert np.array_equal(a.z, b.z)


def test_argmax_lands_on_the_right_cell():
    surface = parse_grid(grid_dataset(5, 5, fn=lambda x, y: -((x - 0.5) ** 2) - (y - 1.0) ** 2))
    i, j = np.unravel_index(np.argmax(surface.z), surface.z.shape)
    assert surface.xs[j] == pytest.approx(0.5)
    assert surface.ys[i] == pytest.approx(1.0)


def test_needs_three_columns():
    data = Dataset(names=["a", "b"], values=np.zeros((4, 2)))
    with pytest.raises(ValueError, match="3 columns"):
        parse_grid(data)


def test_incomplete_grid_rejected():
    data = grid_dataset(3, 3)
    clipped = Dataset(names=data.names, values=data.values[:-1])
    with pytest.raises(ValueError, match="complete regular grid"):
        parse_grid(clipped)


def test_duplicate_cell_names_the_row():
    data = grid_dataset(2, 2)
    values = data.values.copy()
    values[3] = values[0]  # same (x, y) twice
    with pytest.raises(ValueError, match="row 5"):
        parse_grid(Dataset(names=data.names, values=values))


def test_degenerate_axis_rejected():
    values = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 2.0]])
    with pytest.raises(ValueError, match="2 x 2"):
        parse_grid(Dataset(names=["x", "y", "v"], values=values))


def test_svg_is_deterministic_and_complete():
    surface = parse_grid(grid_dataset(6, 4))
    svg = render_svg(surface)
    assert svg == render_svg(surface)
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<rect") >= 6 * 4  # one cell per grid point
    assert "x1" in svg and "x2" in svg  # axis labels


def test_constant_surface_renders():
    surface = parse_grid(grid_dataset(3, 3, fn=lambda x, y: 7.0))
    svg = render_svg(surface)
    assert "NaN" not in svg
    assert svg.count("<rect") >= 9


def test_matrix_text_round_trip():
    surface = parse_grid(grid_dataset(3, 2))
    text = matrix_text(surface)
    back = np.array(
        [[float(tok) for tok in line.split()] for line in text.strip().splitlines()]
    )
    assert np.array_equal(back, surface.z)


def test_write_surface_creates_both_files(tmp_path):
    svg_path = tmp_path / "surf.svg"
    surface = write_surface(grid_dataset(4, 3), svg_path)
    assert svg_path.exists()
    assert (tmp_path / "surf.txt").exists()
    assert surface.z.shape == (3, 4)
    explicit = tmp_path / "values.dat"
    write_surface(grid_dataset(4, 3), tmp_path / "surf2.svg", explicit)
    assert explicit.exists()
