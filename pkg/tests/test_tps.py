"""Thin-plate spline smoother: radial closed forms, null space, calibration."""

import numpy as np
import pytest

from ibrsmooth import (
    DesignMatrix,
    TpsSpec,
    build_calibrated_tps,
    build_tps_smoother,
    calibrate_tps_lambda,
    default_tps_order,
    tps_null_dim,
)
from ibrsmooth.tps import _radial_values

from conftest import random_design


def grid_design(n_axis=10):
    axis = (np.arange(n_axis) + 0.5) / n_axis
    x = np.column_stack([np.tile(axis, n_axis), np.repeat(axis, n_axis)])
    return DesignMatrix.from_array(x)


def test_default_orders():
    assert default_tps_order(1) == 2
    assert default_tps_order(2) == 2
    assert default_tps_order(3) == 2
    assert default_tps_order(4) == 3
    assert default_tps_order(5) == 3
    assert default_tps_order(6) == 4


def test_null_dims():
    # polynomials of total degree < order
    assert tps_null_dim(2, 1) == 2
    assert tps_null_dim(2, 2) == 3
    assert tps_null_dim(2, 3) == 4
    assert tps_null_dim(3, 2) == 6


def test_radial_closed_forms():
    r = np.array([0.5, 1.0, 2.0])
    # d = 1, order 2: r^3 / 12
    assert np.allclose(_radial_values(r, 2, 1), r**3 / 12.0, rtol=1e-12)
    # d = 2, order 2: r^2 log r / (8 pi)
    assert np.allclose(
        _radial_values(r, 2, 2), r**2 * np.log(r) / (8.0 * np.pi), rtol=1e-12
    )
    # d = 3, order 2: -r / (8 pi)
    assert np.allclose(_radial_values(r, 2, 3), -r / (8.0 * np.pi), rtol=1e-12)


def test_radial_zero_distance_is_zero():
    out = _radial_values(np.array([0.0, 1.0]), 2, 2)
    assert out[0] == 0.0
    assert np.isfinite(out).all()


def test_zero_penalty_interpolates(rng):
    design = random_design(rng, 12, 2)
    sm = build_tps_smoother(design, TpsSpec(order=2, lam=0.0))
    assert np.allclose(sm.matrix, np.eye(12), atol=1e-8)
    assert sm.initial_df == pytest.approx(12.0, abs=1e-8)


def test_grid_trace_calibration():
    """Multiplier 1.1 on the 10x10 unit-square grid: trace 1.1 * 3 = 3.3."""
    design = grid_design(10)
    sm = build_calibrated_tps(design, df_multiplier=1.1)
    assert sm.initial_df == pytest.approx(3.3, abs=1e-4)


def test_calibrated_lambda_reproducible():
    design = grid_design(6)
    spec = calibrate_tps_lambda(design, df_multiplier=1.2)
    sm = build_tps_smoother(design, spec)
    assert sm.initial_df == pytest.approx(1.2 * 3, abs=1e-4)
    assert spec.df_multiplier == 1.2


@pytest.mark.parametrize("d", [1, 2])
def test_polynomials_pass_through_unchanged(rng, d):
    """Degree < order polynomials are in the penalty null space, so one
    smoothing pass reproduces them exactly, at any penalty."""
    design = random_design(rng, 25, d, scale=2.0)
    sm = build_calibrated_tps(design, df_multiplier=1.3)
    polys = [np.ones(25), design.x[:, 0]]
    if d == 2:
        polys.append(design.x[:, 1])
    for p in polys:
        assert np.allclose(sm.matrix @ p, p, atol=1e-8)


def test_polynomial_reproduction_at_new_points(rng):
    design = random_design(rng, 20, 2)
    sm = build_calibrated_tps(design, df_multiplier=1.5)
    x_new = rng.normal(size=(7, 2))
    w = sm.weights_matrix(x_new)
    p_train = 1.0 + 2.0 * design.x[:, 0] - 0.5 * design.x[:, 1]
    p_new = 1.0 + 2.0 * x_new[:, 0] - 0.5 * x_new[:, 1]
    assert np.allclose(w @ p_train, p_new, atol=1e-8)


def test_spectrum_has_exactly_null_dim_unit_eigenvalues(rng):
    design = random_design(rng, 18, 2)
    sm = build_calibrated_tps(design, df_multiplier=1.4)
    lam = sm.spectral().lam
    m = tps_null_dim(2, 2)
    assert np.sum(np.isclose(lam, 1.0, atol=1e-10)) == m
    assert lam.min() >= -1e-10
    assert lam.max() <= 1.0 + 1e-10


def test_spectral_reconstructs_matrix(rng):
    design = random_design(rng, 15, 2)
    sm = build_calibrated_tps(design, df_multiplier=1.2)
    assert np.allclose(sm.spectral().reconstruct(), sm.matrix, atol=1e-10)


def test_trace_identity_matches_initial_df(rng):
    design = random_design(rng, 22, 2)
    spec = calibrate_tps_lambda(design, df_multiplier=1.6)
    sm = build_tps_smoother(design, spec)
    assert sm.core.trace(spec.lam) == pytest.approx(sm.initial_df, abs=1e-8)


def test_duplicate_rows_are_reported():
    x = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 0.0], [2.0, 0.5]])
    with pytest.raises(ValueError, match="[Dd]uplicate"):
        build_tps_smoother(DesignMatrix.from_array(x), TpsSpec(order=2, lam=1e-4))


def test_collinear_design_is_rejected():
    rng = np.random.default_rng(0)
    x1 = rng.normal(size=10)
    x = np.column_stack([x1, 2.0 * x1])  # polynomial block loses rank
    with pytest.raises(ValueError, match="rank|collinear|degenerate"):
        build_tps_smoother(DesignMatrix.from_array(x), TpsSpec(order=2, lam=1e-4))


def test_order_must_cover_dimension():
    with pytest.raises(ValueError):
        TpsSpec(order=2, lam=0.1).null_dim(4)  # needs 2*order > d


def test_predictions_match_weight_path(rng):
    design = random_design(rng, 16, 2)
    sm = build_calibrated_tps(design, df_multiplier=1.3)
    beta = rng.normal(size=16)
    delta, poly_coef = sm.prediction_parts(beta)
    x_new = rng.normal(size=(5, 2))
    via_weights = sm.weights_matrix(x_new) @ beta
    diff = x_new[:, None, :] - design.x[None, :, :]
    r = np.sqrt((diff**2).sum(axis=2))
    from ibrsmooth.tps import _poly_block

    via_parts = _radial_values(r, 2, 2) @ delta + _poly_block(
        x_new, sm.core.powers
    ) @ poly_coef
    assert np.allclose(via_weights, via_parts, atol=1e-10)


def test_describe_mentions_family_and_df(rng):
    design = random_design(rng, 14, 2)
    sm = build_calibrated_tps(design, df_multiplier=1.1)
    text = sm.describe()
    assert "thin plate spline" in text
    assert "df" in text
