"""Product-kernel smoother: hand oracles, calibration, guard rails."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ibrsmooth import (
    CalibrationError,
    DesignMatrix,
    KernelSmootherSpec,
    build_kernel_smoother,
    calibrate_bandwidth,
    calibrate_total_df,
)
from ibrsmooth.kernel_smoother import _univariate_trace

from conftest import gaussian_smoother, random_design


# Two points at distance 1, gaussian, h = 1. The normalizing constant
# cancels, so row 0 of S is (1, e^-1/2) / (1 + e^-1/2).
ROW_TWO_POINTS = np.array(
    [1.0 / (1.0 + np.exp(-0.5)), np.exp(-0.5) / (1.0 + np.exp(-0.5))]
)


def test_two_point_row_oracle():
    sm = gaussian_smoother(np.array([0.0, 1.0]))
    assert np.allclose(sm.matrix[0], ROW_TWO_POINTS, atol=1e-12)
    assert np.allclose(sm.matrix[1], ROW_TWO_POINTS[::-1], atol=1e-12)


def test_matrix_row_sums_are_one(rng):
    design = random_design(rng, 23, 3)
    spec = KernelSmootherSpec(kind="gaussian", bandwidths=(0.7, 1.3, 0.4))
    sm = build_kernel_smoother(design, spec)
    assert np.allclose(sm.matrix.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(sm.matrix >= 0.0)


@settings(max_examples=25, deadline=None)
@given(
    n=st.integers(min_value=2, max_value=15),
    d=st.integers(min_value=1, max_value=3),
    seed=st.integers(min_value=0, max_value=10_000),
    kind=st.sampled_from(["gaussian", "triangle", "quartic"]),
)
def test_rows_always_stochastic(n, d, seed, kind):
    """Every row of the smoother is a probability vector when no row dies."""
    rng = np.random.default_rng(seed)
    # keep points inside one bandwidth of each other so compact kernels
    # cannot produce an all-zero row
    x = rng.uniform(0, 0.5, size=(n, d))
    sm = build_kernel_smoother(
        DesignMatrix.from_array(x), KernelSmootherSpec(kind=kind, bandwidths=(1.0,) * d)
    )
    s = sm.matrix
    assert np.all(s >= 0)
    assert np.allclose(s.sum(axis=1), 1.0, atol=1e-10)


def test_initial_df_is_trace(rng):
    design = random_design(rng, 17, 2)
    sm = build_kernel_smoother(
        design, KernelSmootherSpec(kind="gaussian", bandwidths=(1.0, 2.0))
    )
    assert sm.initial_df == pytest.approx(np.trace(sm.matrix), abs=1e-12)


def test_evaluation_outside_support_is_an_error():
    # every row of the training matrix keeps its own point, so only new
    # points can fall outside the support of a compact kernel
    x = np.array([0.0, 0.1, 0.2])
    design = DesignMatrix.from_array(x)
    spec = KernelSmootherSpec(kind="uniform", bandwidths=(1.0,))
    sm = build_kernel_smoother(design, spec)
    assert np.all(sm.matrix.sum(axis=1) > 0)
    with pytest.raises(ValueError, match="support"):
        sm.weights_matrix(np.array([[5.0]]))


def test_two_point_bandwidth_closed_form():
    """Distance-1 pair, per-variable df 1.5: trace = 2/(1 + e^{-1/(2h^2)})
    equals 1.5 exactly at h = 1/sqrt(2 ln 3)."""
    h = calibrate_bandwidth(np.array([0.0, 1.0]), "gaussian", 1.5)
    assert h == pytest.approx(1.0 / np.sqrt(2.0 * np.log(3.0)), rel=1e-10)


@pytest.mark.parametrize("kind", ["gaussian", "triangle"])
@pytest.mark.parametrize("target", [1.1, 1.5, 3.0])
def test_calibration_hits_target_trace(rng, kind, target):
    x = rng.normal(size=40) * 3.0
    h = calibrate_bandwidth(x, kind, target)
    gaps = np.abs(x[:, None] - x[None, :])
    assert _univariate_trace(gaps, kind, h) == pytest.approx(target, abs=1e-6)


def test_calibrated_product_smoother_trace(rng):
    """d independent calibrations give a product smoother whose matrix the
    per-variable traces were computed from."""
    design = random_design(rng, 30, 2, scale=5.0)
    hs = tuple(
        calibrate_bandwidth(design.x[:, j], "gaussian", 1.1) for j in range(2)
    )
    sm = build_kernel_smoother(
        design, KernelSmootherSpec(kind="gaussian", bandwidths=hs, df_target=1.1)
    )
    assert sm.spec.df_target == 1.1
    assert np.isfinite(sm.initial_df)


def test_total_df_calibration(rng):
    design = random_design(rng, 35, 3, scale=2.0)
    target = 4.0
    hs = calibrate_total_df(design, "gaussian", target)
    sm = build_kernel_smoother(
        design, KernelSmootherSpec(kind="gaussian", bandwidths=tuple(hs))
    )
    assert sm.initial_df == pytest.approx(target, abs=1e-4)
    # one shared scale times the column spread
    stds = design.x.std(axis=0, ddof=1)
    ratios = np.asarray(hs) / stds
    assert np.allclose(ratios, ratios[0], rtol=1e-10)


def test_df_target_must_be_in_range():
    x = np.arange(5.0)
    with pytest.raises(ValueError, match="df target"):
        calibrate_bandwidth(x, "gaussian", 1.0)
    with pytest.raises(ValueError, match="df target"):
        calibrate_bandwidth(x, "gaussian", 5.0)


def test_constant_column_cannot_be_calibrated():
    with pytest.raises(CalibrationError, match="constant"):
        calibrate_bandwidth(np.ones(6), "gaussian", 1.5)


def test_uniform_kernel_unreachable_target_names_the_fix():
    # a clustered column makes the uniform-kernel trace jump discontinuously
    x = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])
    with pytest.raises(CalibrationError, match="gaussian"):
        calibrate_bandwidth(x, "uniform", 1.5)


def test_describe_mentions_kernel_and_df(rng):
    design = random_design(rng, 12, 1)
    sm = build_kernel_smoother(
        design, KernelSmootherSpec(kind="gaussian", bandwidths=(1.0,))
    )
    text = sm.describe()
    assert "gaussian" in text
    assert "df" in text


def test_bandwidths_must_be_positive():
    with pytest.raises(ValueError, match="bandwidth"):
        KernelSmootherSpec(kind="gaussian", bandwidths=(0.0,))
