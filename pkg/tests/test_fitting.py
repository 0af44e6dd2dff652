"""End-to-end fit(): orchestration, diagnostics, prediction."""

import numpy as np
import pytest

from ibrsmooth import (
    CvPlan,
    DesignMatrix,
    SelectionPlan,
    SmootherConfig,
    build_smoother,
    fit,
    predict,
)


def sine_problem(seed=0, n=50):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 4, size=(n, 1))
    y = np.sin(2 * x[:, 0]) + rng.normal(0, 0.2, n)
    return x, y


def test_default_pipeline_fits():
    x, y = sine_problem()
    result = fit(x, y)
    assert result.n == 50
    assert result.selection_mode == "numeric"
    assert result.criterion == "gcv"
    assert result.final_df > result.initial_df
    assert result.rss > 0
    assert np.isfinite(result.sigma)
    assert np.allclose(result.residuals, y - result.fitted, atol=1e-12)


def test_fitted_values_equal_train_predictions():
    """The collapsed predictor must reproduce the in-sample fit."""
    x, y = sine_problem(1)
    for config in (SmootherConfig(), SmootherConfig(family="tps")):
        result = fit(x, y, smoother=config)
        assert np.allclose(result.predict(x), result.fitted, atol=1e-8)


def test_fixed_k():
    x, y = sine_problem(2)
    result = fit(x, y, plan=SelectionPlan(mode="fixed", fixed_k=7))
    assert result.k == 7.0
    assert result.selection_mode == "fixed"
    assert np.isnan(result.criterion_value)


def test_sigma_definition():
    x, y = sine_problem(3)
    result = fit(x, y, plan=SelectionPlan(mode="fixed", fixed_k=5))
    assert result.sigma == pytest.approx(
        np.sqrt(result.rss / (result.n - result.final_df))
    )
    assert result.residual_df == pytest.approx(result.n - result.final_df)


def test_more_iterations_fit_tighter():
    x, y = sine_problem(4)
    few = fit(x, y, plan=SelectionPlan(mode="fixed", fixed_k=2))
    many = fit(x, y, plan=SelectionPlan(mode="fixed", fixed_k=50))
    assert many.rss < few.rss
    assert many.final_df > few.final_df


def test_prebuilt_smoother_accepted():
    x, y = sine_problem(5)
    base = build_smoother(x, SmootherConfig(df=1.2))
    result = fit(x, y, smoother=base)
    assert result.base is base


def test_prebuilt_smoother_refused_for_cv():
    x, y = sine_problem(6)
    base = build_smoother(x, SmootherConfig())
    plan = SelectionPlan(criterion="rmse", cv=CvPlan(kfold=5, type="consecutive"))
    with pytest.raises(ValueError, match="SmootherConfig"):
        fit(x, y, smoother=base, plan=plan)


def test_cv_selection_through_fit():
    x, y = sine_problem(7)
    plan = SelectionPlan(criterion="rmse", cv=CvPlan(kfold=5, type="consecutive"))
    result = fit(x, y, plan=plan)
    assert result.criterion == "rmse"
    assert result.k >= 1.0


def test_nonfinite_response_rejected():
    x, y = sine_problem(8)
    y[3] = np.inf
    with pytest.raises(ValueError, match="finite"):
        fit(x, y)


def test_length_mismatch_rejected():
    x, y = sine_problem(9)
    with pytest.raises(ValueError, match="entries"):
        fit(x, y[:-1])


def test_trace_is_thinned():
    x, y = sine_problem(10)
    result = fit(x, y, plan=SelectionPlan(mode="exhaustive", kmax=3000))
    assert result.trace_k.size <= 512
    assert result.trace_k.size == result.trace_value.size


def test_wild_kernel_falls_back_to_exhaustive():
    rng = np.random.default_rng(11)
    x = rng.uniform(0, 0.4, size=(30, 1))
    y = np.sin(6 * x[:, 0]) + rng.normal(0, 0.2, 30)
    config = SmootherConfig(kernel="e", bandwidths=(1.0,))
    with pytest.warns(UserWarning, match="exhaustive"):
        result = fit(x, y, smoother=config)
    assert result.selection_mode == "exhaustive"
    assert result.k == round(result.k)


def test_functional_predict_alias():
    x, y = sine_problem(12)
    result = fit(x, y)
    x_new = np.array([[1.0], [2.0]])
    assert np.array_equal(predict(result, x_new), result.predict(x_new))


def test_column_names_flow_through():
    x, y = sine_problem(13)
    x2 = np.column_stack([x, x**2])
    result = fit(x2, y, names=["pos", "pos_sq"])
    assert result.design.names == ["pos", "pos_sq"]


def test_smoother_config_validation():
    with pytest.raises(ValueError, match="family"):
        SmootherConfig(family="spline")
    assert SmootherConfig(family="k").family == "kernel"
    assert SmootherConfig(kernel="g").kernel == "gaussian"
