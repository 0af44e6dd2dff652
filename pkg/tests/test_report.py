"""Fit report formatting."""

import numpy as np

from ibrsmooth import SelectionPlan, fit, format_report, make_report


def fitted(plan=None):
    rng = np.random.default_rng(0)
    x = rng.uniform(0, 3, size=(45, 1))
    y = np.sin(2 * x[:, 0]) + rng.normal(0, 0.2, 45)
    return fit(x, y, plan=plan)


def test_five_number_summary():
    result = fitted()
    rep = make_report(result)
    expected = np.percentile(result.residuals, [0, 25, 50, 75, 100])
    assert np.allclose(rep.five_numbers, expected)


def test_report_text_sections():
    result = fitted()
    text = format_report(make_report(result))
    assert text.startswith("Residuals:")
    for fragment in (
        "Min", "1Q", "Median", "3Q", "Max",
        "Residual standard error:",
        "degrees of freedom",
        "Initial df:",
        "Final df:",
        "Number of iterations:",
        "chosen by gcv",
        "Base smoother:",
    ):
        assert fragment in text, fragment


def test_fixed_mode_says_so():
    result = fitted(SelectionPlan(mode="fixed", fixed_k=9))
    text = format_report(make_report(result))
    assert "Number of iterations: 9 (fixed by the caller)" in text
    assert "chosen by" not in text


def test_exhaustive_mode_is_labelled():
    result = fitted(SelectionPlan(mode="exhaustive"))
    text = format_report(make_report(result))
    assert "(exhaustive search)" in text
