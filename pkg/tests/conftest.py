import numpy as np
import pytest

from ibrsmooth import DesignMatrix, KernelSmootherSpec, build_kernel_smoother


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_design(rng, n, d, scale=1.0):
    """A generic non-degenerate design for property-style tests."""
    x = rng.normal(size=(n, d)) * scale
    return DesignMatrix.from_array(x)


def gaussian_smoother(x, h=1.0):
    design = DesignMatrix.from_array(x)
    spec = KernelSmootherSpec(kind="gaussian", bandwidths=(h,) * design.d)
    return build_kernel_smoother(design, spec)
