"""Row-normalized product-kernel smoother with trace-based calibration.

The smoothing matrix is S = D K where K has entries
K_ij = prod_k k((x_ik - x_jk) / h_k) and D is the diagonal of inverse row
sums, so every row of S sums to one. Bandwidths are not tuned against the
data fit; each one is calibrated so the corresponding univariate smoother
has a prescribed (small) trace, which keeps the base smoother deliberately
over-smooth.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .kernels import is_positive_definite, kernel_values, resolve_kernel
from .smoothers import BaseSmoother, DesignMatrix, SpectralForm

__all__ = [
    "CalibrationError",
    "KernelSmootherSpec",
    "KernelSmoother",
    "build_kernel_smoother",
    "calibrate_bandwidth",
    "calibrate_total_df",
]

# starting bracket for bandwidth root finding, as multiples of column range
_BRACKET_LO = 1e-3
_BRACKET_HI = 1e3
_MAX_EXPANSIONS = 10


class CalibrationError(RuntimeError):
    """Raised when a degrees-of-freedom target cannot be bracketed or hit."""


@dataclass(frozen=True)
class KernelSmootherSpec:
    """Calibrated description of a product-kernel smoother.

    Exactly one of ``df_target`` (per-variable trace) and
    ``total_df_target`` (trace of the full product smoother) is set when the
    spec comes out of calibration; both are None when bandwidths were given
    directly.
    """

    kind: str
    bandwidths: tuple[float, ...]
    df_target: float | None = None
    total_df_target: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", resolve_kernel(self.kind))
        if len(self.bandwidths) == 0:
            raise ValueError("need one bandwidth per column")
        if any(h <= 0 or not np.isfinite(h) for h in self.bandwidths):
            raise ValueError(f"bandwidths must be positive, got {self.bandwidths}")

    @property
    def positive_definite(self) -> bool:
        return is_positive_definite(self.kind)


def _gram(x: np.ndarray, kind: str, bandwidths: np.ndarray) -> np.ndarray:
    """Dense product-kernel Gram matrix K_ij over the rows of x."""
    n, d = x.shape
    kmat = np.ones((n, n))
    for j in range(d):
        u = (x[:, j, None] - x[None, :, j]) / bandwidths[j]
        kmat *= kernel_values(u, kind)
    return kmat


class KernelSmoother(BaseSmoother):
    """Row-stochastic kernel smoother over a fixed design."""

    def __init__(self, design: DesignMatrix, spec: KernelSmootherSpec):
        if len(spec.bandwidths) != design.d:
            raise ValueError(
                f"{len(spec.bandwidths)} bandwidths for {design.d} columns"
            )
        self.design = design
        self.spec = spec
        self.kmat = _gram(design.x, spec.kind, np.asarray(spec.bandwidths))
        self.row_sums = self.kmat.sum(axis=1)
        if np.any(self.row_sums <= 0):
            bad = np.nonzero(self.row_sums <= 0)[0]
            raise ValueError(
                f"kernel rows {bad.tolist()} sum to zero; bandwidths too small "
                "for the design spacing"
            )

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.kmat / self.row_sums[:, None]

    @property
    def initial_df(self) -> float:
        k0 = float(kernel_values(np.zeros(1), self.spec.kind)[0]) ** self.d
        return float(np.sum(k0 / self.row_sums))

    def spectral(self) -> SpectralForm:
        return self._spectral

    @cached_property
    def _spectral(self) -> SpectralForm:
        # symmetrize: A = D^{1/2} K D^{1/2} shares eigenvalues with S = D K
        d_half = 1.0 / np.sqrt(self.row_sums)
        a = self.kmat * d_half[:, None] * d_half[None, :]
        lam, u = np.linalg.eigh(a)
        order = np.argsort(lam)[::-1]
        return SpectralForm(
            d_half=d_half,
            u=u[:, order],
            lam=lam[order],
            pd_family=self.spec.positive_definite,
        )

    def weights_at(self, x_new: np.ndarray) -> np.ndarray:
        return self.weights_matrix(np.atleast_2d(np.asarray(x_new, dtype=float)))[0]

    def weights_matrix(self, x_new: np.ndarray) -> np.ndarray:
        x_new = np.atleast_2d(np.asarray(x_new, dtype=float))
        if x_new.shape[1] != self.d:
            raise ValueError(f"expected {self.d} columns, got {x_new.shape[1]}")
        h = np.asarray(self.spec.bandwidths)
        w = np.ones((x_new.shape[0], self.n))
        for j in range(self.d):
            u = (x_new[:, j, None] - self.design.x[None, :, j]) / h[j]
            w *= kernel_values(u, self.spec.kind)
        sums = w.sum(axis=1)
        dead = np.nonzero(sums <= 0)[0]
        if dead.size:
            raise ValueError(
                f"prediction rows {dead.tolist()} fall outside the kernel "
                "support of every design point"
            )
        return w / sums[:, None]

    def describe(self) -> str:
        return f"{self.spec.kind} kernel (with {self.initial_df:.4g} df)"


def build_kernel_smoother(x, spec: KernelSmootherSpec) -> KernelSmoother:
    """Build the smoother for a design and an already-calibrated spec."""
    design = x if isinstance(x, DesignMatrix) else DesignMatrix.from_array(x)
    return KernelSmoother(design, spec)


def _univariate_trace(gaps: np.ndarray, kind: str, h: float) -> float:
    """Trace of the row-normalized smoother for one column.

    ``gaps`` is the precomputed |x_i - x_j| matrix.
    """
    kmat = kernel_values(gaps / h, kind)
    k0 = float(kernel_values(np.zeros(1), kind)[0])
    return float(np.sum(k0 / kmat.sum(axis=1)))


def _bracketed_root(f, lo: float, hi: float, what: str) -> float:
    """Find f = 0 for a decreasing f by expanding [lo, hi] then brentq.

    f must be positive at the left end and negative at the right end once
    the bracket is wide enough.
    """
    flo, fhi = f(lo), f(hi)
    for _ in range(_MAX_EXPANSIONS):
        if flo > 0:
            break
        lo /= 10.0
        flo = f(lo)
    for _ in range(_MAX_EXPANSIONS):
        if fhi < 0:
            break
        hi *= 10.0
        fhi = f(hi)
    if not (flo > 0 > fhi):
        raise CalibrationError(
            f"could not bracket the {what} target: "
            f"f({lo:.3e}) = {flo:.3e}, f({hi:.3e}) = {fhi:.3e}"
        )
    return float(brentq(f, lo, hi, xtol=1e-14 * hi, rtol=8.9e-16))


def calibrate_bandwidth(
    column: np.ndarray,
    kind: str,
    df_target: float,
    tol: float = 1e-6,
    name: str = "column",
) -> float:
    """Bandwidth whose univariate smoother trace equals ``df_target``.

    The trace decreases from (nearly) n at tiny bandwidths to 1 as the
    bandwidth grows, so the target must lie strictly inside (1, n).
    """
    col = np.asarray(column, dtype=float).ravel()
    n = col.size
    if not 1.0 < df_target < n:
        raise ValueError(
            f"per-variable df target must lie in (1, {n}), got {df_target}"
        )
    rng = float(col.max() - col.min())
    if rng == 0.0:
        raise CalibrationError(f"{name} is constant; cannot calibrate a bandwidth")
    gaps = np.abs(col[:, None] - col[None, :])
    kind = resolve_kernel(kind)

    def objective(h: float) -> float:
        return _univariate_trace(gaps, kind, h) - df_target

    h = _bracketed_root(objective, _BRACKET_LO * rng, _BRACKET_HI * rng, "df")
    achieved = _univariate_trace(gaps, kind, h)
    if abs(achieved - df_target) > tol:
        raise CalibrationError(
            f"{name}: {kind} trace is not continuous enough to reach "
            f"df {df_target} (closest {achieved:.6f}); "
            "try the gaussian kernel"
        )
    return h


def calibrate_total_df(
    x, kind: str, total_df: float, tol: float = 1e-4
) -> np.ndarray:
    """Common-factor bandwidths h_j = c * s_j hitting a total-trace target.

    s_j is the sample standard deviation of column j, so a single scalar c
    is tuned until the trace of the full product smoother equals
    ``total_df``. With one column this agrees with
    :func:`calibrate_bandwidth` up to tolerance.
    """
    design = x if isinstance(x, DesignMatrix) else DesignMatrix.from_array(x)
    xm = design.x
    n = design.n
    if not 1.0 < total_df < n:
        raise ValueError(f"total df target must lie in (1, {n}), got {total_df}")
    scales = xm.std(axis=0, ddof=1)
    flat = np.nonzero(scales == 0)[0]
    if flat.size:
        names = [design.names[j] for j in flat]
        raise CalibrationError(f"constant columns {names}; cannot calibrate")
    kind = resolve_kernel(kind)
    k0 = float(kernel_values(np.zeros(1), kind)[0]) ** design.d

    def trace(c: float) -> float:
        kmat = _gram(xm, kind, c * scales)
        sums = kmat.sum(axis=1)
        if np.any(sums <= 0):
            return float(n)
        return float(np.sum(k0 / sums))

    c = _bracketed_root(lambda c: trace(c) - total_df, _BRACKET_LO, _BRACKET_HI, "total df")
    achieved = trace(c)
    if abs(achieved - total_df) > tol:
        raise CalibrationError(
            f"total-df calibration reached {achieved:.6f} instead of "
            f"{total_df}; the {kind} kernel trace jumps at this design"
        )
    return c * scales
