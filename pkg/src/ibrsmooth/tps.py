"""Thin-plate spline base smoother.

The penalized fit solves the saddle system

    (E + n*lam*I) delta + T c = y,    T' delta = 0,

where E holds the radial basis eta(|x_i - x_j|) and T the polynomials of
total degree below the spline order. Smoothness is controlled through lam,
which is calibrated so the smoother trace equals a small multiple of the
polynomial null-space dimension.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import qr, solve_triangular
from scipy.special import gamma as gamma_fn

from .kernel_smoother import CalibrationError, _bracketed_root
from .smoothers import BaseSmoother, DesignMatrix, SpectralForm

__all__ = [
    "TpsSpec",
    "TpsSmoother",
    "build_tps_smoother",
    "build_calibrated_tps",
    "calibrate_tps_lambda",
    "default_tps_order",
    "tps_null_dim",
]


def default_tps_order(d: int) -> int:
    """Smallest admissible order: 2*order > d, never below 2."""
    return max(2, d // 2 + 1)


def tps_null_dim(order: int, d: int) -> int:
    """Dimension of the polynomial null space (total degree < order)."""
    return math.comb(order + d - 1, d)


@dataclass(frozen=True)
class TpsSpec:
    """Order and penalty of a thin-plate spline smoother."""

    order: int
    lam: float
    df_multiplier: float | None = None

    def __post_init__(self) -> None:
        if self.order < 2:
            raise ValueError(f"spline order must be >= 2, got {self.order}")
        if self.lam < 0 or not np.isfinite(self.lam):
            raise ValueError(f"penalty must be a finite non-negative number, got {self.lam}")

    def null_dim(self, d: int) -> int:
        if 2 * self.order <= d:
            raise ValueError(
                f"order {self.order} too low for {d} columns; need 2*order > d"
            )
        return tps_null_dim(self.order, d)


def _radial_constant(order: int, d: int) -> float:
    """Leading constant of the polyharmonic radial basis (Duchon/Wahba)."""
    nu = order
    if d % 2 == 0:
        sign = (-1.0) ** (d // 2 + nu + 1)
        return sign / (
            2.0 ** (2 * nu - 1)
            * math.pi ** (d / 2)
            * math.factorial(nu - 1)
            * math.factorial(nu - d // 2)
        )
    return float(gamma_fn(d / 2.0 - nu)) / (
        2.0 ** (2 * nu) * math.pi ** (d / 2) * math.factorial(nu - 1)
    )


def _radial_values(r: np.ndarray, order: int, d: int) -> np.ndarray:
    """eta(r) with the removable singularity at r = 0 set to its limit 0."""
    theta = _radial_constant(order, d)
    p = 2 * order - d
    with np.errstate(divide="ignore", invalid="ignore"):
        if d % 2 == 0:
            out = theta * r**p * np.log(r)
        else:
            out = theta * r**p
    return np.where(r == 0.0, 0.0, out)


def _poly_powers(order: int, d: int) -> list[tuple[int, ...]]:
    """Exponent tuples of the monomials spanning the null space."""
    powers = []
    for deg in range(order):
        for combo in itertools.combinations_with_replacement(range(d), deg):
            expo = [0] * d
            for j in combo:
                expo[j] += 1
            powers.append(tuple(expo))
    return powers


def _poly_block(x: np.ndarray, powers: list[tuple[int, ...]]) -> np.ndarray:
    cols = [np.prod(x**np.asarray(p), axis=1) for p in powers]
    return np.column_stack(cols)


class _TpsCore:
    """Design-dependent geometry shared by calibration and the smoother."""

    def __init__(self, design: DesignMatrix, order: int):
        n, d = design.n, design.d
        if 2 * order <= d:
            raise ValueError(f"order {order} too low for {d} columns; need 2*order > d")
        self.design = design
        self.order = order
        self.m = tps_null_dim(order, d)
        if n <= self.m:
            raise ValueError(
                f"need more than {self.m} rows for a thin-plate spline of "
                f"order {order} in {d} variables, got {n}"
            )
        diff = design.x[:, None, :] - design.x[None, :, :]
        r = np.sqrt(np.sum(diff * diff, axis=2))
        off = r + np.eye(n)
        if off.min() <= 0.0:
            i, j = divmod(int(np.argmin(off)), n)
            raise ValueError(
                f"duplicate design points at rows {i} and {j}; "
                "thin-plate splines need distinct points"
            )
        self.e = _radial_values(r, order, d)
        self.powers = _poly_powers(order, d)
        self.t = _poly_block(design.x, self.powers)
        q, r_full = qr(self.t, mode="full")
        self.r = r_full[: self.m, : self.m]
        diag = np.abs(np.diag(self.r))
        if diag.min() <= n * np.finfo(float).eps * max(diag.max(), 1.0):
            raise ValueError(
                "polynomial block is rank deficient (collinear design); "
                "thin-plate splines need points in general position"
            )
        self.q1 = q[:, : self.m]
        self.q2 = q[:, self.m :]
        b = self.q2.T @ self.e @ self.q2
        theta, w = np.linalg.eigh((b + b.T) / 2.0)
        floor = -1e-8 * max(abs(theta[-1]), 1.0)
        if theta[0] < floor:
            raise ValueError(
                f"radial block has a negative penalized eigenvalue {theta[0]:.3e}; "
                "the design does not support this spline order"
            )
        self.theta = np.maximum(theta, 0.0)
        self.w = w

    def trace(self, lam: float) -> float:
        nl = self.design.n * lam
        if nl == 0.0:
            return float(self.design.n)
        return float(self.m + np.sum(self.theta / (self.theta + nl)))


class TpsSmoother(BaseSmoother):
    """Symmetric smoothing matrix of a penalized thin-plate spline."""

    def __init__(self, design: DesignMatrix, spec: TpsSpec, core: _TpsCore | None = None):
        self.design = design
        self.spec = spec
        self.core = core if core is not None else _TpsCore(design, spec.order)
        nl = design.n * spec.lam
        c = self.core
        if nl == 0.0 and c.theta.min() <= 0.0:
            raise ValueError("cannot interpolate: radial block is singular")
        self._ratio = c.theta / (c.theta + nl) if nl > 0 else np.ones_like(c.theta)
        # delta = delta_op @ y solves the penalized saddle system
        inv = 1.0 / (c.theta + nl)
        q2w = c.q2 @ c.w
        self.delta_op = (q2w * inv) @ q2w.T
        rhs = c.q1.T - (c.q1.T @ (c.e + nl * np.eye(design.n))) @ self.delta_op
        self.poly_op = solve_triangular(c.r, rhs)

    @cached_property
    def matrix(self) -> np.ndarray:
        c = self.core
        q2w = c.q2 @ c.w
        return c.q1 @ c.q1.T + (q2w * self._ratio) @ q2w.T

    @property
    def initial_df(self) -> float:
        return float(self.core.m + np.sum(self._ratio))

    def spectral(self) -> SpectralForm:
        return self._spectral

    @cached_property
    def _spectral(self) -> SpectralForm:
        c = self.core
        u = np.hstack([c.q1, c.q2 @ c.w[:, ::-1]])
        lam = np.concatenate([np.ones(c.m), self._ratio[::-1]])
        return SpectralForm(d_half=np.ones(self.n), u=u, lam=lam, pd_family=True)

    def _radial_at(self, x_new: np.ndarray) -> np.ndarray:
        diff = x_new[:, None, :] - self.design.x[None, :, :]
        r = np.sqrt(np.sum(diff * diff, axis=2))
        return _radial_values(r, self.spec.order, self.d)

    def weights_at(self, x_new: np.ndarray) -> np.ndarray:
        return self.weights_matrix(np.atleast_2d(np.asarray(x_new, dtype=float)))[0]

    def weights_matrix(self, x_new: np.ndarray) -> np.ndarray:
        x_new = np.atleast_2d(np.asarray(x_new, dtype=float))
        if x_new.shape[1] != self.d:
            raise ValueError(f"expected {self.d} columns, got {x_new.shape[1]}")
        eta = self._radial_at(x_new)
        poly = _poly_block(x_new, self.core.powers)
        return eta @ self.delta_op + poly @ self.poly_op

    def describe(self) -> str:
        return (
            f"thin plate spline of order {self.spec.order} "
            f"(with {self.initial_df:.4g} df)"
        )

    def prediction_parts(self, beta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Collapse smoother weights against a coefficient vector.

        Returns (delta_star, poly_star) so that predictions are
        eta(x)' delta_star + p(x)' poly_star, an O(n*d) payload.
        """
        return self.delta_op @ beta, self.poly_op @ beta


def build_tps_smoother(x, spec: TpsSpec) -> TpsSmoother:
    design = x if isinstance(x, DesignMatrix) else DesignMatrix.from_array(x)
    return TpsSmoother(design, spec)


def _calibrate_core(core: _TpsCore, df_multiplier: float, tol: float) -> TpsSpec:
    target = df_multiplier * core.m
    n = core.design.n
    if df_multiplier <= 1.0:
        raise ValueError(f"df multiplier must exceed 1, got {df_multiplier}")
    if target >= n:
        raise ValueError(f"df target {target:.3g} must stay below n = {n}")
    positive = core.theta[core.theta > 0]
    if positive.size == 0:
        raise CalibrationError("radial block is identically zero; cannot calibrate")
    scale = float(np.median(positive)) / n
    lam = _bracketed_root(
        lambda l: core.trace(l) - target, scale * 1e-9, scale * 1e9, "spline df"
    )
    achieved = core.trace(lam)
    if abs(achieved - target) > tol:
        raise CalibrationError(
            f"spline calibration reached trace {achieved:.6f} instead of {target}"
        )
    return TpsSpec(order=core.order, lam=lam, df_multiplier=df_multiplier)


def calibrate_tps_lambda(
    x,
    order: int | None = None,
    df_multiplier: float = 1.1,
    tol: float = 1e-4,
) -> TpsSpec:
    """Penalty whose smoother trace equals df_multiplier * null_dim.

    The trace decreases monotonically from n (lam -> 0) to the null-space
    dimension (lam -> inf), so the multiplier must satisfy
    1 < df_multiplier and df_multiplier * null_dim < n.
    """
    design = x if isinstance(x, DesignMatrix) else DesignMatrix.from_array(x)
    if order is None:
        order = default_tps_order(design.d)
    return _calibrate_core(_TpsCore(design, order), df_multiplier, tol)


def build_calibrated_tps(
    x, order: int | None = None, df_multiplier: float = 1.1, tol: float = 1e-4
) -> TpsSmoother:
    """Calibrate the penalty and build the smoother in one step."""
    design = x if isinstance(x, DesignMatrix) else DesignMatrix.from_array(x)
    if order is None:
        order = default_tps_order(design.d)
    core = _TpsCore(design, order)
    spec = _calibrate_core(core, df_multiplier, tol)
    return TpsSmoother(design, spec, core=core)
