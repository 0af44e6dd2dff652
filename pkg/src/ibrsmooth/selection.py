"""Information criteria and search for the number of iterations.

All criteria live on the log scale, so differences rather than ratios
matter and additive constants are kept only where the original criterion
has them. The search treats the iteration count as a continuous variable
(numeric mode, the default) or sweeps integers (exhaustive mode); both
refuse any k whose effective degrees of freedom or residual sum of squares
signal that the iteration has effectively reached interpolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .engine import KPath
from .smoothers import SpectralForm

__all__ = [
    "CRITERIA",
    "CV_LOSSES",
    "RSS_FLOOR",
    "BreakdownError",
    "SelectionPlan",
    "SelectionResult",
    "criterion_value",
    "df_ceiling",
    "search_k_exhaustive",
    "search_k_numeric",
]

CRITERIA = ("gcv", "aic", "aicc", "bic", "gmdl")
CV_LOSSES = ("rmse", "map")

# residual sums of squares at or below this are treated as interpolation
RSS_FLOOR = 1e-10
# effective df may never come within a relative 1e-10 of n
_DF_CEILING_FACTOR = 1.0 - 1e-10
# absolute tolerance on k for the scalar minimizer
_K_TOL = 0.01
# default breakpoints splitting [kmin, kmax] into minimizer subintervals
_DEFAULT_FRACTION = (100.0, 200.0, 500.0, 1000.0, 5000.0, 1e4, 5e4, 1e5, 5e5, 1e6)


class BreakdownError(RuntimeError):
    """Every candidate k was rejected by the interpolation guards."""


def df_ceiling(n: int, dfmaxi: float | None) -> float:
    """Largest admissible effective df for a sample of size n."""
    cap = n * _DF_CEILING_FACTOR
    if dfmaxi is None:
        return min(2.0 * n / 3.0, cap)
    if dfmaxi <= 0:
        raise ValueError(f"dfmaxi must be positive, got {dfmaxi}")
    return min(float(dfmaxi), cap)


def criterion_value(
    kind: str,
    n: int,
    rss: float,
    df: float,
    fitted_energy: float | None = None,
) -> float:
    """Evaluate one model-choice criterion on the log scale.

    ``fitted_energy`` (the squared norm of the fitted vector) is only
    needed for gmdl.
    """
    if kind not in CRITERIA:
        raise ValueError(f"unknown criterion {kind!r}; expected one of {CRITERIA}")
    if rss <= RSS_FLOOR:
        raise BreakdownError(
            f"residual sum of squares {rss:.3e} is at the interpolation "
            "floor; use a smoother base fit (smaller df target)"
        )
    if df >= n:
        raise ValueError(f"effective df {df} must stay below n = {n}")
    if kind == "gcv":
        return math.log(rss / n) - 2.0 * math.log(1.0 - df / n)
    if kind == "aic":
        return math.log(rss / n) + 2.0 * df / n
    if kind == "bic":
        return math.log(rss / n) + math.log(n) * df / n
    if kind == "aicc":
        if df >= n - 2:
            raise ValueError(
                f"aicc needs df < n - 2 = {n - 2}, got {df}; "
                "the fit is too close to interpolation"
            )
        return math.log(rss / n) + 1.0 + 2.0 * (df + 1.0) / (n - df - 2.0)
    # gmdl
    if fitted_energy is None:
        raise ValueError("gmdl needs the fitted energy |m_k|^2")
    s = rss / (n - df)
    f = fitted_energy / (df * s) if df > 0 else 1.0
    f = max(f, 1.0)
    return math.log(s) + (df / n) * math.log(f)


def _criterion_array(
    kind: str, n: int, rss: np.ndarray, df: np.ndarray, energy: np.ndarray
) -> np.ndarray:
    """Vectorized criterion for admissible (rss, df) arrays."""
    with np.errstate(divide="ignore", invalid="ignore"):
        log_ms = np.log(rss / n)
        if kind == "gcv":
            return log_ms - 2.0 * np.log(1.0 - df / n)
        if kind == "aic":
            return log_ms + 2.0 * df / n
        if kind == "bic":
            return log_ms + math.log(n) * df / n
        if kind == "aicc":
            return np.where(
                df < n - 2,
                log_ms + 1.0 + 2.0 * (df + 1.0) / (n - df - 2.0),
                np.inf,
            )
        s = rss / (n - df)
        f = np.where(df > 0, energy / np.maximum(df * s, 1e-300), 1.0)
        return np.log(s) + (df / n) * np.log(np.maximum(f, 1.0))


@dataclass
class SelectionPlan:
    """How to choose the number of bias-reduction iterations."""

    criterion: str = "gcv"
    mode: str = "numeric"
    kmin: float = 1.0
    kmax: float = 1e5
    fraction: tuple[float, ...] = _DEFAULT_FRACTION
    dfmaxi: float | None = None
    fixed_k: float | None = None
    cv: "object | None" = None  # CvPlan, attached lazily to avoid a cycle

    def __post_init__(self) -> None:
        if self.criterion not in CRITERIA + CV_LOSSES:
            raise ValueError(
                f"criterion must be one of {CRITERIA + CV_LOSSES}, "
                f"got {self.criterion!r}"
            )
        if self.mode not in ("numeric", "exhaustive", "fixed"):
            raise ValueError(f"mode must be numeric, exhaustive or fixed: {self.mode!r}")
        if self.mode == "fixed":
            if self.fixed_k is None or self.fixed_k < 1:
                raise ValueError("fixed mode needs fixed_k >= 1")
        if not 1.0 <= self.kmin < self.kmax:
            raise ValueError(
                f"need 1 <= kmin < kmax, got kmin={self.kmin}, kmax={self.kmax}"
            )
        if any(f <= 0 for f in self.fraction):
            raise ValueError("fraction breakpoints must be positive")
        if list(self.fraction) != sorted(self.fraction):
            raise ValueError("fraction breakpoints must be ascending")


@dataclass
class SelectionResult:
    """Chosen iteration count plus the evaluated criterion trace."""

    k: float
    value: float
    criterion: str
    mode: str
    df: float
    rss: float
    trace_k: np.ndarray = field(repr=False)
    trace_value: np.ndarray = field(repr=False)
    trace_df: np.ndarray = field(repr=False)
    trace_rss: np.ndarray = field(repr=False)

    @property
    def k_rounded(self) -> int:
        return int(round(self.k))


def _bisect_last_ok(predicate, lo: float, hi: float, iters: int = 100) -> float:
    """Largest x in [lo, hi] with predicate(x) true, for monotone predicates."""
    if predicate(hi):
        return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-9 * max(1.0, abs(hi)):
            break
    return lo


def search_k_numeric(
    spectral: SpectralForm, y: np.ndarray, plan: SelectionPlan
) -> SelectionResult:
    """Minimize the criterion over real-valued k on guarded subintervals.

    Each stretch between consecutive breakpoints gets its own run of the
    scalar minimizer (golden section with parabolic steps, tolerance 0.01
    in k), which keeps a single local dip from hiding the global one.
    """
    if plan.criterion not in CRITERIA:
        raise ValueError(f"numeric search needs a spectral criterion, got {plan.criterion!r}")
    kpath = KPath(spectral, y)
    n = kpath.n
    limit = df_ceiling(n, plan.dfmaxi)
    if not spectral.real_k_ok:
        raise ValueError(
            "numeric search needs eigenvalues in [0, 1]; "
            "use exhaustive integer search for this kernel"
        )
    if kpath.df(plan.kmin) > limit:
        raise BreakdownError(
            f"df({plan.kmin:g}) = {kpath.df(plan.kmin):.4g} already exceeds "
            f"the ceiling {limit:.4g}; increase dfmaxi or smooth less"
        )
    k_hi = _bisect_last_ok(lambda k: kpath.df(k) <= limit, plan.kmin, plan.kmax)
    if kpath.rss(k_hi) <= RSS_FLOOR:
        k_hi = _bisect_last_ok(
            lambda k: kpath.rss(k) > RSS_FLOOR, plan.kmin, k_hi
        )
    if kpath.rss(plan.kmin) <= RSS_FLOOR:
        raise BreakdownError(
            "the base smoother already interpolates the data "
            f"(rss(kmin) <= {RSS_FLOOR:g}); smooth less or check for "
            "duplicate responses"
        )

    trace: list[tuple[float, float, float, float]] = []

    def objective(k: float) -> float:
        df = kpath.df(k)
        rss = kpath.rss(k)
        if df > limit or rss <= RSS_FLOOR or not np.isfinite(rss):
            return np.inf
        energy = kpath.fitted_energy(k) if plan.criterion == "gmdl" else None
        value = criterion_value(plan.criterion, n, rss, df, energy)
        trace.append((k, value, df, rss))
        return value

    breaks = [plan.kmin]
    breaks += [float(f) for f in plan.fraction if plan.kmin < f < k_hi]
    breaks.append(k_hi)

    best_k, best_value = None, np.inf
    for k in breaks:
        value = objective(k)
        if value < best_value:
            best_k, best_value = k, value
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b - a <= _K_TOL:
            continue
        res = minimize_scalar(
            objective, bounds=(a, b), method="bounded", options={"xatol": _K_TOL}
        )
        if res.fun < best_value:
            best_k, best_value = float(res.x), float(res.fun)
    if best_k is None or not np.isfinite(best_value):
        raise BreakdownError(
            "no admissible iteration count in "
            f"[{plan.kmin:g}, {plan.kmax:g}]; increase dfmaxi or smooth less"
        )
    arr = np.asarray(sorted(trace))
    return SelectionResult(
        k=best_k,
        value=best_value,
        criterion=plan.criterion,
        mode="numeric",
        df=kpath.df(best_k),
        rss=kpath.rss(best_k),
        trace_k=arr[:, 0],
        trace_value=arr[:, 1],
        trace_df=arr[:, 2],
        trace_rss=arr[:, 3],
    )


def search_k_exhaustive(
    spectral: SpectralForm, y: np.ndarray, plan: SelectionPlan
) -> SelectionResult:
    """Sweep every integer k in [kmin, kmax], ties going to the smaller k."""
    if plan.criterion not in CRITERIA:
        raise ValueError(
            f"exhaustive search needs a spectral criterion, got {plan.criterion!r}"
        )
    kpath = KPath(spectral, y)
    n = kpath.n
    limit = df_ceiling(n, plan.dfmaxi)
    k_lo = int(math.ceil(plan.kmin))
    k_hi = int(math.floor(plan.kmax))
    best_k, best_value, best_df, best_rss = None, np.inf, np.nan, np.nan
    tk, tv, tdf, trss = [], [], [], []
    monotone = spectral.real_k_ok
    for ks, df, rss, energy in kpath.batch(k_lo, k_hi):
        ok = np.isfinite(rss) & (df <= limit) & (rss > RSS_FLOOR) & (df < n)
        if ok.any():
            value = np.full(ks.size, np.inf)
            value[ok] = _criterion_array(
                plan.criterion, n, rss[ok], df[ok], energy[ok]
            )
            value[~np.isfinite(value)] = np.inf
            j = int(np.argmin(value))
            if value[j] < best_value:
                best_k = int(ks[j])
                best_value = float(value[j])
                best_df, best_rss = float(df[j]), float(rss[j])
            tk.append(ks[ok])
            tv.append(value[ok])
            tdf.append(df[ok])
            trss.append(rss[ok])
        if monotone and df[-1] > limit:
            break
    if best_k is None:
        raise BreakdownError(
            f"no admissible integer k in [{k_lo}, {k_hi}]; "
            "increase dfmaxi or smooth less"
        )
    return SelectionResult(
        k=float(best_k),
        value=best_value,
        criterion=plan.criterion,
        mode="exhaustive",
        df=best_df,
        rss=best_rss,
        trace_k=np.concatenate(tk) if tk else np.empty(0),
        trace_value=np.concatenate(tv) if tv else np.empty(0),
        trace_df=np.concatenate(tdf) if tdf else np.empty(0),
        trace_rss=np.concatenate(trss) if trss else np.empty(0),
    )
