"""Cross-validation splits and prediction-error search over k.

Two layouts are supported: classical data splitting (independent random
train/test permutations) and K-fold partitions, the latter with random,
consecutive, interleaved or time-ordered fold geometry. The smoother is
recalibrated on every training fold; candidate iteration counts are then
scored by pooled prediction loss at the held-out points.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .engine import KPath
from .selection import SelectionPlan, SelectionResult, BreakdownError

__all__ = ["CvPlan", "make_splits", "search_k_cv"]

_SPLIT_TYPES = ("random", "consecutive", "interleaved", "timeseries")
_K_TOL = 0.01


@dataclass(frozen=True)
class CvPlan:
    """Geometry, seed and loss of a cross-validation run.

    ``kfold`` may be False (data splitting with ``npermut`` random
    train/test permutations), True (K derived from the test-set size) or an
    integer number of folds. Exactly one of ``ntest``/``ntrain`` may pin
    the test-set size; it defaults to n // 10.
    """

    kfold: bool | int = False
    ntest: int | None = None
    ntrain: int | None = None
    npermut: int = 20
    type: str = "random"
    seed: int = 0
    loss: str = "rmse"

    def __post_init__(self) -> None:
        if self.type not in _SPLIT_TYPES:
            raise ValueError(f"split type must be one of {_SPLIT_TYPES}, got {self.type!r}")
        if self.loss not in ("rmse", "map"):
            raise ValueError(f"loss must be rmse or map, got {self.loss!r}")
        if self.npermut < 1:
            raise ValueError(f"npermut must be >= 1, got {self.npermut}")
        if self.ntest is not None and self.ntrain is not None:
            raise ValueError("give ntest or ntrain, not both")
        if self.kfold is not False and self.kfold is not True:
            if int(self.kfold) < 2:
                raise ValueError(f"kfold must be >= 2 folds, got {self.kfold}")

    def _test_size(self, n: int) -> int:
        if self.ntrain is not None:
            ntest = n - int(self.ntrain)
        elif self.ntest is not None:
            ntest = int(self.ntest)
        else:
            ntest = n // 10
        if not 1 <= ntest < n:
            raise ValueError(f"test size {ntest} impossible for n = {n}")
        return ntest

    def folds(self, n: int) -> int:
        """Number of folds implied for K-fold style plans."""
        if self.kfold is True:
            k = n // self._test_size(n)
        else:
            k = int(self.kfold)
        if not 2 <= k <= n:
            raise ValueError(f"{k} folds impossible for n = {n}")
        return k


def make_splits(n: int, plan: CvPlan) -> list[tuple[np.ndarray, np.ndarray]]:
    """Materialize (train, test) index pairs for a plan.

    K-fold test folds are disjoint and cover 0..n-1 (except the
    time-ordered type, which is a single end split); data splitting draws
    ``npermut`` independent test sets.
    """
    if n < 2:
        raise ValueError("need at least two rows to split")
    rng = np.random.default_rng(plan.seed)
    if plan.kfold is False:
        if plan.type != "random":
            raise ValueError(
                f"data splitting draws random test sets; the {plan.type!r} "
                "layout needs kfold"
            )
        ntest = plan._test_size(n)
        out = []
        for _ in range(plan.npermut):
            perm = rng.permutation(n)
            test = np.sort(perm[:ntest])
            train = np.sort(perm[ntest:])
            out.append((train, test))
        return out

    k = plan.folds(n)
    idx = np.arange(n)
    if plan.type == "timeseries":
        ntest = n // k
        if ntest < 1:
            raise ValueError(f"time-ordered split needs n // folds >= 1, got n={n}, folds={k}")
        return [(idx[: n - ntest], idx[n - ntest :])]
    if plan.type == "random":
        folds = np.array_split(rng.permutation(n), k)
        folds = [np.sort(f) for f in folds]
    elif plan.type == "consecutive":
        folds = np.array_split(idx, k)
    else:  # interleaved
        folds = [idx[idx % k == j] for j in range(k)]
    out = []
    for f in folds:
        if f.size == 0:
            raise ValueError(f"{k} folds leave an empty fold for n = {n}")
        mask = np.ones(n, dtype=bool)
        mask[f] = False
        out.append((idx[mask], f))
    return out


class _FoldScorer:
    """Per-fold pieces turning an iteration count into test predictions."""

    def __init__(self, smoother, y_train: np.ndarray, x_test: np.ndarray, y_test: np.ndarray):
        spectral = smoother.spectral()
        self.kpath = KPath(spectral, y_train)
        # predictions are w(x)' beta_k = (W G) (factors * z)
        self.projector = smoother.weights_matrix(x_test) @ self.kpath.g
        self.y_test = y_test

    def predict(self, k: float) -> np.ndarray:
        return self.projector @ (self.kpath.coef_factors(k) * self.kpath.z)

    def errors(self, k: float) -> np.ndarray:
        return self.predict(k) - self.y_test


def _pooled_loss(errors: np.ndarray, loss: str) -> float:
    if loss == "rmse":
        return float(np.sqrt(np.mean(errors**2)))
    return float(np.mean(np.abs(errors)))


def search_k_cv(
    x: np.ndarray,
    y: np.ndarray,
    smoother_factory,
    plan: SelectionPlan,
) -> SelectionResult:
    """Choose k by held-out prediction loss.

    ``smoother_factory`` rebuilds and recalibrates the base smoother on a
    training design; it is called once per fold. Numeric mode minimizes the
    pooled loss curve over real k with the same subinterval scheme as the
    criterion search; exhaustive mode sweeps integers.
    """
    cv: CvPlan = plan.cv if plan.cv is not None else CvPlan()
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n = y.size
    splits = make_splits(n, cv)
    scorers = []
    for i, (train, test) in enumerate(splits):
        try:
            smoother = smoother_factory(x[train])
        except Exception as exc:
            raise RuntimeError(
                f"cannot calibrate the smoother on training fold {i} "
                f"(size {train.size}): {exc}"
            ) from exc
        scorers.append(_FoldScorer(smoother, y[train], x[test], y[test]))

    real_ok = all(s.kpath.real_ok for s in scorers)
    mode = plan.mode
    if mode == "numeric" and not real_ok:
        warnings.warn(
            "kernel eigenvalues leave [0, 1] on some training fold; "
            "falling back to exhaustive integer search",
            stacklevel=2,
        )
        mode = "exhaustive"

    if mode == "exhaustive":
        return _cv_exhaustive(scorers, cv, plan)

    trace: list[tuple[float, float]] = []

    def objective(k: float) -> float:
        errors = np.concatenate([s.errors(k) for s in scorers])
        if not np.all(np.isfinite(errors)):
            return np.inf
        value = _pooled_loss(errors, cv.loss)
        trace.append((k, value))
        return value

    k_hi = float(plan.kmax)
    breaks = [float(plan.kmin)]
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
        raise BreakdownError("prediction loss is not finite anywhere in the k range")
    arr = np.asarray(sorted(trace))
    return SelectionResult(
        k=best_k,
        value=best_value,
        criterion=cv.loss,
        mode="numeric",
        df=np.nan,
        rss=np.nan,
        trace_k=arr[:, 0],
        trace_value=arr[:, 1],
        trace_df=np.full(arr.shape[0], np.nan),
        trace_rss=np.full(arr.shape[0], np.nan),
    )


def _cv_exhaustive(scorers, cv: CvPlan, plan: SelectionPlan) -> SelectionResult:
    k_lo = int(math.ceil(plan.kmin))
    k_hi = int(math.floor(plan.kmax))
    chunk = 2048
    n_test_total = sum(s.y_test.size for s in scorers)
    best_k, best_value = None, np.inf
    tk, tv = [], []
    for start in range(k_lo, k_hi + 1, chunk):
        stop = min(start + chunk, k_hi + 1)
        ks = np.arange(start, stop)
        acc = np.zeros(ks.size)
        for s in scorers:
            with np.errstate(over="ignore", invalid="ignore"):
                factors = _factor_block(s.kpath, ks)
                preds = s.projector @ (factors * s.kpath.z[:, None])
                err = preds - s.y_test[:, None]
                if cv.loss == "rmse":
                    acc += np.einsum("ij,ij->j", err, err)
                else:
                    acc += np.abs(err).sum(axis=0)
        if cv.loss == "rmse":
            values = np.sqrt(acc / n_test_total)
        else:
            values = acc / n_test_total
        finite = np.isfinite(values)
        if finite.any():
            masked = np.where(finite, values, np.inf)
            j = int(np.argmin(masked))
            if masked[j] < best_value:
                best_k, best_value = int(ks[j]), float(masked[j])
            tk.append(ks[finite])
            tv.append(values[finite])
    if best_k is None:
        raise BreakdownError("prediction loss is not finite at any integer k")
    return SelectionResult(
        k=float(best_k),
        value=best_value,
        criterion=cv.loss,
        mode="exhaustive",
        df=np.nan,
        rss=np.nan,
        trace_k=np.concatenate(tk) if tk else np.empty(0),
        trace_value=np.concatenate(tv) if tv else np.empty(0),
        trace_df=np.full(sum(a.size for a in tk), np.nan),
        trace_rss=np.full(sum(a.size for a in tk), np.nan),
    )


def _factor_block(kpath: KPath, ks: np.ndarray) -> np.ndarray:
    """Coefficient factors (1 - (1-l)^k) / l for a block of integer k."""
    mu = kpath.mu
    lam = kpath.lam
    v = np.empty((mu.size, ks.size))
    with np.errstate(over="ignore"):
        powers = np.power(mu, float(ks[0]))
        for j in range(ks.size):
            v[:, j] = powers
            powers = powers * mu
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (1.0 - v) / lam[:, None]
    small = np.abs(lam) < 1e-12
    if small.any():
        kk = ks[None, :].astype(float)
        out[small] = kk * (1.0 - 0.5 * (kk - 1.0) * lam[small][:, None])
    return out
