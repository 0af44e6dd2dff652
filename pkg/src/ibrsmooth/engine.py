"""Bias-reduction iteration along a smoother's eigendecomposition.

One smoothing pass leaves bias (I - S) m; smoothing the residuals and
adding the estimate back k - 1 times yields fitted values

    m_k = (I - (I - S)^k) y.

Under the similarity S = diag(d) U L U' diag(1/d) every quantity along the
iteration path (fitted values, coefficients, degrees of freedom, residual
sum of squares) reduces to cheap per-eigenvalue weights, and k may be any
non-negative real number as long as the spectrum stays inside [0, 1].
"""

from __future__ import annotations

import numpy as np

from .smoothers import BaseSmoother, SpectralForm

__all__ = [
    "IterationDomainError",
    "KPath",
    "iterate_fitted",
    "iterate_fitted_recursive",
    "coefficients",
    "df_of_k",
    "rss_of_k",
]

# below this magnitude the coefficient factor (1 - (1-l)^k) / l switches to
# its small-eigenvalue series
_SERIES_EIGEN = 1e-12


class IterationDomainError(ValueError):
    """Fractional k requested for a spectrum outside [0, 1]."""


def _is_integer(k: float) -> bool:
    return abs(k - round(k)) < 1e-9


def _check_k(k: float) -> float:
    k = float(k)
    if not np.isfinite(k) or k < 0:
        raise ValueError(f"iteration count must be a finite number >= 0, got {k}")
    return k


class KPath:
    """Precomputed quantities for walking the iteration path of one fit.

    For a kernel smoother the similarity is non-orthogonal, so Euclidean
    residual norms need the Gram matrix H = U' D U; the eigen-coordinate
    shortcut is only used when the smoother is symmetric (H = I).
    """

    def __init__(self, spectral: SpectralForm, y: np.ndarray):
        y = np.asarray(y, dtype=float).ravel()
        if y.size != spectral.n:
            raise ValueError(f"y has {y.size} entries for n = {spectral.n}")
        if not np.all(np.isfinite(y)):
            raise ValueError("y contains non-finite values")
        self.spectral = spectral
        self.y = y
        self.lam = spectral.lam
        self.mu = 1.0 - self.lam
        self.real_ok = spectral.real_k_ok
        # G z = y exactly; fitted values are G (w * z)
        self.g = spectral.d_half[:, None] * spectral.u
        self.z = spectral.u.T @ (y / spectral.d_half)
        self.symmetric = spectral.symmetric
        self._h = None if self.symmetric else self.g.T @ self.g

    @property
    def n(self) -> int:
        return self.y.size

    def _mu_pow(self, k: float) -> np.ndarray:
        """(1 - lambda)^k, valid for real k >= 0 or any integer k."""
        k = _check_k(k)
        if _is_integer(k):
            # C pow handles a negative base with an integral exponent
            with np.errstate(over="ignore"):
                return np.power(self.mu, float(round(k)))
        if not self.real_ok:
            raise IterationDomainError(
                "fractional iteration counts are undefined for eigenvalues "
                f"outside [0, 1] (range [{self.lam.min():.3e}, "
                f"{self.lam.max():.3e}]); use integer counts via the "
                "exhaustive search or the residual recursion"
            )
        return np.power(np.clip(self.mu, 0.0, 1.0), k)

    def weights(self, k: float) -> np.ndarray:
        """Per-eigenvalue shrinkage weights 1 - (1 - lambda)^k."""
        return 1.0 - self._mu_pow(k)

    def df(self, k: float) -> float:
        return float(np.sum(self.weights(k)))

    def fitted(self, k: float) -> np.ndarray:
        return self.g @ (self.weights(k) * self.z)

    def rss(self, k: float) -> float:
        v = self._mu_pow(k) * self.z
        if self._h is None:
            return float(v @ v)
        return float(v @ self._h @ v)

    def fitted_energy(self, k: float) -> float:
        f = self.weights(k) * self.z
        if self._h is None:
            return float(f @ f)
        return float(f @ self._h @ f)

    def coef_factors(self, k: float) -> np.ndarray:
        """Per-eigenvalue factor (1 - (1-l)^k) / l with series fallback."""
        k = _check_k(k)
        w = self.weights(k)
        small = np.abs(self.lam) < _SERIES_EIGEN
        with np.errstate(divide="ignore", invalid="ignore"):
            factors = w / self.lam
        series = k * (1.0 - 0.5 * (k - 1.0) * self.lam)
        return np.where(small, series, factors)

    def coefficients(self, k: float) -> np.ndarray:
        return self.g @ (self.coef_factors(k) * self.z)

    def batch(self, k_lo: int, k_hi: int, chunk: int = 4096):
        """Yield (k, df, rss, fitted_energy) arrays over integer counts.

        Powers are accumulated incrementally, so a full sweep costs one
        n x chunk matrix product per block instead of one matvec per k.
        """
        if k_lo < 0 or k_hi < k_lo:
            raise ValueError(f"bad integer range [{k_lo}, {k_hi}]")
        h = self._h
        hz = None if h is None else h @ self.z
        zhz = float(self.z @ self.z) if h is None else float(self.z @ hz)
        powers: np.ndarray | None = None
        for start in range(k_lo, k_hi + 1, chunk):
            stop = min(start + chunk, k_hi + 1)
            ks = np.arange(start, stop)
            with np.errstate(over="ignore", invalid="ignore"):
                if powers is None:
                    powers = np.power(self.mu, float(k_lo))
                v = np.empty((self.n, ks.size))
                for j in range(ks.size):
                    v[:, j] = powers
                    powers = powers * self.mu
                vz = v * self.z[:, None]
                df = self.n - v.sum(axis=0)
                if h is None:
                    rss = np.einsum("ij,ij->j", vz, vz)
                    cross = self.z @ vz
                else:
                    hv = h @ vz
                    rss = np.einsum("ij,ij->j", vz, hv)
                    cross = hz @ vz
                # fitted = z - v z, so |f|^2 = z'Hz - 2 z'Hv + v'Hv
                energy = zhz - 2.0 * cross + rss
            yield ks, df, rss, energy


def iterate_fitted(spectral: SpectralForm, y: np.ndarray, k: float) -> np.ndarray:
    """Fitted values after k bias-reduction steps (k may be fractional)."""
    return KPath(spectral, y).fitted(k)


def iterate_fitted_recursive(smoother, y: np.ndarray, k: int) -> np.ndarray:
    """Reference path: smooth residuals k times with the dense matrix.

    Mathematically identical to :func:`iterate_fitted` for integer k; kept
    as an independent check and as the safe route for non-positive-definite
    kernels.
    """
    if not _is_integer(k) or k < 0:
        raise ValueError(f"the residual recursion needs an integer k >= 0, got {k}")
    s = smoother.matrix if isinstance(smoother, BaseSmoother) else np.asarray(smoother)
    y = np.asarray(y, dtype=float).ravel()
    r = y.copy()
    for _ in range(int(round(k))):
        r = r - s @ r
    return y - r


def coefficients(spectral: SpectralForm, y: np.ndarray, k: float) -> np.ndarray:
    """Coefficient vector beta_k with fitted values S beta_k."""
    return KPath(spectral, y).coefficients(k)


def df_of_k(spectral: SpectralForm, k: float) -> float:
    """Effective degrees of freedom sum(1 - (1 - lambda_i)^k)."""
    lam = spectral.lam
    k = _check_k(k)
    if _is_integer(k):
        with np.errstate(over="ignore"):
            return float(np.sum(1.0 - np.power(1.0 - lam, float(round(k)))))
    if not spectral.real_k_ok:
        raise IterationDomainError(
            "fractional iteration counts need eigenvalues in [0, 1]"
        )
    mu = np.clip(1.0 - lam, 0.0, 1.0)
    return float(np.sum(1.0 - np.power(mu, k)))


def rss_of_k(spectral: SpectralForm, y: np.ndarray, k: float) -> float:
    """Residual sum of squares of the explicitly formed residual vector."""
    return KPath(spectral, y).rss(k)
