"""Univariate kernel functions used to build product-kernel smoothers.

Each kernel is a symmetric density on the real line. Only the Gaussian and
the triangle kernel are positive definite; the remaining ones can push
smoothing-matrix eigenvalues outside [0, 1] and are kept for classroom
comparisons only.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "KERNEL_CODES",
    "KERNEL_NAMES",
    "POSITIVE_DEFINITE",
    "kernel_value",
    "kernel_values",
    "resolve_kernel",
    "is_positive_definite",
]

# short CLI codes -> canonical names
KERNEL_CODES = {
    "g": "gaussian",
    "t": "triangle",
    "q": "quartic",
    "e": "epanechnikov",
    "u": "uniform",
}

KERNEL_NAMES = tuple(KERNEL_CODES.values())

# kernels whose Gram matrix is positive semi-definite for any design
POSITIVE_DEFINITE = frozenset({"gaussian", "triangle"})

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def resolve_kernel(kind: str) -> str:
    """Map a one-letter code or full name to the canonical kernel name."""
    name = KERNEL_CODES.get(kind, kind)
    if name not in KERNEL_NAMES:
        raise ValueError(
            f"unknown kernel {kind!r}; expected one of "
            f"{sorted(KERNEL_CODES)} or {sorted(KERNEL_NAMES)}"
        )
    return name


def is_positive_definite(kind: str) -> bool:
    return resolve_kernel(kind) in POSITIVE_DEFINITE


def kernel_values(u: np.ndarray, kind: str) -> np.ndarray:
    """Evaluate the kernel at an array of scaled distances.

    Args:
        u: array of (x - x') / h values, any shape.
        kind: kernel code or name.

    Returns:
        Array of kernel weights, same shape as ``u``.
    """
    name = resolve_kernel(kind)
    u = np.asarray(u, dtype=float)
    if name == "gaussian":
        return np.exp(-0.5 * u * u) / _SQRT_2PI
    a = np.abs(u)
    inside = a <= 1.0
    if name == "triangle":
        return np.where(inside, 1.0 - a, 0.0)
    if name == "quartic":
        t = 1.0 - u * u
        return np.where(inside, 0.9375 * t * t, 0.0)
    if name == "epanechnikov":
        return np.where(inside, 0.75 * (1.0 - u * u), 0.0)
    # uniform, closed support so K(1) = 1/2
    return np.where(inside, 0.5, 0.0)


def kernel_value(u: float, kind: str) -> float:
    """Scalar convenience wrapper around :func:`kernel_values`."""
    return float(kernel_values(np.asarray(u, dtype=float), kind))
