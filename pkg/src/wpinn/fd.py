"""Finite-difference stencils for time derivatives and the Laplacian.

Fields are globally defined functions of (t, x) (neural networks evaluate on
all of R^{d+1}), so stencils never clamp or check domain membership even when
a probe lands outside the PDE domain, e.g. the one-sided time stencil applied
at the terminal slice.

The combine_* helpers fix the floating-point evaluation order; the vectorized
loss/metric assembly reuses them on arrays so that scalar and batched paths
agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Field = Callable[[float, np.ndarray], float]


@dataclass(frozen=True)
class FdConfig:
    h: float = 1e-3

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("step size must be positive")


def combine_dt(u0, u1, u2, h: float):
    """Forward one-sided first derivative from values at t, t+h, t+2h.

    (-u(t+2h) + 4 u(t+h) - 3 u(t)) / (2h); exact on quadratics."""
    return (-3.0 * u0 + 4.0 * u1 - u2) / (2.0 * h)


def combine_second(u_minus, u_center, u_plus, h: float):
    """Centered second derivative: (u(+h) - 2 u(0) + u(-h)) / h^2."""
    return (u_plus - 2.0 * u_center + u_minus) / (h * h)


def fd_dt(field: Field, t: float, x: np.ndarray, h: float) -> float:
    x = np.asarray(x, dtype=float)
    return combine_dt(field(t, x), field(t + h, x), field(t + 2.0 * h, x), h)


def fd_dtt(field: Field, t: float, x: np.ndarray, h: float) -> float:
    x = np.asarray(x, dtype=float)
    return combine_second(field(t - h, x), field(t, x), field(t + h, x), h)


def fd_dxixi(field: Field, t: float, x: np.ndarray, i: int, h: float) -> float:
    """Second difference in coordinate i (0-based)."""
    x = np.asarray(x, dtype=float)
    if not 0 <= i < x.shape[0]:
        raise IndexError(f"coordinate index {i} out of range for dimension {x.shape[0]}")
    e = np.zeros_like(x)
    e[i] = h
    return combine_second(field(t, x - e), field(t, x), field(t, x + e), h)


def fd_laplacian_parts(field: Field, t: float, x: np.ndarray, h: float) -> np.ndarray:
    """The d directional second differences whose sum is the discrete Laplacian.

    Exposed separately because the weighted residual can weight each direction
    on its own."""
    x = np.asarray(x, dtype=float)
    return np.array([fd_dxixi(field, t, x, i, h) for i in range(x.shape[0])])


def fd_laplacian(field: Field, t: float, x: np.ndarray, h: float) -> float:
    parts = fd_laplacian_parts(field, t, x, h)
    total = 0.0
    for p in parts:  # sequential sum, matching the vectorized accumulation order
        total = total + float(p)
    return total
