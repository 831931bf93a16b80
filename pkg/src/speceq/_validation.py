"""Input validation helpers shared by the estimator, the CLI and the
lower-level modules."""

from __future__ import annotations

import warnings

import numpy as np

from ._exceptions import InputDataError, NumericFailure

__all__ = [
    "check_curve_matrix",
    "check_grid",
    "check_equidistant_grid",
    "check_bandwidth",
    "real_part",
]


def check_curve_matrix(values, min_rows: int = 2, min_cols: int = 1) -> np.ndarray:
    """Coerce ``values`` to a finite 2-d float array of curves (rows = time)."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise InputDataError(f"curve matrix must be 2-d, got shape {arr.shape}")
    if arr.shape[0] < min_rows or arr.shape[1] < min_cols:
        raise InputDataError(
            f"curve matrix of shape {arr.shape} is too small; "
            f"need at least {min_rows} rows and {min_cols} columns"
        )
    if not np.all(np.isfinite(arr)):
        raise InputDataError("curve matrix contains NaN or Inf entries")
    return arr


def check_grid(grid, k: int) -> np.ndarray:
    """Validate evaluation points: k strictly increasing values in [0, 1]."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.shape[0] != k:
        raise InputDataError(f"grid must be a length-{k} vector, got shape {g.shape}")
    if g.size and (g[0] < 0.0 or g[-1] > 1.0):
        raise InputDataError("grid points must lie in [0, 1]")
    if g.size > 1 and not np.all(np.diff(g) > 0):
        raise InputDataError("grid points must be strictly increasing")
    return g


def check_equidistant_grid(grid: np.ndarray, rtol: float = 1e-8) -> bool:
    """Warn when the grid is not equidistant.

    The test statistic discretizes [0,1]^2 integrals by plain grid
    averages, which assumes (approximately) equal spacing.
    """
    if grid.size < 3:
        return True
    d = np.diff(grid)
    equidistant = np.allclose(d, d[0], rtol=rtol, atol=0.0)
    if not equidistant:
        warnings.warn(
            "grid is not equidistant; grid-average integral approximations "
            "may be biased",
            UserWarning,
            stacklevel=3,
        )
    return equidistant


def check_bandwidth(bandwidth: float) -> float:
    b = float(bandwidth)
    if not (0.0 < b < 1.0):
        raise InputDataError(f"bandwidth must lie in (0, 1), got {b}")
    return b


def real_part(z, tol: float, what: str):
    """Return the real part of a theoretically-real complex scalar or array.

    Raises :class:`NumericFailure` if any imaginary part exceeds
    ``tol * max(1, max |Re z|)``, which would indicate a broken symmetry
    upstream rather than roundoff.
    """
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return z if z.ndim else float(z)
    scale = max(1.0, float(np.max(np.abs(z.real))) if z.size else 1.0)
    worst = float(np.max(np.abs(z.imag))) if z.size else 0.0
    if worst > tol * scale:
        raise NumericFailure(
            f"{what}: imaginary part {worst:.3e} exceeds tolerance "
            f"(scale {scale:.3e})"
        )
    return z.real if z.ndim else float(z.real)
