"""Bandwidth selection by leave-one-out cross-validation on the
grid-averaged pooled periodogram (a Whittle-type deviance).

The averaged periodogram collapses the operator-valued problem to the
univariate spectrum of the pooled integrated series, so one bandwidth
is selected and shared by all four smoothed estimators (both data
fields and both bootstrap fields).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._exceptions import InputDataError, NumericFailure
from .model import WeightKernel, _freeze
from .spectral import DftField, _weight_matrices

__all__ = [
    "CvCurve",
    "averaged_periodogram",
    "cv_score",
    "select_bandwidth",
    "DEFAULT_CV_GRID",
]

# Covers the useful operating range (roughly 0.06-0.3) with margin.
DEFAULT_CV_GRID = tuple(np.geomspace(0.02, 0.5, 12))

G_FLOOR = 1e-12


@dataclass(frozen=True)
class CvCurve:
    """Cross-validation scores over a bandwidth grid and the argmin."""

    candidates: np.ndarray
    scores: np.ndarray
    selected: float

    def __post_init__(self):
        c = np.asarray(self.candidates, dtype=float)
        s = np.asarray(self.scores, dtype=float)
        if c.shape != s.shape or c.ndim != 1:
            raise InputDataError("candidates and scores must be equal-length vectors")
        object.__setattr__(self, "candidates", _freeze(c))
        object.__setattr__(self, "scores", _freeze(s))


def averaged_periodogram(dft_x: DftField, dft_y: DftField) -> np.ndarray:
    """Grid average of the pooled periodogram kernels at the positive
    Fourier frequencies t = 1..N.

    Equals |sum_i J_t(s_i)|^2 / k^2 averaged over the two groups, hence
    exactly real and nonnegative; it is the periodogram of the pooled
    integrated series in the fine-grid limit.
    """
    if dft_x.T != dft_y.T or dft_x.k != dft_y.k:
        raise InputDataError("DFT fields have mismatched shapes")
    k = dft_x.k
    sx = dft_x.values[1:].sum(axis=1)
    sy = dft_y.values[1:].sum(axis=1)
    return ((sx.real**2 + sx.imag**2) + (sy.real**2 + sy.imag**2)) / (2.0 * k * k)


def cv_score(it: np.ndarray, T: int, kernel: WeightKernel, bandwidth: float) -> float:
    """Whittle-type cross-validation objective

        CV(b) = (1/N) sum_{t=1..N} { log g_{-t}(lambda_t) + I(lambda_t) / g_{-t}(lambda_t) },

    where g_{-t} is the leave-out kernel estimate over s in -N..N with
    s != +-t (and s = 0 excluded: centered data make I(0) vanish).

    Returns +inf when any leave-out estimate falls below a small floor,
    e.g. when the bandwidth leaves every window empty; bandwidths
    outside (0, 1) raise instead.
    """
    if not (0.0 < bandwidth < 1.0):
        raise InputDataError(f"bandwidth must lie in (0, 1), got {bandwidth}")
    it = np.asarray(it, dtype=float)
    N = (int(T) - 1) // 2
    if it.shape != (N,):
        raise InputDataError(f"averaged periodogram must have length N={N} for T={T}")
    w_sum, _ = _weight_matrices(int(T), kernel, float(bandwidth))
    w = w_sum[1:, 1:]
    g_minus = w @ it - np.diag(w) * it
    if np.min(g_minus) <= G_FLOOR:
        return float("inf")
    return float(np.mean(np.log(g_minus) + it / g_minus))


def select_bandwidth(dft_x: DftField, dft_y: DftField, kernel: WeightKernel,
                     candidates=DEFAULT_CV_GRID) -> CvCurve:
    """Evaluate ``cv_score`` on each candidate bandwidth and pick the
    minimizer, breaking ties toward the smaller bandwidth.

    Raises
    ------
    NumericFailure
        If every candidate scores +inf ("no admissible bandwidth").
    """
    cand = np.asarray(list(candidates), dtype=float)
    if cand.size == 0:
        raise InputDataError("candidate bandwidth grid is empty")
    if np.any((cand <= 0.0) | (cand >= 1.0)):
        raise InputDataError("candidate bandwidths must lie in (0, 1)")
    it = averaged_periodogram(dft_x, dft_y)
    scores = np.array([cv_score(it, dft_x.T, kernel, b) for b in cand])
    if not np.any(np.isfinite(scores)):
        raise NumericFailure("no admissible bandwidth: all CV scores are infinite")
    best = np.min(scores)
    selected = float(np.min(cand[scores == best]))
    return CvCurve(candidates=cand, scores=scores, selected=selected)
