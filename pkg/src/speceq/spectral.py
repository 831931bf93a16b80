"""Finite Fourier transforms, periodogram kernels, kernel-smoothed
spectral density estimates and the pooled estimator.

Frequency handling follows the convention of the data model: everything
is indexed by t = -N..N with N = floor((T-1)/2), and only the t >= 0
half is materialized (negative indices are conjugates). Kernel weights
are evaluated at the shortest circular distance on (-pi, pi], which
keeps the conjugate-reflection relation exact and avoids boundary bias
near +-pi.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._exceptions import InputDataError
from ._validation import check_bandwidth
from .model import FunctionalSample, SpectralKernelField, WeightKernel, _freeze

__all__ = ["DftField", "dft", "periodogram_kernel", "smooth", "pooled"]


@dataclass(frozen=True)
class DftField:
    """Finite Fourier transforms J_t on the grid, stored for t = 0..N.

    J_{-t} = conj(J_t) holds exactly because the underlying series is
    real; ``entry`` materializes negative indices on demand.
    """

    values: np.ndarray  # (N+1, k) complex
    grid: np.ndarray
    T: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        N = (int(self.T) - 1) // 2
        if values.ndim != 2 or values.shape[0] != N + 1:
            raise InputDataError(
                f"DFT field must have shape (N+1, k) with N+1={N + 1}, got {values.shape}"
            )
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "grid", _freeze(np.asarray(self.grid, dtype=float)))

    @property
    def N(self) -> int:
        return self.values.shape[0] - 1

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def entry(self, t: int) -> np.ndarray:
        if abs(t) > self.N:
            raise IndexError(f"frequency index {t} outside -{self.N}..{self.N}")
        return self.values[t] if t >= 0 else np.conj(self.values[-t])


def dft(sample: FunctionalSample) -> DftField:
    """Finite Fourier transform of a centered sample at the Fourier
    frequencies, J_t[i] = (2*pi*T)^{-1/2} * sum_{u=1..T} X_u(s_i) e^{-i u lambda_t}.

    Computed with an FFT over the time axis; the sum starting at u = 1
    contributes the phase factor e^{-i lambda_t} relative to numpy's
    0-based convention.

    Raises
    ------
    InputDataError
        If the sample is not centered (the periodogram at low
        frequencies would be mean-contaminated).
    """
    if not sample.centered:
        raise InputDataError("dft requires a centered sample; call center() first")
    T = sample.n_curves
    N = (T - 1) // 2
    fft = np.fft.fft(sample.values, axis=0)[: N + 1]
    t = np.arange(N + 1)
    phase = np.exp(-2j * np.pi * t / T)
    values = fft * phase[:, None] / np.sqrt(2.0 * np.pi * T)
    return DftField(values=values, grid=sample.grid, T=T)


def periodogram_kernel(field: DftField, t: int) -> np.ndarray:
    """Periodogram kernel at frequency index t: the rank-one matrix
    J_t conj(J_t)^T, equal to the double-sum definition exactly."""
    j = field.entry(t)
    return np.outer(j, np.conj(j))


def _positive_periodograms(field: DftField) -> np.ndarray:
    """Stack of periodogram kernels for t = 0..N, shape (N+1, k, k)."""
    j = field.values
    return j[:, :, None] * np.conj(j[:, None, :])


def _wrap_to_pi(x: np.ndarray) -> np.ndarray:
    """Map angles to the shortest signed representative in (-pi, pi]."""
    return np.pi - np.mod(np.pi - x, 2.0 * np.pi)


@lru_cache(maxsize=32)
def _weight_matrices(T: int, kernel: WeightKernel, bandwidth: float):
    """Precompute the smoothing weights acting on the positive half.

    For targets l = 0..N and sources t = 0..N,

        F_l = sum_t Wpos[l,t] p_t + sum_t Wneg[l,t] conj(p_t)

    reproduces (bT)^{-1} sum_{t=-N..N} W((lambda_l - lambda_t)/b) p_t
    with p_{-t} = conj(p_t). Returned as (Wpos + Wneg, Wpos - Wneg) so
    the real and imaginary parts need one real matmul each.
    """
    N = (T - 1) // 2
    idx = np.arange(N + 1)
    lam = 2.0 * np.pi * idx / T
    dist_pos = _wrap_to_pi(lam[:, None] - lam[None, :])
    dist_neg = _wrap_to_pi(lam[:, None] + lam[None, :])
    scale = 1.0 / (bandwidth * T)
    w_pos = kernel.evaluate(dist_pos / bandwidth) * scale
    w_neg = kernel.evaluate(dist_neg / bandwidth) * scale
    w_neg[:, 0] = 0.0  # t = 0 has no mirror
    return _freeze(w_pos + w_neg), _freeze(w_pos - w_neg)


def smooth(field: DftField, kernel: WeightKernel, bandwidth: float) -> SpectralKernelField:
    """Kernel-smoothed spectral density kernel estimate,

        f_hat(lambda_l) = (bT)^{-1} sum_{t=-N..N} W((lambda_l - lambda_t)/b) p_t,

    evaluated at every Fourier frequency, with the frequency distance
    taken modulo 2*pi. Linear in the periodogram field; preserves
    Hermitian symmetry and the conjugate-reflection relation.
    """
    bandwidth = check_bandwidth(bandwidth)
    T = field.T
    w_sum, w_diff = _weight_matrices(T, kernel, bandwidth)
    p = _positive_periodograms(field)
    n_freq, k = p.shape[0], p.shape[1]
    flat_re = np.ascontiguousarray(p.real).reshape(n_freq, k * k)
    flat_im = np.ascontiguousarray(p.imag).reshape(n_freq, k * k)
    out = np.empty((n_freq, k * k), dtype=complex)
    out.real = w_sum @ flat_re
    out.imag = w_diff @ flat_im
    return SpectralKernelField(values=out.reshape(n_freq, k, k), grid=field.grid,
                               T=T, bandwidth=bandwidth)


def pooled(fx: SpectralKernelField, fy: SpectralKernelField) -> SpectralKernelField:
    """Pooled estimator (f_hat_X + f_hat_Y) / 2, frequency by frequency."""
    fx._require_compatible(fy)
    return SpectralKernelField(values=(fx.values + fy.values) / 2.0,
                               grid=fx.grid, T=fx.T, bandwidth=fx.bandwidth)
