"""The squared-Hilbert-Schmidt distance statistic, its studentization
constants, and the per-frequency diagnostic decomposition.

All frequency integrals are Riemann sums (step 2*pi/T) over the Fourier
frequencies with the zero frequency excluded, which is exactly the
discretization the bootstrap statistic uses; [0,1]^2 integrals are grid
averages (1/k^2 double sums). Negative frequencies contribute through
the conjugate-reflection symmetry, so sums run over l = 1..N with
weight 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._exceptions import DegenerateSpectrumError, InputDataError
from ._validation import check_bandwidth, real_part
from .model import SpectralKernelField, WeightKernel, _freeze
from .spectral import pooled

__all__ = [
    "StudentizedResult",
    "hs_distance_integral",
    "mu0_hat",
    "theta0_hat",
    "studentize",
    "q_decomposition",
]

IMAG_TOL = 1e-8


def _sq_norms_positive(fx: SpectralKernelField, fy: SpectralKernelField) -> np.ndarray:
    """Grid-averaged squared HS norms of the difference, per frequency
    j = 0..N: (1/k^2) sum_{i,i'} |F_X,j - F_Y,j|^2."""
    fx._require_compatible(fy)
    diff = fx.values - fy.values
    k = fx.k
    return (diff.real**2 + diff.imag**2).sum(axis=(1, 2)) / (k * k)


def hs_distance_integral(fx: SpectralKernelField, fy: SpectralKernelField) -> float:
    """Riemann approximation of the integrated squared HS distance,

        (2*pi/T) * sum_{l=-N..N, l!=0} (1/k^2) sum_{i,j} |F_X,l - F_Y,l|^2.

    Nonnegative by construction."""
    sq = _sq_norms_positive(fx, fy)
    return float((2.0 * np.pi / fx.T) * 2.0 * sq[1:].sum())


def mu0_hat(pooled_field: SpectralKernelField, kernel: WeightKernel) -> float:
    """Plug-in centering constant: (1/pi) * integral of the squared
    trace of the pooled kernel, times the kernel's kappa2."""
    k = pooled_field.k
    traces = np.trace(pooled_field.values, axis1=1, axis2=2)
    traces = real_part(traces, IMAG_TOL, "mu0 trace") / k
    lam_integral = (2.0 * np.pi / pooled_field.T) * 2.0 * np.sum(traces[1:] ** 2)
    return float(lam_integral * kernel.kappa2 / np.pi)


def theta0_hat(pooled_field: SpectralKernelField, kernel: WeightKernel) -> float:
    """Plug-in scale constant (returned as theta, not theta^2):

        theta^2 = (2/pi^2) * conv_sq_integral
                  * (2*pi/T) sum_{l!=0} S_l^2,
        S_l     = Re (1/k^2) sum_{i,j} F_l(i,j)^2.

    The complex square (not |F|^2) follows the formula; its grid double
    sum is real under Hermitian symmetry, which is asserted.

    Raises
    ------
    DegenerateSpectrumError
        If the field is identically zero (studentization undefined).
    """
    v = pooled_field.values
    k = pooled_field.k
    s_complex = (v * v).sum(axis=(1, 2)) / (k * k)
    s = real_part(s_complex, IMAG_TOL, "theta0 kernel square")
    lam_integral = (2.0 * np.pi / pooled_field.T) * 2.0 * np.sum(s[1:] ** 2)
    theta_sq = 2.0 / np.pi**2 * kernel.conv_sq_integral * lam_integral
    if theta_sq <= 0.0:
        raise DegenerateSpectrumError(
            "degenerate spectral estimate: theta0 is zero, studentization undefined"
        )
    return float(np.sqrt(theta_sq))


def q_decomposition(fx: SpectralKernelField, fy: SpectralKernelField,
                    theta0: float, bandwidth: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-frequency contributions Q_j = 2*pi*sqrt(b) * ||F_X,j - F_Y,j||^2 / theta0
    for j = 0..N (grid-averaged HS norm).

    Counting each j >= 1 twice (the +-j pairs) and skipping j = 0
    recovers sqrt(b)*T*U / theta0 exactly.

    Returns
    -------
    (lambdas, q) : pair of ndarrays of length N+1
    """
    if theta0 <= 0.0:
        raise DegenerateSpectrumError("q_decomposition requires theta0 > 0")
    bandwidth = check_bandwidth(bandwidth)
    sq = _sq_norms_positive(fx, fy)
    lam = 2.0 * np.pi * np.arange(fx.N + 1) / fx.T
    return lam, 2.0 * np.pi * np.sqrt(bandwidth) * sq / theta0


@dataclass(frozen=True)
class StudentizedResult:
    """Everything the studentized test produces for one pair of fields."""

    u_stat: float
    mu0_hat: float
    theta0_hat: float
    t_stat: float
    bandwidth: float
    frequencies: np.ndarray  # lambda_j, j = 0..N
    per_frequency_q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "frequencies",
                           _freeze(np.asarray(self.frequencies, dtype=float)))
        object.__setattr__(self, "per_frequency_q",
                           _freeze(np.asarray(self.per_frequency_q, dtype=float)))


def studentize(fx: SpectralKernelField, fy: SpectralKernelField,
               kernel: WeightKernel, bandwidth: float) -> StudentizedResult:
    """Compose the statistic, the plug-in constants from the pooled
    estimator, the studentized value

        t = (sqrt(b) * T * U - b^{-1/2} * mu0) / theta0,

    and the per-frequency diagnostics."""
    bandwidth = check_bandwidth(bandwidth)
    if fx.bandwidth != bandwidth:
        raise InputDataError(
            f"fields were smoothed with bandwidth {fx.bandwidth}, got {bandwidth}"
        )
    u = hs_distance_integral(fx, fy)
    pool = pooled(fx, fy)
    mu0 = mu0_hat(pool, kernel)
    theta0 = theta0_hat(pool, kernel)
    t = (np.sqrt(bandwidth) * fx.T * u - mu0 / np.sqrt(bandwidth)) / theta0
    lam, q = q_decomposition(fx, fy, theta0, bandwidth)
    return StudentizedResult(u_stat=u, mu0_hat=mu0, theta0_hat=theta0,
                             t_stat=float(t), bandwidth=bandwidth,
                             frequencies=lam, per_frequency_q=q)
