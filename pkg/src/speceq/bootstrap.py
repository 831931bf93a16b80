"""Frequency-domain bootstrap for the spectral equality statistic.

Per replicate, independent circularly-symmetric complex Gaussian
pseudo-DFTs are drawn at every positive Fourier frequency with
covariance given by the pooled spectral estimate, negative frequencies
follow by conjugation, and the full statistic pipeline (rank-one
periodograms, smoothing with the same kernel and bandwidth, pooled
constants, studentization) is re-run through the very same code path
as the data statistic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._exceptions import BootstrapAbort, DegenerateSpectrumError, InputDataError
from ._validation import check_bandwidth
from .model import SpectralKernelField, WeightKernel, _freeze
from .spectral import DftField, pooled, smooth
from .statistic import hs_distance_integral, mu0_hat, theta0_hat

__all__ = [
    "PsdFactor",
    "BootstrapOutcome",
    "psd_factorize",
    "sample_pseudo_dfts",
    "bootstrap_replicate",
    "run_bootstrap",
]

FACTOR_HERMITIAN_TOL = 1e-8
MAX_REDRAW_ATTEMPTS = 8
MAX_REDRAW_RATE = 0.01


@dataclass(frozen=True)
class PsdFactor:
    """Square roots A_t of the PSD-projected pooled covariance matrices
    at the positive Fourier frequencies t = 1..N, with A_t conj(A_t)^T
    reproducing the projection; negative eigenvalue mass removed by
    clipping is recorded in ``clipped_mass``."""

    factors: np.ndarray  # (N, k, k) complex, index t-1 for t = 1..N
    clipped_mass: float
    grid: np.ndarray
    T: int

    def __post_init__(self):
        object.__setattr__(self, "factors", _freeze(np.asarray(self.factors, dtype=complex)))
        object.__setattr__(self, "grid", _freeze(np.asarray(self.grid, dtype=float)))

    @property
    def N(self) -> int:
        return self.factors.shape[0]

    @property
    def k(self) -> int:
        return self.factors.shape[1]


def psd_factorize(pooled_field: SpectralKernelField) -> PsdFactor:
    """Hermitian eigendecomposition of the pooled kernel matrix at each
    positive frequency, eigenvalues clipped at zero, factor
    A = U diag(sqrt(clipped eigenvalues)).

    A smoothed estimate built from a nonnegative kernel is PSD up to
    roundoff, so clipping normally removes only noise-level mass.
    """
    v = pooled_field.values[1:]
    herm_gap = np.max(np.abs(v - np.conj(np.swapaxes(v, 1, 2)))) if v.size else 0.0
    scale = 1.0 + (np.max(np.abs(v)) if v.size else 0.0)
    if herm_gap > FACTOR_HERMITIAN_TOL * scale:
        raise InputDataError(
            f"pooled field is not Hermitian (max deviation {herm_gap:.3e})"
        )
    eigvals, eigvecs = np.linalg.eigh((v + np.conj(np.swapaxes(v, 1, 2))) / 2.0)
    clipped_mass = float(np.sum(np.abs(np.minimum(eigvals, 0.0))))
    factors = eigvecs * np.sqrt(np.maximum(eigvals, 0.0))[:, None, :]
    return PsdFactor(factors=factors, clipped_mass=clipped_mass,
                     grid=pooled_field.grid, T=pooled_field.T)


def sample_pseudo_dfts(factor: PsdFactor, rng: np.random.Generator) -> tuple[DftField, DftField]:
    """Draw two independent pseudo-DFT fields (one per group).

    At each t = 1..N, J*_t = A_t (Z1 + i Z2)/sqrt(2) with independent
    standard normal vectors, giving E[J* conj(J*)^T] equal to the
    PSD-projected pooled matrix and E[J* J*^T] = 0. The zero-frequency
    entry is 0 (data are centered) and negative frequencies follow by
    conjugation inside :class:`DftField`.
    """
    N, k = factor.N, factor.k
    z = rng.standard_normal((2, N, k, 2))
    zc = (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)
    j = np.einsum("tij,gtj->gti", factor.factors, zc)
    fields = []
    for g in range(2):
        values = np.zeros((N + 1, k), dtype=complex)
        values[1:] = j[g]
        fields.append(DftField(values=values, grid=factor.grid, T=factor.T))
    return fields[0], fields[1]


def bootstrap_replicate(factor: PsdFactor, kernel: WeightKernel, bandwidth: float,
                        rng: np.random.Generator, *,
                        mu0_data: float, theta0_data: float) -> tuple[float, float]:
    """One bootstrap replicate: returns the studentized pair (t_star, t_plus).

    t_star studentizes with constants recomputed from the bootstrap
    pooled field; t_plus reuses the data-side constants.

    Raises
    ------
    DegenerateSpectrumError
        If the bootstrap pooled field is identically zero, so the
        replicate must be rejected and redrawn by the caller.
    """
    bandwidth = check_bandwidth(bandwidth)
    jx, jy = sample_pseudo_dfts(factor, rng)
    fx = smooth(jx, kernel, bandwidth)
    fy = smooth(jy, kernel, bandwidth)
    u_star = hs_distance_integral(fx, fy)
    pool = pooled(fx, fy)
    mu0_star = mu0_hat(pool, kernel)
    theta0_star = theta0_hat(pool, kernel)  # raises when degenerate
    T = factor.T
    sqb = np.sqrt(bandwidth)
    t_star = (sqb * T * u_star - mu0_star / sqb) / theta0_star
    t_plus = (sqb * T * u_star - mu0_data / sqb) / theta0_data
    return float(t_star), float(t_plus)


@dataclass(frozen=True)
class BootstrapOutcome:
    """Replicate distributions, p-value and upper critical values."""

    t_star: np.ndarray
    t_plus: np.ndarray
    p_value: float
    critical_values: dict
    master_seed: int
    B: int
    statistic: str
    n_redrawn: int
    clipped_mass: float

    def __post_init__(self):
        object.__setattr__(self, "t_star", _freeze(np.asarray(self.t_star, dtype=float)))
        object.__setattr__(self, "t_plus", _freeze(np.asarray(self.t_plus, dtype=float)))
        if not (0.0 < self.p_value <= 1.0):
            raise InputDataError(f"p-value {self.p_value} outside (0, 1]")
        alphas = sorted(self.critical_values)
        cvs = [self.critical_values[a] for a in alphas]
        if any(cvs[i] < cvs[i + 1] for i in range(len(cvs) - 1)):
            raise InputDataError("critical values must be nonincreasing in alpha")


def _replicate_rng(master_seed: int, index: int, attempt: int) -> np.random.Generator:
    # Deterministic per-(replicate, attempt) stream; independent of
    # execution order.
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(index, attempt))
    return np.random.default_rng(ss)


def _upper_critical_values(replicates: np.ndarray, alphas, B: int) -> dict:
    ordered = np.sort(replicates)[::-1]
    out = {}
    for alpha in alphas:
        m = int(np.floor(alpha * (B + 1)))
        if m < 1:
            raise InputDataError(
                f"B={B} too small for alpha={alpha}: no upper quantile defined"
            )
        out[float(alpha)] = float(ordered[m - 1])
    return out


def run_bootstrap(fx: SpectralKernelField, fy: SpectralKernelField,
                  kernel: WeightKernel, bandwidth: float, B: int,
                  master_seed: int, t_observed: float,
                  alphas=(0.01, 0.05, 0.10), statistic: str = "t_star") -> BootstrapOutcome:
    """Run B bootstrap replicates and summarize them.

    Per-replicate RNG streams are derived from ``master_seed`` by a
    splittable counter scheme, so every output bit is determined by
    (master_seed, B, inputs) regardless of execution order. The p-value
    follows the (1 + #{t*_b >= t_obs}) / (B + 1) convention, and the
    critical value at level alpha is the floor(alpha*(B+1))-th largest
    replicate.

    Replicates with a degenerate pooled field are redrawn from fresh
    derived streams and counted; more than 1% rejected draws aborts.
    """
    if B < 99:
        raise InputDataError(f"need B >= 99 bootstrap replicates, got {B}")
    if not np.isfinite(t_observed):
        raise InputDataError("observed statistic must be finite")
    if statistic not in ("t_star", "t_plus"):
        raise InputDataError(f"unknown statistic {statistic!r}")
    alphas = tuple(float(a) for a in alphas)
    if any(not (0.0 < a <= 0.5) for a in alphas):
        raise InputDataError("alpha levels must lie in (0, 0.5]")
    bandwidth = check_bandwidth(bandwidth)

    pool = pooled(fx, fy)
    mu0_data = mu0_hat(pool, kernel)
    theta0_data = theta0_hat(pool, kernel)
    factor = psd_factorize(pool)

    t_star = np.empty(B)
    t_plus = np.empty(B)
    n_redrawn = 0
    for i in range(B):
        for attempt in range(MAX_REDRAW_ATTEMPTS):
            rng = _replicate_rng(master_seed, i, attempt)
            try:
                t_star[i], t_plus[i] = bootstrap_replicate(
                    factor, kernel, bandwidth, rng,
                    mu0_data=mu0_data, theta0_data=theta0_data)
                break
            except DegenerateSpectrumError:
                n_redrawn += 1
        else:
            raise BootstrapAbort(
                f"replicate {i} degenerate after {MAX_REDRAW_ATTEMPTS} attempts "
                f"(clipped_mass={factor.clipped_mass:.3e}); "
                "the pooled spectral estimate is effectively zero"
            )
        if n_redrawn > MAX_REDRAW_RATE * B:
            raise BootstrapAbort(
                f"{n_redrawn} degenerate bootstrap draws out of {i + 1} replicates "
                f"exceeds the {MAX_REDRAW_RATE:.0%} budget "
                f"(clipped_mass={factor.clipped_mass:.3e})"
            )

    chosen = t_star if statistic == "t_star" else t_plus
    p_value = (1.0 + np.count_nonzero(chosen >= t_observed)) / (B + 1.0)
    critical_values = _upper_critical_values(chosen, alphas, B)
    return BootstrapOutcome(t_star=t_star, t_plus=t_plus, p_value=float(p_value),
                            critical_values=critical_values,
                            master_seed=int(master_seed), B=int(B),
                            statistic=statistic, n_redrawn=n_redrawn,
                            clipped_mass=factor.clipped_mass)
