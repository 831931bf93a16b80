"""Simulation designs: functional MA processes driven by Brownian-bridge
innovations, their closed-form spectral kernels, and a Monte Carlo
harness for size/power experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ._exceptions import ExperimentAbort, InputDataError, NumericFailure
from .model import FunctionalSample, _freeze
from .pipeline import analyze

__all__ = [
    "MaProcessSpec",
    "ExperimentPlan",
    "ExperimentResult",
    "sample_brownian_bridge",
    "brownian_bridge_covariance",
    "generate_ma",
    "true_spectral_kernel",
    "run_experiment",
]

DEFAULT_GRID_SIZE = 21
MAX_FAILURE_RATE = 0.02


@dataclass(frozen=True)
class MaProcessSpec:
    """Functional MA(q) process X_t = e_t + a_1 e_{t-1} + ... + a_q e_{t-q}
    with i.i.d. Brownian-bridge innovations, observed on an equidistant
    grid of k points in [0, 1] (endpoints included)."""

    coefficients: tuple = ()
    T: int = 100
    k: int = DEFAULT_GRID_SIZE
    innovation: str = "brownian-bridge"
    burn_in: int | None = None

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if self.innovation != "brownian-bridge":
            raise InputDataError(f"unknown innovation process {self.innovation!r}")
        q = len(coeffs)
        if self.T <= 2 * q:
            raise InputDataError(f"need T > 2q = {2 * q}, got T={self.T}")
        if self.k < 1:
            raise InputDataError("grid needs at least 1 point")
        burn_in = q if self.burn_in is None else int(self.burn_in)
        if burn_in < q:
            raise InputDataError(f"burn_in must be >= q = {q}")
        object.__setattr__(self, "burn_in", burn_in)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def grid(self) -> np.ndarray:
        return np.array([0.5]) if self.k == 1 else np.linspace(0.0, 1.0, self.k)


def brownian_bridge_covariance(grid) -> np.ndarray:
    """C(s, t) = min(s, t) - s*t on the grid."""
    s = np.asarray(grid, dtype=float)
    return np.minimum(s[:, None], s[None, :]) - s[:, None] * s[None, :]


@lru_cache(maxsize=64)
def _bridge_factor(grid_key: tuple) -> np.ndarray:
    """Factor L with L L^T = C restricted to interior points, embedded as
    a (k, n_interior) matrix with zero rows at pinned endpoints.

    Interior factorization uses a Cholesky of C + 1e-12 I for numerical
    safety; endpoint coordinates stay exactly zero.
    """
    grid = np.array(grid_key)
    cov = brownian_bridge_covariance(grid)
    interior = (grid > 0.0) & (grid < 1.0)
    sub = cov[np.ix_(interior, interior)]
    chol = np.linalg.cholesky(sub + 1e-12 * np.eye(sub.shape[0]))
    factor = np.zeros((grid.size, sub.shape[0]))
    factor[interior] = chol
    return _freeze(factor)


def sample_brownian_bridge(grid, rng: np.random.Generator) -> np.ndarray:
    """One mean-zero Gaussian vector with the Brownian-bridge covariance
    on the grid; coordinates at s = 0 or s = 1 are exactly zero."""
    factor = _bridge_factor(tuple(np.asarray(grid, dtype=float)))
    z = rng.standard_normal(factor.shape[1])
    return factor @ z


def generate_ma(spec: MaProcessSpec, rng: np.random.Generator) -> FunctionalSample:
    """Draw a functional MA sample of length T (uncentered; the analysis
    pipeline centers it). Deterministic given the generator state."""
    grid = spec.grid
    factor = _bridge_factor(tuple(grid))
    n = spec.T + spec.burn_in
    innov = rng.standard_normal((n, factor.shape[1])) @ factor.T
    start = spec.burn_in  # index of e_1
    values = innov[start : start + spec.T].copy()
    for j, a in enumerate(spec.coefficients, start=1):
        values += a * innov[start - j : start - j + spec.T]
    return FunctionalSample(values=values, grid=grid, centered=False)


def true_spectral_kernel(spec: MaProcessSpec, lam: float) -> np.ndarray:
    """Closed-form spectral density kernel of the MA process at
    frequency lam, restricted to the grid:

        (2*pi)^{-1} |1 + sum_j a_j e^{-i j lam}|^2 * C(s_i, s_j),

    with C the Brownian-bridge covariance. Real symmetric PSD."""
    if not (-np.pi < lam <= np.pi):
        raise InputDataError(f"frequency {lam} outside (-pi, pi]")
    transfer = 1.0 + sum(
        a * np.exp(-1j * j * lam) for j, a in enumerate(spec.coefficients, start=1)
    )
    return (abs(transfer) ** 2 / (2.0 * np.pi)) * brownian_bridge_covariance(
        spec.grid
    ).astype(complex)


@dataclass(frozen=True)
class ExperimentPlan:
    """One Monte Carlo experiment: R paired draws from spec_x/spec_y,
    full test pipeline per draw, rejection bookkeeping per level."""

    spec_x: MaProcessSpec
    spec_y: MaProcessSpec
    bandwidth: object = 0.2  # float or "cv"
    kernel: str = "epanechnikov-pi"
    B: int = 1000
    R: int = 500
    alphas: tuple = (0.01, 0.05, 0.10)
    master_seed: int = 0
    cv_grid: tuple | None = None
    statistic: str = "t_star"

    def __post_init__(self):
        if self.spec_x.T != self.spec_y.T or self.spec_x.k != self.spec_y.k:
            raise InputDataError("spec_x and spec_y must share T and k")
        if self.R < 1:
            raise InputDataError("need R >= 1 repetitions")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))


@dataclass(frozen=True)
class ExperimentResult:
    """Empirical rejection rates with binomial standard errors, plus the
    per-repetition statistic and p-value traces (NaN where a repetition
    failed)."""

    plan: ExperimentPlan
    rejection_rates: dict
    standard_errors: dict
    t_stats: np.ndarray
    p_values: np.ndarray
    n_failures: int

    def __post_init__(self):
        object.__setattr__(self, "t_stats", _freeze(np.asarray(self.t_stats, dtype=float)))
        object.__setattr__(self, "p_values", _freeze(np.asarray(self.p_values, dtype=float)))

    @property
    def n_success(self) -> int:
        return self.plan.R - self.n_failures


def _repetition_seeds(master_seed: int, r: int):
    """Independent streams for the X draw, the Y draw and the bootstrap
    of repetition r, all derived from the master seed."""
    rng_x = np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(1, r, 0)))
    rng_y = np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(1, r, 1)))
    boot_state = np.random.SeedSequence(
        entropy=master_seed, spawn_key=(1, r, 2)).generate_state(2)
    boot_seed = int(boot_state[0]) << 32 | int(boot_state[1])
    return rng_x, rng_y, boot_seed


def run_experiment(plan: ExperimentPlan) -> ExperimentResult:
    """Run the full Monte Carlo experiment; deterministic given
    ``plan.master_seed``.

    A repetition whose pipeline raises a numeric failure is recorded as
    a failure; more than 2% failures aborts the experiment.
    """
    R = plan.R
    t_stats = np.full(R, np.nan)
    p_values = np.full(R, np.nan)
    rejections = {a: np.zeros(R, dtype=bool) for a in plan.alphas}
    ok = np.zeros(R, dtype=bool)
    n_failures = 0
    for r in range(R):
        rng_x, rng_y, boot_seed = _repetition_seeds(plan.master_seed, r)
        x = generate_ma(plan.spec_x, rng_x)
        y = generate_ma(plan.spec_y, rng_y)
        try:
            res = analyze(x, y, bandwidth=plan.bandwidth, kernel=plan.kernel,
                          cv_grid=plan.cv_grid, n_bootstrap=plan.B,
                          seed=boot_seed, alphas=plan.alphas,
                          statistic=plan.statistic)
        except NumericFailure:
            n_failures += 1
            if n_failures > MAX_FAILURE_RATE * R:
                raise ExperimentAbort(
                    f"{n_failures} failed repetitions out of {r + 1} exceeds "
                    f"the {MAX_FAILURE_RATE:.0%} budget"
                )
            continue
        ok[r] = True
        t_stats[r] = res.studentized.t_stat
        p_values[r] = res.bootstrap.p_value
        for a in plan.alphas:
            rejections[a][r] = res.decisions[a]

    n_success = int(ok.sum())
    rates, ses = {}, {}
    for a in plan.alphas:
        if n_success == 0:
            rates[a], ses[a] = float("nan"), float("nan")
            continue
        p_hat = float(rejections[a][ok].mean())
        rates[a] = p_hat
        ses[a] = (np.sqrt(p_hat * (1.0 - p_hat) / n_success)
                  if n_success >= 2 else float("nan"))
    return ExperimentResult(plan=plan, rejection_rates=rates, standard_errors=ses,
                            t_stats=t_stats, p_values=p_values,
                            n_failures=n_failures)


def table_sweep_plans(a1: float, a2_values, base: ExperimentPlan):
    """Plans for the paired design X = MA(a1, a2) vs Y = MA(a1), one per
    a2 value (a2 = 0 is the null)."""
    plans = []
    for a2 in a2_values:
        coeffs_x = (a1,) if a2 == 0.0 else (a1, float(a2))
        spec_x = replace(base.spec_x, coefficients=coeffs_x)
        spec_y = replace(base.spec_y, coefficients=(a1,))
        plans.append(replace(base, spec_x=spec_x, spec_y=spec_y))
    return plans
