"""Core data model: grid-sampled functional samples, Fourier frequency
grids, smoothing weight kernels and spectral density kernel fields.

All types are immutable after construction and safe to share across
threads; the operations on them are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from ._exceptions import InputDataError
from ._validation import check_curve_matrix, check_grid

__all__ = [
    "FunctionalSample",
    "FrequencyGrid",
    "WeightKernel",
    "SpectralKernelField",
    "center",
    "make_weight_kernel",
    "WEIGHT_KERNEL_NAMES",
]

CENTERED_TOL = 1e-10


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FunctionalSample:
    """A sample of T curves observed on a common grid of k points in [0, 1].

    Parameters
    ----------
    values : ndarray of shape (T, k)
        Row t holds the t-th curve evaluated at the grid points.
    grid : ndarray of shape (k,)
        Strictly increasing evaluation points in [0, 1].
    centered : bool
        Declares that every column of ``values`` has mean zero; verified
        at construction (tolerance 1e-10).
    """

    values: np.ndarray
    grid: np.ndarray
    centered: bool = False

    def __post_init__(self):
        values = check_curve_matrix(self.values, min_rows=2, min_cols=1)
        grid = check_grid(self.grid, values.shape[1])
        if self.centered:
            col_means = values.mean(axis=0)
            if np.max(np.abs(col_means)) > CENTERED_TOL:
                raise InputDataError(
                    "sample marked centered but column means reach "
                    f"{np.max(np.abs(col_means)):.3e}"
                )
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "grid", _freeze(grid))

    @property
    def n_curves(self) -> int:
        return self.values.shape[0]

    @property
    def n_points(self) -> int:
        return self.values.shape[1]

    @classmethod
    def from_values(cls, values, grid=None, centered: bool = False) -> "FunctionalSample":
        """Build a sample, defaulting to an equidistant grid on [0, 1]
        (endpoints included) when ``grid`` is omitted."""
        values = check_curve_matrix(values, min_rows=2, min_cols=1)
        if grid is None:
            k = values.shape[1]
            grid = np.array([0.5]) if k == 1 else np.linspace(0.0, 1.0, k)
        return cls(values=values, grid=grid, centered=centered)


def center(sample: FunctionalSample) -> FunctionalSample:
    """Subtract the column means so every grid point has mean zero.

    Idempotent and linear; the input sample is left unmodified.
    """
    values = sample.values - sample.values.mean(axis=0, keepdims=True)
    return FunctionalSample(values=values, grid=sample.grid, centered=True)


@dataclass(frozen=True)
class FrequencyGrid:
    """The Fourier frequencies lambda_t = 2*pi*t/T for t = -N..N with
    N = floor((T-1)/2).

    For even T the Nyquist frequency pi is deliberately absent; every
    downstream sum runs over this symmetric index set.
    """

    T: int
    N: int = field(init=False)
    frequencies: np.ndarray = field(init=False)

    def __post_init__(self):
        T = int(self.T)
        if T < 2:
            raise InputDataError(f"series length must be >= 2, got {T}")
        N = (T - 1) // 2
        t = np.arange(-N, N + 1)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "frequencies", _freeze(2.0 * np.pi * t / T))

    def frequency(self, t: int) -> float:
        if abs(t) > self.N:
            raise IndexError(f"frequency index {t} outside -{self.N}..{self.N}")
        return 2.0 * np.pi * t / self.T

    @property
    def positive_frequencies(self) -> np.ndarray:
        """lambda_j for j = 0..N."""
        return self.frequencies[self.N :]


@dataclass(frozen=True)
class WeightKernel:
    """Symmetric nonnegative smoothing kernel W with support (-pi, pi]
    and total mass 2*pi, plus the derived constants entering the
    studentization:

    * ``kappa2``            -- integral of W(u)^2 du
    * ``conv_sq_integral``  -- integral over [-2pi, 2pi] of the squared
      self-convolution { integral W(u) W(u-x) du }^2 dx
    """

    name: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    kappa2: float
    conv_sq_integral: float
    support_radius: float = np.pi

    MASS_TOL = 1e-8

    def __post_init__(self):
        x = np.linspace(-self.support_radius, self.support_radius, 1001)
        wx = self.evaluate(x)
        if np.any(wx < -1e-12):
            raise InputDataError(f"kernel {self.name!r} takes negative values")
        if np.max(np.abs(wx - self.evaluate(-x))) > 1e-12:
            raise InputDataError(f"kernel {self.name!r} is not symmetric")
        outside = self.evaluate(np.array([1.5 * np.pi, -2.1 * np.pi, 4.0]))
        if np.any(outside != 0.0):
            raise InputDataError(f"kernel {self.name!r} has mass outside (-pi, pi]")
        mass, _ = integrate.quad(lambda u: float(self.evaluate(np.array([u]))[0]),
                                 -np.pi, np.pi, limit=200)
        if abs(mass - 2.0 * np.pi) > self.MASS_TOL:
            raise InputDataError(
                f"kernel {self.name!r} integrates to {mass:.10f}, expected 2*pi"
            )


def _epanechnikov_pi(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return 1.5 * np.clip(1.0 - (x / np.pi) ** 2, 0.0, None) * (np.abs(x) <= np.pi)


def _uniform_pi(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return 1.0 * (np.abs(x) <= np.pi)


_KERNEL_SHAPES = {
    # Default: satisfies every smoothing-kernel condition of the theory
    # (bounded, symmetric, positive, Lipschitz, compact support, mass 2*pi).
    "epanechnikov-pi": _epanechnikov_pi,
    # Constant kernel; fails Lipschitz continuity at +-pi, provided for
    # testing and comparisons only.
    "uniform-pi": _uniform_pi,
}

WEIGHT_KERNEL_NAMES = tuple(_KERNEL_SHAPES)

_KERNEL_CACHE: dict[str, WeightKernel] = {}


def make_weight_kernel(name: str) -> WeightKernel:
    """Construct a named weight kernel with its constants precomputed by
    adaptive quadrature.

    Raises
    ------
    InputDataError
        If ``name`` is not one of ``WEIGHT_KERNEL_NAMES``.
    """
    if name not in _KERNEL_SHAPES:
        raise InputDataError(
            f"unknown weight kernel {name!r}; available: {', '.join(WEIGHT_KERNEL_NAMES)}"
        )
    if name in _KERNEL_CACHE:
        return _KERNEL_CACHE[name]
    shape = _KERNEL_SHAPES[name]

    def w(u):
        return float(shape(np.array([u]))[0])

    kappa2, _ = integrate.quad(lambda u: w(u) ** 2, -np.pi, np.pi, limit=200)

    def conv(x):
        lo, hi = max(-np.pi, x - np.pi), min(np.pi, x + np.pi)
        if lo >= hi:
            return 0.0
        val, _ = integrate.quad(lambda u: w(u) * w(u - x), lo, hi, limit=200)
        return val

    conv_sq, _ = integrate.quad(lambda x: conv(x) ** 2, -2.0 * np.pi, 2.0 * np.pi,
                                limit=400)
    kernel = WeightKernel(name=name, evaluate=shape, kappa2=kappa2,
                          conv_sq_integral=conv_sq)
    _KERNEL_CACHE[name] = kernel
    return kernel


HERMITIAN_TOL = 1e-10
DIAGONAL_TOL = 1e-10


@dataclass(frozen=True)
class SpectralKernelField:
    """Spectral density kernel estimates on the grid, one k x k complex
    matrix per Fourier frequency.

    Only the half t = 0..N is stored; entries at negative indices are
    the elementwise conjugates (exact by construction), so the reality
    relation F_{-t} = conj(F_t) holds to the last bit.
    """

    values: np.ndarray  # (N+1, k, k) complex, index t = 0..N
    grid: np.ndarray
    T: int
    bandwidth: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise InputDataError(
                f"field values must have shape (N+1, k, k), got {values.shape}"
            )
        N = (int(self.T) - 1) // 2
        if values.shape[0] != N + 1:
            raise InputDataError(
                f"field has {values.shape[0]} frequencies, expected N+1={N + 1} for T={self.T}"
            )
        grid = check_grid(self.grid, values.shape[1])
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "grid", _freeze(grid))

    @property
    def N(self) -> int:
        return self.values.shape[0] - 1

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def entry(self, t: int) -> np.ndarray:
        """Kernel matrix at frequency index t in -N..N."""
        if abs(t) > self.N:
            raise IndexError(f"frequency index {t} outside -{self.N}..{self.N}")
        return self.values[t] if t >= 0 else np.conj(self.values[-t])

    def validate(self) -> None:
        """Check the Hermitian/diagonal invariants; raises on violation."""
        v = self.values
        herm_gap = np.max(np.abs(v - np.conj(np.swapaxes(v, 1, 2))))
        if herm_gap > HERMITIAN_TOL:
            raise InputDataError(f"field not Hermitian: max deviation {herm_gap:.3e}")
        diags = np.diagonal(v, axis1=1, axis2=2)
        if np.max(np.abs(diags.imag)) > HERMITIAN_TOL:
            raise InputDataError("field diagonals are not real")
        if np.min(diags.real) < -DIAGONAL_TOL:
            raise InputDataError(
                f"field diagonal dips to {np.min(diags.real):.3e} < -{DIAGONAL_TOL}"
            )

    def _require_compatible(self, other: "SpectralKernelField") -> None:
        if self.values.shape != other.values.shape or self.T != other.T:
            raise InputDataError("spectral kernel fields have mismatched shapes")
        if not np.array_equal(self.grid, other.grid):
            raise InputDataError("spectral kernel fields live on different grids")
        if self.bandwidth != other.bandwidth:
            raise InputDataError(
                f"bandwidth mismatch: {self.bandwidth} vs {other.bandwidth}"
            )
