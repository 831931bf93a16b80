"""End-to-end orchestration of the two-sample spectral test:
center -> DFT -> (bandwidth CV) -> smooth -> studentize -> bootstrap.

Every front end (estimator, CLI, simulation harness) calls
:func:`analyze`, so the decision logic lives in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._exceptions import InputDataError
from ._validation import check_equidistant_grid
from .bandwidth import DEFAULT_CV_GRID, CvCurve, select_bandwidth
from .bootstrap import BootstrapOutcome, run_bootstrap
from .model import FunctionalSample, center, make_weight_kernel
from .spectral import dft, smooth
from .statistic import StudentizedResult, studentize

__all__ = ["AnalysisResult", "analyze"]

MIN_CURVES = 4


@dataclass(frozen=True)
class AnalysisResult:
    """Bundle of everything one test run produces."""

    studentized: StudentizedResult
    bootstrap: BootstrapOutcome
    cv_curve: CvCurve | None
    bandwidth: float
    kernel: str
    statistic: str
    T: int
    k: int

    @property
    def decisions(self) -> dict:
        """Reject-at-level map: alpha -> (t_stat >= critical value)."""
        t = self.studentized.t_stat
        return {a: bool(t >= cv) for a, cv in self.bootstrap.critical_values.items()}

    @property
    def p_value(self) -> float:
        return self.bootstrap.p_value


def analyze(x: FunctionalSample, y: FunctionalSample, *, bandwidth="cv",
            kernel: str = "epanechnikov-pi", cv_grid=None, n_bootstrap: int = 1000,
            seed: int = 0, alphas=(0.01, 0.05, 0.10),
            statistic: str = "t_star") -> AnalysisResult:
    """Run the full test on two functional samples.

    Both samples must share T, k and the grid; each group is centered
    independently before analysis. ``bandwidth`` is either a number in
    (0, 1) or ``"cv"`` for cross-validated selection over ``cv_grid``.
    """
    if x.n_curves != y.n_curves:
        raise InputDataError(
            f"samples have different lengths: T={x.n_curves} vs {y.n_curves}")
    if x.n_points != y.n_points or not np.array_equal(x.grid, y.grid):
        raise InputDataError("samples must share the same evaluation grid")
    if x.n_curves < MIN_CURVES:
        raise InputDataError(f"need at least {MIN_CURVES} curves per group")
    check_equidistant_grid(x.grid)

    w = make_weight_kernel(kernel)
    dx = dft(center(x))
    dy = dft(center(y))

    cv_curve = None
    if isinstance(bandwidth, str):
        if bandwidth != "cv":
            raise InputDataError(f"bandwidth must be a number or 'cv', got {bandwidth!r}")
        cv_curve = select_bandwidth(dx, dy, w, cv_grid if cv_grid is not None
                                    else DEFAULT_CV_GRID)
        b = cv_curve.selected
    else:
        b = float(bandwidth)

    fx = smooth(dx, w, b)
    fy = smooth(dy, w, b)
    stud = studentize(fx, fy, w, b)
    boot = run_bootstrap(fx, fy, w, b, n_bootstrap, seed, stud.t_stat,
                         alphas=alphas, statistic=statistic)
    return AnalysisResult(studentized=stud, bootstrap=boot, cv_curve=cv_curve,
                          bandwidth=b, kernel=kernel, statistic=statistic,
                          T=x.n_curves, k=x.n_points)
