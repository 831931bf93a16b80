"""Machine-readable test report and diagnostic CSV writers.

The JSON report uses snake_case field names, carries a schema_version,
and is written in a canonical form (sorted keys, fixed separators, no
timestamps) so identical inputs and seed produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ._exceptions import InputDataError
from .pipeline import AnalysisResult

__all__ = ["TestReport", "build_report", "write_diagnostics"]

SCHEMA_VERSION = 1


def _package_version() -> str:
    try:
        from importlib.metadata import version

        return version("speceq")
    except Exception:
        return "unknown"


@dataclass
class TestReport:
    """Full record of one test run; see README for the field-by-field
    schema documentation."""

    schema_version: int
    tool_version: str
    T: int
    k: int
    kernel: str
    statistic: str
    bandwidth: float
    cv_candidates: list | None
    cv_scores: list | None
    u_stat: float
    mu0_hat: float
    theta0_hat: float
    t_stat: float
    p_value: float
    critical_values: dict  # str(alpha) -> float
    decisions: dict  # str(alpha) -> bool
    frequencies: list
    per_frequency_q: list
    clipped_mass: float
    n_redrawn: int
    seed: int
    n_bootstrap: int

    def validate(self) -> None:
        """Internal consistency checks; raises on violation."""
        if self.u_stat < 0.0:
            raise InputDataError("u_stat must be nonnegative")
        if self.theta0_hat <= 0.0:
            raise InputDataError("theta0_hat must be positive")
        if not (0.0 < self.p_value <= 1.0):
            raise InputDataError("p_value must lie in (0, 1]")
        expected_t = (np.sqrt(self.bandwidth) * self.T * self.u_stat
                      - self.mu0_hat / np.sqrt(self.bandwidth)) / self.theta0_hat
        if not np.isclose(self.t_stat, expected_t, rtol=1e-12, atol=1e-12):
            raise InputDataError("t_stat inconsistent with its components")
        if any(q < 0.0 for q in self.per_frequency_q):
            raise InputDataError("per-frequency contributions must be nonnegative")
        alphas = sorted(self.critical_values)
        cvs = [self.critical_values[a] for a in alphas]
        if any(cvs[i] < cvs[i + 1] for i in range(len(cvs) - 1)):
            raise InputDataError("critical values must be nonincreasing in alpha")
        for a, cv in self.critical_values.items():
            if self.decisions[a] != (self.t_stat >= cv):
                raise InputDataError(f"decision at alpha={a} inconsistent")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "TestReport":
        return cls(**json.loads(text))

    def write(self, path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def read(cls, path) -> "TestReport":
        report = cls.from_json(Path(path).read_text())
        report.validate()
        return report


def build_report(result: AnalysisResult, seed: int) -> TestReport:
    stud, boot = result.studentized, result.bootstrap
    report = TestReport(
        schema_version=SCHEMA_VERSION,
        tool_version=_package_version(),
        T=result.T,
        k=result.k,
        kernel=result.kernel,
        statistic=result.statistic,
        bandwidth=result.bandwidth,
        cv_candidates=([float(v) for v in result.cv_curve.candidates]
                       if result.cv_curve is not None else None),
        cv_scores=([float(v) for v in result.cv_curve.scores]
                   if result.cv_curve is not None else None),
        u_stat=stud.u_stat,
        mu0_hat=stud.mu0_hat,
        theta0_hat=stud.theta0_hat,
        t_stat=stud.t_stat,
        p_value=boot.p_value,
        critical_values={repr(a): cv for a, cv in boot.critical_values.items()},
        decisions={repr(a): d for a, d in result.decisions.items()},
        frequencies=[float(v) for v in stud.frequencies],
        per_frequency_q=[float(v) for v in stud.per_frequency_q],
        clipped_mass=boot.clipped_mass,
        n_redrawn=boot.n_redrawn,
        seed=int(seed),
        n_bootstrap=boot.B,
    )
    report.validate()
    return report


def write_diagnostics(result: AnalysisResult, directory) -> None:
    """Write plottable CSVs: the CV curve (if CV ran), the per-frequency
    decomposition, and the bootstrap replicate values."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stud, boot = result.studentized, result.bootstrap

    if result.cv_curve is not None:
        with open(directory / "cv_curve.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["b", "score"])
            for b, s in zip(result.cv_curve.candidates, result.cv_curve.scores):
                writer.writerow([repr(float(b)), repr(float(s))])

    with open(directory / "q_curve.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lambda", "q"])
        for lam, q in zip(stud.frequencies, stud.per_frequency_q):
            writer.writerow([repr(float(lam)), repr(float(q))])

    with open(directory / "bootstrap_replicates.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replicate", "t_star", "t_plus"])
        for i, (ts, tp) in enumerate(zip(boot.t_star, boot.t_plus)):
            writer.writerow([i, repr(float(ts)), repr(float(tp))])
