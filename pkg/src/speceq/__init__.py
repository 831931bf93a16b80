"""Two-sample equality test for the spectral density operators of
functional time series, with frequency-domain bootstrap calibration,
cross-validated bandwidth selection and per-frequency diagnostics.
"""

from ._exceptions import (BootstrapAbort, DegenerateSpectrumError, ExperimentAbort,
                          InputDataError, NumericFailure)
from .bandwidth import CvCurve, averaged_periodogram, cv_score, select_bandwidth
from .bootstrap import (BootstrapOutcome, PsdFactor, bootstrap_replicate,
                        psd_factorize, run_bootstrap, sample_pseudo_dfts)
from .estimator import SpectralEqualityTest
from .model import (FrequencyGrid, FunctionalSample, SpectralKernelField,
                    WeightKernel, center, make_weight_kernel)
from .pipeline import AnalysisResult, analyze
from .report import TestReport, build_report, write_diagnostics
from .simulate import (ExperimentPlan, ExperimentResult, MaProcessSpec,
                       generate_ma, run_experiment, sample_brownian_bridge,
                       true_spectral_kernel)
from .spectral import DftField, dft, periodogram_kernel, pooled, smooth
from .statistic import (StudentizedResult, hs_distance_integral, mu0_hat,
                        q_decomposition, studentize, theta0_hat)

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "BootstrapAbort",
    "BootstrapOutcome",
    "CvCurve",
    "DegenerateSpectrumError",
    "DftField",
    "ExperimentAbort",
    "ExperimentPlan",
    "ExperimentResult",
    "FrequencyGrid",
    "FunctionalSample",
    "InputDataError",
    "MaProcessSpec",
    "NumericFailure",
    "PsdFactor",
    "SpectralEqualityTest",
    "SpectralKernelField",
    "StudentizedResult",
    "TestReport",
    "WeightKernel",
    "analyze",
    "averaged_periodogram",
    "bootstrap_replicate",
    "build_report",
    "center",
    "cv_score",
    "dft",
    "generate_ma",
    "hs_distance_integral",
    "make_weight_kernel",
    "mu0_hat",
    "periodogram_kernel",
    "pooled",
    "psd_factorize",
    "q_decomposition",
    "run_bootstrap",
    "run_experiment",
    "sample_brownian_bridge",
    "sample_pseudo_dfts",
    "select_bandwidth",
    "smooth",
    "studentize",
    "theta0_hat",
    "true_spectral_kernel",
    "write_diagnostics",
]
