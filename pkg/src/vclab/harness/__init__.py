"""Experiment runner: verification suites, sweeps, caches and reports."""

from .mixing import MixingReport, mixing_check, tensor_mixing_check
from .runner import collect_reports, run_suite, write_suite
from .suites import (
    SuiteResult,
    geometry_checks,
    quadruple_upper_bound_check,
    selector_condition_check,
    spectral_bound_check,
    verify_count_theorems,
    vc_sweep,
)
from .thresholds import THRESHOLDS, ThresholdSpec, threshold_eval
