"""Verification suites for the scaling limits."""
from .ks import ks_distance, ks_distance_2d
from .suites import SUITE_NAMES, LimitSuite, default_suite, run_suite

__all__ = ["ks_distance", "ks_distance_2d", "LimitSuite", "SUITE_NAMES", "default_suite", "run_suite"]
