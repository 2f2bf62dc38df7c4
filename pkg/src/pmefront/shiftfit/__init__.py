"""Logarithmic front-shift extraction and traveling-wave comparisons."""

from .compare import ProfileComparison, compare_profile, shift_model
from .envelope import EnvelopeReport, alpha_of_speed, envelope_check
from .fit import ShiftFit, delta_B, fit_shift, fit_shift_pinned

__all__ = [
    "EnvelopeReport",
    "ProfileComparison",
    "ShiftFit",
    "alpha_of_speed",
    "compare_profile",
    "delta_B",
    "envelope_check",
    "fit_shift",
    "fit_shift_pinned",
    "shift_model",
]
