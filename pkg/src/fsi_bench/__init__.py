"""Closed-form pulsatile fluid-structure interaction solutions for solver verification."""

from .params import (CaseSpec, Dimension, ParameterError, ProblemParams, Regime,
                     SingularParameterError, SolidLaw, default_params, derive_constants,
                     reynolds, womersley)
from .solution import (AnalyticSolution, CoefficientSet, DomainError, NearResonanceWarning,
                       resonance_frequencies, solve_coefficients, solve_coefficients_numeric)
from .special import bessel_j, bessel_y
from .verify import ValidationConfig, fault_injection, validate_case

__all__ = [
    "AnalyticSolution", "CaseSpec", "CoefficientSet", "Dimension", "DomainError",
    "NearResonanceWarning", "ParameterError", "ProblemParams", "Regime",
    "SingularParameterError", "SolidLaw", "ValidationConfig", "bessel_j", "bessel_y",
    "default_params", "derive_constants", "fault_injection", "resonance_frequencies",
    "reynolds", "solve_coefficients", "solve_coefficients_numeric", "validate_case",
    "womersley",
]
