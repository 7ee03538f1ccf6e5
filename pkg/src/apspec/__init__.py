"""Numerics for multivariate almost periodic functions of exponential type.

Besicovitch seminorms, averaged Fourier coefficients and spectra, growth
and majorant inequality checks, and an end-to-end certificate that the
detected spectrum sits inside the ball whose radius is the exponential
type.
"""

from .core import (
    ComplexPoint,
    FunctionSource,
    TrigPolynomial,
    eval_complex,
    eval_real,
    exact_type,
    known_type,
    line_slice,
    rotate,
    sinc,
    sinc_multiplier,
)
from .entire import (
    EnvelopeEstimate,
    InequalityCheck,
    TypeEstimate,
    estimate_type,
    growth_envelope_check,
    logvinenko_check,
    phragmen_lindelof_check,
    poisson_majorant_check,
)
from .errors import (
    ApspecError,
    BudgetExceededError,
    DimensionMismatchError,
    EvaluationRangeError,
    PreconditionError,
)
from .generate import generate_polynomial
from .meanvalue import (
    RotationIdentityResult,
    SeminormEstimate,
    SpectrumEntry,
    SpectrumReport,
    besicovitch_seminorm,
    box_average_abs,
    crosstalk_floor,
    fourier_coeff_closed_form,
    fourier_coeff_quadrature,
    rotation_invariance_check,
    spectrum_scan,
)
from .quadrature import LadderSpec, QuadratureSpec
from .verifier import (
    NORM_SAFETY,
    RECOMMENDED_CONTAINMENT_TOL,
    ContourDecomposition,
    StripBoundResult,
    VerificationAborted,
    VerificationReport,
    VerifyConfig,
    containment_verdict,
    contour_decomposition,
    strip_bound_constant,
    strip_integral_bound,
    top_edge_decay_check,
    verify_spectral_containment,
)

__version__ = "0.1.0"

__all__ = [
    "NORM_SAFETY",
    "RECOMMENDED_CONTAINMENT_TOL",
    "ApspecError",
    "BudgetExceededError",
    "ComplexPoint",
    "ContourDecomposition",
    "DimensionMismatchError",
    "EnvelopeEstimate",
    "EvaluationRangeError",
    "FunctionSource",
    "InequalityCheck",
    "LadderSpec",
    "PreconditionError",
    "QuadratureSpec",
    "RotationIdentityResult",
    "SeminormEstimate",
    "SpectrumEntry",
    "SpectrumReport",
    "StripBoundResult",
    "TrigPolynomial",
    "TypeEstimate",
    "VerificationAborted",
    "VerificationReport",
    "VerifyConfig",
    "besicovitch_seminorm",
    "box_average_abs",
    "containment_verdict",
    "contour_decomposition",
    "crosstalk_floor",
    "estimate_type",
    "eval_complex",
    "eval_real",
    "exact_type",
    "fourier_coeff_closed_form",
    "fourier_coeff_quadrature",
    "generate_polynomial",
    "growth_envelope_check",
    "known_type",
    "line_slice",
    "logvinenko_check",
    "phragmen_lindelof_check",
    "poisson_majorant_check",
    "rotate",
    "rotation_invariance_check",
    "sinc",
    "sinc_multiplier",
    "spectrum_scan",
    "strip_bound_constant",
    "strip_integral_bound",
    "top_edge_decay_check",
    "verify_spectral_containment",
]
