"""Bound-state energies of g*x**2 + x**(2N) oscillators via series-built
Wronskians, cross-checked against solvable models and a Numerov integrator."""

from .core import (
    AsymptoticExponents,
    CoefficientSeries,
    OscillatorSpec,
    QuantizationEvaluation,
    QuantizationPolicy,
    asymptotic_coeffs,
    quantization_indices,
    quantization_value,
    regular_series_coeffs,
    support_stride,
    undressed_regular_coeffs,
    wronskian_gamma,
)
from .solver import (
    Bracket,
    BracketList,
    Eigenvalue,
    SpectrumResult,
    SweepResult,
    default_window,
    lowest_eigenvalues,
    potential_minimum,
    refine_root,
    reproduce_table,
    scan_brackets,
)
from .numerov import (
    EvenPolynomial,
    GridSpec,
    ShootingResult,
    numerov_integrate,
    oracle_eigenvalue,
    richardson_eigenvalue,
)
from .models import (
    ModifiedPTSpec,
    MorseSpec,
    PoschlTellerSpec,
    morse_located_zeros,
    morse_quantization,
    morse_reference_levels,
    morse_u_reg,
    mpt_exact_levels,
    mpt_wronskian,
    mpt_wronskian_at,
    pt_exact_levels,
    pt_wronskian,
    pt_wronskian_at,
)
from .errors import (
    EnergyWindowError,
    GridTooSmallError,
    NotConvergedError,
    PrecisionLossError,
    RefineError,
    ScanUnreliableError,
    SeriesOverflowError,
    SpectralError,
)
from .summation import ConvergenceReport, TailPolicy

__version__ = "0.1.0"

__all__ = [
    "AsymptoticExponents",
    "Bracket",
    "BracketList",
    "CoefficientSeries",
    "ConvergenceReport",
    "Eigenvalue",
    "EnergyWindowError",
    "EvenPolynomial",
    "GridSpec",
    "GridTooSmallError",
    "ModifiedPTSpec",
    "MorseSpec",
    "NotConvergedError",
    "OscillatorSpec",
    "PoschlTellerSpec",
    "PrecisionLossError",
    "QuantizationEvaluation",
    "QuantizationPolicy",
    "RefineError",
    "ScanUnreliableError",
    "SeriesOverflowError",
    "ShootingResult",
    "SpectralError",
    "SpectrumResult",
    "SweepResult",
    "TailPolicy",
    "asymptotic_coeffs",
    "default_window",
    "lowest_eigenvalues",
    "morse_located_zeros",
    "morse_quantization",
    "morse_reference_levels",
    "morse_u_reg",
    "mpt_exact_levels",
    "mpt_wronskian",
    "mpt_wronskian_at",
    "numerov_integrate",
    "oracle_eigenvalue",
    "potential_minimum",
    "pt_exact_levels",
    "pt_wronskian",
    "pt_wronskian_at",
    "quantization_indices",
    "quantization_value",
    "refine_root",
    "regular_series_coeffs",
    "reproduce_table",
    "richardson_eigenvalue",
    "scan_brackets",
    "support_stride",
    "undressed_regular_coeffs",
    "wronskian_gamma",
]
