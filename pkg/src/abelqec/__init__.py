"""Exact simulation of CSS codes and key distribution over finite abelian groups."""

from __future__ import annotations

__version__ = "0.1.0"

from .css import (
    CODE_PRESETS,
    CorrectionResult,
    CssCode,
    KlCheckResult,
    SyndromeMap,
    codeword_family,
    codeword_state,
    correct_pipeline,
    decode_to_codeword,
    encode,
    hamming_css_code,
    kl_check,
    make_css,
    min_distance,
    phase_toy_code,
    sweep_errors,
    trit_repetition_code,
    weyl_error_pairs,
)
from .errors import AbelqecError, InvariantViolationError, ResourceLimitError
from .groups import (
    CosetTable,
    GroupElement,
    GroupSpec,
    Subgroup,
    all_subgroups,
    annihilator,
    character_eval,
    character_sum_over,
    coerce_element,
    coset_table,
    pairing_exponent,
    weight,
)
from .hilbert import (
    DensityOperator,
    StateVector,
    basis_state,
    convolve,
    corrupt,
    coset_state,
    coset_state_fourier_image,
    dft_matrix,
    fidelity,
    fourier_basis_state,
    inner,
    kron_state,
    measure_fourier,
    measure_standard,
    project_factors,
    qft,
    qft_inverse,
    state_from_json_dict,
    state_to_json_dict,
    support_elements,
    weyl_x,
    weyl_z,
)
from .kernels import backend_name
from .protocols import (
    ChannelModel,
    InterceptResendEve,
    ProtocolParams,
    ProtocolSummary,
    ProtocolTranscript,
    aggregate_stats,
    run_bb84_protocol,
    run_css_protocol,
    run_trials,
    sample_code_words,
)

__all__ = [
    "AbelqecError",
    "ChannelModel",
    "CODE_PRESETS",
    "CorrectionResult",
    "CosetTable",
    "CssCode",
    "DensityOperator",
    "GroupElement",
    "GroupSpec",
    "InterceptResendEve",
    "InvariantViolationError",
    "KlCheckResult",
    "ProtocolParams",
    "ProtocolSummary",
    "ProtocolTranscript",
    "ResourceLimitError",
    "StateVector",
    "Subgroup",
    "SyndromeMap",
    "aggregate_stats",
    "all_subgroups",
    "annihilator",
    "backend_name",
    "basis_state",
    "character_eval",
    "character_sum_over",
    "codeword_family",
    "codeword_state",
    "coerce_element",
    "convolve",
    "correct_pipeline",
    "corrupt",
    "coset_state",
    "coset_state_fourier_image",
    "coset_table",
    "decode_to_codeword",
    "dft_matrix",
    "encode",
    "fidelity",
    "fourier_basis_state",
    "hamming_css_code",
    "inner",
    "kl_check",
    "kron_state",
    "make_css",
    "measure_fourier",
    "measure_standard",
    "min_distance",
    "pairing_exponent",
    "phase_toy_code",
    "project_factors",
    "qft",
    "qft_inverse",
    "run_bb84_protocol",
    "run_css_protocol",
    "run_trials",
    "sample_code_words",
    "state_from_json_dict",
    "state_to_json_dict",
    "support_elements",
    "sweep_errors",
    "trit_repetition_code",
    "weight",
    "weyl_error_pairs",
    "weyl_x",
    "weyl_z",
    "__version__",
]
