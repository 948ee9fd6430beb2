"""The SU(m+1) Gaussian ensemble of holomorphic sections of O(N) over CP^m."""

from ._diagnostics import basis_sum, gram_matrix, orthonormality_defect
from ._evaluate import (
    horner,
    log_norms,
    monomial_values,
    monomials,
    norms,
    weighted_coefficients,
)
from ._sampling import keyed_uniforms, sample_coefficients, sample_section
from ._section import PolySection, evaluate_f, hermitian_norm, log_hermitian_norm
from ._spec import (
    EnsembleSpec,
    dimension,
    exponent_matrix,
    log_multinomial,
    multi_indices,
    normalization,
    szego_diagonal,
    szego_leading,
)

__all__ = [
    "EnsembleSpec",
    "PolySection",
    "basis_sum",
    "dimension",
    "evaluate_f",
    "exponent_matrix",
    "gram_matrix",
    "hermitian_norm",
    "horner",
    "keyed_uniforms",
    "log_hermitian_norm",
    "log_multinomial",
    "log_norms",
    "monomial_values",
    "monomials",
    "multi_indices",
    "normalization",
    "norms",
    "orthonormality_defect",
    "sample_coefficients",
    "sample_section",
    "szego_diagonal",
    "szego_leading",
    "weighted_coefficients",
]
