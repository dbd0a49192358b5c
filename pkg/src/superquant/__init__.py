"""superquant: exact equivariant quantization on the superspace R^{p|q}.

The package computes, over exact rationals, the correspondence between
polynomial differential operators on densities and their polynomial symbols,
equivariantly with respect to the projective superalgebra realized by vector
fields.  Heavy term arithmetic runs on a compiled kernel when available and
falls back to a pure-Python twin (set SUPERQUANT_PURE_PYTHON=1 to force it).
"""

from .errors import CriticalValueError, DomainError, ExprError
from .geometry import (
    DiffOperator,
    MixedSymbol,
    SuperVectorField,
    SymbolField,
    affine_quantize,
    affine_symbol,
    bracket,
    density_operator,
    interior,
    lie_density,
    lie_operator,
    lie_symbol,
    operators_agree,
    principal_symbol,
    symbol_divergence,
)
from .projective import (
    ALGEBRA_PSL,
    ALGEBRA_SL,
    GradedElement,
    PglElement,
    affine_defect,
    affine_defect_closed_form,
    basis_e,
    basis_eps,
    casimir_apply,
    casimir_defect,
    casimir_eigenvalue,
    critical_pairs,
    critical_values,
    critical_values_for_degree,
    default_algebra,
    dual_basis_pair,
    ensure_noncritical,
    euler_element,
    g0_basis,
    g0_element,
    graded_basis,
    is_critical,
    kaplansky_form,
    killing_form,
    pgl_bracket,
    pgl_to_graded,
    psl_casimir_eigenvalue,
    psl_quantization_coefficient,
    quantization_coefficient,
    realize,
    scaled_eps,
)
from .quantizer import (
    VARIANT_PSL,
    VARIANT_SL,
    QuantizationConfig,
    default_variant,
    quantize,
    quantize_psl,
    quantize_recursive,
    symbol_map,
)
from .supercore import (
    KERNEL_BACKEND,
    Rational,
    Signature,
    SuperPolynomial,
    as_fraction,
    iter_monomials,
    kernel_backend,
)

__all__ = [
    "ALGEBRA_PSL",
    "ALGEBRA_SL",
    "CriticalValueError",
    "DiffOperator",
    "DomainError",
    "ExprError",
    "GradedElement",
    "KERNEL_BACKEND",
    "MixedSymbol",
    "PglElement",
    "QuantizationConfig",
    "Rational",
    "Signature",
    "SuperPolynomial",
    "SuperVectorField",
    "SymbolField",
    "VARIANT_PSL",
    "VARIANT_SL",
    "affine_defect",
    "affine_defect_closed_form",
    "affine_quantize",
    "affine_symbol",
    "as_fraction",
    "basis_e",
    "basis_eps",
    "bracket",
    "casimir_apply",
    "casimir_defect",
    "casimir_eigenvalue",
    "critical_pairs",
    "critical_values",
    "critical_values_for_degree",
    "default_algebra",
    "default_variant",
    "density_operator",
    "dual_basis_pair",
    "ensure_noncritical",
    "euler_element",
    "g0_basis",
    "g0_element",
    "graded_basis",
    "interior",
    "is_critical",
    "iter_monomials",
    "kaplansky_form",
    "kernel_backend",
    "killing_form",
    "lie_density",
    "lie_operator",
    "lie_symbol",
    "operators_agree",
    "pgl_bracket",
    "pgl_to_graded",
    "principal_symbol",
    "psl_casimir_eigenvalue",
    "psl_quantization_coefficient",
    "quantization_coefficient",
    "quantize",
    "quantize_psl",
    "quantize_recursive",
    "realize",
    "scaled_eps",
    "symbol_divergence",
    "symbol_map",
]

__version__ = "0.1.0"
