"""Exact symbolic engine for generalized partial-slice functions over Clifford algebras."""

from .almansi import (
    ABDecomposition,
    StarlikeDecomposition,
    almansi_ab,
    classical_almansi,
    cr2_residual,
    polyharmonic_commutator_check,
    polymonogenic_almansi,
    starlike_almansi,
)
from .clifford import (
    Multivector,
    Signature,
    blade_product,
    conjugate,
    mv_mul,
    norm_squared,
)
from .diffops import (
    OperatorSpec,
    apply,
    dirac,
    gsm_restriction_residual,
    hyperbolic_check,
    laplacian,
)
from .errors import ParityError, PreconditionError, VariableMismatch
from .mvpoly import MVPolynomial, evaluate, homogeneous_parts, partial_derivative
from .regular import (
    GCRResidual,
    JetBasis,
    enhanced_fueter_sce_check,
    fueter_sce,
    gcr_residual,
    gsr_basis,
    helmholtz_jet_basis,
    laplacian_power_lemma_check,
    relation_check,
    spherical_theorem_check,
    vekua_conclusion_check,
    vekua_jet_basis,
)
from .slices import (
    SliceFunction,
    StemPair,
    UnitVector,
    induce,
    is_symmetric,
    representation_formula_check,
    spherical_derivative,
    spherical_value,
)

__version__ = "0.1.0"

__all__ = [
    "ABDecomposition",
    "GCRResidual",
    "JetBasis",
    "MVPolynomial",
    "Multivector",
    "OperatorSpec",
    "ParityError",
    "PreconditionError",
    "Signature",
    "SliceFunction",
    "StarlikeDecomposition",
    "StemPair",
    "UnitVector",
    "VariableMismatch",
    "almansi_ab",
    "apply",
    "blade_product",
    "classical_almansi",
    "conjugate",
    "cr2_residual",
    "dirac",
    "enhanced_fueter_sce_check",
    "evaluate",
    "fueter_sce",
    "gcr_residual",
    "gsm_restriction_residual",
    "gsr_basis",
    "helmholtz_jet_basis",
    "homogeneous_parts",
    "hyperbolic_check",
    "induce",
    "is_symmetric",
    "laplacian",
    "laplacian_power_lemma_check",
    "mv_mul",
    "norm_squared",
    "partial_derivative",
    "polyharmonic_commutator_check",
    "polymonogenic_almansi",
    "relation_check",
    "representation_formula_check",
    "spherical_derivative",
    "spherical_theorem_check",
    "spherical_value",
    "starlike_almansi",
    "vekua_conclusion_check",
    "vekua_jet_basis",
]
