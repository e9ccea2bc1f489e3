"""Numerical laboratory for the flat-model Dirac boundary operator.

Mode lattices of a circle or torus link, modified-Bessel radial solutions
of the separated Dirac system, Hardy-type boundary splittings with their
pairings and Green-identity check, and SVD-stabilized index computation
for the realified conjugate-linear boundary operator.
"""

from .boundary import (
    BoundaryField,
    SubspaceTag,
    apply_e0,
    convention_probe,
    decaying_trace_field,
    field,
    field_add,
    field_from_json,
    field_scale,
    field_to_json,
    green_check,
    pairing_B,
    pairing_hermitian,
    pattern_second_weight,
    project,
    split,
)
from .engine import (
    IndexReport,
    LedgerInput,
    RealifiedOperator,
    SymbolData,
    apply_T,
    build_T,
    build_T_full,
    cokernel_correspondence,
    numerical_index,
    random_symbol,
    reconstruct_eta,
    stabilized_index,
    virtual_dimension_ledger,
    winding_number,
)
from .errors import ConfigError, DomainError, NumericError
from .lattice import (
    Mode,
    ModeLattice,
    ZeroModePolicy,
    dirac_eigensection,
    enumerate_modes,
    generalized_sign,
    ker_dsigma_dimension,
)
from .radial import (
    RadialMode,
    RegularityClass,
    assemble_solution,
    bessel_series,
    classify_regularity,
    decaying_solution,
    decaying_trace,
    modified_bessel_k_half,
    radial_rhs,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryField",
    "ConfigError",
    "DomainError",
    "IndexReport",
    "LedgerInput",
    "Mode",
    "ModeLattice",
    "NumericError",
    "RadialMode",
    "RealifiedOperator",
    "RegularityClass",
    "SubspaceTag",
    "SymbolData",
    "ZeroModePolicy",
    "apply_T",
    "apply_e0",
    "assemble_solution",
    "bessel_series",
    "build_T",
    "build_T_full",
    "classify_regularity",
    "cokernel_correspondence",
    "convention_probe",
    "decaying_solution",
    "decaying_trace",
    "decaying_trace_field",
    "dirac_eigensection",
    "enumerate_modes",
    "field",
    "field_add",
    "field_from_json",
    "field_scale",
    "field_to_json",
    "generalized_sign",
    "green_check",
    "ker_dsigma_dimension",
    "modified_bessel_k_half",
    "numerical_index",
    "pairing_B",
    "pairing_hermitian",
    "pattern_second_weight",
    "project",
    "radial_rhs",
    "random_symbol",
    "reconstruct_eta",
    "split",
    "stabilized_index",
    "virtual_dimension_ledger",
    "winding_number",
]
