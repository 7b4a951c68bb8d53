"""Exact-arithmetic toolkit for eventual exact m-covers of the positive
integers by Beatty sequences: construction, window verification,
theorem-level certification, residue-class decomposition and the
fractional-density analysis of reciprocal-sum p/q pairs."""

from .apsystems import (
    APTerm,
    ParameterSystem,
    RationalExpansion,
    SystemDerivation,
    complementary,
    decompose_homogeneous,
    decompose_search,
    derive_systems,
    expand_over_basis,
    is_exact_system,
    multiset_equal,
    residue_table,
)
from .beatty import (
    BeattySequence,
    CoverFamily,
    DualParameters,
    RepresentationProfile,
    discrepancy_diagnostic,
    dualize,
    epsilon,
    r_single,
    r_total,
    verify_window,
)
from .certify import (
    Certificate,
    GrahamBlock,
    GrahamSpec,
    build_example_48,
    build_graham,
    certify_homogeneous,
    certify_pair_inhomogeneous,
    density_check,
    f_identity_check,
)
from .exactnum import (
    AmbiguousBasis,
    Basis,
    CertifiedReal,
    DecimalAnchor,
    LinearExpr,
    PrecisionExhausted,
    QuadraticIrrational,
    compare,
    decimal_str,
    floor_certified,
    frac_certified,
    is_integer,
    sqrt,
)
from .fractional import (
    FractionalPair,
    FractionalProfile,
    R_formula_check,
    build_profile,
    classify,
    empirical_densities,
    formula_densities,
)

__version__ = "0.1.0"

__all__ = [
    "APTerm", "AmbiguousBasis", "Basis", "BeattySequence", "Certificate",
    "CertifiedReal", "CoverFamily", "DecimalAnchor", "DualParameters",
    "FractionalPair", "FractionalProfile", "GrahamBlock", "GrahamSpec",
    "LinearExpr", "ParameterSystem", "PrecisionExhausted",
    "QuadraticIrrational", "RationalExpansion", "RepresentationProfile",
    "R_formula_check", "SystemDerivation", "build_example_48", "build_graham",
    "build_profile", "certify_homogeneous", "certify_pair_inhomogeneous",
    "classify", "compare", "complementary", "decimal_str",
    "decompose_homogeneous", "decompose_search", "density_check",
    "derive_systems", "discrepancy_diagnostic", "dualize",
    "empirical_densities", "epsilon", "expand_over_basis", "f_identity_check",
    "floor_certified", "formula_densities", "frac_certified",
    "is_exact_system", "is_integer", "multiset_equal", "r_single", "r_total",
    "residue_table", "sqrt", "verify_window", "__version__",
]
