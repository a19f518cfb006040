"""Refined virtual classes of punctured tropical map moduli.

Exact-arithmetic toolkit for cone complexes, Stanley-Reisner Chow operators,
Segre/Chern refined-class computations, tropical type enumeration, gerby
pushforward identities, and blowup (non-)invariance checks.
"""

__version__ = "0.1.0"

from .conecx import (
    Ray,
    ConeComplex,
    PLFunction,
    SubdivisionStep,
    build_complex,
    validate_complex,
    star_subdivide,
    pl_function,
    pl_pullback,
)
from .chowring import (
    ChowClass,
    reduce,
    multiply,
    divisor_of_pl,
    pullback,
    pushforward,
    truncate,
    serialize,
    unit,
    zero,
    ray_class,
    stratum_class,
)
from .puncture import (
    PrincipalizationError,
    PuncturingData,
    MonomialIdealOnComplex,
    RefinedClassResult,
    puncturing_data,
    monomial_ideal,
    normalized_ideal,
    puncturing_components,
    principalize,
    segre_class,
    refined_class,
    refined_class_excess,
)
from .aluffi import AluffiDomainError, principalize_newton, segre_newton
from .tropmaps import (
    NumericalData,
    TargetModel,
    VertexDecor,
    EdgeDecor,
    TropicalType,
    TypeCone,
    EnumerationBoundError,
    BalancingError,
    NonSmoothConeError,
    numerical_data,
    target_model,
    validate_numerical_data,
    slopes_from_balancing,
    enumerate_types,
    canonical_key,
    cone_of_type,
    realizable,
    specializations,
    assemble_complex,
    positivize,
    positivize_type,
)
from .gerby import (
    RootingData,
    rooting_data,
    derive_source_roots,
    validate_rooting,
    twist_complex,
    root_pushforward,
    root_pullback,
    check_pushforward_identity,
    check_pushforward_identity_on_complex,
)
from .blowups import (
    BlowupStep,
    LiftedData,
    Subdivision,
    faithful_lift,
    stabilize_rank,
    subdivision,
    trivial_subdivision,
    barycentric_subdivision,
    check_slope_sensitivity,
    compare_under_subdivision,
)
from .fixtureio import (
    SchemaError,
    Fixture,
    load_fixture,
    load_fixture_file,
)

__all__ = [
    "__version__",
    "Ray",
    "ConeComplex",
    "PLFunction",
    "SubdivisionStep",
    "build_complex",
    "validate_complex",
    "star_subdivide",
    "pl_function",
    "pl_pullback",
    "ChowClass",
    "reduce",
    "multiply",
    "divisor_of_pl",
    "pullback",
    "pushforward",
    "truncate",
    "serialize",
    "unit",
    "zero",
    "ray_class",
    "stratum_class",
    "PrincipalizationError",
    "PuncturingData",
    "MonomialIdealOnComplex",
    "RefinedClassResult",
    "puncturing_data",
    "monomial_ideal",
    "normalized_ideal",
    "puncturing_components",
    "principalize",
    "segre_class",
    "refined_class",
    "refined_class_excess",
    "AluffiDomainError",
    "principalize_newton",
    "segre_newton",
    "NumericalData",
    "TargetModel",
    "VertexDecor",
    "EdgeDecor",
    "TropicalType",
    "TypeCone",
    "EnumerationBoundError",
    "BalancingError",
    "NonSmoothConeError",
    "numerical_data",
    "target_model",
    "validate_numerical_data",
    "slopes_from_balancing",
    "enumerate_types",
    "canonical_key",
    "cone_of_type",
    "realizable",
    "specializations",
    "assemble_complex",
    "positivize",
    "positivize_type",
    "RootingData",
    "rooting_data",
    "derive_source_roots",
    "validate_rooting",
    "twist_complex",
    "root_pushforward",
    "root_pullback",
    "check_pushforward_identity",
    "check_pushforward_identity_on_complex",
    "BlowupStep",
    "LiftedData",
    "Subdivision",
    "faithful_lift",
    "stabilize_rank",
    "subdivision",
    "trivial_subdivision",
    "barycentric_subdivision",
    "check_slope_sensitivity",
    "compare_under_subdivision",
    "SchemaError",
    "Fixture",
    "load_fixture",
    "load_fixture_file",
]
