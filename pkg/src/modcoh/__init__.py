"""Filtered structure sheaves on modulus pairs and exact Cech cohomology of
monomial line bundles."""

from .cech import (
    CechComplex,
    CohomologyReport,
    CoveredSpace,
    LineBundleDatum,
    SectionLattice,
    affine_space,
    blowup_bundle,
    blowup_cover,
    cech_cohomology,
    coordinate_blowup,
    modulus_bundle,
    point,
    product_with_line,
    projective_box,
    projective_bundle,
    projective_cover,
)
from .mo import (
    AffineModulusPair,
    FactoredDivisor,
    LocalizedElement,
    MOModule,
    NotAdmissibleError,
    check_divisor_shift,
    check_poly_extension,
    mo_contains,
    mo_generator,
    mo_pullback,
    pair_from_spec,
)
from .poly import (
    CoeffRing,
    Dual,
    NotDivisibleError,
    ParseError,
    Poly,
    PolyRing,
    RingMap,
    UnsupportedRingError,
    apply_map,
    divides,
    exact_divide,
)
from .theorems import (
    check_basic_blowup_invariance,
    check_blowup_pushforward,
    check_cube_invariance,
    check_filtration_exhaustive,
    check_projective_cohomology,
    check_snc,
    counterexample_flat_base_change,
    counterexample_gabber,
    counterexample_nonreduced,
    run_suite,
)
from .verdict import Box, DefectError, TheoremVerdict

__version__ = "0.1.0"
