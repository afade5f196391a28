"""Exhaustive verification of clans, tribes and π-tribes on finite instances."""

from .report import Check, VerificationReport
from .fincat import (
    CategoryPresentation,
    Cone,
    FunctorData,
    PresentationError,
    SquareData,
    is_cartesian_square,
    pullback,
    validate_presentation,
)
from .clan import (
    CLAN_CHECKS,
    ClanError,
    ClanMorphismData,
    ClanStructure,
    arrow_clan,
    base_change,
    is_reedy_fibrant,
    materialize,
    poset_clan,
    sigma_along,
    slice_clan,
    span_clan,
    verify_clan,
    verify_clan_morphism,
    verify_generic_element,
)
from .tribe import (
    ProductTribe,
    TribeError,
    TribeStructure,
    af_factorize,
    anodyne_decisions,
    are_homotopic,
    homotopy_category,
    homotopy_classes,
    is_anodyne,
    is_homotopy_equivalence,
    is_n_truncated,
    mapping_path_object,
    path_object,
    restricted_base_change,
    straighten,
    tribe_morphism_report,
    verify_fibration_category,
    verify_ho_of_product,
    verify_ho_products,
    verify_homotopy_congruence,
    verify_mapping_path,
    verify_tribe,
)
from .pi import (
    PiTribeStructure,
    PolynomialSpan,
    compose_polynomials,
    eval_polynomial,
    internal_product,
    is_contr_witness,
    verify_composition,
    verify_cofree,
    verify_law,
    verify_pi_tribe,
)
from .suites import SUITES, run_suites

__version__ = "0.1.0"
