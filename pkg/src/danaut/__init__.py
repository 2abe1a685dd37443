"""Exact invariants and automorphism groups of Danielewski-type presentations."""

from .cyclotomic import (
    CycElem,
    all_nth_roots,
    cyc_root_of_unity,
    cyclotomic_polynomial,
    euler_phi,
    rational_nth_root,
    zeta,
)
from .poly import (
    MultiPoly,
    as_univar,
    derivative,
    from_univar,
    parse_poly,
    perfect_power_root,
    poly_str,
    reduce_by_rule,
    substitute,
    univar_gcd,
)
from .lattice import (
    DiagGroupType,
    DiagSubgroup,
    TorusSolutionSet,
    diag_group_quotient,
    det_int,
    hermite_normal_form,
    left_kernel_basis,
    normalize_invariant_factors,
    smith_normal_form,
    solve_torus_system,
)
from .varieties import (
    AdditionalQuasitorus,
    Irreducibility,
    QuasitorusData,
    Rigidity,
    SpecError,
    SymGroupData,
    VarietySpec,
    additional_quasitorus,
    genus,
    genus_formula,
    ideal_member,
    irreducibility,
    make_variety,
    ml_invariant,
    normal_form,
    normalize,
    proper_quasitorus,
    reconstruct_reducible_product,
    rigidity,
    symmetric_group,
)
from .derivations import (
    Derivation,
    GeneratorMap,
    apply_derivation,
    canonical_lnd,
    exp_replica,
    gr_leading_form,
    homogeneous_decompose,
    identity_map,
    nilpotency_index,
    tilde_degree,
)
from .autgroup import (
    AutReport,
    CanonicalGroup,
    FinitePart,
    Verdicts,
    aut_structure,
    canonical_group,
    compose_elements,
    enumerate_finite_part,
    finite_part_from_elements,
    group_element_map,
    identity_element,
    invert_element,
    stabilizer_permutations,
    verify_automorphism,
)
from .report import build_report, sample_generator_maps

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
