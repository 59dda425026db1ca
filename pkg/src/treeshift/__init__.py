"""Bounded weighted shifts on depth-truncated rooted trees.

Submodules: ``tree`` (structures), ``ops`` (the shift operator),
``multiplier`` (symbol calculus and circle averaging), ``wold``
(kernel ladders and image geometry), ``gallery`` (named fixtures),
``cli`` (experiment runner).
"""

from .gallery import (
    GALLERY_FAMILIES,
    ClassicalWeights,
    GallerySpec,
    load_shift,
    mad_divergence_partial_sum,
    make,
    path_radius_estimate,
    path_restriction,
    random_balanced,
    t2_expected_peel_coefficient,
)
from .multiplier import (
    Symbol,
    TrigPoly,
    circle_pair_integral,
    fejer_symbol,
    gamma_apply,
    hadamard,
    kernel_l1_norm,
    mult_column,
    multiplier_norm_lower_bound,
    rotate_symbol,
    rotate_vector,
    sot_error_profile,
    SotProfile,
    SotRow,
)
from .ops import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL,
    HorizonError,
    InjectivityResult,
    PowerNormEstimate,
    TreeVector,
    TruncatedShift,
    WeightSystem,
    apply_adjoint,
    apply_shift,
    boundary_mass,
    close,
    is_injective,
    lambda_path,
    operator_norm_power,
    power_norm,
    spectral_radius_estimate,
)
from .tree import (
    FAMILY_NAMES,
    DirectedTree,
    PathSelector,
    TreeSpecError,
    build_tree,
    children_n,
    descendants,
    enumerate_paths,
    load_tree_file,
    parse_tree_spec,
)
from .wold import (
    BalanceResult,
    GramResult,
    KernelBasis,
    KernelBlock,
    WoldComponents,
    image_dim,
    image_intersection_dim,
    is_balanced,
    is_locally_power_balanced,
    kernel_basis,
    peel,
    project_kernel,
    reconstruct,
    wold_gram,
)

__version__ = "0.1.0"

__all__ = [
    "GALLERY_FAMILIES",
    "FAMILY_NAMES",
    "DEFAULT_ABS_TOL",
    "DEFAULT_REL_TOL",
    "BalanceResult",
    "ClassicalWeights",
    "DirectedTree",
    "GallerySpec",
    "GramResult",
    "HorizonError",
    "InjectivityResult",
    "KernelBasis",
    "KernelBlock",
    "PathSelector",
    "PowerNormEstimate",
    "SotProfile",
    "SotRow",
    "Symbol",
    "TreeSpecError",
    "TreeVector",
    "TrigPoly",
    "TruncatedShift",
    "WeightSystem",
    "WoldComponents",
    "apply_adjoint",
    "apply_shift",
    "boundary_mass",
    "build_tree",
    "children_n",
    "circle_pair_integral",
    "close",
    "descendants",
    "enumerate_paths",
    "fejer_symbol",
    "gamma_apply",
    "hadamard",
    "image_dim",
    "image_intersection_dim",
    "is_balanced",
    "is_injective",
    "is_locally_power_balanced",
    "kernel_basis",
    "kernel_l1_norm",
    "lambda_path",
    "load_shift",
    "load_tree_file",
    "mad_divergence_partial_sum",
    "make",
    "mult_column",
    "multiplier_norm_lower_bound",
    "operator_norm_power",
    "parse_tree_spec",
    "path_radius_estimate",
    "path_restriction",
    "peel",
    "power_norm",
    "project_kernel",
    "random_balanced",
    "reconstruct",
    "rotate_symbol",
    "rotate_vector",
    "sot_error_profile",
    "spectral_radius_estimate",
    "t2_expected_peel_coefficient",
    "wold_gram",
]
