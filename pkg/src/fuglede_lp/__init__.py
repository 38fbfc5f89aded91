"""Delsarte-type bounds, blocking sets and spectral/tiling searches in Z_p^3."""

from ._field import Prime, canonical, is_prime
from .delsarte import (
    BalancedFunction,
    ExclusionInterval,
    WitnessReport,
    delsarte_bound,
    excluded_cardinalities,
    is_witness,
    proj_fourier,
    section5_ratio,
    section5_witness,
    spectral_exclusion_threshold,
    tfold_witness,
    witness_report,
)
from .lp_witness import LPSolution, WitnessLP, optimize_witness, verify_certificate
from .projective_plane import (
    ProjLine,
    ProjSet,
    dual_line,
    enumerate_points,
    is_blocking,
    is_minimal,
    min_blocking_size_bruteforce,
    minimalize,
    projective_triangle,
    projectivize,
    random_blocking_set,
    random_minimal_blocking_set,
    size_bounds_hold,
    smallest_minimalized,
    tfold_minimal_upper_bound_holds,
    verify_size_bounds,
)
from .structure_search import (
    SearchBudget,
    SearchOutcome,
    exhaustive_fuglede_check,
    find_spectrum,
    is_tile,
    spectrum_of_tile,
    tiles_with,
    verify_charspec,
)
from .zp3_fourier import (
    GroupFunction,
    GroupSet,
    balance_symmetrize,
    check_spectral_pair,
    convolve,
    fourier_transform,
    inverse_transform,
    level_counts,
    trace_weight,
    zero_set,
)

__version__ = "0.1.0"
