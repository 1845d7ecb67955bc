"""Geometry and dynamics of reducible Pisot substitutions.

The pipeline: a substitution is split into its Pisot and neutral spectral
parts (`algebra`, `projections`), lifted to dual maps on integer wedge faces
(`chains`, `dualmaps`), classified by the geometric regularity hypotheses and
grown into stepped surfaces (`geometry`), approximated as Rauzy fractals and
tilings (`fractal`), and finally run as symbolic/measured dynamics: strong
coincidence, numeration clouds, domain exchanges and first returns
(`dynamics`).  `svg` renders figures, `cli` ties everything together.
"""

from .algebra import PisotData, pisot_split
from .chains import Chain, boundary, poincare_phi, poincare_phi_inv, wedge_types
from .dualmaps import E_geom, E_k, E_k_star, exterior_matrices
from .dynamics import (
    chi_apply,
    coding_cross_check,
    dumont_thomas_cloud,
    exchange_orbit,
    first_return_check,
    modified_cloud,
    modified_partition,
    strong_coincidence,
)
from .fractal import (
    ApproxTile,
    decomposition_check,
    hausdorff_distance,
    measure_eigen_check,
    periodic_audit,
    rauzy_approx,
    self_replicating_audit,
    set_equation_check,
    tiling_audit,
    two_oracle_check,
)
from .geometry import (
    Patch,
    check_nice,
    periodic_candidates,
    projects_well,
    stepped_surface,
    surround_check,
)
from .projections import Projections, kernel_lattice, projections
from .substitution import (
    Substitution,
    format_substitution,
    hokkaido_family,
    incidence_matrix,
    nonprojecting_family,
    parse_substitution,
    tribonacci,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxTile",
    "Chain",
    "E_geom",
    "E_k",
    "E_k_star",
    "Patch",
    "PisotData",
    "Projections",
    "Substitution",
    "boundary",
    "check_nice",
    "chi_apply",
    "coding_cross_check",
    "decomposition_check",
    "dumont_thomas_cloud",
    "exchange_orbit",
    "exterior_matrices",
    "first_return_check",
    "format_substitution",
    "hausdorff_distance",
    "hokkaido_family",
    "incidence_matrix",
    "kernel_lattice",
    "measure_eigen_check",
    "modified_cloud",
    "modified_partition",
    "nonprojecting_family",
    "parse_substitution",
    "periodic_audit",
    "periodic_candidates",
    "pisot_split",
    "poincare_phi",
    "poincare_phi_inv",
    "projections",
    "projects_well",
    "rauzy_approx",
    "self_replicating_audit",
    "set_equation_check",
    "stepped_surface",
    "strong_coincidence",
    "surround_check",
    "tiling_audit",
    "tribonacci",
    "two_oracle_check",
    "wedge_types",
]
