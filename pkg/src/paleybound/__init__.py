"""Certified upper bounds on Paley graph clique numbers.

Builds the symmetry-reduced block-diagonal SDP relaxation of the stable-set
number (equal to the clique number by self-complementarity), solves it with a
barrier interior-point method, and cross-validates against the analytic
Lovasz theta value sqrt(p), the closed-form bound (sqrt(2p-1)+1)/2, and an
exact branch-and-bound clique solver.
"""

from .clique import CliqueResult, clique_number
from .model import L2Instance, inclusion_exclusion, reduce_and_assemble
from .orbits import TriangleOrbitSet, enumerate_orbits, indicator_matrix, orbit_of_triangle
from .paley import (
    PaleyGraph,
    build_graph,
    complement_isomorphism,
    hp_bound,
    quadratic_residues,
    theta_eigenvalue,
)
from .report import BoundsRecord, FitResult, fit_power, run_prime, run_range
from .sdpa import export_interchange, read_sdpa
from .solver import (
    SdpProblem,
    SdpSolution,
    SolverConfig,
    SolverStatus,
    check_certificate,
    lovasz_theta_sdp,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "PaleyGraph",
    "build_graph",
    "quadratic_residues",
    "complement_isomorphism",
    "hp_bound",
    "theta_eigenvalue",
    "CliqueResult",
    "clique_number",
    "TriangleOrbitSet",
    "enumerate_orbits",
    "indicator_matrix",
    "orbit_of_triangle",
    "L2Instance",
    "reduce_and_assemble",
    "inclusion_exclusion",
    "export_interchange",
    "read_sdpa",
    "SdpProblem",
    "SdpSolution",
    "SolverConfig",
    "SolverStatus",
    "solve",
    "check_certificate",
    "lovasz_theta_sdp",
    "BoundsRecord",
    "FitResult",
    "run_prime",
    "run_range",
    "fit_power",
    "__version__",
]
