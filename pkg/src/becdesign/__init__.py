"""Deterministic design toolkit for irregular LDPC ensembles on the BEC."""

from .ensemble import (
    DegreeDistribution,
    Ensemble,
    check_dist,
    check_regular,
    design_rate_of,
    perturb_edge_mass,
    variable_dist,
)
from .series import (
    TaylorCoefficients,
    rho_inverse,
    taylor_check_regular,
    taylor_for,
    taylor_general,
)
from .convergence import ConvergenceVerdict, check_convergent, stability_bound, threshold
from .design_eps import (
    DesignResult,
    dv_lower_bound,
    find_N_eps,
    type_a_eps,
    type_b_eps,
    type_mb_eps,
)
from .design_rate import find_N_rate, type_a_rate, type_b_rate, type_mb_rate
from .bounds import rate_upper_bound, threshold_upper_bound
from .optimizer import SearchReport, grid_search_lambda, optimize_lambda, sweep_degree_sets
from .simulator import (
    SimCurve,
    SimPoint,
    TannerGraph,
    monte_carlo,
    node_perspective,
    peel_decode,
    sample_graph,
)
from .io import load_ensemble, save_ensemble

__version__ = "0.1.0"

__all__ = [
    "DegreeDistribution", "Ensemble", "check_dist", "check_regular",
    "design_rate_of", "perturb_edge_mass", "variable_dist",
    "TaylorCoefficients", "rho_inverse", "taylor_check_regular",
    "taylor_for", "taylor_general",
    "ConvergenceVerdict", "check_convergent", "stability_bound", "threshold",
    "DesignResult", "dv_lower_bound", "find_N_eps",
    "type_a_eps", "type_b_eps", "type_mb_eps",
    "find_N_rate", "type_a_rate", "type_b_rate", "type_mb_rate",
    "rate_upper_bound", "threshold_upper_bound",
    "SearchReport", "grid_search_lambda", "optimize_lambda", "sweep_degree_sets",
    "SimCurve", "SimPoint", "TannerGraph", "monte_carlo",
    "node_perspective", "peel_decode", "sample_graph",
    "load_ensemble", "save_ensemble",
]
