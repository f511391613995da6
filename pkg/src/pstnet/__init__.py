"""Perfect state transfer design on distance-regular spin networks."""
from .catalog import load_catalog, resolve
from .dynamics import evolve, fidelity_report, full_hamiltonian, quadrature_amplitudes, quotient_hamiltonian, spin_oracle
from .graphs import check_distance_regular, distance_partition, ingest_edge_list, stratum_vectors
from .network import Network
from .scheme import build_polynomials, derive_parameters, parse_intersection_array, validate_intersection_array
from .solver import check_solution, feasibility, search_branches, solve_couplings
from .spectra import spectral_data, stieltjes

__all__ = [
    "Network", "build_polynomials", "check_distance_regular", "check_solution", "derive_parameters",
    "distance_partition", "evolve", "feasibility", "fidelity_report", "full_hamiltonian", "ingest_edge_list",
    "load_catalog", "parse_intersection_array", "quadrature_amplitudes", "quotient_hamiltonian", "resolve",
    "search_branches", "solve_couplings", "spectral_data", "spin_oracle", "stieltjes", "stratum_vectors",
    "validate_intersection_array",
]
