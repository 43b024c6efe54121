"""Tolerant quantum k-junta testing, simulated at desk scale."""

__version__ = "0.1.0"

from .cj import SamplerBackend, UnitaryOracle, build_cj, epr_projection_probability, sample_influence_bit
from .estimator import EstimatorConfig, build_estimates, sample_pool
from .instances import InstanceSpec, gen_exact_junta, gen_haar, gen_perturbed_junta
from .metric import dist, dist_to_k_juntas, nearest_junta_distance
from .partition import QubitPartition, phi, random_partition, rho_biased_subset, rho_subset_influence_exact
from .pauli import DenseUnitary, PauliIndex, PauliSpectrum, decompose, influence_exact, pauli_matrix
from .tester import TesterConfig, Verdict, query_count, run_part_junta_tester, run_tolerant_tester

__all__ = [
    "DenseUnitary", "EstimatorConfig", "InstanceSpec", "PauliIndex", "PauliSpectrum", "QubitPartition",
    "SamplerBackend", "TesterConfig", "UnitaryOracle", "Verdict", "build_cj", "build_estimates",
    "decompose", "dist", "dist_to_k_juntas", "epr_projection_probability", "gen_exact_junta", "gen_haar",
    "gen_perturbed_junta", "influence_exact", "nearest_junta_distance", "pauli_matrix", "phi", "query_count",
    "random_partition", "rho_biased_subset", "rho_subset_influence_exact", "run_part_junta_tester",
    "run_tolerant_tester", "sample_influence_bit", "sample_pool",
]
