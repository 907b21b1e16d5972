"""corrchan: capacity of a two-slot optical channel with correlated
polarization noise, with closed-form bounds, Monte Carlo cross-checks,
shot-level simulation and a reporting CLI."""

__version__ = "0.1.0"

from .capacity import (CapacityBreakdown, Chi2Bound, CRange, WernerEnsemble,
                       brute_force_chi2, capacity_breakdown, capacity_curve,
                       chi0, chi1, chi2_bound, chi2_closed_form,
                       combine_subspace_capacities, crange, f_of_c,
                       holevo_of_werner_ensemble, optimal_input_ensemble)
from .channel import (ChannelMap, NoiseModel, OnePhotonBlockSummary,
                      apply_transfer, lambda_dep_analytic, lambda_full,
                      lambda_perf_analytic, mc_transfer_matrix,
                      one_photon_summary)
from .exceptions import ContractError, ConvergenceError, InvalidStateError
from .group import (GroupElementU2, OrthogonalityEstimate, WignerD, compose,
                    haar_sample, identity, inverse, mc_orthogonality,
                    pair_slot_unitary, slot_unitary, spin1_matrix,
                    two_slot_unitary, wigner_d)
from .measurement import (BinaryChannelStats, SaturationReport,
                          ShotSimulationResult, SingletTripletMeasurement,
                          channel_stats, conditional_probs,
                          mutual_information, one_photon_slot_detection,
                          optimal_prior, saturation_check, simulate_shots)
from .protocol import (TrainProtocolConfig, extended_rate,
                       optimize_photon_probability, pair_information)
from .qstate import (BlockDecomposition, DensityOperator, StateEnsemble,
                     embed_block, holevo_quantity, ket,
                     polarization_product_ket, random_density,
                     truncate_to_blocks, two_photon_ket, von_neumann_entropy,
                     werner_parameter, werner_state)
from .verify import SUITE_ORDER, run_suites
