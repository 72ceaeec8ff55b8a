"""Entanglement between two M-mode optical systems from beam-split single photons.

Builds the states, lifts mode unitaries (DFT, cyclic shift, beam splitters)
to Fock space through permanents, and evaluates correlation-fidelity
entanglement witnesses exactly.
"""

from .entangle import (StratifiedState, gaussian_partition_estimate, generate_psi,
                       partition_probability, phi_partition, schmidt_rank)
from .fock import (DomainError, FockBasis, MixedEnsemble, PhotonPattern, PureState,
                   ResourceError, basis_state, enumerate_basis, joint_probability, mix,
                   pattern_state, tensor, uniform_mixture)
from .linop import (FockUnitary, ModeUnitary, apply, beam_splitter_matrix, dft_matrix,
                    fock_amplitude, lift, mode_shift_matrix, permanent)
from .patterns import (PatternClass, class_eigenstate, complementary_class,
                       decompose_dft_output, k_value, pattern_class, pattern_classes)
from .witness import (WitnessReport, basic_bound, evaluate, fidelity_dft, fidelity_input,
                      mixture_threshold, pattern_defect, state_fidelity_thresholds,
                      witness_operator)

__version__ = "0.1.0"
