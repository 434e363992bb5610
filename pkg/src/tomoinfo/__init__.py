"""Information content of quantum state tomography measurement designs."""

from ._accel import USE_NUMBA
from .bases import (
    CompositeDimensionError,
    MeasurementDesign,
    OrthonormalBasis,
    SyntheticTableError,
    TransitionTable,
    haar_random_basis,
    krsw_table,
    mub_prime,
    perturb_basis,
    perturb_design,
    random_design,
    standard_basis,
    transition_table,
    two_value_table,
)
from .gram import (
    GramMatrix,
    InfoReport,
    ReducedMatrix,
    SingularDesignError,
    det_gamma0,
    fischer_bound,
    forward_probabilities,
    gram_from_coords,
    gram_matrix,
    info_report,
    information,
    optimize_design,
    reconstruct_state,
    reduced_matrix,
    two_value_spectrum,
)
from .hermitian import determinant, hs_inner, outcome_probability, projector, sym_eigen
from .lindley import DiscreteExperiment, average_info, design_experiment, marginal, pointwise_info

__version__ = "0.1.0"
