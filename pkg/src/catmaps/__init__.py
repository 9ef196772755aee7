"""Finite-dimensional quantization of integer symplectic torus maps:
explicit unitaries on C^N, exact coset-sum traces, theta-function
numerics, and spectral/ergodicity statistics.
"""

from . import conventions
from .errors import (
    CatmapsError,
    ConsistencyError,
    DegenerateMapError,
    DimensionError,
    NonSymplecticError,
    NotApplicableError,
    NumericalContractError,
    ParityWarning,
    PeriodNotFoundError,
    ResampleError,
)
from .heisenberg import (
    HeisenbergElement,
    UnitaryOperator,
    heisenberg_multiply,
    implemented_cocycle,
    projective_rep_check,
    split,
    splitting_phase,
    weyl_matrix,
    weyl_operator,
)
from .quantize import (
    QuantizedMap,
    averaging_intertwiner,
    cocycle,
    egorov_defect,
    egorov_residual,
    quantize,
    quantize_S,
    quantize_T,
    quantize_generator_word,
    quantize_transformation_law,
    unitarity_multiplier,
)
from .spectral import (
    ErgodicityReport,
    SpectralReport,
    eig_unitary,
    equidistribution_stats,
    ergodicity_variance,
    is_hyperbolic,
    matrix_element_parseval,
    offdiagonal_sums,
    phase_multiplicities,
    quantum_period,
    spectral_report,
    star_discrepancy,
)
from .symplectic import (
    CosetSystem,
    IntegerSymplecticMatrix,
    arithmetic_period,
    congruent_mod_lattice,
    coset_representatives,
    generator_decomposition,
    is_integer_symplectic,
    theta_group_member,
    word_product,
)
from .theta import (
    LawFit,
    ThetaEvalParams,
    default_radius,
    fitted_law_matrix,
    gaussian_overlap,
    law_coefficient_matrix,
    projector_composition_factor,
    theta_eval,
    theta_inner_product,
    transformation_law_residual,
)
from .trace import (
    TraceReport,
    fixed_point_trace,
    gauss_sum,
    trace_compare,
    trace_phase_calibration,
)

__version__ = "0.1.0"

S = IntegerSymplecticMatrix.from_abcd(0, -1, 1, 0)
T = IntegerSymplecticMatrix.from_abcd(1, 1, 0, 1)
ARNOLD = IntegerSymplecticMatrix.from_abcd(2, 1, 1, 1)
