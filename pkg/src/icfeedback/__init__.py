"""Achievable rates and feedback-code simulation for the symmetric Gaussian
interference channel with feedback."""

from .channel import ChannelParams, NoiseSource, transmit
from .codec import (
    CodeSchedule,
    DecodedInterval,
    SessionResult,
    decode,
    encode_init,
    encode_step,
    ifs_map,
    run_session,
    schedule_from_solution,
    schedule_no_interference,
)
from .covariance import (
    CovarianceState,
    TransientSchedule,
    eigencheck,
    identity_state,
    recurse,
    recurse_matrix,
    transient_schedule,
)
from .hadamard import (
    HadamardMatrix,
    ModulationColumn,
    build_hadamard,
    column_rotation,
    modulation_vector,
)
from .rates import (
    QuarticCoefficients,
    RateSolution,
    gdof_closed_form,
    gdof_numeric,
    gdof_params,
    kramer_equal_gain,
    kramer_two_user,
    minimize_g_lambda,
    quartic_beta,
    quartic_coefficients,
    quartic_solutions,
    rate_no_interference,
    rate_two_user,
    steady_state_lambda,
    theorem2_coeffs,
    theorem3_rate,
    verify_theorem2,
)

__version__ = "0.1.0"
