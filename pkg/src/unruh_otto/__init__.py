"""Unruh quantum Otto engine with a degenerate excited level."""

__version__ = "0.1.0"

from .errors import (
    ConstraintUnsatisfiable,
    DimensionMismatch,
    DomainError,
    NonConvergence,
    PoleProximity,
    UnruhOttoError,
)
from .specfun import KernelArgs, SeriesConfig, j_kernel, lerch_phi
from .kinematics import (
    Trajectory,
    half_interaction_time,
    interaction_time,
    rindler_event,
    unruh_temperature,
    velocity,
)
from .detector import (
    DetectorSpec,
    energy,
    hamiltonian,
    initial_state,
    is_valid_state,
    monopole,
    shift_matrix,
)
from .response import (
    QuadratureConfig,
    ResponseArgs,
    delta_p_closed,
    delta_p_limit_n_inf,
    delta_p_quadrature,
    regulated_integral,
    switching,
    wightman,
)
from .cycle import (
    CycleParams,
    CycleReport,
    cal_P,
    efficiency,
    kieu_condition,
    run_cycle,
    solve_initial_population,
    step1_work,
    step2_heat,
    step3_work,
    step4_heat,
)
