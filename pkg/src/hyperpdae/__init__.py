"""Singularly perturbed hyperbolic PDAEs, their parabolic limit and eps-expansion."""
from .core import (
    DiscretePdae,
    Forcing,
    InconsistentInitialValue,
    OperatorConstants,
    PdaeError,
    SingularSystemError,
    State,
    TimeGrid,
    Trajectory,
    assemble_schur,
    check_energy_estimate,
    consistency_defect,
    estimate_constants,
    recover_multiplier,
    solve_auxiliary,
    solve_eps_system,
)
from .expansion import (
    ExpansionBundle,
    exact_correction_trajectory,
    exact_mode_trajectories,
    hat_solution,
    solve_correction_system,
    solve_limit_system,
)
from .metrics import ErrorTable, Measure, bochner_l2, bochner_linf, error_report
from .pipe import InitialDataPreset, PipeBasis, build_pipe_system, initial_data, trace_multiplier_reference
from .sweep import RateTable, SweepConfig, epsilon_grid, estimate_rates, figure_preset, run_sweep

__version__ = "0.1.0"
