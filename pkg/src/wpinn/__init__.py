"""Adversarially weighted physics-informed networks for PDE control reconstruction.

Reconstructs internal and bilinear controls of semilinear heat and wave
equations by residual minimization, either with the standard PINN loss or with
adaptive weight networks trained adversarially against the solution and
control networks.
"""

from .fd import FdConfig, fd_dt, fd_dtt, fd_dxixi, fd_laplacian, fd_laplacian_parts
from .geometry import (
    DataFunctions,
    Domain,
    Region,
    Situation,
    TrainBatch,
    centered_cube,
    indicator,
    indicator_batch,
    sample_batch,
    sample_boundary,
    sample_interior,
    sample_slice,
    situation_data,
    unit_ball,
    whole_domain,
)
from .losses import (
    LossBreakdown,
    ProblemSpec,
    WeightBundle,
    constant_weight_bundle,
    loss_and_grads,
    loss_heat,
    loss_wave,
    make_problem,
    make_weight_bundle,
    penalty,
    residual_point_heat,
    residual_point_wave,
    training_loss,
    weight_roles,
)
from .metrics import ErrorReport, test_error, test_error_heat, test_error_wave
from .nets import (
    Mlp,
    MlpGrads,
    backprop,
    backprop_batch,
    forward,
    forward_batch,
    init_params,
    relu3,
    sigmoid,
)
from .training import (
    AdamState,
    NonFiniteGradient,
    TrainConfig,
    TrainingReport,
    adam_init,
    adam_step,
    init_nets,
    init_states,
    minmax_iteration,
    train,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
