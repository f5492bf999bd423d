"""Goal-directed action encoding, recognition, and evolutionary execution."""

from .constraints import (
    BoundingBox,
    ConstraintSet,
    PenaltyStrategy,
    VelocityLimit,
    apply_penalty,
    build_box,
    feasible_position,
    feasible_velocity,
)
from .errors import CgdaError
from .evolvers import (
    EvalBudget,
    Individual,
    OptimizerConfig,
    OptimizerResult,
    run_optimizer,
)
from .iet import ExecutionPlan, GoalResult, RunReport, goal_fitness, iet_execute
from .recognition import CostMatrix, WarpPath, cost_matrix, discrepancy, optimal_path_cost
from .simenv import (
    EnvState,
    KinematicChain,
    Link,
    WallGrid,
    default_chain,
    forward_kinematics,
    mental_execution,
    paint_features,
    reset,
    wax_features,
)
from .trajectory import (
    Demonstration,
    FeatureTrajectory,
    GeneralizedAction,
    RbfInterpolant,
    compute_goal_count,
    fit_rbf,
    generalize,
    load_demonstration_csv,
    resample,
    sample_action,
)

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "CgdaError",
    "ConstraintSet",
    "CostMatrix",
    "Demonstration",
    "EnvState",
    "EvalBudget",
    "ExecutionPlan",
    "FeatureTrajectory",
    "GeneralizedAction",
    "GoalResult",
    "Individual",
    "KinematicChain",
    "Link",
    "OptimizerConfig",
    "OptimizerResult",
    "PenaltyStrategy",
    "RbfInterpolant",
    "RunReport",
    "VelocityLimit",
    "WallGrid",
    "WarpPath",
    "apply_penalty",
    "build_box",
    "compute_goal_count",
    "cost_matrix",
    "default_chain",
    "discrepancy",
    "feasible_position",
    "feasible_velocity",
    "fit_rbf",
    "forward_kinematics",
    "generalize",
    "goal_fitness",
    "iet_execute",
    "load_demonstration_csv",
    "mental_execution",
    "optimal_path_cost",
    "paint_features",
    "reset",
    "resample",
    "run_optimizer",
    "sample_action",
    "wax_features",
]
