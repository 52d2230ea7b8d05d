"""Exact evaluation, learning, and experiments for classification when
rejected points can move along a manipulation graph to get accepted.

The library works on finite instances so every quantity of interest --
losses, distances, dimensions, optima -- is computed exactly; Monte Carlo
enters only where sample complexity itself is the object of study.
"""

from .config import RunConfig, build_scenario, load_config, resolve_workers
from .domain import (
    CostModel,
    FiniteDomain,
    Hypothesis,
    HypothesisClass,
    LabeledDistribution,
    LabeledSample,
    ManipulationGraph,
    constant_class,
    coordinate_norm_cost,
    enumerate_class,
    explicit_class,
    halfspace_class,
    induce_graph,
    neighbors,
    singleton_class,
    thresholds_class,
)
from .errors import (
    BoundViolationError,
    CapacityError,
    ConfigError,
    DomainMismatchError,
    EmptyClassError,
    EmptySampleError,
    InvalidCostModelError,
    InvalidDistributionError,
    MissingCoordinatesError,
    NoIncentiveCompatibleError,
    NotInClassError,
    RealizabilityError,
    StrategiaError,
    UndefinedBurdenError,
)
from .experiments import (
    CheckResult,
    ExperimentResult,
    available_experiments,
    describe_hypothesis,
    eval_table,
    run_experiment,
    vc_table,
)
from .graphdist import (
    GraphClass,
    GraphLearnerOutput,
    GraphSample,
    SurrogateBoundReport,
    draw_graph_sample,
    empirical_distance,
    empirical_graph_loss,
    empirical_sample_distance,
    graph_erm,
    graph_loss,
    hpx_distance,
    read_graph_sample,
    surrogate_bounds,
    true_graph_loss,
    write_graph_sample,
)
from .learners import (
    LearnerOutput,
    draw_sample,
    erm,
    ic_erm,
    performative_erm,
    singleton_learner,
    splitmix64,
    trial_seed,
)
from .losses import (
    LossKind,
    SocialBurden,
    approximation_error,
    binary_loss,
    class_component_matrix,
    component_vector,
    effective_hypothesis,
    empirical_loss,
    expected_loss,
    is_incentive_compatible,
    loss_table,
    reach_positive,
    social_burden,
    strategic_component_loss,
    strategic_loss,
)
from .results import ResultTable, format_value
from .scenarios import (
    Scenario,
    gen_component_case,
    gen_example1,
    gen_example2,
    gen_obs1,
    gen_random,
    obs1_distribution,
    obs1_indices,
)
from .vcdim import (
    SetSystem,
    VcReport,
    class_system,
    graph_loss_class,
    is_shattered,
    loss_class,
    loss_set,
    pair_ground,
    vc_dimension,
)

__version__ = "0.1.0"

__all__ = [
    "BoundViolationError",
    "CapacityError",
    "CheckResult",
    "ConfigError",
    "CostModel",
    "DomainMismatchError",
    "EmptyClassError",
    "EmptySampleError",
    "ExperimentResult",
    "FiniteDomain",
    "GraphClass",
    "GraphLearnerOutput",
    "GraphSample",
    "Hypothesis",
    "HypothesisClass",
    "InvalidCostModelError",
    "InvalidDistributionError",
    "LabeledDistribution",
    "LabeledSample",
    "LearnerOutput",
    "LossKind",
    "ManipulationGraph",
    "MissingCoordinatesError",
    "NoIncentiveCompatibleError",
    "NotInClassError",
    "RealizabilityError",
    "ResultTable",
    "RunConfig",
    "Scenario",
    "SetSystem",
    "SocialBurden",
    "StrategiaError",
    "SurrogateBoundReport",
    "UndefinedBurdenError",
    "VcReport",
    "approximation_error",
    "available_experiments",
    "binary_loss",
    "build_scenario",
    "class_component_matrix",
    "class_system",
    "constant_class",
    "coordinate_norm_cost",
    "describe_hypothesis",
    "draw_graph_sample",
    "draw_sample",
    "effective_hypothesis",
    "empirical_distance",
    "empirical_graph_loss",
    "empirical_loss",
    "empirical_sample_distance",
    "enumerate_class",
    "erm",
    "eval_table",
    "expected_loss",
    "explicit_class",
    "format_value",
    "gen_component_case",
    "gen_example1",
    "gen_example2",
    "gen_obs1",
    "gen_random",
    "graph_erm",
    "graph_loss",
    "graph_loss_class",
    "halfspace_class",
    "hpx_distance",
    "ic_erm",
    "induce_graph",
    "is_incentive_compatible",
    "is_shattered",
    "load_config",
    "loss_class",
    "loss_set",
    "loss_table",
    "neighbors",
    "obs1_distribution",
    "obs1_indices",
    "pair_ground",
    "performative_erm",
    "reach_positive",
    "read_graph_sample",
    "resolve_workers",
    "run_experiment",
    "singleton_class",
    "singleton_learner",
    "social_burden",
    "splitmix64",
    "strategic_component_loss",
    "strategic_loss",
    "surrogate_bounds",
    "thresholds_class",
    "trial_seed",
    "true_graph_loss",
    "vc_dimension",
    "vc_table",
    "write_graph_sample",
]
