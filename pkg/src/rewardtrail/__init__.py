"""Graph-world evaluation environments with Good/Evil reward trails.

Spaces are directed labeled graphs described by a compact text codec;
two system agents drop a positive and a negative decaying reward trail
while evaluated agents (synthetic, scripted, human or remote) collect
them.  The package covers space parsing and generation, the exact
session dynamics, scoring and balance/sensitivity checking, experiment
suites, and a turn-based HTTP service for live sessions.
"""

from .agents import (
    AgentIdentity,
    GeneratorBehavior,
    HistoryBuffer,
    InteractionRecord,
    Role,
    generator_next,
    observer_choice,
    push_interaction,
    random_choice,
)
from .evaluate import (
    BalanceEstimate,
    DeterministicWorld,
    MANUAL_SPACES,
    SensitivityReport,
    SuiteReport,
    SuiteSpec,
    average_reward,
    check_reward_sensitivity,
    estimate_balance,
    run_suite,
    suite_names,
    suite_preset,
    universal_score,
)
from .generate import (
    GeneratedSpace,
    GenerationError,
    GenerationLimits,
    generate_space,
    generate_space_description,
    sample_bounded_geometric,
)
from .seeding import derive_seed
from .session import (
    AgentSpec,
    ExternalPolicy,
    Observation,
    ObserverPolicy,
    RandomPolicy,
    ScriptedPolicy,
    SessionConfig,
    SessionError,
    SessionResult,
    advance_interaction,
    begin_interaction,
    complete_interaction,
    init_session,
    relocate_generators,
    resolve_collision,
    run_session,
    serialize_observation,
    session_result,
    snapshot_observation,
    trace_table,
)
from .space import (
    ConnectivityClass,
    Space,
    SpaceFormatError,
    SpaceObject,
    connectivity_class,
    graph_equal,
    parse_space,
    serialize_space,
    transition,
)

__version__ = "0.1.0"
