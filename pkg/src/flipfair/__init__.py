"""flipfair: exact fair division into fixed-size bundles, flip-based fairness.

A library and CLI for allocating k*n indivisible goods to n agents so that
every agent receives exactly k items, auditing the result against flip-based
envy criteria (EFF1, EFFX and their gamma-approximations) and the classic
removal-based EF1/EFX, and exactly verifying optimal rules (Nash welfare,
leximin, social welfare, Pareto optimality) by brute-force enumeration.
"""

from .core import (
    Allocation,
    AllocationError,
    Instance,
    InstanceError,
    PartialAllocation,
    Rational,
    allocation_from_lists,
    allocation_to_lists,
    format_rational,
    make_instance,
    parse_allocation,
    parse_instance,
    parse_rational,
    serialize_allocation,
    serialize_instance,
    validate_allocation,
    value_of,
)
from .audit import (
    AuditReport,
    EnvyGraph,
    RationalFlip,
    allocation_gamma,
    audit_allocation,
    build_envy_graph,
    pair_ef1_removal,
    pair_efx_removal,
    pair_gamma_ef,
    pair_gamma_eff1,
    pair_gamma_effx,
    rational_flips,
)
from .algorithms import (
    AlgorithmRun,
    InvariantViolation,
    PickSequence,
    PrivilegedState,
    ScriptError,
    SelectionScript,
    balanced_round_robin_k2,
    ece_k,
    ece_swaps,
    eliminate_envy_cycles,
    generalized_round_robin,
    operation_counter,
    round_robin,
    run_ece_k,
    run_ece_swaps,
)
from .solvers import (
    BudgetExceeded,
    ObjectiveResult,
    allocation_count,
    effx_exists,
    enumerate_allocations,
    is_pareto_optimal,
    leximin,
    max_nash_welfare,
    max_social_welfare,
)
from .generators import Classification, FamilySpec, classify, generate, individual_rho
from .fixtures import Fixture, check_fixture, fixture_names, load_fixture

__version__ = "0.1.0"
