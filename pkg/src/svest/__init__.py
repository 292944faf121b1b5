"""Set-valued state estimation on finite and hybrid state machines."""

from .decentralized import DecentralizedEstimator, FusionResult, compare_exhaustive, verify_exactness
from .decomposition import (
    AggregationFunction,
    AggregationSuite,
    ChainPartition,
    NotChainDecomposable,
    aggregate_string,
    build_distributed,
    chain_partition,
    check_consistency,
    invert_string,
    is_nondeterministic_chain,
    synthesize_suite,
)
from .estimator import (
    EstimatePair,
    EstimatorState,
    brute_force_estimate,
    chi_symbol,
    estimate,
    estimate_incremental,
    rho_hat,
)
from .lcomplete import FiniteSource, build_lcomplete, complexity_report, online_estimate
from .machine import (
    BudgetExceeded,
    FiniteStateMachine,
    MachineError,
    UnknownSymbol,
    enumerate_runs,
    is_feasible,
    validate,
)

__version__ = "0.1.0"
