"""Warm-started matching, shortest-path and max-flow solvers driven by predicted duals."""

from .errors import (
    WarmstartError,
    InvariantViolation,
    InfeasibleDual,
    NoPerfectMatching,
    NoPerfectBMatching,
    NegativeCycleError,
    Disconnected,
    InfeasibleBounds,
    NoCompleteDCS,
    NoFlowOfValueV,
    InvalidWarmLabeling,
    EmptyTrainingSet,
    DimensionMismatch,
    GenerationFailed,
    InvalidParams,
    OracleTooLarge,
    ParseError,
)
from .graphcore import (
    BipartiteInstance,
    DirectedLengthGraph,
    FlowNetwork,
    FlowState,
    OpCounters,
    bellman_ford,
    edmonds_karp_oracle,
)
from .matching import (
    MatchingResult,
    optimal_bmatching_dual,
    optimal_matching_dual,
    repair_matching_duals,
    solve_mwbm,
    solve_mwpm,
)
from .predict import (
    ErrorReport,
    InstanceFamily,
    SplitMix64,
    batch_median_predictor,
    gen_drift_family,
    measure_error,
    online_predictor,
    sample_complexity_estimate,
)
from .pushrelabel import (
    PreflowPrediction,
    fix_preflow,
    hl_push_relabel,
    make_acyclic,
    shortest_path_labeling,
)
from .reductions import (
    DCSInstance,
    detect_negative_cycle_via_matching,
    reduce_01flow_to_dcs,
    reduce_dcs_to_matching,
    reduce_sp_to_matching,
    solve_01flow,
    solve_dcs,
)
from .spaths import (
    apsp_with_prediction,
    diameter_with_prediction,
    re_feasible,
    round_re_duals,
    sssp_with_dual,
)

__version__ = "0.1.0"
