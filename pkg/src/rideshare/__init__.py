"""Online ridesharing: optimal waiting times and pool matching on a grid road network."""

from .demand import (
    ArrivalProcess,
    BBox,
    ODDistribution,
    TripRecord,
    estimate_kde,
    ingest_records,
    next_interarrival,
    sample_passenger,
    window_arrival_prob,
)
from .engine import Assignment, PassengerLog, SimReport, commit_pair, generate_stream, run, simulate
from .matching import Matching, SavingsGraph, build_savings_graph, max_weight_matching
from .metrics import (
    ExperimentResult,
    constant_wait_run,
    cost_reduction,
    epsilon_sweep,
    offline_greedy,
    online_run,
    wait_stats,
)
from .roadnet import GridNetwork, build_grid, shortest_len, shortest_path
from .sharing import (
    Passenger,
    RideOrder,
    SharedQuote,
    best_shared,
    compatible,
    is_feasible_pair,
    make_passenger,
    order_cost,
    pair_cost,
    solo_cost,
)
from .waiting import WaitObjectiveCurve, WaitOptimizer, gamma, optimal_wait, psi

__version__ = "0.1.0"
