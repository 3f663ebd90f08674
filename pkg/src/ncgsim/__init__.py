"""Sequential-move selfish network creation games.

Exact cost evaluation over owned graphs, per-game strategy spaces and best
responses, sequential best-response dynamics with move policies, a catalog
of machine-certified best-response-cycle instances, and a desk-scale
experiment harness for the empirical convergence studies.
"""

from .netcore import (
    Cost,
    Game,
    GameConfig,
    INFINITY,
    Metric,
    NEG_INFINITY,
    OwnedNetwork,
    agent_cost,
    cost_profile,
    parse_network,
    shortest_path_distances,
    social_cost,
    write_network,
)
from .games import (
    Buy,
    Delete,
    FeasibilityVerdict,
    Move,
    MultiSwap,
    Replace,
    Swap,
    admissible_moves,
    apply_move,
    best_responses,
    bilateral_feasibility,
    improving_moves,
    move_delta,
    unhappy_agents,
)
from .dynamics import (
    AnyImproving,
    BestResponse,
    MaxCost,
    Random,
    RoundRobin,
    RunOutcome,
    RunTrace,
    Scripted,
    detect_recurrence,
    potential_value,
    run,
    select_mover,
    step,
)
from .instances.catalog import CATALOG_NAMES, catalog_instance, certify_cycle
from .instances.canon import canonical_form, isomorphic
from .instances.generators import (
    gen_bounded_budget,
    gen_path,
    gen_random_network,
    gen_random_tree,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
