"""Move policies, the sequential-move runner and recurrence detection.

A run repeatedly lets the policy pick an unhappy agent and the selector pick
one of her improving moves, until no agent is unhappy (Converged), a state
repeats (CycleDetected) or the step budget runs out (StepLimit).  Policies
and selectors are deterministic given their seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .netcore import (
    Cost,
    Game,
    GameConfig,
    OwnedNetwork,
    agent_cost,
    cost_profile,
    social_cost,
)
from .games import (
    Buy,
    Delete,
    Move,
    Swap,
    apply_move,
    best_responses,
    improving_moves,
    is_admissible,
    is_feasible,
    is_unhappy,
    move_delta,
    move_from_str,
    move_to_str,
)
from .instances.canon import canonical_form
from .rng import SplitMix64


# -- policies ----------------------------------------------------------------


@dataclass
class MaxCost:
    """Let an unhappy agent of maximal cost move; ties per tiebreak."""

    tiebreak: str = "min-id"  # or "random"
    seed: int = 0

    def __post_init__(self) -> None:
        self._rng = SplitMix64(self.seed)


@dataclass
class Random:
    """Pick uniformly among agents, eliminating happy ones until a hit."""

    seed: int = 0

    def __post_init__(self) -> None:
        self._rng = SplitMix64(self.seed)


@dataclass
class RoundRobin:
    """Cycle through agent ids, starting after the previous mover."""

    _next: int = 0


@dataclass
class Scripted:
    """Replay a fixed move list; optionally check post-state digests."""

    moves: list[Move]
    expected_digests: Optional[list[str]] = None
    _pos: int = 0


MovePolicy = Union[MaxCost, Random, RoundRobin, Scripted]


@dataclass
class BestResponse:
    """Play an optimal move; break ties per the configured rule.

    Tiebreaks: "random" (uniform over the optimum set), "op-preference"
    (deletions before swaps before additions, then random) and "canonical"
    (the deterministic minimum: deletions, then swaps ordered by new
    neighbor, then additions; for swap games this picks the smallest target
    id, the rule of the path lower-bound run).
    """

    tiebreak: str = "random"
    seed: int = 0

    def __post_init__(self) -> None:
        self._rng = SplitMix64(self.seed)


@dataclass
class AnyImproving:
    """Play the first improving move in seeded-random candidate order."""

    seed: int = 0

    def __post_init__(self) -> None:
        self._rng = SplitMix64(self.seed)


MoveSelector = Union[BestResponse, AnyImproving]


def _op_rank(mv: Move) -> int:
    if isinstance(mv, Delete):
        return 0
    if isinstance(mv, Swap):
        return 1
    if isinstance(mv, Buy):
        return 2
    return 3


def _canonical_move_key(mv: Move):
    if isinstance(mv, Delete):
        return (0, mv.target, 0)
    if isinstance(mv, Swap):
        return (1, mv.new, mv.old)
    if isinstance(mv, Buy):
        return (2, mv.target, 0)
    return (3, move_to_str(mv), 0)


def select_mover(
    net: OwnedNetwork, policy: MovePolicy, cfg: GameConfig
) -> Optional[int]:
    """The agent the policy allows to move, or None if the state is stable."""
    if isinstance(policy, Scripted):
        if policy._pos >= len(policy.moves):
            return None
        return policy.moves[policy._pos].mover
    if isinstance(policy, MaxCost):
        costs = [(agent_cost(net, u, cfg), u) for u in range(net.n)]
        groups: dict[Cost, list[int]] = {}
        for c, u in costs:
            groups.setdefault(c, []).append(u)
        for c in sorted(groups, reverse=True):
            members = sorted(groups[c])
            if policy.tiebreak == "random":
                policy._rng.shuffle(members)
            for u in members:
                if is_unhappy(net, u, cfg):
                    return u
        return None
    if isinstance(policy, Random):
        candidates = list(range(net.n))
        while candidates:
            u = candidates.pop(policy._rng.randint(len(candidates)))
            if is_unhappy(net, u, cfg):
                return u
        return None
    if isinstance(policy, RoundRobin):
        for k in range(net.n):
            u = (policy._next + k) % net.n
            if is_unhappy(net, u, cfg):
                policy._next = (u + 1) % net.n
                return u
        return None
    raise TypeError(f"unknown policy {policy!r}")


def select_move(
    net: OwnedNetwork, u: int, selector: MoveSelector, cfg: GameConfig
) -> Optional[Move]:
    if isinstance(selector, BestResponse):
        _, moves = best_responses(net, u, cfg)
        if not moves:
            return None
        if selector.tiebreak == "canonical":
            return min(moves, key=_canonical_move_key)
        if selector.tiebreak == "op-preference":
            best_rank = min(_op_rank(m) for m in moves)
            moves = [m for m in moves if _op_rank(m) == best_rank]
        return moves[selector._rng.randint(len(moves))]
    if isinstance(selector, AnyImproving):
        imp = improving_moves(net, u, cfg)
        if not imp:
            return None
        return imp[selector._rng.randint(len(imp))][0]
    raise TypeError(f"unknown selector {selector!r}")


# -- traces and outcomes -----------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    index: int
    mover: int
    move: Move
    cost_before: Cost
    cost_after: Cost
    digest_after: str


@dataclass
class RunTrace:
    initial: OwnedNetwork
    steps: list[StepRecord] = field(default_factory=list)
    status: str = "running"

    def to_text(self) -> str:
        lines = []
        for s in self.steps:
            lines.append(
                f"step {s.index} {s.mover} {move_to_str(s.move)} "
                f"{s.cost_before} {s.cost_after}"
            )
        lines.append(f"status {self.status}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "status": self.status,
                "steps": [
                    {
                        "index": s.index,
                        "mover": s.mover,
                        "move": move_to_str(s.move),
                        "cost_before": str(s.cost_before),
                        "cost_after": str(s.cost_after),
                        "digest": s.digest_after,
                    }
                    for s in self.steps
                ],
            },
            indent=None,
        )


def parse_trace_text(text: str, initial: OwnedNetwork, bilateral: bool = False) -> RunTrace:
    """Re-read an exported text trace (digests are recomputed by replay)."""
    trace = RunTrace(initial)
    state = initial
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("status "):
            trace.status = ln[len("status "):]
            continue
        parts = ln.split()
        assert parts[0] == "step"
        idx = int(parts[1])
        mover = int(parts[2])
        cost_before = _parse_cost(parts[-2])
        cost_after = _parse_cost(parts[-1])
        mv = move_from_str(" ".join(parts[3:-2]), bilateral)
        state = apply_move(state, mv)
        trace.steps.append(
            StepRecord(idx, mover, mv, cost_before, cost_after, state.digest())
        )
    return trace


def _parse_cost(tok: str) -> Cost:
    from .netcore import INFINITY, NEG_INFINITY

    if tok == "INFINITY":
        return INFINITY
    if tok == "-INFINITY":
        return NEG_INFINITY
    return Fraction(tok)


@dataclass(frozen=True)
class RunOutcome:
    status: str  # "converged" | "cycle" | "step-limit"
    steps: int
    cycle_entry: Optional[int] = None
    cycle_period: Optional[int] = None
    cycle_mode: Optional[str] = None


# -- the runner ---------------------------------------------------------------


def step(
    net: OwnedNetwork,
    policy: MovePolicy,
    selector: MoveSelector,
    cfg: GameConfig,
) -> Optional[tuple[StepRecord, OwnedNetwork]]:
    """One improving move by the policy's chosen agent; None when stable."""
    if isinstance(policy, Scripted):
        if policy._pos >= len(policy.moves):
            return None
        mv = policy.moves[policy._pos]
        if not is_admissible(net, mv, cfg):
            raise ValueError(f"scripted move {move_to_str(mv)} is not admissible")
        if not (move_delta(net, mv, cfg) > 0 and is_feasible(net, mv, cfg)):
            raise ValueError(f"scripted move {move_to_str(mv)} is not improving")
        policy._pos += 1
    else:
        mover = select_mover(net, policy, cfg)
        if mover is None:
            return None
        mv = select_move(net, mover, selector, cfg)
        if mv is None:  # policy said unhappy, selector must find a move
            raise RuntimeError("selector found no move for an unhappy agent")
    before = agent_cost(net, mv.mover, cfg)
    new_net = apply_move(net, mv)
    after = agent_cost(new_net, mv.mover, cfg)
    rec = StepRecord(0, mv.mover, mv, before, after, new_net.digest())
    if isinstance(policy, Scripted) and policy.expected_digests:
        want = policy.expected_digests[policy._pos - 1]
        if want and want != rec.digest_after:
            raise ValueError(f"scripted step {policy._pos} digest mismatch")
    return rec, new_net


def run(
    initial: OwnedNetwork,
    policy: MovePolicy,
    selector: MoveSelector,
    cfg: GameConfig,
    max_steps: Optional[int] = None,
    cycle_detection: Optional[str] = "exact",
    iso_ceiling: int = 16,
) -> tuple[RunOutcome, RunTrace]:
    """Run the sequential process to convergence, recurrence or the limit.

    Disconnected starts are rejected under the bilateral game (the model
    assumes a connected initial network).  Cycle detection compares exact
    states by default; "isomorphism" compares canonical forms and is gated
    by the iso ceiling.
    """
    if cfg.game is Game.BILATERAL and not initial.is_connected():
        raise ValueError("bilateral runs require a connected initial network")
    if max_steps is None:
        max_steps = 50 * initial.n * initial.n
    trace = RunTrace(initial)
    net = initial

    def state_key(g: OwnedNetwork) -> str:
        if cycle_detection == "isomorphism":
            return canonical_form(
                g, iso_ceiling, use_ownership=cfg.game is not Game.BILATERAL
            )
        return g.digest()

    seen: dict[str, tuple[int, tuple]] = {}
    if cycle_detection:
        seen[state_key(net)] = (0, net.edge_triples())
    count = 0
    while count < max_steps:
        result = step(net, policy, selector, cfg)
        if result is None:
            trace.status = f"converged({count})"
            return RunOutcome("converged", count), trace
        rec, net = result
        count += 1
        trace.steps.append(
            StepRecord(count, rec.mover, rec.move, rec.cost_before,
                       rec.cost_after, rec.digest_after)
        )
        if cycle_detection:
            key = state_key(net)
            if key in seen:
                entry, triples = seen[key]
                confirmed = (
                    cycle_detection == "isomorphism"
                    or triples == net.edge_triples()
                )
                if confirmed:
                    trace.status = f"cycle(entry={entry},period={count - entry})"
                    return (
                        RunOutcome("cycle", count, entry, count - entry,
                                   cycle_detection),
                        trace,
                    )
            else:
                seen[key] = (count, net.edge_triples())
    trace.status = f"step-limit({count})"
    return RunOutcome("step-limit", count), trace


def detect_recurrence(
    trace: RunTrace,
    mode: str = "exact",
    cfg: Optional[GameConfig] = None,
    iso_ceiling: int = 16,
) -> Optional[tuple[int, int]]:
    """First (entry, period) at which a state of the trace recurs, or None."""
    bilateral = cfg is not None and cfg.game is Game.BILATERAL

    def key(g: OwnedNetwork) -> str:
        if mode == "isomorphism":
            return canonical_form(g, iso_ceiling, use_ownership=not bilateral)
        return g.digest()

    state = trace.initial
    seen = {key(state): 0}
    for i, s in enumerate(trace.steps, start=1):
        state = apply_move(state, s.move)
        k = key(state)
        if k in seen:
            return seen[k], i - seen[k]
        seen[k] = i
    return None


# -- potentials ---------------------------------------------------------------


def potential_value(net: OwnedNetwork, cfg: GameConfig, kind: str = "lex-vector"):
    """A value that strictly decreases along improving tree moves.

    "lex-vector" is the sorted distance-cost vector under lexicographic
    order (meaningful for the max metric); "social-cost" is the scalar sum
    of all agent costs.
    """
    if kind == "lex-vector":
        return cost_profile(net, cfg).sorted_vector
    if kind == "social-cost":
        return social_cost(net, cfg)
    raise ValueError(f"unknown potential {kind!r}")
