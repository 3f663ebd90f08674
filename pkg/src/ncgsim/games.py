"""Per-game strategy spaces: admissible moves, application, deltas, best
responses and bilateral feasibility.

Move admissibility follows the game type in the configuration:

* SG    -- either endpoint of an edge may swap it;
* ASG   -- only the owner may swap;
* GBG   -- the owner may buy, delete or swap one own edge;
* BG    -- an agent may replace her owned-edge set by any other set;
* BILATERAL -- an agent may replace her *neighbor* set; new edges cost
  alpha/2 to each endpoint and require the new neighbor's consent.

Exhaustive spaces (BG / bilateral Replace, multi-swaps) are gated by an
explicit ceiling because their enumeration is exponential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .netcore import (
    Cost,
    Game,
    GameConfig,
    INFINITY,
    NEG_INFINITY,
    OwnedNetwork,
    agent_cost,
    is_finite,
)

#: Largest n for which exhaustive Replace / multi-swap spaces are enumerated.
DEFAULT_ENUM_CEILING = 16


class EnumerationCeilingError(RuntimeError):
    """Raised when an exhaustive strategy space would be too large."""


@dataclass(frozen=True)
class Swap:
    mover: int
    old: int
    new: int


@dataclass(frozen=True)
class Buy:
    mover: int
    target: int


@dataclass(frozen=True)
class Delete:
    mover: int
    target: int


@dataclass(frozen=True)
class Replace:
    """Rewrite the mover's owned set (BG) or neighbor set (bilateral).

    ``neighbor_set`` is True under the bilateral game, where a strategy is
    the full set of incident edges rather than the owned ones.
    """

    mover: int
    targets: frozenset[int]
    neighbor_set: bool = False


@dataclass(frozen=True)
class MultiSwap:
    mover: int
    swaps: tuple[tuple[int, int], ...]  # (old, new) pairs


Move = Union[Swap, Buy, Delete, Replace, MultiSwap]


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    blockers: frozenset[int]


# -- serialization ----------------------------------------------------------


def move_to_str(mv: Move) -> str:
    if isinstance(mv, Swap):
        return f"swap {mv.mover} {mv.old} {mv.new}"
    if isinstance(mv, Buy):
        return f"buy {mv.mover} {mv.target}"
    if isinstance(mv, Delete):
        return f"delete {mv.mover} {mv.target}"
    if isinstance(mv, Replace):
        inner = ",".join(str(t) for t in sorted(mv.targets))
        return f"replace {mv.mover} {{{inner}}}"
    if isinstance(mv, MultiSwap):
        inner = "".join(f"({o}>{n})" for o, n in mv.swaps)
        return f"multiswap {mv.mover} {inner}"
    raise TypeError(f"unknown move {mv!r}")


def move_from_str(text: str, bilateral: bool = False) -> Move:
    parts = text.split()
    kind = parts[0]
    if kind == "swap":
        return Swap(int(parts[1]), int(parts[2]), int(parts[3]))
    if kind == "buy":
        return Buy(int(parts[1]), int(parts[2]))
    if kind == "delete":
        return Delete(int(parts[1]), int(parts[2]))
    if kind == "replace":
        body = parts[2].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"bad replace set in {text!r}")
        inner = body[1:-1]
        targets = frozenset(int(t) for t in inner.split(",") if t != "")
        return Replace(int(parts[1]), targets, neighbor_set=bilateral)
    if kind == "multiswap":
        body = "".join(parts[2:])
        swaps = []
        for chunk in body.split(")"):
            chunk = chunk.strip().lstrip("(")
            if not chunk:
                continue
            o, n = chunk.split(">")
            swaps.append((int(o), int(n)))
        return MultiSwap(int(parts[1]), tuple(swaps))
    raise ValueError(f"unknown move kind in {text!r}")


# -- admissibility ----------------------------------------------------------


def _swappable_partners(net: OwnedNetwork, u: int, cfg: GameConfig) -> tuple[int, ...]:
    """Current neighbors whose edge u is allowed to re-point."""
    if cfg.game is Game.SG:
        return net.neighbors(u)
    return net.owned_targets(u)


def _swap_targets(net: OwnedNetwork, u: int) -> list[int]:
    nbrs = set(net.neighbors(u))
    return [
        t
        for t in range(net.n)
        if t != u and t not in nbrs and net.host_allows(u, t)
    ]


def _replace_candidates(net: OwnedNetwork, u: int, neighbor_set: bool) -> list[int]:
    """Vertices u may hold an edge to in a Replace strategy.

    For owned-set strategies a candidate must not already be connected to u
    by an edge the *other* endpoint owns (the graph is simple).
    """
    out = []
    foreign = set(net.neighbors(u)) - set(net.owned_targets(u))
    for t in range(net.n):
        if t == u or not net.host_allows(u, t):
            continue
        if not neighbor_set and t in foreign:
            continue
        out.append(t)
    return out


def iter_replace_moves(
    net: OwnedNetwork,
    u: int,
    cfg: GameConfig,
    ceiling: int = DEFAULT_ENUM_CEILING,
) -> Iterator[Replace]:
    """Lazily enumerate all Replace strategies of u (exponential)."""
    if net.n > ceiling:
        raise EnumerationCeilingError(
            f"exhaustive strategy space too large: n={net.n} > ceiling {ceiling}"
        )
    neighbor_set = cfg.game is Game.BILATERAL
    current = (
        frozenset(net.neighbors(u)) if neighbor_set else frozenset(net.owned_targets(u))
    )
    cand = _replace_candidates(net, u, neighbor_set)
    for r in range(len(cand) + 1):
        for combo in itertools.combinations(cand, r):
            s = frozenset(combo)
            if s != current:
                yield Replace(u, s, neighbor_set=neighbor_set)


def iter_multiswap_moves(
    net: OwnedNetwork,
    u: int,
    cfg: GameConfig,
    ceiling: int = DEFAULT_ENUM_CEILING,
) -> Iterator[MultiSwap]:
    """Same-size owned-set replacements, expressed as simultaneous swaps.

    Covers every strategy reachable by re-pointing two or more edges at once
    (single swaps are produced by ``admissible_moves`` directly).
    """
    if net.n > ceiling:
        raise EnumerationCeilingError(
            f"multi-swap space too large: n={net.n} > ceiling {ceiling}"
        )
    partners = _swappable_partners(net, u, cfg)
    if len(partners) < 2:
        return
    fixed_nbrs = set(net.neighbors(u))
    for k in range(2, len(partners) + 1):
        for olds in itertools.combinations(partners, k):
            kept = fixed_nbrs - set(olds)
            # canonical encodings only: new targets disjoint from the removed
            # ones (overlapping encodings duplicate smaller strategies)
            cand = [
                t
                for t in range(net.n)
                if t != u
                and t not in kept
                and t not in olds
                and net.host_allows(u, t)
            ]
            for news in itertools.combinations(cand, k):
                yield MultiSwap(u, tuple(zip(olds, news)))


def admissible_moves(
    net: OwnedNetwork,
    u: int,
    cfg: GameConfig,
    ceiling: int = DEFAULT_ENUM_CEILING,
) -> list[Move]:
    """All admissible strategy changes of u under the configured game."""
    net.check_agent(u)
    moves: list[Move] = []
    game = cfg.game
    if game in (Game.SG, Game.ASG, Game.GBG):
        targets = _swap_targets(net, u)
        for x in _swappable_partners(net, u, cfg):
            for y in targets:
                if y != x:
                    moves.append(Swap(u, x, y))
        if game is Game.GBG:
            for t in targets:
                moves.append(Buy(u, t))
            for x in net.owned_targets(u):
                moves.append(Delete(u, x))
        if cfg.multi_swap:
            moves.extend(iter_multiswap_moves(net, u, cfg, ceiling))
    elif game in (Game.BG, Game.BILATERAL):
        moves.extend(iter_replace_moves(net, u, cfg, ceiling))
    else:  # pragma: no cover
        raise ValueError(f"unknown game {game}")
    return moves


def is_admissible(
    net: OwnedNetwork, mv: Move, cfg: GameConfig, ceiling: int = DEFAULT_ENUM_CEILING
) -> bool:
    u = mv.mover
    net.check_agent(u)
    if isinstance(mv, Swap):
        return (
            cfg.game in (Game.SG, Game.ASG, Game.GBG)
            and mv.old in _swappable_partners(net, u, cfg)
            and mv.new != u
            and mv.new != mv.old
            and not net.has_edge(u, mv.new)
            and net.host_allows(u, mv.new)
        )
    if isinstance(mv, Buy):
        return (
            cfg.game is Game.GBG
            and mv.target != u
            and not net.has_edge(u, mv.target)
            and net.host_allows(u, mv.target)
        )
    if isinstance(mv, Delete):
        return cfg.game is Game.GBG and mv.target in net.owned_targets(u)
    if isinstance(mv, Replace):
        if cfg.game is Game.BILATERAL:
            if not mv.neighbor_set:
                return False
            return mv.targets != frozenset(net.neighbors(u)) and all(
                t != u and net.host_allows(u, t) for t in mv.targets
            )
        if cfg.game is not Game.BG or mv.neighbor_set:
            return False
        cand = set(_replace_candidates(net, u, neighbor_set=False))
        return mv.targets != frozenset(net.owned_targets(u)) and all(
            t in cand for t in mv.targets
        )
    if isinstance(mv, MultiSwap):
        if not cfg.multi_swap or cfg.game is Game.BG:
            return False
        partners = set(_swappable_partners(net, u, cfg))
        olds = [o for o, _ in mv.swaps]
        news = [n for _, n in mv.swaps]
        if len(mv.swaps) < 2 or len(set(olds)) != len(olds) or len(set(news)) != len(news):
            return False
        if not set(olds) <= partners or set(news) == set(olds):
            return False
        kept = set(net.neighbors(u)) - set(olds)
        return all(
            t != u and t not in kept and net.host_allows(u, t) for t in news
        )
    return False


# -- application ------------------------------------------------------------


def apply_move(net: OwnedNetwork, mv: Move) -> OwnedNetwork:
    """Produce the successor network; raises ValueError on malformed moves.

    Game admissibility is not re-checked here (use ``is_admissible``); the
    structural requirements (edges exist, no duplicates) are enforced by the
    network constructor.  A swap hands ownership of the new edge to the
    mover, also in SG where ownership does not influence play.
    """
    u = mv.mover
    if isinstance(mv, Swap):
        return net.replacing_edges([(u, mv.old)], [(u, mv.new, u)])
    if isinstance(mv, Buy):
        return net.with_edge(u, mv.target, u)
    if isinstance(mv, Delete):
        if net.owner(u, mv.target) != u:
            raise ValueError(f"agent {u} does not own edge to {mv.target}")
        return net.without_edge(u, mv.target)
    if isinstance(mv, Replace):
        if mv.neighbor_set:
            old = set(net.neighbors(u))
        else:
            old = set(net.owned_targets(u))
        remove = [(u, t) for t in old - mv.targets]
        add = [(u, t, u) for t in mv.targets - old]
        return net.replacing_edges(remove, add)
    if isinstance(mv, MultiSwap):
        remove = [(u, o) for o, _ in mv.swaps]
        add = [(u, nw, u) for _, nw in mv.swaps]
        return net.replacing_edges(remove, add)
    raise TypeError(f"unknown move {mv!r}")


def reverse_move(net_before: OwnedNetwork, mv: Move) -> Move:
    """The move that undoes mv from the post-move state."""
    u = mv.mover
    if isinstance(mv, Swap):
        return Swap(u, mv.new, mv.old)
    if isinstance(mv, Buy):
        return Delete(u, mv.target)
    if isinstance(mv, Delete):
        return Buy(u, mv.target)
    if isinstance(mv, Replace):
        old = (
            frozenset(net_before.neighbors(u))
            if mv.neighbor_set
            else frozenset(net_before.owned_targets(u))
        )
        return Replace(u, old, mv.neighbor_set)
    if isinstance(mv, MultiSwap):
        return MultiSwap(u, tuple((n, o) for o, n in mv.swaps))
    raise TypeError(f"unknown move {mv!r}")


# -- evaluation -------------------------------------------------------------


def move_delta(net: OwnedNetwork, mv: Move, cfg: GameConfig) -> Cost:
    """Exact cost change of the mover (old minus new; positive = improving)."""
    before = agent_cost(net, mv.mover, cfg)
    after = agent_cost(apply_move(net, mv), mv.mover, cfg)
    if not is_finite(before) and not is_finite(after):
        return Fraction(0)
    if not is_finite(after):
        return NEG_INFINITY
    if not is_finite(before):
        return INFINITY
    return before - after


def bilateral_feasibility(
    net: OwnedNetwork, u: int, new_set: frozenset[int], cfg: GameConfig
) -> FeasibilityVerdict:
    """Consent check for a bilateral strategy change to neighbor set new_set.

    A new neighbor blocks iff her cost strictly increases in the induced
    network; pure deletions are unilateral and always feasible.
    """
    if cfg.game is not Game.BILATERAL:
        raise ValueError("feasibility is defined for the bilateral game only")
    old = set(net.neighbors(u))
    incoming = set(new_set) - old
    if not incoming:
        return FeasibilityVerdict(True, frozenset())
    after = apply_move(net, Replace(u, frozenset(new_set), neighbor_set=True))
    blockers = set()
    for v in incoming:
        if agent_cost(after, v, cfg) > agent_cost(net, v, cfg):
            blockers.add(v)
    return FeasibilityVerdict(not blockers, frozenset(blockers))


def is_feasible(net: OwnedNetwork, mv: Move, cfg: GameConfig) -> bool:
    """Feasibility of a move; non-bilateral games have no consent rule."""
    if cfg.game is not Game.BILATERAL:
        return True
    assert isinstance(mv, Replace) and mv.neighbor_set
    return bilateral_feasibility(net, mv.mover, mv.targets, cfg).feasible


def improving_moves(
    net: OwnedNetwork,
    u: int,
    cfg: GameConfig,
    ceiling: int = DEFAULT_ENUM_CEILING,
) -> list[tuple[Move, Cost]]:
    """Admissible (and, under bilateral, feasible) moves with positive delta."""
    out = []
    for mv in admissible_moves(net, u, cfg, ceiling):
        d = move_delta(net, mv, cfg)
        if d > 0 and is_feasible(net, mv, cfg):
            out.append((mv, d))
    return out


def is_unhappy(
    net: OwnedNetwork, u: int, cfg: GameConfig, ceiling: int = DEFAULT_ENUM_CEILING
) -> bool:
    for mv in admissible_moves(net, u, cfg, ceiling):
        if move_delta(net, mv, cfg) > 0 and is_feasible(net, mv, cfg):
            return True
    return False


def unhappy_agents(
    net: OwnedNetwork, cfg: GameConfig, ceiling: int = DEFAULT_ENUM_CEILING
) -> set[int]:
    """Agents holding at least one admissible improving (feasible) move."""
    return {u for u in range(net.n) if is_unhappy(net, u, cfg, ceiling)}


def best_responses(
    net: OwnedNetwork,
    u: int,
    cfg: GameConfig,
    ceiling: int = DEFAULT_ENUM_CEILING,
) -> tuple[Cost, list[Move]]:
    """Exact optimum over u's admissible improving moves.

    Returns (optimal cost, moves attaining it); the move list is empty iff u
    is happy, in which case the optimal cost is her current cost.
    """
    current = agent_cost(net, u, cfg)
    best_moves: list[Move] = []
    best_cost: Cost = current
    for mv, _ in improving_moves(net, u, cfg, ceiling):
        c = agent_cost(apply_move(net, mv), u, cfg)
        if c < best_cost:
            best_cost = c
            best_moves = [mv]
        elif c == best_cost and best_moves:
            best_moves.append(mv)
    return best_cost, best_moves
