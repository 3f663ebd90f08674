"""Owned-graph data model and exact cost evaluation.

Networks are undirected simple graphs over agent ids ``0..n-1``.  Every edge
records which endpoint maintains it (its *owner*); an optional host graph
whitelists which edges may ever exist.  Distance costs are computed by BFS
(unit-length edges) and all monetary quantities are exact rationals, so cost
comparisons are never approximate.  Disconnected agents have infinite cost.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union


class _Infinity:
    """Signed infinity that compares exactly against Fractions and ints."""

    __slots__ = ("sign",)

    def __init__(self, sign: int) -> None:
        self.sign = sign

    def __lt__(self, other: object) -> bool:
        if isinstance(other, _Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __le__(self, other: object) -> bool:
        return self < other or self == other

    def __gt__(self, other: object) -> bool:
        if isinstance(other, _Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __ge__(self, other: object) -> bool:
        return self > other or self == other

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __hash__(self) -> int:
        return hash(("inf", self.sign))

    def __neg__(self) -> "_Infinity":
        return NEG_INFINITY if self.sign > 0 else INFINITY

    def __add__(self, other: object) -> "_Infinity":
        if isinstance(other, _Infinity) and other.sign != self.sign:
            raise ArithmeticError("infinity - infinity is undefined")
        return self

    __radd__ = __add__

    def __sub__(self, other: object) -> "_Infinity":
        if isinstance(other, _Infinity) and other.sign == self.sign:
            raise ArithmeticError("infinity - infinity is undefined")
        return self

    def __rsub__(self, other: object) -> "_Infinity":
        return -self

    def __repr__(self) -> str:
        return "INFINITY" if self.sign > 0 else "-INFINITY"


INFINITY = _Infinity(1)
NEG_INFINITY = _Infinity(-1)

#: An exact cost: a rational number, or +/- infinity for disconnection.
Cost = Union[Fraction, _Infinity]


def is_finite(c: Cost) -> bool:
    return not isinstance(c, _Infinity)


class Game(str, Enum):
    SG = "SG"                  # swap game, either endpoint may swap
    ASG = "ASG"                # asymmetric swap game, only the owner swaps
    GBG = "GBG"                # greedy buy game: buy, delete or swap one own edge
    BG = "BG"                  # buy game: arbitrary own-edge set replacement
    BILATERAL = "BILATERAL"    # bilateral equal-split buy game


class Metric(str, Enum):
    SUM = "sum"
    MAX = "max"


class EdgeCostMode(str, Enum):
    NONE = "none"              # swap games: no edge cost term
    PER_OWNED = "per-owned"    # alpha per owned edge
    HALF_PER_INCIDENT = "half-per-incident"  # alpha/2 per incident edge


@dataclass(frozen=True)
class GameConfig:
    """Which game is played, at which distance metric and edge price."""

    game: Game
    metric: Metric
    alpha: Fraction = Fraction(0)
    multi_swap: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "game", Game(self.game))
        object.__setattr__(self, "metric", Metric(self.metric))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.edge_cost_mode is not EdgeCostMode.NONE and self.alpha <= 0:
            raise ValueError("edge price alpha must be positive for buy games")

    @property
    def edge_cost_mode(self) -> EdgeCostMode:
        if self.game in (Game.SG, Game.ASG):
            return EdgeCostMode.NONE
        if self.game is Game.BILATERAL:
            return EdgeCostMode.HALF_PER_INCIDENT
        return EdgeCostMode.PER_OWNED


def _norm_pair(a: int, b: int) -> tuple[int, int]:
    if a == b:
        raise ValueError(f"self-loop {a}-{b}")
    return (a, b) if a < b else (b, a)


class OwnedNetwork:
    """Immutable simple graph with per-edge ownership.

    ``edges`` maps each normalized pair ``(a, b)`` with ``a < b`` to the owner
    endpoint.  ``host``, when present, is the set of pairs that are allowed to
    exist; every edge must lie inside it.
    """

    __slots__ = ("n", "edges", "host", "_adj", "_digest")

    def __init__(
        self,
        n: int,
        edges: Union[dict[tuple[int, int], int], Iterable[tuple[int, int, int]]],
        host: Optional[Iterable[tuple[int, int]]] = None,
    ) -> None:
        if n < 1:
            raise ValueError("need at least one agent")
        if isinstance(edges, dict):
            items = [(a, b, o) for (a, b), o in edges.items()]
        else:
            items = list(edges)
        emap: dict[tuple[int, int], int] = {}
        for a, b, owner in items:
            pair = _norm_pair(a, b)
            if not (0 <= pair[0] and pair[1] < n):
                raise ValueError(f"edge {pair} out of range for n={n}")
            if owner not in pair:
                raise ValueError(f"owner {owner} is not an endpoint of {pair}")
            if pair in emap:
                raise ValueError(f"duplicate edge {pair}")
            emap[pair] = owner
        hostset: Optional[frozenset[tuple[int, int]]] = None
        if host is not None:
            hostset = frozenset(_norm_pair(a, b) for a, b in host)
            for pair in hostset:
                if not (0 <= pair[0] and pair[1] < n):
                    raise ValueError(f"host pair {pair} out of range")
            for pair in emap:
                if pair not in hostset:
                    raise ValueError(f"edge {pair} not allowed by host graph")
        self.n = n
        self.edges = dict(sorted(emap.items()))
        self.host = hostset
        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        self._adj = tuple(tuple(sorted(xs)) for xs in adj)
        self._digest: Optional[str] = None

    # -- basic accessors ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def has_edge(self, a: int, b: int) -> bool:
        return _norm_pair(a, b) in self.edges

    def owner(self, a: int, b: int) -> int:
        return self.edges[_norm_pair(a, b)]

    def owned_targets(self, u: int) -> tuple[int, ...]:
        """Neighbors v such that u owns the edge {u, v}."""
        return tuple(v for v in self._adj[u] if self.edges[_norm_pair(u, v)] == u)

    def owned_count(self, u: int) -> int:
        return len(self.owned_targets(u))

    def host_allows(self, a: int, b: int) -> bool:
        return self.host is None or _norm_pair(a, b) in self.host

    def check_agent(self, u: int) -> None:
        if not (0 <= u < self.n):
            raise ValueError(f"invalid agent id {u} (n={self.n})")

    # -- derived networks --------------------------------------------------

    def with_edge(self, a: int, b: int, owner: int) -> "OwnedNetwork":
        pair = _norm_pair(a, b)
        if pair in self.edges:
            raise ValueError(f"edge {pair} already present")
        edges = dict(self.edges)
        edges[pair] = owner
        return OwnedNetwork(self.n, edges, self.host)

    def without_edge(self, a: int, b: int) -> "OwnedNetwork":
        pair = _norm_pair(a, b)
        if pair not in self.edges:
            raise ValueError(f"edge {pair} not present")
        edges = dict(self.edges)
        del edges[pair]
        return OwnedNetwork(self.n, edges, self.host)

    def replacing_edges(
        self,
        remove: Iterable[tuple[int, int]],
        add: Iterable[tuple[int, int, int]],
    ) -> "OwnedNetwork":
        edges = dict(self.edges)
        for a, b in remove:
            del edges[_norm_pair(a, b)]
        for a, b, owner in add:
            pair = _norm_pair(a, b)
            if pair in edges:
                raise ValueError(f"edge {pair} already present")
            edges[pair] = owner
        return OwnedNetwork(self.n, edges, self.host)

    def relabeled(self, perm: Sequence[int]) -> "OwnedNetwork":
        """Network with vertex u renamed to perm[u] (host relabeled too)."""
        edges = [(perm[a], perm[b], perm[o]) for (a, b), o in self.edges.items()]
        host = None
        if self.host is not None:
            host = [(perm[a], perm[b]) for a, b in self.host]
        return OwnedNetwork(self.n, edges, host)

    # -- identity ----------------------------------------------------------

    def edge_triples(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((a, b, o) for (a, b), o in self.edges.items())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OwnedNetwork)
            and self.n == other.n
            and self.edges == other.edges
            and self.host == other.host
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edge_triples()))

    def same_edge_set(self, other: "OwnedNetwork") -> bool:
        """Equality of the undirected edge sets, ignoring ownership."""
        return self.n == other.n and set(self.edges) == set(other.edges)

    def digest(self) -> str:
        """Hex digest of (n, sorted owned edge list); stable across runs."""
        if self._digest is None:
            parts = [str(self.n)] + [f"{a},{b},{o}" for (a, b), o in self.edges.items()]
            raw = ";".join(parts).encode()
            self._digest = hashlib.sha256(raw).hexdigest()
        return self._digest

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        dist = self._bfs(0)
        return all(d >= 0 for d in dist)

    def __repr__(self) -> str:
        return f"OwnedNetwork(n={self.n}, m={self.m})"

    # -- distances ---------------------------------------------------------

    def _bfs(self, u: int) -> list[int]:
        """Distances from u; -1 marks unreachable vertices."""
        dist = [-1] * self.n
        dist[u] = 0
        queue = deque([u])
        adj = self._adj
        while queue:
            x = queue.popleft()
            dx = dist[x] + 1
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dx
                    queue.append(y)
        return dist


# -- cost operations -------------------------------------------------------


def shortest_path_distances(net: OwnedNetwork, u: int) -> list[Cost]:
    """BFS distances from u; unreachable vertices map to INFINITY."""
    net.check_agent(u)
    return [Fraction(d) if d >= 0 else INFINITY for d in net._bfs(u)]


def distance_cost(net: OwnedNetwork, u: int, metric: Metric) -> Cost:
    """Sum of distances or eccentricity of u; INFINITY when disconnected."""
    dist = net._bfs(u)
    if net.n == 1:
        return Fraction(0)
    total = 0
    worst = 0
    for d in dist:
        if d < 0:
            return INFINITY
        total += d
        if d > worst:
            worst = d
    return Fraction(total) if Metric(metric) is Metric.SUM else Fraction(worst)


def edge_cost(net: OwnedNetwork, u: int, cfg: GameConfig) -> Fraction:
    mode = cfg.edge_cost_mode
    if mode is EdgeCostMode.NONE:
        return Fraction(0)
    if mode is EdgeCostMode.PER_OWNED:
        return cfg.alpha * net.owned_count(u)
    return cfg.alpha * net.degree(u) / 2


def agent_cost(net: OwnedNetwork, u: int, cfg: GameConfig) -> Cost:
    """Edge cost plus distance cost of agent u (INFINITY if disconnected)."""
    net.check_agent(u)
    dc = distance_cost(net, u, cfg.metric)
    if not is_finite(dc):
        return INFINITY
    return edge_cost(net, u, cfg) + dc


def social_cost(net: OwnedNetwork, cfg: GameConfig) -> Cost:
    """Sum of all agent costs; INFINITY when the network is disconnected."""
    total = Fraction(0)
    for u in range(net.n):
        c = agent_cost(net, u, cfg)
        if not is_finite(c):
            return INFINITY
        total += c
    return total


@dataclass(frozen=True)
class CostProfile:
    """Per-agent costs plus the sorted distance-cost vector.

    ``sorted_vector`` holds the distance costs in non-increasing order (the
    gamma vector used as the lexicographic tree potential under Max).
    ``centers`` are the agents whose distance cost attains the minimum entry:
    eccentricity minimizers under Max, 1-median vertices under Sum (the
    Sum-metric notion is an implementation choice; see module docs).
    """

    per_agent: tuple[Cost, ...]
    sorted_vector: tuple[Cost, ...]
    centers: frozenset[int]
    diameter: Cost


def cost_profile(net: OwnedNetwork, cfg: GameConfig) -> CostProfile:
    dcosts = [distance_cost(net, u, cfg.metric) for u in range(net.n)]
    per_agent = tuple(
        INFINITY if not is_finite(d) else edge_cost(net, u, cfg) + d
        for u, d in enumerate(dcosts)
    )
    connected = all(is_finite(d) for d in dcosts)
    if connected:
        ordered = sorted(dcosts, reverse=True)  # all Fractions, total order
        best = ordered[-1]
        centers = frozenset(u for u, d in enumerate(dcosts) if d == best)
        diameter: Cost = Fraction(max(max(net._bfs(u)) for u in range(net.n)))
    else:
        ordered = sorted(
            dcosts,
            key=lambda d: (1, Fraction(0)) if not is_finite(d) else (0, d),
            reverse=True,
        )
        centers = frozenset()
        diameter = INFINITY
    return CostProfile(per_agent, tuple(ordered), centers, diameter)


# -- network text format ---------------------------------------------------
#
#   n <count> [host]
#   <a> <b> <owner>        one line per edge
#   host <a> <b>           optional whitelist lines (only if header says host)


def write_network(net: OwnedNetwork) -> str:
    lines = [f"n {net.n} host" if net.host is not None else f"n {net.n}"]
    for (a, b), o in net.edges.items():
        lines.append(f"{a} {b} {o}")
    if net.host is not None:
        for a, b in sorted(net.host):
            lines.append(f"host {a} {b}")
    return "\n".join(lines) + "\n"


def parse_network(text: Union[str, Iterable[str]]) -> OwnedNetwork:
    """Parse the line-oriented network format; rejects malformed input."""
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = list(text)
    lines = [ln.split("#", 1)[0].strip() for ln in lines]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty network description")
    head = lines[0].split()
    if head[0] != "n" or len(head) not in (2, 3):
        raise ValueError(f"bad header {lines[0]!r}")
    n = int(head[1])
    expects_host = len(head) == 3 and head[2] == "host"
    edges: list[tuple[int, int, int]] = []
    host: list[tuple[int, int]] = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "host":
            if not expects_host or len(parts) != 3:
                raise ValueError(f"unexpected host line {ln!r}")
            host.append((int(parts[1]), int(parts[2])))
        else:
            if len(parts) != 3:
                raise ValueError(f"bad edge line {ln!r}")
            edges.append((int(parts[0]), int(parts[1]), int(parts[2])))
    return OwnedNetwork(n, edges, host if expects_host else None)
