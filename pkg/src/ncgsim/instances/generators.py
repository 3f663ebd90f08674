"""Random initial networks for the convergence studies.

The procedures follow the empirical setup of the underlying games: a random
spanning tree grown by joining a uniformly chosen unmarked agent to a
uniformly chosen marked one, followed by uniform edge insertion.  In the
bounded-budget variant ownership is assigned during growth under the cap
and the insertion phase lets every agent short of her budget buy edges
until all budgets are exhausted (exact mode) or no insertion is possible.
"""

from __future__ import annotations

from typing import Optional

from ..netcore import OwnedNetwork
from ..rng import SplitMix64


class InfeasibleGeneration(ValueError):
    """The requested (n, k) budget combination admits no exact network."""


def _random_spanning_tree(
    n: int, rng: SplitMix64, cap: Optional[int] = None
) -> list[tuple[int, int, int]]:
    """Tree growth by marking; ownership uniform, capped when requested."""
    owned = [0] * n
    edges: list[tuple[int, int, int]] = []
    first = rng.randint(n)
    second = rng.randint(n - 1)
    if second >= first:
        second += 1
    marked = [first]
    unmarked = [u for u in range(n) if u != first]
    # the initial pair is drawn together, then treated like a growth step
    unmarked.remove(second)
    pair = [first, second]
    owner = pair[rng.randint(2)]
    if cap is not None and owned[owner] >= cap:
        owner = pair[1] if owner == pair[0] else pair[0]
    owned[owner] += 1
    edges.append((first, second, owner))
    marked.append(second)
    while unmarked:
        u = unmarked.pop(rng.randint(len(unmarked)))
        m = marked[rng.randint(len(marked))]
        cands = [u, m]
        owner = cands[rng.randint(2)]
        if cap is not None and owned[owner] >= cap:
            owner = cands[1] if owner == cands[0] else cands[0]
            if owned[owner] >= cap:
                raise InfeasibleGeneration(
                    f"spanning tree exceeds ownership cap {cap}"
                )
        owned[owner] += 1
        edges.append((u, m, owner))
        marked.append(u)
    return edges


def gen_bounded_budget(
    n: int,
    k: int,
    seed: int,
    exact: bool = True,
    max_retries: int = 64,
) -> OwnedNetwork:
    """Connected network in which every agent owns (at most) k edges.

    Exact mode requires every agent to own exactly k edges, which needs
    n*k buildable edges: infeasible combinations (n*k exceeding the simple
    graph capacity, or below the n-1 edges connectivity needs) are
    reported, not silently relaxed.  With ``exact=False`` the budget is an
    upper bound and insertion stops when no further edge can be placed.
    """
    if n < 2 or k < 1:
        raise InfeasibleGeneration("need n >= 2 and k >= 1")
    if exact:
        if n * k > n * (n - 1) // 2:
            raise InfeasibleGeneration(
                f"exact budget infeasible: {n}*{k} edges exceed the simple-graph capacity"
            )
        if n * k < n - 1:
            raise InfeasibleGeneration(
                f"exact budget infeasible: {n}*{k} edges cannot connect {n} agents"
            )
    rng = SplitMix64(seed)
    for _ in range(max_retries):
        try:
            net = _try_bounded_budget(n, k, rng, exact)
        except InfeasibleGeneration:
            continue
        if net is not None:
            return net
    raise InfeasibleGeneration(
        f"could not complete an exact budget-{k} network on {n} agents"
    )


def _try_bounded_budget(
    n: int, k: int, rng: SplitMix64, exact: bool
) -> Optional[OwnedNetwork]:
    edges = _random_spanning_tree(n, rng, cap=k)
    owned = [0] * n
    present = set()
    for a, b, o in edges:
        owned[o] += 1
        present.add((min(a, b), max(a, b)))
    # insertion phase: unmarked agents (below budget) buy random edges
    stall = 0
    while True:
        unmarked = [u for u in range(n) if owned[u] < k]
        if not unmarked:
            break
        u = unmarked[rng.randint(len(unmarked))]
        v = rng.randint(n - 1)
        if v >= u:
            v += 1
        pair = (min(u, v), max(u, v))
        if pair in present:
            stall += 1
            if stall > 50 * n * k + 200:
                if exact:
                    return None
                break
            continue
        stall = 0
        present.add(pair)
        owned[u] += 1
        edges.append((u, v, u))
    return OwnedNetwork(n, edges)


def gen_random_network(n: int, m: int, seed: int) -> OwnedNetwork:
    """Connected network with exactly m edges, uniform ownership per edge."""
    if not (n - 1 <= m <= n * (n - 1) // 2):
        raise ValueError(f"edge count {m} out of range for n={n}")
    rng = SplitMix64(seed)
    edges = _random_spanning_tree(n, rng)
    present = {(min(a, b), max(a, b)) for a, b, _ in edges}
    while len(edges) < m:
        u = rng.randint(n)
        v = rng.randint(n - 1)
        if v >= u:
            v += 1
        pair = (min(u, v), max(u, v))
        if pair in present:
            continue
        present.add(pair)
        owner = pair[rng.randint(2)]
        edges.append((pair[0], pair[1], owner))
    return OwnedNetwork(n, edges)


def gen_path(n: int, mode: str = "rl", seed: int = 0) -> OwnedNetwork:
    """Path v0..v(n-1); rl: uniform owner per edge, dl: owner is the left end."""
    if n < 2:
        raise ValueError("paths need n >= 2")
    rng = SplitMix64(seed)
    edges = []
    for i in range(n - 1):
        if mode == "dl":
            owner = i
        elif mode == "rl":
            owner = (i, i + 1)[rng.randint(2)]
        else:
            raise ValueError(f"unknown path mode {mode!r}")
        edges.append((i, i + 1, owner))
    return OwnedNetwork(n, edges)


def gen_random_tree(n: int, seed: int) -> OwnedNetwork:
    """Random spanning tree with uniform ownership (no cap)."""
    rng = SplitMix64(seed)
    return OwnedNetwork(n, _random_spanning_tree(n, rng))
