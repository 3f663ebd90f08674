"""Compiled twin of the sequential-move runner for the empirical studies.

The exact engine recomputes rational costs through object-level BFS, which
is far too slow for thousands of trials at n = 128.  This module runs the
same dynamics on flat integer arrays under numba: distance costs are plain
integers and the edge price p/q is handled by comparing q-scaled costs, so
all comparisons remain exact.  Policies, selectors and the deterministic
tie-breaking rules mirror ncgsim.dynamics exactly, which the test suite
checks by replaying small runs in both lanes.

Per step the runner maintains the all-pairs distance table of the current
network.  Edge additions are then evaluated exactly as
``min(d(u,v), 1 + d(t,v))`` without any BFS, and the same expression is a
lower bound on any post-swap distance (removing an edge never shortens
paths), which soundly prunes swap targets that cannot improve; only the
surviving candidates pay for a patched BFS.

Status codes: 0 converged, 1 step limit.  Monitors (for tree runs): the
lexicographic sorted-eccentricity potential (max) or the social distance
cost (sum) must strictly decrease and the diameter must never increase;
violations are reported, not repaired.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .netcore import OwnedNetwork

# game codes
SG, ASG, GBG = 0, 1, 2
# metric codes
SUM, MAX = 0, 1
# policy codes
P_MAXCOST_MINID, P_MAXCOST_RANDOM, P_RANDOM = 0, 1, 2
# selector codes
S_BEST_RANDOM, S_BEST_OPPREF, S_BEST_CANONICAL, S_ANY_RANDOM = 0, 1, 2, 3

INF = np.int64(1) << 50


@njit(cache=True, inline="always")
def _next_u64(state):
    state = (state + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def _bfs_row(nbr, deg, n, src, out):
    for i in range(n):
        out[i] = -1
    out[src] = 0
    head = 0
    tail = 1
    queue = np.empty(n, dtype=np.int32)
    queue[0] = src
    while head < tail:
        x = queue[head]
        head += 1
        dx = out[x] + 1
        for k in range(deg[x]):
            y = nbr[x, k]
            if out[y] < 0:
                out[y] = dx
                queue[tail] = y
                tail += 1


@njit(cache=True)
def _fill_table(nbr, deg, n, dtab):
    for u in range(n):
        _bfs_row(nbr, deg, n, u, dtab[u])


@njit(cache=True)
def _row_cost(dtab, n, u, metric):
    total = np.int64(0)
    worst = np.int64(0)
    for v in range(n):
        d = dtab[u, v]
        if d < 0:
            return INF
        total += d
        if d > worst:
            worst = d
    return total if metric == SUM else worst


@njit(cache=True)
def _patched_cost(nbr, deg, n, src, metric, excl_a, excl_b, add_t, dist, queue):
    """Distance cost of src with one edge removed and one added (by BFS)."""
    for i in range(n):
        dist[i] = -1
    dist[src] = 0
    queue[0] = src
    head = 0
    tail = 1
    seen = 1
    total = np.int64(0)
    worst = np.int64(0)
    while head < tail:
        x = queue[head]
        head += 1
        dx = dist[x] + 1
        for k in range(deg[x]):
            y = nbr[x, k]
            if (x == excl_a and y == excl_b) or (x == excl_b and y == excl_a):
                continue
            if dist[y] < 0:
                dist[y] = dx
                total += dx
                if dx > worst:
                    worst = dx
                queue[tail] = y
                tail += 1
                seen += 1
        if add_t >= 0:
            extra = -1
            if x == src:
                extra = add_t
            elif x == add_t:
                extra = src
            if extra >= 0 and dist[extra] < 0:
                dist[extra] = dx
                total += dx
                if dx > worst:
                    worst = dx
                queue[tail] = extra
                tail += 1
                seen += 1
    if seen < n:
        return INF
    return total if metric == SUM else worst


@njit(cache=True)
def _added_edge_cost(dtab, n, u, t, metric):
    """Exact distance cost of u after adding edge u-t (no removals)."""
    total = np.int64(0)
    worst = np.int64(0)
    for v in range(n):
        du = dtab[u, v]
        dt = dtab[t, v]
        if dt >= 0:
            alt = dt + 1
            d = alt if (du < 0 or alt < du) else du
        else:
            d = du
        if d < 0:
            return INF
        total += d
        if d > worst:
            worst = d
    return total if metric == SUM else worst


@njit(cache=True)
def _owned_count(nbr, deg, own, u):
    c = 0
    for k in range(deg[u]):
        if own[u, nbr[u, k]] == 1:
            c += 1
    return c


@njit(cache=True)
def _neighbor_mins(nbr, deg, dtab, n, u, m1, m2, a1):
    """Per-vertex smallest and second-smallest neighbor distances of u."""
    for v in range(n):
        m1[v] = INF
        m2[v] = INF
        a1[v] = -1
    for k in range(deg[u]):
        w = nbr[u, k]
        row = dtab[w]
        for v in range(n):
            d = row[v]
            if d < m1[v]:
                m2[v] = m1[v]
                m1[v] = d
                a1[v] = w
            elif d < m2[v]:
                m2[v] = d


@njit(cache=True)
def _swap_lower_bound(dtab, n, u, x, y, metric, m1, m2, a1):
    """Sound lower bound for u's distance cost after swapping ux to uy.

    Every post-swap path leaves u through the new neighbor y or a kept
    neighbor w != x, and removals never shorten the rest of the path.
    """
    total = np.int64(0)
    worst = np.int64(0)
    yrow = dtab[y]
    for v in range(n):
        if v == u:
            continue
        rest = m1[v] if a1[v] != x else m2[v]
        dy = yrow[v]
        if dy < rest:
            rest = dy
        if rest >= INF:
            return INF
        d = rest + 1
        total += d
        if d > worst:
            worst = d
    return total if metric == SUM else worst


@njit(cache=True)
def _scan_moves(
    nbr, deg, own, n, u, game, metric, p, q, dtab,
    dist, queue, pick_index, m1, m2, a1,
):
    """Canonical-order move scan for u.

    With ``pick_index >= 0`` returns the pick_index-th improving move;
    otherwise the canonical-best improving move.  Returns
    (found, kind, a, b, best_scaled, count).
    """
    owned_cnt = _owned_count(nbr, deg, own, u)
    cur_cost = np.int64(q) * _row_cost(dtab, n, u, metric) + np.int64(p) * owned_cnt
    best = INF * np.int64(4)
    best_kind = -1
    best_a = -1
    best_b = -1
    count = 0
    adj = np.zeros(n, dtype=np.uint8)
    for k in range(deg[u]):
        adj[nbr[u, k]] = 1
    _neighbor_mins(nbr, deg, dtab, n, u, m1, m2, a1)

    if game == GBG:  # deletions first in the canonical op order
        for k in range(deg[u]):
            x = nbr[u, k]
            if own[u, x] != 1:
                continue
            d = _patched_cost(nbr, deg, n, u, metric, u, x, -1, dist, queue)
            c = np.int64(q) * d + np.int64(p) * (owned_cnt - 1) if d < INF else INF
            if c < cur_cost:
                if pick_index >= 0:
                    if count == pick_index:
                        return True, 0, x, -1, c, count
                    count += 1
                elif c < best:
                    best = c
                    best_kind = 0
                    best_a = x
                    best_b = -1
                elif c == best and best_kind == 0 and x < best_a:
                    best_a = x
    for y in range(n):  # swaps ordered by (target, partner)
        if y == u or adj[y] == 1:
            continue
        # sound lower bound: removals never shorten paths, so no swap onto
        # y can beat the pure-addition cost
        lb = _added_edge_cost(dtab, n, u, y, metric)
        lb_cost = np.int64(q) * lb + np.int64(p) * owned_cnt if lb < INF else INF
        if lb_cost >= cur_cost:
            continue
        for k in range(deg[u]):
            x = nbr[u, k]
            if x == y:
                continue
            if game != SG and own[u, x] != 1:
                continue
            lb2 = _swap_lower_bound(dtab, n, u, x, y, metric, m1, m2, a1)
            if lb2 >= INF or np.int64(q) * lb2 + np.int64(p) * owned_cnt >= cur_cost:
                continue
            d = _patched_cost(nbr, deg, n, u, metric, u, x, y, dist, queue)
            c = np.int64(q) * d + np.int64(p) * owned_cnt if d < INF else INF
            if c < cur_cost:
                if pick_index >= 0:
                    if count == pick_index:
                        return True, 1, x, y, c, count
                    count += 1
                elif c < best:
                    best = c
                    best_kind = 1
                    best_a = x
                    best_b = y
                elif c == best and best_kind == 1:
                    if y < best_b or (y == best_b and x < best_a):
                        best_a = x
                        best_b = y
    if game == GBG:  # additions: exact from the table
        for y in range(n):
            if y == u or adj[y] == 1:
                continue
            d = _added_edge_cost(dtab, n, u, y, metric)
            c = np.int64(q) * d + np.int64(p) * (owned_cnt + 1) if d < INF else INF
            if c < cur_cost:
                if pick_index >= 0:
                    if count == pick_index:
                        return True, 2, y, -1, c, count
                    count += 1
                elif c < best:
                    best = c
                    best_kind = 2
                    best_a = y
                    best_b = -1
                elif c == best and best_kind == 2 and y < best_a:
                    best_a = y
    if pick_index >= 0:
        return False, -1, -1, -1, np.int64(0), count
    return best_kind >= 0, best_kind, best_a, best_b, best, count


@njit(cache=True)
def _collect_best_ties(
    nbr, deg, own, n, u, game, metric, p, q, best, dtab,
    ties_kind, ties_a, ties_b, dist, queue, op_pref, m1, m2, a1,
):
    """All improving moves attaining the optimum, in canonical order."""
    owned_cnt = _owned_count(nbr, deg, own, u)
    adj = np.zeros(n, dtype=np.uint8)
    for k in range(deg[u]):
        adj[nbr[u, k]] = 1
    _neighbor_mins(nbr, deg, dtab, n, u, m1, m2, a1)
    m = 0
    if game == GBG:
        for k in range(deg[u]):
            x = nbr[u, k]
            if own[u, x] != 1:
                continue
            d = _patched_cost(nbr, deg, n, u, metric, u, x, -1, dist, queue)
            c = np.int64(q) * d + np.int64(p) * (owned_cnt - 1) if d < INF else INF
            if c == best:
                ties_kind[m] = 0
                ties_a[m] = x
                ties_b[m] = -1
                m += 1
    if not (op_pref and m > 0):
        for y in range(n):
            if y == u or adj[y] == 1:
                continue
            lb = _added_edge_cost(dtab, n, u, y, metric)
            lb_cost = np.int64(q) * lb + np.int64(p) * owned_cnt if lb < INF else INF
            if lb_cost > best:
                continue
            for k in range(deg[u]):
                x = nbr[u, k]
                if x == y:
                    continue
                if game != SG and own[u, x] != 1:
                    continue
                lb2 = _swap_lower_bound(dtab, n, u, x, y, metric, m1, m2, a1)
                if lb2 >= INF or np.int64(q) * lb2 + np.int64(p) * owned_cnt > best:
                    continue
                d = _patched_cost(nbr, deg, n, u, metric, u, x, y, dist, queue)
                c = np.int64(q) * d + np.int64(p) * owned_cnt if d < INF else INF
                if c == best:
                    ties_kind[m] = 1
                    ties_a[m] = x
                    ties_b[m] = y
                    m += 1
    if game == GBG and not (op_pref and m > 0):
        for y in range(n):
            if y == u or adj[y] == 1:
                continue
            d = _added_edge_cost(dtab, n, u, y, metric)
            c = np.int64(q) * d + np.int64(p) * (owned_cnt + 1) if d < INF else INF
            if c == best:
                ties_kind[m] = 2
                ties_a[m] = y
                ties_b[m] = -1
                m += 1
    return m


@njit(cache=True)
def _remove_edge(nbr, deg, pos, x, y):
    k = pos[x, y]
    last = deg[x] - 1
    w = nbr[x, last]
    nbr[x, k] = w
    pos[x, w] = k
    deg[x] = last
    pos[x, y] = -1
    k = pos[y, x]
    last = deg[y] - 1
    w = nbr[y, last]
    nbr[y, k] = w
    pos[y, w] = k
    deg[y] = last
    pos[y, x] = -1


@njit(cache=True)
def _add_edge(nbr, deg, pos, x, y):
    nbr[x, deg[x]] = y
    pos[x, y] = deg[x]
    deg[x] += 1
    nbr[y, deg[y]] = x
    pos[y, x] = deg[y]
    deg[y] += 1


@njit(cache=True)
def _apply(nbr, deg, own, pos, u, kind, a, b):
    if kind == 0:
        _remove_edge(nbr, deg, pos, u, a)
        own[u, a] = 0
    elif kind == 1:
        _remove_edge(nbr, deg, pos, u, a)
        own[u, a] = 0
        own[a, u] = 0
        _add_edge(nbr, deg, pos, u, b)
        own[u, b] = 1
    else:
        _add_edge(nbr, deg, pos, u, a)
        own[u, a] = 1


@njit(cache=True)
def _tree_ecc(nbr, deg, n, dist, ecc):
    """All eccentricities of a tree via the double-sweep endpoints."""
    _bfs_row(nbr, deg, n, 0, dist)
    a = 0
    for v in range(n):
        if dist[v] > dist[a]:
            a = v
    _bfs_row(nbr, deg, n, a, dist)
    b = 0
    for v in range(n):
        ecc[v] = dist[v]
        if dist[v] > dist[b]:
            b = v
    _bfs_row(nbr, deg, n, b, dist)
    diam = np.int64(0)
    for v in range(n):
        if dist[v] > ecc[v]:
            ecc[v] = dist[v]
        if ecc[v] > diam:
            diam = ecc[v]
    return diam


@njit(cache=True)
def sim_run(
    nbr, deg, own, pos, n, game, metric, p, q,
    policy, selector, seed, max_steps, monitor_tree,
):
    """Run the dynamics; returns status, steps, op counts and monitor flags.

    Output: (status, steps, deletes, swaps, buys, potential_ok, diameter_ok,
    terminal_diameter).
    """
    rng = np.uint64(seed)
    dist = np.empty(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    costs = np.empty(n, dtype=np.int64)
    dtab = np.empty((n, n), dtype=np.int64)
    cap = 3 * n * n + 8
    ties_kind = np.empty(cap, dtype=np.int64)
    ties_a = np.empty(cap, dtype=np.int64)
    ties_b = np.empty(cap, dtype=np.int64)
    ecc = np.empty(n, dtype=np.int64)
    ecc_sorted_prev = np.empty(n, dtype=np.int64)
    ecc_sorted = np.empty(n, dtype=np.int64)
    m1 = np.empty(n, dtype=np.int64)
    m2 = np.empty(n, dtype=np.int64)
    a1 = np.empty(n, dtype=np.int64)

    potential_ok = 1
    diameter_ok = 1
    prev_diam = np.int64(-1)
    prev_social = np.int64(-1)
    if monitor_tree == 1:
        prev_diam = _tree_ecc(nbr, deg, n, dist, ecc)
        if metric == MAX:
            for v in range(n):
                ecc_sorted_prev[v] = ecc[v]
            ecc_sorted_prev.sort()
        else:
            _fill_table(nbr, deg, n, dtab)
            prev_social = np.int64(0)
            for v in range(n):
                prev_social += _row_cost(dtab, n, v, metric)

    steps = 0
    deletes = 0
    swaps = 0
    buys = 0
    while steps < max_steps:
        _fill_table(nbr, deg, n, dtab)
        mover = -1
        mkind = -1
        ma = -1
        mb = -1
        if policy == P_RANDOM:
            for i in range(n):
                order[i] = i
            for i in range(n - 1, 0, -1):
                rng, z = _next_u64(rng)
                j = np.int64(z % np.uint64(i + 1))
                t = order[i]
                order[i] = order[j]
                order[j] = t
        else:
            for u in range(n):
                costs[u] = (
                    np.int64(q) * _row_cost(dtab, n, u, metric)
                    + np.int64(p) * _owned_count(nbr, deg, own, u)
                )
            for i in range(n):
                order[i] = i
            for i in range(1, n):  # insertion sort by (-cost, id)
                v = order[i]
                j = i - 1
                while j >= 0 and (
                    costs[order[j]] < costs[v]
                    or (costs[order[j]] == costs[v] and order[j] > v)
                ):
                    order[j + 1] = order[j]
                    j -= 1
                order[j + 1] = v
            if policy == P_MAXCOST_RANDOM:
                i = 0
                while i < n:
                    j = i
                    while j + 1 < n and costs[order[j + 1]] == costs[order[i]]:
                        j += 1
                    for k in range(j, i, -1):
                        rng, z = _next_u64(rng)
                        l = i + np.int64(z % np.uint64(k - i + 1))
                        t = order[k]
                        order[k] = order[l]
                        order[l] = t
                    i = j + 1
        for i in range(n):
            u = order[i]
            found, kind, a, b, best, cnt = _scan_moves(
                nbr, deg, own, n, u, game, metric, p, q, dtab,
                dist, queue, np.int64(-1), m1, m2, a1,
            )
            if not found:
                continue
            mover = u
            if selector == S_BEST_CANONICAL:
                mkind = kind
                ma = a
                mb = b
            elif selector == S_ANY_RANDOM:
                _f, _k, _a, _b, _c, total = _scan_moves(
                    nbr, deg, own, n, u, game, metric, p, q, dtab,
                    dist, queue, np.int64(1) << 40, m1, m2, a1,
                )
                rng, z = _next_u64(rng)
                want = np.int64(z % np.uint64(total))
                _f2, kind2, a2, b2, _c2, _cnt2 = _scan_moves(
                    nbr, deg, own, n, u, game, metric, p, q, dtab,
                    dist, queue, want, m1, m2, a1,
                )
                mkind = kind2
                ma = a2
                mb = b2
            else:
                op_pref = selector == S_BEST_OPPREF
                m = _collect_best_ties(
                    nbr, deg, own, n, u, game, metric, p, q, best, dtab,
                    ties_kind, ties_a, ties_b, dist, queue, op_pref, m1, m2, a1,
                )
                rng, z = _next_u64(rng)
                j = np.int64(z % np.uint64(m))
                mkind = ties_kind[j]
                ma = ties_a[j]
                mb = ties_b[j]
            break
        if mover < 0:
            diam = np.int64(-1)
            if monitor_tree == 1:
                diam = _tree_ecc(nbr, deg, n, dist, ecc)
            return 0, steps, deletes, swaps, buys, potential_ok, diameter_ok, diam

        _apply(nbr, deg, own, pos, mover, mkind, ma, mb)
        steps += 1
        if mkind == 0:
            deletes += 1
        elif mkind == 1:
            swaps += 1
        else:
            buys += 1

        if monitor_tree == 1:
            diam = _tree_ecc(nbr, deg, n, dist, ecc)
            if diam > prev_diam:
                diameter_ok = 0
            prev_diam = diam
            if metric == MAX:
                for v in range(n):
                    ecc_sorted[v] = ecc[v]
                ecc_sorted.sort()
                # descending vectors compare from the top entries, i.e. from
                # the end of the ascending arrays
                decreased = False
                for v in range(n - 1, -1, -1):
                    if ecc_sorted[v] < ecc_sorted_prev[v]:
                        decreased = True
                        break
                    if ecc_sorted[v] > ecc_sorted_prev[v]:
                        break
                if not decreased:
                    potential_ok = 0
                for v in range(n):
                    ecc_sorted_prev[v] = ecc_sorted[v]
            else:
                _fill_table(nbr, deg, n, dtab)
                social = np.int64(0)
                for v in range(n):
                    social += _row_cost(dtab, n, v, metric)
                if social >= prev_social:
                    potential_ok = 0
                prev_social = social
    diam = np.int64(-1)
    if monitor_tree == 1:
        diam = _tree_ecc(nbr, deg, n, dist, ecc)
    return 1, steps, deletes, swaps, buys, potential_ok, diameter_ok, diam


# -- python-side adapters -----------------------------------------------------

GAME_CODE = {"SG": SG, "ASG": ASG, "GBG": GBG}
METRIC_CODE = {"sum": SUM, "max": MAX}
POLICY_CODE = {"max-cost": P_MAXCOST_MINID, "max-cost-random": P_MAXCOST_RANDOM,
               "random": P_RANDOM}
SELECTOR_CODE = {"best-random": S_BEST_RANDOM, "best-op-pref": S_BEST_OPPREF,
                 "best-canonical": S_BEST_CANONICAL, "any-improving": S_ANY_RANDOM}


def network_to_arrays(net: OwnedNetwork):
    n = net.n
    nbr = np.full((n, n), -1, dtype=np.int64)
    pos = np.full((n, n), -1, dtype=np.int64)
    own = np.zeros((n, n), dtype=np.uint8)
    deg = np.zeros(n, dtype=np.int64)
    for (a, b), o in net.edges.items():
        nbr[a, deg[a]] = b
        pos[a, b] = deg[a]
        deg[a] += 1
        nbr[b, deg[b]] = a
        pos[b, a] = deg[b]
        deg[b] += 1
        own[o, b if o == a else a] = 1
    return nbr, deg, own, pos


def arrays_to_network(nbr, deg, own, n) -> OwnedNetwork:
    edges = []
    for u in range(n):
        for k in range(deg[u]):
            v = nbr[u, k]
            if u < v:
                edges.append((int(u), int(v), int(u if own[u, v] == 1 else v)))
    return OwnedNetwork(n, edges)


def run_fast(
    net: OwnedNetwork,
    game: str,
    metric: str,
    alpha_num: int = 0,
    alpha_den: int = 1,
    policy: str = "max-cost",
    selector: str = "best-random",
    seed: int = 0,
    max_steps: int = 0,
    monitor_tree: bool = False,
):
    """Run the compiled dynamics on a network; returns a result dict."""
    nbr, deg, own, pos = network_to_arrays(net)
    n = net.n
    if max_steps <= 0:
        max_steps = 50 * n * n
    g = GAME_CODE[game]
    p = alpha_num if g == GBG else 0
    q = alpha_den if g == GBG else 1
    status, steps, deletes, swaps, buys, pot_ok, diam_ok, diam = sim_run(
        nbr, deg, own, pos, n, g, METRIC_CODE[metric], p, q,
        POLICY_CODE[policy], SELECTOR_CODE[selector],
        np.uint64(seed), max_steps, 1 if monitor_tree else 0,
    )
    return {
        "status": "converged" if status == 0 else "step-limit",
        "steps": int(steps),
        "deletes": int(deletes),
        "swaps": int(swaps),
        "buys": int(buys),
        "potential_ok": bool(pot_ok),
        "diameter_ok": bool(diam_ok),
        "terminal_diameter": int(diam),
        "terminal": arrays_to_network(nbr, deg, own, n),
    }
