"""Reconstruction of the counterexample-cycle networks.

The cycle instances ship as claim files, but several of them are pinned down
only by scattered numeric facts (cost values, move deltas, uniqueness of
improving moves) rather than an explicit edge list.  This module contains

* deterministic builders for the instances whose structure the facts force
  outright, and
* constrained searches over small parametric graph families for the rest
  (the swap-game triangle instance, the one-edge-budget instances, the
  asymmetric-swap cycle core, and the greedy-buy max-metric tree).

Each search checks candidate graphs against the full fact list using the
exact game engine, so a returned instance certifies by construction.  The
searches are deterministic and re-runnable; the shipped claim files record
which facts pinned each instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from ..netcore import (
    Game,
    GameConfig,
    Metric,
    NEG_INFINITY,
    OwnedNetwork,
    agent_cost,
    distance_cost,
)
from ..games import (
    Buy,
    Delete,
    Move,
    Replace,
    Swap,
    apply_move,
    best_responses,
    improving_moves,
    iter_multiswap_moves,
    move_delta,
    unhappy_agents,
)

SUM_SG = GameConfig(Game.SG, Metric.SUM)
MAX_SG = GameConfig(Game.SG, Metric.MAX)
SUM_ASG = GameConfig(Game.ASG, Metric.SUM)
MAX_ASG = GameConfig(Game.ASG, Metric.MAX)


@dataclass
class Reconstruction:
    """A pinned instance: initial network, readable names, script, notes."""

    names: list[str]
    initial: OwnedNetwork
    script: list[Move]
    notes: list[str] = field(default_factory=list)

    def index(self, name: str) -> int:
        return self.names.index(name)


def _ecc(net: OwnedNetwork, u: int) -> int:
    d = net._bfs(u)
    return -1 if min(d) < 0 else max(d)


def _ecc_with(net: OwnedNetwork, u: int, extra: tuple[int, int]) -> int:
    return _ecc(net.with_edge(extra[0], extra[1], extra[0]), u)


# ---------------------------------------------------------------------------
# Swap-game triangle instance (three rotated movers, cost-3 corona)
# ---------------------------------------------------------------------------

FIG2_NAMES = ["a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3"]


def search_fig2() -> Reconstruction:
    """Find the 9-vertex Max-SG cycle instance.

    Facts: vertices a1, a3, b3, c3 have eccentricity 3 and all others 2;
    a3/b3/c3 each see exactly two vertices at distance 3; a1 is the unique
    unhappy agent and her swap of a1b1 to a1c1 attains the optimum cost 2;
    the three-step script returns to the exact start.  The construction is a
    rotation-invariant base plus a broken-symmetry path a1-b1-c1 missing one
    edge, which makes each move a relabeling of the previous state.
    """
    n = 9
    rho = [3, 4, 5, 6, 7, 8, 0, 1, 2]
    # orbit representatives of vertex pairs under the 3-rotation
    orbits: list[tuple[tuple[int, int], ...]] = []
    seen: set[tuple[int, int]] = set()
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) in seen:
                continue
            orb = []
            x, y = a, b
            for _ in range(3):
                p = (x, y) if x < y else (y, x)
                orb.append(p)
                seen.add(p)
                x, y = rho[x], rho[y]
            orbits.append(tuple(orb))
    moving = tuple(sorted([(0, 3), (3, 6), (0, 6)]))
    free = [o for o in orbits if tuple(sorted(o)) != moving]
    assert len(free) == 11

    want_three = {0, 2, 5, 8}
    solutions = []
    for mask in range(1 << len(free)):
        base = []
        for i, orb in enumerate(free):
            if mask >> i & 1:
                base.extend(orb)
        edges = [(a, b, min(a, b)) for a, b in base]
        edges.append((0, 3, 3))  # a1b1, owned so the closure is exact
        edges.append((3, 6, 6))  # b1c1
        try:
            net = OwnedNetwork(n, edges)
        except ValueError:
            continue
        eccs = [_ecc(net, u) for u in range(n)]
        if min(eccs) < 0:
            continue
        if any(e != (3 if u in want_three else 2) for u, e in enumerate(eccs)):
            continue
        if unhappy_agents(net, MAX_SG) != {0}:
            continue
        cost, moves = best_responses(net, 0, MAX_SG)
        if cost != 2 or Swap(0, 3, 6) not in moves:
            continue
        # closure: three rotated swaps must return to the exact start
        ok = True
        state = net
        for mv in (Swap(0, 3, 6), Swap(3, 6, 0), Swap(6, 0, 3)):
            if move_delta(state, mv, MAX_SG) <= 0:
                ok = False
                break
            state = apply_move(state, mv)
        if not ok or state != net:
            continue
        solutions.append(net)
    if not solutions:
        raise RuntimeError("no graph satisfies the swap-triangle fact list")
    # deterministic choice: fewest edges, then smallest edge list
    solutions.sort(key=lambda g: (g.m, g.edge_triples()))
    net = solutions[0]
    fars = {u: sum(1 for d in net._bfs(u) if d == 3) for u in (2, 5, 8)}
    return Reconstruction(
        FIG2_NAMES,
        net,
        [Swap(0, 3, 6), Swap(3, 6, 0), Swap(6, 0, 3)],
        notes=[
            f"search space: 2^11 rotation-invariant bases; {len(solutions)} satisfy all facts",
            "shipped instance is the edge-minimal one (non-uniqueness documented)",
            "the happiness of the cost-3 non-movers is verified by enumeration; "
            f"their distance-3 set sizes here are {fars} (the prose reasons with "
            "exactly two far vertices each, which no rotation-invariant base attains)",
        ],
    )


# ---------------------------------------------------------------------------
# Asymmetric swap cycle core (two movers with one free edge each)
# ---------------------------------------------------------------------------


def _fig3_network(
    n_a: int, n_c: int, n_e: int, n_f: int, b_free: int, f_pos: int
) -> tuple[Optional[OwnedNetwork], list[str]]:
    # core ids: a=0 b=1 c=2 d=3 e=4 f=5, then leaf families and d1
    names = ["a", "b", "c", "d", "e", "f"]
    edges: list[tuple[int, int, int]] = [(1, 2, 1), (1, 4, 1), (0, 4, 0)]
    nxt = 6
    for owner, count, tag in ((0, n_a, "a"), (2, n_c, "c"), (4, n_e, "e"), (5, n_f, "f")):
        for i in range(count):
            names.append(f"{tag}{i + 1}")
            edges.append((owner, nxt, owner))
            nxt += 1
    names.append("d1")
    edges.append((3, nxt, 3))
    nxt += 1
    for t in (0, 2, 4):  # d links to the three leaf-richest agents
        edges.append((3, t, 3))
    edges.append((1, b_free, 1))
    edges.append((5, f_pos, 5))
    try:
        return OwnedNetwork(nxt, edges), names
    except ValueError:
        return None, names


def search_fig3() -> Reconstruction:
    """Find the Sum-ASG best-response-cycle instance.

    Facts: agents b and f alternate, with deltas exactly (4, 1, 1, 3); every
    scripted move is the mover's unique best response; the mover is the only
    unhappy agent in every state, also when multi-swaps are allowed, and no
    multi-swap beats the best single swap; the script closes exactly; in the
    plain swap game f beats her asymmetric optimum by swapping the b-owned
    edge fb towards e.  Fixed structure: a owns edges to four leaves and to
    e; b owns edges to c, e and one free edge (f or a); f owns leaf edges
    plus exactly one non-bridge edge (her d/e toggle); d owns a leaf d1 and
    edges to the three leaf-richest agents a, c, e.  Searched: the four
    leaf-family sizes.
    """
    want = [Fraction(4), Fraction(1), Fraction(1), Fraction(3)]
    hits = []
    for n_a in range(0, 6):
        for n_c in range(1, 8):
            for n_e in range(1, 8):
                for n_f in range(1, 6):
                    got = _try_fig3((n_a, n_c, n_e, n_f), want)
                    if got is not None:
                        hits.append(((n_a, n_c, n_e, n_f), got))
    if not hits:
        raise RuntimeError("no graph satisfies the asymmetric-swap fact list")
    (n_a, n_c, n_e, n_f), (net, names, script, deltas) = hits[0]
    return Reconstruction(
        names,
        net,
        script,
        notes=[
            f"unique family sizes realizing deltas (4,1,1,3): {n_a} leaves on a, "
            f"{n_c} on c, {n_e} on e, {n_f} on f"
            + (f" ({len(hits)} solutions)" if len(hits) > 1 else ""),
            "d's three non-leaf edges go to a, c, e: the three leaf-richest agents",
        ],
    )


def _try_fig3(params: tuple, want: list[Fraction]) -> Optional[tuple]:
    n_a, n_c, n_e, n_f = params
    nets = {}
    names: list[str] = []
    for key, (b_free, f_pos) in {1: (5, 3), 2: (5, 4), 3: (0, 4), 4: (0, 3)}.items():
        net, names = _fig3_network(n_a, n_c, n_e, n_f, b_free, f_pos)
        if net is None or not net.is_connected():
            return None
        nets[key] = net
    script = [
        Swap(5, 3, 4),  # f: d -> e
        Swap(1, 5, 0),  # b: f -> a
        Swap(5, 4, 3),  # f: e -> d
        Swap(1, 0, 5),  # b: a -> f
    ]
    deltas = [move_delta(nets[i + 1], mv, SUM_ASG) for i, mv in enumerate(script)]
    if deltas != want:
        return None
    multi_cfg = GameConfig(Game.ASG, Metric.SUM, multi_swap=True)
    for i, mv in enumerate(script):
        state = nets[i + 1]
        _, moves = best_responses(state, mv.mover, SUM_ASG)
        if moves != [mv]:
            return None
        if unhappy_agents(state, SUM_ASG) != {mv.mover}:
            return None
        if unhappy_agents(state, multi_cfg, ceiling=state.n) != {mv.mover}:
            return None
        best_multi = max(
            (
                move_delta(state, m2, multi_cfg)
                for m2 in iter_multiswap_moves(state, mv.mover, multi_cfg, ceiling=state.n)
            ),
            default=NEG_INFINITY,
        )
        if not best_multi < deltas[i]:
            return None
    if apply_move(nets[4], script[3]) != nets[1]:
        return None
    # plain-SG remark: f may swap the b-owned edge fb, beating her ASG optimum
    if move_delta(nets[1], Swap(5, 1, 4), SUM_SG) <= deltas[0]:
        return None
    return nets[1], names, script, deltas


# ---------------------------------------------------------------------------
# One-edge-budget instances
# ---------------------------------------------------------------------------


def build_fig5() -> Reconstruction:
    """Sum-ASG cycle where every agent owns exactly one edge.

    The family sizes are forced: the d-family has 8 members (the re-swap
    gains exactly 8 over the d-side), the c-family has n_b + n_d + 1 = 11
    members, and two b's suffice.  Verified against the engine by the claim
    tests; the layout is a 'hub' tree plus one cross edge d1-b2.
    """
    names = ["a1", "a2", "a3", "a4", "a5", "b1", "b2"]
    names += [f"c{i}" for i in range(1, 12)]
    names += [f"d{i}" for i in range(1, 9)]
    ix = {nm: i for i, nm in enumerate(names)}
    edges = [(ix["a1"], ix["b1"], ix["a1"])]
    for hi, lo in [("a2", "a1"), ("a3", "a2"), ("a4", "a3"), ("a5", "a4")]:
        edges.append((ix[hi], ix[lo], ix[hi]))
    edges.append((ix["b1"], ix["d1"], ix["b1"]))
    edges.append((ix["b2"], ix["b1"], ix["b2"]))
    edges.append((ix["c1"], ix["b1"], ix["c1"]))
    for i in range(2, 12):
        edges.append((ix[f"c{i}"], ix["c1"], ix[f"c{i}"]))
    edges.append((ix["d1"], ix["b2"], ix["d1"]))
    for i in range(2, 9):
        edges.append((ix[f"d{i}"], ix["d1"], ix[f"d{i}"]))
    net = OwnedNetwork(len(names), edges)
    script = [
        Swap(ix["a1"], ix["b1"], ix["c1"]),
        Swap(ix["b1"], ix["d1"], ix["a4"]),
        Swap(ix["a1"], ix["c1"], ix["b1"]),
        Swap(ix["b1"], ix["a4"], ix["d1"]),
    ]
    return Reconstruction(
        names,
        net,
        script,
        notes=[
            "n_d = 8 forced by the d-side distance gain of 8; n_c = n_b + n_d + 1",
            "b1's first swap improves by 2 (ties with target a3); the re-swaps improve by 1",
        ],
    )


def search_fig6() -> Reconstruction:
    """Find the Max-ASG one-edge-budget cycle instance.

    Facts: a1 improves 6 -> 5 with exactly the swap targets e2..e5; b1
    improves 6 -> 5 with exactly a2/a3; after both moves the unique cycle of
    the graph has length 9, a1 then sees d3 at distance 7 and b4 at 6 and
    improves to 6 with exactly the targets e1/e2/e3; finally b1 sees e6 at 8
    and improves to 7 with exactly a1/e1; swapping back to a1 restores the
    start.  Family sizes and attachment points are searched.
    """
    results = []
    for nb in (4, 5):
        for e6_at in ("e5", "e4"):
            for e1_to in [f"b{i}" for i in range(2, nb + 1)]:
                for d1_to in (
                    ["e1", "e2", "e3", "e4", "e6"]
                    + [f"b{i}" for i in range(1, nb + 1)]
                    + [f"a{i}" for i in range(2, 7)]
                ):
                    got = _try_fig6(nb, e6_at, e1_to, d1_to)
                    if got is not None:
                        score, rec = got
                        results.append((score, nb, e6_at, e1_to, d1_to, rec))
    if not results:
        raise RuntimeError("no graph satisfies the max one-edge-budget fact list")
    results.sort(key=lambda r: -r[0])
    score, nb, e6_at, e1_to, d1_to, rec = results[0]
    rec.notes.append(
        f"pinned attachment: e1->{e1_to}, d1->{d1_to}, e6 on {e6_at}, {nb} b-agents"
        + (f" ({len(results)} candidate layouts satisfy the hard facts)" if len(results) > 1 else "")
    )
    return rec


def _try_fig6(nb: int, e6_at: str, e1_to: str, d1_to: str) -> Optional[Reconstruction]:
    names = [f"a{i}" for i in range(1, 7)]
    names += [f"b{i}" for i in range(1, nb + 1)]
    names += [f"d{i}" for i in range(1, 4)]
    names += [f"e{i}" for i in range(1, 7)]
    ix = {nm: i for i, nm in enumerate(names)}
    fixed: list[tuple[int, int, int]] = []
    for i in range(2, 7):
        fixed.append((ix[f"a{i}"], ix[f"a{i-1}"], ix[f"a{i}"]))
    for i in range(2, nb + 1):
        fixed.append((ix[f"b{i}"], ix[f"b{i-1}"], ix[f"b{i}"]))
    for i in range(2, 6):
        fixed.append((ix[f"e{i}"], ix[f"e{i-1}"], ix[f"e{i}"]))
    fixed.append((ix["e6"], ix[e6_at], ix["e6"]))
    fixed.append((ix["e1"], ix[e1_to], ix["e1"]))
    fixed.append((ix["d1"], ix[d1_to], ix["d1"]))
    fixed.append((ix["d2"], ix["d1"], ix["d2"]))
    fixed.append((ix["d3"], ix["d2"], ix["d3"]))

    def state(a1_to: str, b1_to: str) -> Optional[OwnedNetwork]:
        edges = fixed + [
            (ix["a1"], ix[a1_to], ix["a1"]),
            (ix["b1"], ix[b1_to], ix["b1"]),
        ]
        try:
            return OwnedNetwork(len(names), edges)
        except ValueError:
            return None

    st1 = state("e1", "a1")
    st2 = state("e5", "a1")
    st3 = state("e5", "a3")
    st4 = state("e1", "a3")
    if any(s is None or not s.is_connected() for s in (st1, st2, st3, st4)):
        return None
    a1, b1 = ix["a1"], ix["b1"]

    def best_targets(net: OwnedNetwork, u: int, want_cost: int) -> Optional[set[int]]:
        cost, moves = best_responses(net, u, MAX_ASG)
        if cost != want_cost:
            return None
        return {mv.new for mv in moves}

    if _ecc(st1, a1) != 6:
        return None
    t1 = best_targets(st1, a1, 5)
    want1 = {ix["e2"], ix["e3"], ix["e4"], ix["e5"]}
    if t1 is None or not want1 <= t1:
        return None
    if _ecc(st2, b1) != 6:
        return None
    t2 = best_targets(st2, b1, 5)
    if t2 is None or not {ix["a2"], ix["a3"]} <= t2:
        return None
    if _cycle_length(st2) != 9:
        return None
    if _ecc(st3, a1) != 7:
        return None
    d_a1 = st3._bfs(a1)
    if d_a1[ix["d3"]] != 7 or d_a1[ix["b4"]] != 6:
        return None
    want3 = {ix["e1"], ix["e2"], ix["e3"]}
    t3 = best_targets(st3, a1, 6)
    if t3 is None or ix["e1"] not in t3 or not t3 <= want3:
        return None
    if _ecc(st4, b1) != 8 or st4._bfs(b1)[ix["e6"]] != 8:
        return None
    imp4 = improving_moves(st4, b1, MAX_ASG)
    if {mv.new for mv, _ in imp4} != {ix["a1"], ix["e1"]}:
        return None
    t4 = best_targets(st4, b1, 7)
    if t4 != {ix["a1"], ix["e1"]}:
        return None
    script = [
        Swap(a1, ix["e1"], ix["e5"]),
        Swap(b1, a1, ix["a3"]),
        Swap(a1, ix["e5"], ix["e1"]),
        Swap(b1, ix["a3"], a1),
    ]
    if apply_move(st4, script[3]) != st1:
        return None
    for u in range(len(names)):
        if st1.owned_count(u) != 1:
            return None
    score = (t3 == want3) * 10 + (t1 == want1) * 5 + (t2 == {ix["a2"], ix["a3"]}) * 5
    notes = ["cycle of length 9 after the first move"]
    if t3 != want3:
        notes.append(
            "third-state improving targets realize as {"
            + ",".join(sorted(names[x] for x in t3))
            + "} (the prose lists e1, e2 and e3; no layout attains all hard facts and that full set)"
        )
    if t1 != want1:
        notes.append(
            "first-state optimal targets realize as {"
            + ",".join(sorted(names[x] for x in t1)) + "}"
        )
    return score, Reconstruction(names, st1, script, notes=notes)


def _cycle_length(net: OwnedNetwork) -> int:
    """Length of the unique cycle of a connected graph with m == n."""
    deg = {u: net.degree(u) for u in range(net.n)}
    alive = set(range(net.n))
    changed = True
    while changed:
        changed = False
        for u in list(alive):
            if deg[u] == 1:
                alive.discard(u)
                deg[u] = 0
                for v in net.neighbors(u):
                    if v in alive:
                        deg[v] -= 1
                changed = True
    return len(alive)


# ---------------------------------------------------------------------------
# Asymmetric swap instance with two two-state movers (hand-derived)
# ---------------------------------------------------------------------------

FIG4_NAMES = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k",
              "l1", "l2", "l3", "l4", "l5", "l6"]


def build_fig4() -> Reconstruction:
    """Max-ASG six-step cycle on 17 agents.

    The base is forced by the proof's distance table (which vertices lie
    within 2 or 3 of each named leaf); the three toggling edges are owned by
    a, b and c.  States 5 and 6 are isomorphic to states 2 and 3.
    """
    ix = {nm: i for i, nm in enumerate(FIG4_NAMES)}
    E = []
    for onm, tnm in [
        ("k", "l1"), ("k", "c"), ("k", "j"),
        ("e", "l2"), ("e", "j"),
        ("d", "e"), ("d", "f"),
        ("f", "l3"), ("f", "g"),
        ("g", "h"),
        ("h", "l4"), ("h", "i"),
        ("i", "l5"), ("i", "l6"), ("i", "a"), ("i", "b"),
        ("c", "g"), ("j", "g"),
    ]:
        E.append((ix[onm], ix[tnm], ix[onm]))
    E.append((ix["a"], ix["d"], ix["a"]))
    E.append((ix["b"], ix["d"], ix["b"]))
    E.append((ix["c"], ix["b"], ix["c"]))
    net = OwnedNetwork(len(FIG4_NAMES), E)
    a, b, c, d, e = ix["a"], ix["b"], ix["c"], ix["d"], ix["e"]
    script = [
        Swap(a, d, e),
        Swap(c, b, a),
        Swap(b, d, e),
        Swap(a, e, d),
        Swap(c, a, b),
        Swap(b, e, d),
    ]
    return Reconstruction(FIG4_NAMES, net, script,
                          notes=["base pinned by the proof's leaf-distance table"])


# ---------------------------------------------------------------------------
# Greedy-buy instances
# ---------------------------------------------------------------------------

FIG7_NAMES = ["a", "b", "c", "d", "e", "f", "g"]


def build_fig7() -> Reconstruction:
    """Sum-(G)BG six-step cycle on the 7-vertex path (alpha in (7,8)).

    Backbone owners are pinned by who can act: c owns cb (deleted and later
    re-bought), e owns ef (f owns nothing when she buys), d owns cd and de,
    g owns her path edge.  The owner of ab is irrelevant to play and is
    fixed to a.
    """
    ix = {nm: i for i, nm in enumerate(FIG7_NAMES)}
    edges = [
        (ix["a"], ix["b"], ix["a"]),
        (ix["b"], ix["c"], ix["c"]),
        (ix["c"], ix["d"], ix["d"]),
        (ix["d"], ix["e"], ix["d"]),
        (ix["e"], ix["f"], ix["e"]),
        (ix["f"], ix["g"], ix["g"]),
    ]
    net = OwnedNetwork(7, edges)
    b, c, f, g = ix["b"], ix["c"], ix["f"], ix["g"]
    script = [
        Swap(g, f, c),
        Buy(f, b),
        Delete(c, b),
        Swap(g, c, f),
        Buy(c, b),
        Delete(f, b),
    ]
    return Reconstruction(FIG7_NAMES, net, script)


FIG8_NAMES = ["a", "b", "c", "d", "e", "f", "g"]


def search_fig8() -> Reconstruction:
    """Find the Max-(G)BG four-step cycle base (alpha in (1,2)).

    Facts: in the base tree g has eccentricity 5 and e (a leaf) 4; buying ga
    is optimal for g and yields 3; then buying ea yields 2 for e; deleting
    ga leaves g at 4; deleting ea returns to the base with e at 4.  The buy
    moves must be best responses even over arbitrary strategy replacements.
    On the host graph (base plus ag, ae) the scripted mover always has
    exactly one improving move; agent a, however, is also unhappy in the
    second and fourth state of every consistent base (her deviating buys
    produce ownership twins of the next state), so the stronger claim that
    exactly one agent is unhappy there is certified in that weakened form.
    """
    n = 7
    a, e, g = 0, 4, 6
    alpha = Fraction(3, 2)
    cfg = GameConfig(Game.GBG, Metric.MAX, alpha)
    for tree in _labeled_trees(n):
        net0 = OwnedNetwork(n, [(x, y, x) for x, y in tree])
        if net0.degree(e) != 1:
            continue
        if net0.has_edge(g, a) or net0.has_edge(e, a):
            continue
        if _ecc(net0, g) != 5 or _ecc(net0, e) != 4:
            continue
        if _ecc_with(net0, g, (g, a)) != 3:
            continue
        if any(_ecc_with(net0, g, (g, w)) < 3 for w in range(n)
               if w != g and not net0.has_edge(g, w)):
            continue
        g2 = net0.with_edge(g, a, g)
        if _ecc(g2, e) != 4:
            continue
        g3 = g2.with_edge(e, a, e)
        if _ecc(g3, e) != 2 or _ecc(g3, g) != 3:
            continue
        g4 = net0.with_edge(e, a, e)
        if _ecc(g4, g) != 4 or _ecc(g4, e) != 3:
            continue
        rec = _fig8_assign_owners(tree, alpha, cfg)
        if rec is not None:
            return rec
    raise RuntimeError("no tree satisfies the greedy-buy max fact list")


def _labeled_trees(n: int) -> Iterable[list[tuple[int, int]]]:
    for seq in itertools.product(range(n), repeat=n - 2):
        yield _pruefer_decode(list(seq), n)


def _pruefer_decode(seq: list[int], n: int) -> list[tuple[int, int]]:
    deg = [1] * n
    for x in seq:
        deg[x] += 1
    edges = []
    import heapq

    leaves = [u for u in range(n) if deg[u] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        deg[x] -= 1
        if deg[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return edges


def _fig8_assign_owners(
    tree: list[tuple[int, int]], alpha: Fraction, cfg: GameConfig
) -> Optional[Reconstruction]:
    a, e, g = 0, 4, 6
    free: list[tuple[int, int]] = []
    forced: list[tuple[int, int, int]] = []
    for x, y in tree:
        if e in (x, y) or g in (x, y):
            other = y if x in (e, g) else x
            forced.append((x, y, other))
        else:
            free.append((x, y))
    script = [Buy(g, a), Buy(e, a), Delete(g, a), Delete(e, a)]
    best: Optional[tuple] = None
    for owners in itertools.product((0, 1), repeat=len(free)):
        edges = forced + [
            (x, y, (x, y)[o]) for (x, y), o in zip(free, owners)
        ]
        net = OwnedNetwork(7, edges)
        got = _fig8_verify(net, script, alpha, cfg)
        if got is None:
            continue
        extras, unhappy_sets = got
        if best is None or extras < best[0]:
            best = (extras, net, unhappy_sets)
    if best is None:
        return None
    extras, net, unhappy_sets = best
    return Reconstruction(
        FIG8_NAMES,
        net,
        script,
        notes=[
            "tree pinned by the eccentricity facts; owners minimize host-graph deviation",
            "host-graph unhappy sets per state: "
            + "; ".join("{" + ",".join(FIG8_NAMES[u] for u in sorted(s)) + "}" for s in unhappy_sets)
            + " (the corollary's exactly-one-unhappy claim is unrealizable: the buy hub"
            " and redundant-edge owners also improve; the mover's improving move is"
            " unique in every state)",
        ],
    )


def _fig8_verify(
    net: OwnedNetwork, script: list[Move], alpha: Fraction, cfg: GameConfig
) -> Optional[tuple[int, list[set[int]]]]:
    """Check the base cycle facts; return host-deviation size and unhappy sets."""
    bg = GameConfig(Game.BG, Metric.MAX, alpha)
    state = net
    states = []
    for mv in script:
        states.append(state)
        if move_delta(state, mv, cfg) <= 0:
            return None
        cost, moves = best_responses(state, mv.mover, cfg)
        if mv not in moves:
            return None
        bg_cost, _ = best_responses(state, mv.mover, bg)
        if bg_cost != cost:
            return None
        state = apply_move(state, mv)
    if state != net:
        return None
    # host variant: the mover must be unhappy with a unique improving move
    host = set(net.edges) | {(0, 6), (0, 4)}
    extras = 0
    unhappy_sets = []
    for st, mv in zip(states, script):
        hnet = OwnedNetwork(st.n, dict(st.edges), host)
        unh = unhappy_agents(hnet, cfg)
        if mv.mover not in unh:
            return None
        imp = improving_moves(hnet, mv.mover, cfg)
        if len(imp) != 1 or imp[0][0] != mv:
            return None
        extras += len(unh) - 1
        unhappy_sets.append(unh)
    return extras, unhappy_sets


# ---------------------------------------------------------------------------
# Bilateral equal-split instances (hand-derived)
# ---------------------------------------------------------------------------

FIG11_NAMES = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"]


def build_fig11() -> Reconstruction:
    """Sum bilateral no-escape instance: a 5-cycle with six leaves."""
    ix = {nm: i for i, nm in enumerate(FIG11_NAMES)}
    pairs = [
        ("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a"),
        ("a", "f"), ("c", "g"), ("d", "h"), ("d", "i"), ("e", "j"), ("e", "k"),
    ]
    edges = [(ix[x], ix[y], min(ix[x], ix[y])) for x, y in pairs]
    net = OwnedNetwork(11, edges)
    script = [
        Replace(ix["a"], frozenset({ix["e"], ix["f"]}), neighbor_set=True),
        Replace(ix["b"], frozenset({ix["c"], ix["f"]}), neighbor_set=True),
        Replace(ix["e"], frozenset({ix["d"], ix["f"], ix["j"], ix["k"]}), neighbor_set=True),
    ]
    return Reconstruction(FIG11_NAMES, net, script)


FIG12_NAMES = ["a", "b", "c", "d", "e", "f", "g", "h"]


def build_fig12() -> Reconstruction:
    """Max bilateral best-response cycle: a 6-cycle with two leaves."""
    ix = {nm: i for i, nm in enumerate(FIG12_NAMES)}
    pairs = [
        ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("f", "g"), ("g", "b"),
        ("a", "b"), ("e", "h"),
    ]
    edges = [(ix[x], ix[y], min(ix[x], ix[y])) for x, y in pairs]
    net = OwnedNetwork(8, edges)
    script = [
        Replace(ix["a"], frozenset({ix["b"], ix["e"]}), neighbor_set=True),
        Replace(ix["c"], frozenset({ix["b"]}), neighbor_set=True),
        Replace(ix["e"], frozenset({ix["d"], ix["f"], ix["h"]}), neighbor_set=True),
        Replace(ix["c"], frozenset({ix["b"], ix["d"]}), neighbor_set=True),
    ]
    return Reconstruction(FIG12_NAMES, net, script)
