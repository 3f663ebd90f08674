"""Cost-engine examples and invariants."""

import random
from collections import deque
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ncgsim import (
    Game,
    GameConfig,
    INFINITY,
    Metric,
    OwnedNetwork,
    agent_cost,
    cost_profile,
    parse_network,
    shortest_path_distances,
    social_cost,
    write_network,
)
from ncgsim.instances.catalog import catalog_instance

SUM_SG = GameConfig(Game.SG, Metric.SUM)
MAX_SG = GameConfig(Game.SG, Metric.MAX)


def path(n):
    return OwnedNetwork(n, [(i, i + 1, i) for i in range(n - 1)])


def star(leaves):
    return OwnedNetwork(leaves + 1, [(0, i, 0) for i in range(1, leaves + 1)])


def brute_distances(net, u):
    """Independent BFS oracle using dict-based layering."""
    seen = {u: 0}
    frontier = [u]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for y in net.neighbors(x):
                if y not in seen:
                    seen[y] = d
                    nxt.append(y)
        frontier = nxt
    return seen


def random_connected(rng, n, extra=2):
    edges = [(i, rng.randrange(i), 0) for i in range(1, n)]
    edges = [(a, b, rng.choice((a, b))) for a, b, _ in edges]
    present = {(min(a, b), max(a, b)) for a, b, _ in edges}
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b and (min(a, b), max(a, b)) not in present:
            present.add((min(a, b), max(a, b)))
            edges.append((a, b, a))
    return OwnedNetwork(n, edges)


class TestDistances:
    def test_path_from_end(self):
        assert shortest_path_distances(path(3), 0) == [0, 1, 2]

    def test_isolated_vertex_is_infinite(self):
        net = OwnedNetwork(2, [])
        assert shortest_path_distances(net, 0) == [0, INFINITY]

    def test_star_center(self):
        assert shortest_path_distances(star(4), 0) == [0, 1, 1, 1, 1]

    def test_invalid_agent(self):
        with pytest.raises(ValueError):
            shortest_path_distances(path(3), 5)

    def test_symmetry_random(self):
        rng = random.Random(1)
        for _ in range(30):
            net = random_connected(rng, rng.randint(2, 12))
            rows = [shortest_path_distances(net, u) for u in range(net.n)]
            for u in range(net.n):
                for v in range(net.n):
                    assert rows[u][v] == rows[v][u]

    def test_matches_brute_oracle(self):
        rng = random.Random(2)
        for _ in range(25):
            net = random_connected(rng, rng.randint(2, 10))
            for u in range(net.n):
                want = brute_distances(net, u)
                got = shortest_path_distances(net, u)
                for v in range(net.n):
                    assert got[v] == want[v]


class TestAgentCost:
    def test_fig7_g_cost(self):
        claim = catalog_instance("fig7")
        g = claim.agent("g")
        cfg = GameConfig(Game.GBG, Metric.SUM, Fraction(15, 2))
        assert agent_cost(claim.initial, g, cfg) == Fraction(15, 2) + 21

    def test_star_center_max(self):
        assert agent_cost(star(4), 0, MAX_SG) == 1

    def test_fig11_a_bilateral(self):
        claim = catalog_instance("fig11")
        cfg = GameConfig(Game.BILATERAL, Metric.SUM, Fraction(11))
        assert agent_cost(claim.initial, claim.agent("a"), cfg) == Fraction(73, 2)

    def test_infinite_iff_disconnected(self):
        net = OwnedNetwork(4, [(0, 1, 0), (2, 3, 2)])
        for cfg in (SUM_SG, MAX_SG):
            assert agent_cost(net, 0, cfg) == INFINITY
        connected = OwnedNetwork(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2)])
        assert agent_cost(connected, 0, SUM_SG) == 6

    def test_exact_rational_alpha(self):
        net = path(4)
        for p, q in [(7, 3), (22, 7), (1, 1)]:
            cfg = GameConfig(Game.GBG, Metric.SUM, Fraction(p, q))
            got = agent_cost(net, 0, cfg)
            assert got == Fraction(p, q) * 1 + 6


class TestCostProfile:
    def test_p5_max(self):
        prof = cost_profile(path(5), MAX_SG)
        assert prof.sorted_vector == (4, 4, 3, 3, 2)
        assert prof.centers == {2}
        assert prof.diameter == 4

    def test_star_max(self):
        prof = cost_profile(star(4), MAX_SG)
        assert prof.sorted_vector == (2, 2, 2, 2, 1)
        assert prof.centers == {0}

    def test_top_two_eccentricities_agree(self):
        # both endpoints of a diametral pair have maximal eccentricity, so
        # the two largest entries coincide on every connected graph
        rng = random.Random(3)
        for _ in range(60):
            net = random_connected(rng, rng.randint(2, 14), extra=rng.randint(0, 5))
            gamma = cost_profile(net, MAX_SG).sorted_vector
            assert gamma[0] == gamma[1]

    def test_radius_halves_diameter_on_trees(self):
        # the center-vertex relation gamma_n = ceil(gamma_1 / 2) is a tree
        # fact; any cycle is a counterexample to the general-graph wording
        rng = random.Random(33)
        for _ in range(60):
            n = rng.randint(2, 16)
            net = OwnedNetwork(n, [(i, rng.randrange(i), i) for i in range(1, n)])
            gamma = cost_profile(net, MAX_SG).sorted_vector
            assert gamma[0] == gamma[1]
            assert gamma[-1] == -(-gamma[0] // 2)  # ceil division
        c5 = OwnedNetwork(5, [(i, (i + 1) % 5, i) for i in range(5)])
        gamma = cost_profile(c5, MAX_SG).sorted_vector
        assert gamma[-1] == 2 != -(-gamma[0] // 2)

    def test_sum_centers_are_medians(self):
        prof = cost_profile(path(4), SUM_SG)
        assert prof.centers == {1, 2}


class TestSocialCost:
    def test_p3(self):
        assert social_cost(path(3), SUM_SG) == 8

    def test_star_k13_against_oracle(self):
        net = star(3)
        oracle = sum(
            sum(brute_distances(net, u).values()) for u in range(net.n)
        )
        assert oracle == 18
        assert social_cost(net, SUM_SG) == 18

    def test_disconnected(self):
        assert social_cost(OwnedNetwork(3, [(0, 1, 0)]), SUM_SG) == INFINITY


class TestCentersOnLongestPaths:
    def test_lemma6_random_trees(self):
        # in a tree the u-v path is unique; every center must lie on every
        # longest path of every agent
        rng = random.Random(4)
        for _ in range(40):
            n = rng.randint(2, 12)
            net = OwnedNetwork(n, [(i, rng.randrange(i), i) for i in range(1, n)])
            prof = cost_profile(net, MAX_SG)
            rows = {u: brute_distances(net, u) for u in range(n)}
            for center in prof.centers:
                for u in range(n):
                    ecc = max(rows[u].values())
                    for v, d in rows[u].items():
                        if d == ecc:
                            assert rows[u][center] + rows[center][v] == d


class TestNetworkFormat:
    def test_roundtrip(self):
        rng = random.Random(5)
        for _ in range(20):
            net = random_connected(rng, rng.randint(2, 10))
            assert parse_network(write_network(net)) == net

    def test_host_roundtrip(self):
        net = OwnedNetwork(3, [(0, 1, 0)], host=[(0, 1), (1, 2)])
        again = parse_network(write_network(net))
        assert again == net and again.host == {(0, 1), (1, 2)}

    def test_rejects_duplicates_and_out_of_range(self):
        with pytest.raises(ValueError):
            parse_network("n 3\n0 1 0\n1 0 1\n")
        with pytest.raises(ValueError):
            parse_network("n 3\n0 7 0\n")
        with pytest.raises(ValueError):
            OwnedNetwork(3, [(0, 1, 2)])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.randoms(use_true_random=False))
def test_sorted_vector_properties_hypothesis(n, rng):
    net = random_connected(rng, n, extra=rng.randint(0, 4))
    gamma = cost_profile(net, MAX_SG).sorted_vector
    assert gamma[0] == gamma[1]
    assert all(gamma[i] >= gamma[i + 1] for i in range(len(gamma) - 1))
