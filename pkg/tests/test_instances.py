"""Generators, canonical labeling and the reconstruction searches."""

import random

import networkx as nx
import pytest

from ncgsim import (
    OwnedNetwork,
    canonical_form,
    gen_bounded_budget,
    gen_path,
    gen_random_network,
    gen_random_tree,
    isomorphic,
)
from ncgsim.instances.canon import IsoCeilingError
from ncgsim.instances.catalog import catalog_instance
from ncgsim.instances.generators import InfeasibleGeneration
from ncgsim.games import apply_move


class TestBoundedBudget:
    def test_exact_infeasible_n2(self):
        with pytest.raises(InfeasibleGeneration):
            gen_bounded_budget(2, 1, seed=1, exact=True)

    def test_cap_mode_n2(self):
        net = gen_bounded_budget(2, 1, seed=1, exact=False)
        assert net.m == 1 and net.is_connected()

    def test_exact_counts(self):
        net = gen_bounded_budget(20, 3, seed=9)
        assert net.is_connected()
        assert net.m == 60
        assert all(net.owned_count(u) == 3 for u in range(20))

    def test_k1_is_almost_a_tree(self):
        net = gen_bounded_budget(100, 1, seed=4)
        assert net.is_connected() and net.m == 100
        assert all(net.owned_count(u) == 1 for u in range(100))

    def test_budget_never_exceeded_cap_mode(self):
        for seed in range(5):
            net = gen_bounded_budget(30, 2, seed=seed, exact=False)
            assert net.is_connected()
            assert all(net.owned_count(u) <= 2 for u in range(30))

    def test_deterministic(self):
        assert gen_bounded_budget(24, 2, seed=11) == gen_bounded_budget(24, 2, seed=11)

    def test_too_dense_reported(self):
        with pytest.raises(InfeasibleGeneration):
            gen_bounded_budget(4, 3, seed=1, exact=True)  # 12 > C(4,2)


class TestRandomNetwork:
    def test_tree_case(self):
        net = gen_random_network(10, 9, seed=2)
        assert net.m == 9 and net.is_connected()

    def test_complete_case(self):
        net = gen_random_network(6, 15, seed=2)
        assert net.m == 15

    def test_mid_density(self):
        net = gen_random_network(50, 200, seed=3)
        assert net.m == 200 and net.is_connected()

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            gen_random_network(10, 8, seed=1)
        with pytest.raises(ValueError):
            gen_random_network(10, 46, seed=1)

    def test_deterministic(self):
        assert gen_random_network(30, 60, seed=8) == gen_random_network(30, 60, seed=8)


class TestPaths:
    def test_dl_two(self):
        net = gen_path(2, "dl")
        assert net.edges == {(0, 1): 0}

    def test_dl_owners(self):
        net = gen_path(5, "dl")
        assert [net.owner(i, i + 1) for i in range(4)] == [0, 1, 2, 3]

    def test_rl_deterministic(self):
        assert gen_path(9, "rl", seed=6) == gen_path(9, "rl", seed=6)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            gen_path(4, "zigzag")


def to_ownership_digraph(net):
    g = nx.DiGraph()
    g.add_nodes_from(range(net.n))
    for (a, b), o in net.edges.items():
        u, v = (a, b) if o == a else (b, a)
        g.add_edge(u, v)
    return g


class TestCanonicalForm:
    def test_p3_relabel_equal(self):
        dl = OwnedNetwork(3, [(0, 1, 0), (1, 2, 1)])
        assert canonical_form(dl) == canonical_form(dl.relabeled([2, 1, 0]))

    def test_p3_opposed_middle_differs(self):
        dl = OwnedNetwork(3, [(0, 1, 0), (1, 2, 1)])
        opposed = OwnedNetwork(3, [(0, 1, 1), (1, 2, 1)])
        assert canonical_form(dl) != canonical_form(opposed)

    def test_fig4_states_isomorphic(self):
        claim = catalog_instance("fig4")
        states = [claim.initial]
        for s in claim.steps:
            states.append(apply_move(states[-1], s.move))
        assert isomorphic(states[4], states[1], ceiling=20)
        assert isomorphic(states[5], states[2], ceiling=20)
        assert not isomorphic(states[3], states[0], ceiling=20)

    def test_relabel_invariance_random(self):
        rng = random.Random(31)
        for _ in range(40):
            n = rng.randint(2, 9)
            net = gen_random_network(n, rng.randint(n - 1, n * (n - 1) // 2), seed=rng.randrange(9999))
            perm = list(range(n))
            rng.shuffle(perm)
            assert canonical_form(net) == canonical_form(net.relabeled(perm))

    def test_agrees_with_vf2(self):
        rng = random.Random(32)
        for _ in range(60):
            n = rng.randint(2, 8)
            a = gen_random_network(n, rng.randint(n - 1, n * (n - 1) // 2), seed=rng.randrange(9999))
            b = gen_random_network(n, a.m, seed=rng.randrange(9999))
            mine = isomorphic(a, b)
            theirs = nx.is_isomorphic(to_ownership_digraph(a), to_ownership_digraph(b))
            assert mine == theirs

    def test_ceiling_enforced(self):
        net = gen_random_tree(20, 1)
        with pytest.raises(IsoCeilingError):
            canonical_form(net, ceiling=16)

    def test_unowned_mode(self):
        dl = OwnedNetwork(3, [(0, 1, 0), (1, 2, 1)])
        opposed = OwnedNetwork(3, [(0, 1, 1), (1, 2, 1)])
        assert isomorphic(dl, opposed, use_ownership=False)


class TestCatalogTopologies:
    def test_unit_budget_invariant_fig5_fig6(self):
        for name in ("fig5", "fig6"):
            claim = catalog_instance(name)
            state = claim.initial
            for s in claim.steps:
                assert all(state.owned_count(u) == 1 for u in range(state.n))
                state = apply_move(state, s.move)

    def test_catalog_networks_connected(self):
        for name in ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
                     "fig11", "fig12"):
            claim = catalog_instance(name)
            assert claim.initial.is_connected()
