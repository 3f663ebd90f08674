"""Policies, the runner, recurrence detection and potential monitors."""

import random
from fractions import Fraction
from math import ceil

import pytest

from ncgsim import (
    AnyImproving,
    BestResponse,
    Game,
    GameConfig,
    MaxCost,
    Metric,
    OwnedNetwork,
    Random as RandomPolicy,
    RoundRobin,
    Scripted,
    apply_move,
    agent_cost,
    cost_profile,
    detect_recurrence,
    improving_moves,
    potential_value,
    run,
    select_mover,
    social_cost,
    step,
)
from ncgsim.dynamics import parse_trace_text
from ncgsim.instances.catalog import catalog_instance
from ncgsim.instances.generators import gen_random_tree

SUM_SG = GameConfig(Game.SG, Metric.SUM)
MAX_SG = GameConfig(Game.SG, Metric.MAX)
SUM_ASG = GameConfig(Game.ASG, Metric.SUM)
MAX_ASG = GameConfig(Game.ASG, Metric.MAX)


def path(n):
    return OwnedNetwork(n, [(i, i + 1, i) for i in range(n - 1)])


def star(leaves):
    return OwnedNetwork(leaves + 1, [(0, i, 0) for i in range(1, leaves + 1)])


class TestSelectMover:
    def test_stable_star(self):
        for policy in (MaxCost(), RandomPolicy(seed=1), RoundRobin()):
            assert select_mover(star(4), policy, SUM_SG) is None

    def test_p9_maxcost_min_id(self):
        # both path ends have maximal cost; the min-id tiebreak picks 0
        assert select_mover(path(9), MaxCost(tiebreak="min-id"), MAX_SG) == 0

    def test_fig2_any_policy(self):
        claim = catalog_instance("fig2")
        a1 = claim.agent("a1")
        for policy in (MaxCost(), RandomPolicy(seed=3), RoundRobin()):
            assert select_mover(claim.initial, policy, MAX_SG) == a1


class TestStep:
    def test_stable_returns_none(self):
        assert step(star(4), MaxCost(), BestResponse(seed=0), SUM_SG) is None

    def test_p3_is_stable_by_enumeration(self):
        # oracle: no agent of the 3-path has an improving sum swap
        net = path(3)
        for u in range(3):
            assert improving_moves(net, u, SUM_SG) == []
        assert step(net, MaxCost(), BestResponse(seed=0), SUM_SG) is None

    def test_fig8_scripted_buy(self):
        claim = catalog_instance("fig8")
        cfg = claim.config
        policy = Scripted([claim.steps[0].move])
        rec, after = step(claim.initial, policy, BestResponse(seed=0), cfg)
        assert after == apply_move(claim.initial, claim.steps[0].move)

    def test_scripted_rejects_non_improving(self):
        from ncgsim import Swap

        policy = Scripted([Swap(0, 1, 2)])
        with pytest.raises(ValueError):
            step(path(3), policy, BestResponse(seed=0), SUM_SG)


class TestRun:
    def test_star_converges_immediately(self):
        out, _ = run(star(5), MaxCost(), BestResponse(seed=0), SUM_SG)
        assert out.status == "converged" and out.steps == 0

    def test_fig7_scripted_cycle(self):
        claim = catalog_instance("fig7")
        moves = [s.move for s in claim.steps] * 2
        out, _ = run(claim.initial, Scripted(moves), BestResponse(seed=0),
                     claim.config, cycle_detection="exact")
        assert out.status == "cycle" and out.cycle_period == 6

    def test_fig7_cycle_isomorphism_mode(self):
        claim = catalog_instance("fig7")
        moves = [s.move for s in claim.steps] * 2
        out, _ = run(claim.initial, Scripted(moves), BestResponse(seed=0),
                     claim.config, cycle_detection="isomorphism")
        assert out.status == "cycle" and out.cycle_period == 6

    def test_p9_maxcost_regression(self):
        out, trace = run(path(9), MaxCost(tiebreak="min-id"),
                         BestResponse(tiebreak="canonical"), MAX_SG)
        assert out.status == "converged"
        assert out.steps == 10  # frozen by simulation
        state = path(9)
        for s in trace.steps:
            state = apply_move(state, s.move)
        assert cost_profile(state, MAX_SG).diameter == 2  # a star

    def test_every_step_improves(self):
        rng = random.Random(21)
        for seed in range(8):
            net = gen_random_tree(12, seed)
            out, trace = run(net, RandomPolicy(seed=seed),
                             AnyImproving(seed=seed + 1), MAX_SG)
            assert out.status == "converged"
            for s in trace.steps:
                assert s.cost_before > s.cost_after

    def test_deterministic_replay(self):
        net = gen_random_tree(16, 7)
        runs = []
        for _ in range(2):
            out, trace = run(net, MaxCost(tiebreak="random", seed=5),
                             BestResponse(tiebreak="random", seed=9), MAX_SG)
            runs.append((out, [s.move for s in trace.steps]))
        assert runs[0] == runs[1]

    def test_bilateral_requires_connected(self):
        cfg = GameConfig(Game.BILATERAL, Metric.SUM, Fraction(11))
        with pytest.raises(ValueError):
            run(OwnedNetwork(3, [(0, 1, 0)]), MaxCost(), BestResponse(seed=0), cfg)

    def test_step_limit_reported(self):
        claim = catalog_instance("fig7")
        moves = [s.move for s in claim.steps] * 4
        out, _ = run(claim.initial, Scripted(moves), BestResponse(seed=0),
                     claim.config, cycle_detection=None, max_steps=9)
        assert out.status == "step-limit" and out.steps == 9


class TestRecurrence:
    def test_fig8_exact_period_four(self):
        claim = catalog_instance("fig8")
        out, trace = run(claim.initial, Scripted([s.move for s in claim.steps]),
                         BestResponse(seed=0), claim.config, cycle_detection=None)
        assert detect_recurrence(trace, "exact") == (0, 4)

    def test_tree_run_has_no_recurrence(self):
        net = gen_random_tree(14, 3)
        out, trace = run(net, RandomPolicy(seed=2), AnyImproving(seed=3), MAX_SG)
        assert detect_recurrence(trace, "exact") is None

    def test_fig4_periods(self):
        claim = catalog_instance("fig4")
        out, trace = run(claim.initial, Scripted([s.move for s in claim.steps]),
                         BestResponse(seed=0), claim.config, cycle_detection=None)
        assert detect_recurrence(trace, "exact") == (0, 6)
        assert detect_recurrence(trace, "isomorphism", claim.config,
                                 iso_ceiling=20) == (1, 3)


class TestPotentials:
    def test_p5_lex_vector(self):
        assert potential_value(path(5), MAX_SG) == (4, 4, 3, 3, 2)

    def test_max_sg_tree_moves_decrease_lex(self):
        rng = random.Random(23)
        for seed in range(10):
            net = gen_random_tree(rng.randint(4, 12), seed)
            before = potential_value(net, MAX_SG)
            for u in range(net.n):
                for mv, _ in improving_moves(net, u, MAX_SG):
                    after = potential_value(apply_move(net, mv), MAX_SG)
                    assert after < before

    def test_sum_sg_tree_moves_decrease_social_cost(self):
        for seed in range(10):
            net = gen_random_tree(10, seed + 100)
            before = social_cost(net, SUM_SG)
            for u in range(net.n):
                for mv, _ in improving_moves(net, u, SUM_SG):
                    assert social_cost(apply_move(net, mv), SUM_SG) < before

    def test_diameter_never_increases_on_tree_runs(self):
        for seed in range(6):
            net = gen_random_tree(14, seed + 50)
            out, trace = run(net, RandomPolicy(seed=seed),
                             AnyImproving(seed=seed), MAX_SG)
            state = net
            diam = cost_profile(state, MAX_SG).diameter
            for s in trace.steps:
                state = apply_move(state, s.move)
                nd = cost_profile(state, MAX_SG).diameter
                assert nd <= diam
                diam = nd
            assert out.status == "converged" and diam <= 3

    def test_split_subtree_costs_never_increase(self):
        # the mover's own component keeps or improves every agent's cost
        for seed in range(6):
            net = gen_random_tree(12, seed + 200)
            out, trace = run(net, RandomPolicy(seed=seed),
                             AnyImproving(seed=seed + 1), MAX_SG)
            state = net
            for s in trace.steps:
                mv = s.move
                cut = state.without_edge(mv.mover, mv.old)
                reach = set()
                frontier = [mv.mover]
                reach.add(mv.mover)
                while frontier:
                    x = frontier.pop()
                    for y in cut.neighbors(x):
                        if y not in reach:
                            reach.add(y)
                            frontier.append(y)
                nxt = apply_move(state, mv)
                for x in reach:
                    assert agent_cost(nxt, x, MAX_SG) <= agent_cost(state, x, MAX_SG)
                state = nxt

    def test_path_best_response_is_center_connection(self):
        # on max-cost path runs every mover lands at 1 + ceil(diam(B)/2)
        # where B is the tree without her; halving to ceil((c-1)/2)+1 holds
        # whenever the residual diameter is c-1 (always at the first step)
        for n in (9, 16, 33):
            out, trace = run(path(n), MaxCost(tiebreak="min-id"),
                             BestResponse(tiebreak="canonical"), MAX_SG)
            state = path(n)
            for i, s in enumerate(trace.steps):
                rest = state.without_edge(s.move.mover, s.move.old)
                sub = [u for u in range(state.n) if u != s.move.mover]
                # eccentricities within the residual component
                diam = 0
                for u in sub:
                    row = rest._bfs(u)
                    diam = max(diam, max(row[v] for v in sub))
                assert s.cost_after == 1 + ceil(diam / 2)
                if diam == s.cost_before - 1:
                    assert s.cost_after == ceil((s.cost_before - 1) / 2) + 1
                state = apply_move(state, s.move)
            first = trace.steps[0]
            assert first.cost_after == ceil((first.cost_before - 1) / 2) + 1


class TestTraceExport:
    def test_text_roundtrip(self):
        out, trace = run(path(9), MaxCost(tiebreak="min-id"),
                         BestResponse(tiebreak="canonical"), MAX_SG)
        again = parse_trace_text(trace.to_text(), path(9))
        assert [s.move for s in again.steps] == [s.move for s in trace.steps]
        assert [s.digest_after for s in again.steps] == [
            s.digest_after for s in trace.steps
        ]
        assert again.status == trace.status

    def test_json_export(self):
        import json

        out, trace = run(path(5), MaxCost(), BestResponse(seed=0), MAX_SG)
        data = json.loads(trace.to_json())
        assert data["status"].startswith("converged")
        assert len(data["steps"]) == out.steps
