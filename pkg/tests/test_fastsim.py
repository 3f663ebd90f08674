"""The compiled lane must replay the exact engine bit for bit."""

import random
from fractions import Fraction

from ncgsim import (
    Game,
    GameConfig,
    Metric,
    OwnedNetwork,
    apply_move,
    unhappy_agents,
)
from ncgsim.dynamics import BestResponse, MaxCost, run
from ncgsim.fastsim import run_fast
from ncgsim.instances.generators import gen_random_network


def random_instance(rng):
    n = rng.randint(4, 9)
    m = rng.randint(n - 1, min(n * (n - 1) // 2, n + 4))
    return gen_random_network(n, m, seed=rng.randrange(10**6))


def test_deterministic_lane_equivalence():
    rng = random.Random(99)
    for _ in range(60):
        net = random_instance(rng)
        game = rng.choice(["SG", "ASG", "GBG"])
        metric = rng.choice(["sum", "max"])
        alpha = Fraction(rng.randint(1, 9), rng.choice((1, 2, 4)))
        cfg = GameConfig(Game(game), Metric(metric),
                         alpha if game == "GBG" else Fraction(0))
        out, trace = run(net, MaxCost(tiebreak="min-id"),
                         BestResponse(tiebreak="canonical"), cfg,
                         cycle_detection=None, max_steps=300)
        r = run_fast(net, game, metric, alpha.numerator, alpha.denominator,
                     policy="max-cost", selector="best-canonical",
                     seed=0, max_steps=300)
        state = net
        for s in trace.steps:
            state = apply_move(state, s.move)
        assert out.steps == r["steps"]
        assert state == r["terminal"]


def test_fast_terminal_states_are_stable():
    rng = random.Random(123)
    for _ in range(20):
        net = random_instance(rng)
        game = rng.choice(["SG", "ASG", "GBG"])
        metric = rng.choice(["sum", "max"])
        alpha = Fraction(rng.randint(1, 9), rng.choice((1, 2)))
        r = run_fast(net, game, metric, alpha.numerator, alpha.denominator,
                     policy=rng.choice(["max-cost", "random"]),
                     selector=rng.choice(["best-random", "any-improving"]),
                     seed=rng.randrange(10**6))
        assert r["status"] == "converged"
        cfg = GameConfig(Game(game), Metric(metric),
                         alpha if game == "GBG" else Fraction(0))
        assert unhappy_agents(r["terminal"], cfg) == set()


def test_histogram_partitions_steps():
    rng = random.Random(7)
    for _ in range(10):
        net = random_instance(rng)
        game = rng.choice(["SG", "ASG", "GBG"])
        r = run_fast(net, game, "sum", 3, 1, policy="random",
                     selector="best-random", seed=rng.randrange(10**6))
        assert r["buys"] + r["deletes"] + r["swaps"] == r["steps"]
        if game in ("SG", "ASG"):
            assert r["buys"] == 0 and r["deletes"] == 0


def test_tree_monitor_flags():
    from ncgsim.instances.generators import gen_random_tree

    for seed in range(6):
        net = gen_random_tree(20, seed)
        r = run_fast(net, "SG", "max", policy="random",
                     selector="any-improving", seed=seed, monitor_tree=True)
        assert r["status"] == "converged"
        assert r["potential_ok"] and r["diameter_ok"]
        assert r["terminal_diameter"] <= 3


def test_fast_seed_determinism():
    net = gen_random_network(24, 40, seed=5)
    a = run_fast(net, "GBG", "sum", 6, 1, policy="random",
                 selector="best-op-pref", seed=42)
    b = run_fast(net, "GBG", "sum", 6, 1, policy="random",
                 selector="best-op-pref", seed=42)
    assert a["steps"] == b["steps"] and a["terminal"] == b["terminal"]
