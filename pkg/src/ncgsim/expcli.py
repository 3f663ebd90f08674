"""Experiment harness and command-line front end.

Experiments reproduce the convergence-time studies at desk scale: generate
random initial networks, run best-response dynamics under a move policy,
and record per-trial step counts and operation histograms.  Trials execute
on the compiled lane and may run in parallel; a master seed derives every
per-trial seed, so serial and parallel execution produce identical records.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from multiprocessing import Pool
from typing import Optional

from .netcore import (
    Game,
    GameConfig,
    Metric,
    OwnedNetwork,
    agent_cost,
    cost_profile,
    parse_network,
    social_cost,
    write_network,
)
from .games import best_responses, move_to_str
from . import dynamics
from .fastsim import run_fast
from .instances.generators import (
    gen_bounded_budget,
    gen_path,
    gen_random_network,
    gen_random_tree,
)
from .instances.catalog import (
    CATALOG_NAMES,
    catalog_instance,
    certify_cycle,
    load_claim_file,
)
from .rng import derive_seed


def parse_scaled(expr: str, n: int) -> Fraction:
    """Parse 'n', '4n', 'n/10', '3/2' or '17' relative to the agent count."""
    s = expr.strip().replace(" ", "")
    if s == "n":
        return Fraction(n)
    if s.startswith("n/"):
        return Fraction(n, int(s[2:]))
    if s.endswith("n"):
        return Fraction(s[:-1]) * n
    return Fraction(s)


@dataclass
class GeneratorSpec:
    kind: str  # bounded-budget | random-m | rl | dl | tree
    k: int = 1
    m: str = "n"
    exact: bool = True

    def build(self, n: int, seed: int) -> OwnedNetwork:
        if self.kind == "bounded-budget":
            return gen_bounded_budget(n, self.k, seed, exact=self.exact)
        if self.kind == "random-m":
            m = int(parse_scaled(self.m, n))
            return gen_random_network(n, m, seed)
        if self.kind in ("rl", "dl"):
            return gen_path(n, self.kind, seed)
        if self.kind == "tree":
            return gen_random_tree(n, seed)
        raise ValueError(f"unknown generator {self.kind!r}")

    def label(self, n: int) -> str:
        if self.kind == "bounded-budget":
            return f"k={self.k}" + ("" if self.exact else "(cap)")
        if self.kind == "random-m":
            return f"m={self.m}"
        return self.kind


@dataclass
class ExperimentSpec:
    game: str
    metric: str
    generator: GeneratorSpec
    ns: list[int]
    trials: int = 100
    alpha: str = "0"
    policy: str = "max-cost"
    selector: str = "best-random"
    seed: int = 1
    max_steps: str = "50nn"  # 'Knn' means K*n^2, 'Kn' means K*n
    out: Optional[str] = None

    @staticmethod
    def from_json(text: str) -> "ExperimentSpec":
        raw = json.loads(text)
        gen = GeneratorSpec(**raw.pop("generator"))
        return ExperimentSpec(generator=gen, **raw)

    def steps_budget(self, n: int) -> int:
        s = self.max_steps.strip()
        if s.endswith("nn"):
            return int(Fraction(s[:-2] or 1) * n * n)
        return int(parse_scaled(s, n))


@dataclass
class TrialRecord:
    n: int
    param: str
    trial: int
    seed: int
    status: str
    steps: int
    buys: int
    deletes: int
    swaps: int
    wall_ms: int

    def row(self) -> list[str]:
        return [str(x) for x in (self.n, self.param, self.trial, self.seed,
                                 self.status, self.steps, self.buys,
                                 self.deletes, self.swaps, self.wall_ms)]


RECORD_HEADER = ["n", "param", "trial", "seed", "status", "steps",
                 "buys", "deletes", "swaps", "wall_ms"]


def _run_one(args: tuple) -> TrialRecord:
    raw, n, trial = args
    gen = GeneratorSpec(**raw["generator"])
    spec = ExperimentSpec(
        generator=gen, **{k: v for k, v in raw.items() if k != "generator"}
    )
    seed = derive_seed(spec.seed, spec.ns.index(n), trial)
    net = spec.generator.build(n, seed)
    alpha = parse_scaled(spec.alpha, n) if spec.game == "GBG" else Fraction(0)
    t0 = time.perf_counter()
    r = run_fast(
        net,
        spec.game,
        spec.metric,
        alpha.numerator,
        alpha.denominator,
        policy=spec.policy,
        selector=spec.selector,
        seed=derive_seed(seed, 1),
        max_steps=spec.steps_budget(n),
    )
    wall = int((time.perf_counter() - t0) * 1000)
    param = spec.generator.label(n)
    if spec.game == "GBG":
        param += f",a={spec.alpha}"
    return TrialRecord(
        n, param, trial, seed, r["status"], r["steps"], r["buys"],
        r["deletes"], r["swaps"], wall,
    )


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[TrialRecord]:
    """All trials for every n; deterministic apart from wall-clock fields."""
    tasks = []
    raw = asdict(spec)
    for n in spec.ns:
        for t in range(spec.trials):
            tasks.append((dict(raw, generator=dict(raw["generator"])), n, t))
    if jobs > 1:
        with Pool(jobs) as pool:
            records = pool.map(_run_one, tasks, chunksize=8)
    else:
        records = [_run_one(t) for t in tasks]
    records.sort(key=lambda r: (r.n, r.param, r.trial))
    return records


def records_to_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(RECORD_HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def records_from_csv(text: str) -> list[TrialRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == RECORD_HEADER, "unexpected record header"
    out = []
    for row in rows[1:]:
        if not row:
            continue
        out.append(TrialRecord(int(row[0]), row[1], int(row[2]), int(row[3]),
                               row[4], int(row[5]), int(row[6]), int(row[7]),
                               int(row[8]), int(row[9])))
    return out


SUMMARY_HEADER = ["n", "param", "avg_steps", "max_steps", "converged",
                  "cycled", "limited"]


@dataclass
class Summary:
    n: int
    param: str
    avg_steps: Fraction
    max_steps: int
    converged: int
    cycled: int
    limited: int


def summarize(records: list[TrialRecord]) -> list[Summary]:
    """Exact per-(n, parameter) aggregates of an experiment's records."""
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple[int, str], list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.param), []).append(r)
    out = []
    for (n, param) in sorted(groups):
        rs = groups[(n, param)]
        total = sum(r.steps for r in rs)
        out.append(Summary(
            n, param,
            Fraction(total, len(rs)),
            max(r.steps for r in rs),
            sum(1 for r in rs if r.status == "converged"),
            sum(1 for r in rs if r.status == "cycle"),
            sum(1 for r in rs if r.status == "step-limit"),
        ))
    return out


def summaries_to_csv(summaries: list[Summary]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(SUMMARY_HEADER)
    for s in summaries:
        w.writerow([s.n, s.param, str(s.avg_steps), s.max_steps,
                    s.converged, s.cycled, s.limited])
    return buf.getvalue()


def summaries_from_csv(text: str) -> list[Summary]:
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == SUMMARY_HEADER, "unexpected summary header"
    return [
        Summary(int(r[0]), r[1], Fraction(r[2]), int(r[3]), int(r[4]),
                int(r[5]), int(r[6]))
        for r in rows[1:] if r
    ]


# -- CLI ----------------------------------------------------------------------


def _game_config(args) -> GameConfig:
    game = Game(args.game)
    alpha = Fraction(args.alpha) if args.alpha else Fraction(0)
    return GameConfig(game, Metric(args.metric), alpha)


def _read_network(path: str) -> OwnedNetwork:
    if path == "-":
        return parse_network(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return parse_network(fh.read())


def cmd_gen(args) -> int:
    gen = GeneratorSpec(kind=args.kind, k=args.k, m=args.m, exact=not args.cap)
    net = gen.build(args.n, args.seed)
    sys.stdout.write(write_network(net))
    return 0


def cmd_cost(args) -> int:
    net = _read_network(args.network)
    cfg = _game_config(args)
    if args.agent is not None:
        print(agent_cost(net, args.agent, cfg))
        return 0
    prof = cost_profile(net, cfg)
    for u, c in enumerate(prof.per_agent):
        print(f"agent {u}: {c}")
    print("sorted distance costs:", tuple(str(x) for x in prof.sorted_vector))
    print("centers:", sorted(prof.centers))
    print("diameter:", prof.diameter)
    print("social cost:", social_cost(net, cfg))
    return 0


def cmd_br(args) -> int:
    net = _read_network(args.network)
    cfg = _game_config(args)
    cost, moves = best_responses(net, args.agent, cfg)
    if not moves:
        print(f"agent {args.agent} is happy (cost {cost})")
        return 0
    print(f"optimal cost {cost} via {len(moves)} move(s):")
    for mv in moves:
        print("  " + move_to_str(mv))
    return 0


def cmd_run(args) -> int:
    net = _read_network(args.network)
    cfg = _game_config(args)
    policy: dynamics.MovePolicy
    if args.policy == "max-cost":
        policy = dynamics.MaxCost(tiebreak="min-id")
    elif args.policy == "max-cost-random":
        policy = dynamics.MaxCost(tiebreak="random", seed=args.seed)
    elif args.policy == "random":
        policy = dynamics.Random(seed=args.seed)
    elif args.policy == "round-robin":
        policy = dynamics.RoundRobin()
    else:
        raise SystemExit(f"unknown policy {args.policy!r}")
    if args.selector == "best-response":
        selector = dynamics.BestResponse(tiebreak="random", seed=args.seed + 1)
    elif args.selector == "best-canonical":
        selector = dynamics.BestResponse(tiebreak="canonical")
    elif args.selector == "op-preference":
        selector = dynamics.BestResponse(tiebreak="op-preference", seed=args.seed + 1)
    elif args.selector == "any-improving":
        selector = dynamics.AnyImproving(seed=args.seed + 1)
    else:
        raise SystemExit(f"unknown selector {args.selector!r}")
    out, trace = dynamics.run(
        net, policy, selector, cfg,
        max_steps=args.max_steps,
        cycle_detection=args.cycle_detection,
    )
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(trace.to_text())
    if args.trace_json:
        with open(args.trace_json, "w", encoding="utf-8") as fh:
            fh.write(trace.to_json())
    print(f"outcome: {out.status} after {out.steps} steps")
    if out.status == "cycle":
        print(f"cycle entry {out.cycle_entry}, period {out.cycle_period} ({out.cycle_mode})")
        return 3
    return 0 if out.status == "converged" else 2


def cmd_certify(args) -> int:
    if args.claim in CATALOG_NAMES:
        claim = catalog_instance(args.claim)
    else:
        claim = load_claim_file(args.claim)
    report = certify_cycle(claim, Fraction(args.alpha) if args.alpha else None)
    for line in report.summary_lines():
        print(line)
    return 0 if report.passed else 1


def cmd_experiment(args) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = ExperimentSpec.from_json(fh.read())
    records = run_experiment(spec, jobs=args.jobs)
    text = records_to_csv(records)
    out = args.out or spec.out
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(records)} records to {out}")
    else:
        sys.stdout.write(text)
    if args.jsonl:
        with open(args.jsonl, "w", encoding="utf-8") as fh:
            for r in records:
                fh.write(json.dumps(asdict(r)) + "\n")
    return 0


def cmd_summarize(args) -> int:
    with open(args.records, "r", encoding="utf-8") as fh:
        records = records_from_csv(fh.read())
    sys.stdout.write(summaries_to_csv(summarize(records)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ncgsim",
        description="sequential-move network creation games: costs, best "
                    "responses, dynamics, cycle certification, experiments",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="emit a random network file")
    g.add_argument("--kind", default="bounded-budget",
                   choices=["bounded-budget", "random-m", "rl", "dl", "tree"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--m", default="n")
    g.add_argument("--cap", action="store_true",
                   help="treat the budget as an upper bound")
    g.add_argument("--seed", type=int, default=1)
    g.set_defaults(func=cmd_gen)

    def game_args(p):
        p.add_argument("--game", default="SG",
                       choices=[g.value for g in Game])
        p.add_argument("--metric", default="sum", choices=["sum", "max"])
        p.add_argument("--alpha", default=None, help="edge price p/q")

    c = sub.add_parser("cost", help="print agent costs and the cost profile")
    c.add_argument("network")
    game_args(c)
    c.add_argument("--agent", type=int, default=None)
    c.set_defaults(func=cmd_cost)

    b = sub.add_parser("br", help="print an agent's best responses")
    b.add_argument("network")
    game_args(b)
    b.add_argument("--agent", type=int, required=True)
    b.set_defaults(func=cmd_br)

    r = sub.add_parser("run", help="run the dynamics from a network file")
    r.add_argument("network")
    game_args(r)
    r.add_argument("--policy", default="max-cost",
                   choices=["max-cost", "max-cost-random", "random", "round-robin"])
    r.add_argument("--selector", default="best-response",
                   choices=["best-response", "best-canonical", "op-preference",
                            "any-improving"])
    r.add_argument("--seed", type=int, default=1)
    r.add_argument("--max-steps", type=int, default=None)
    r.add_argument("--cycle-detection", default="exact",
                   choices=["exact", "isomorphism"])
    r.add_argument("--trace", default=None, help="write a text trace here")
    r.add_argument("--trace-json", default=None)
    r.set_defaults(func=cmd_run)

    ce = sub.add_parser("certify", help="certify a catalog entry or claim file")
    ce.add_argument("claim", help="catalog name (e.g. fig7) or a claim file path")
    ce.add_argument("--alpha", default=None)
    ce.set_defaults(func=cmd_certify)

    e = sub.add_parser("experiment", help="run an experiment spec (JSON)")
    e.add_argument("spec")
    e.add_argument("--out", default=None)
    e.add_argument("--jsonl", default=None)
    e.add_argument("--jobs", type=int, default=1)
    e.set_defaults(func=cmd_experiment)

    s = sub.add_parser("summarize", help="aggregate a records CSV")
    s.add_argument("records")
    s.set_defaults(func=cmd_summarize)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
