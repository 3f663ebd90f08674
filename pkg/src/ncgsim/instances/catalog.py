"""Cycle claims and their certifier.

A claim file packages an initial network, a scripted move sequence and
per-step assertions transcribed from a cycle construction; the certifier
replays the script with the exact game engine and checks every assertion,
reporting the first counterexample when one fails.

Claim file format (line oriented, ``#`` comments)::

    config game=GBG metric=sum alpha=15/2 alpha-lo=7 alpha-hi=8 \
           closure=exact iso-ceiling=20
    names a,b,c,d,e,f,g
    n 7 [host]
    <a> <b> <owner>              # one line per edge
    host <a> <b>                 # optional host whitelist lines
    step
    assert unhappy {g}
    assert cost g 1 21           # cost of g here is 1*alpha + 21
    move swap g f c
    assert cost-after 1 15       # mover's cost after the move
    assert best
    ...
    end

Within a step, ``assert`` lines before ``move`` constrain the pre-move
state; ``cost-after`` and ``after-iso-to`` constrain the successor.  Agents
may be referenced by name (from ``names``) or by id.  Closure modes:
``exact`` (edge sets with owners), ``exact-unowned``, ``iso``,
``iso-unowned``.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ..netcore import (
    Cost,
    Game,
    GameConfig,
    Metric,
    NEG_INFINITY,
    OwnedNetwork,
    agent_cost,
    is_finite,
    parse_network,
    write_network,
)
from ..games import (
    Move,
    Replace,
    Swap,
    apply_move,
    best_responses,
    bilateral_feasibility,
    improving_moves,
    is_feasible,
    iter_multiswap_moves,
    iter_replace_moves,
    move_delta,
    move_from_str,
    move_to_str,
    unhappy_agents,
)
from .canon import canonical_form


@dataclass
class Assertion:
    kind: str
    args: tuple


@dataclass
class ClaimStep:
    move: Move
    pre_asserts: list[Assertion] = field(default_factory=list)
    post_asserts: list[Assertion] = field(default_factory=list)


@dataclass
class CycleClaim:
    name: str
    config: GameConfig
    initial: OwnedNetwork
    steps: list[ClaimStep]
    names: list[str]
    closure: str = "exact"
    alpha_lo: Optional[Fraction] = None
    alpha_hi: Optional[Fraction] = None
    iso_ceiling: int = 20
    notes: list[str] = field(default_factory=list)

    def agent(self, label: Union[str, int]) -> int:
        if isinstance(label, int):
            return label
        if label in self.names:
            return self.names.index(label)
        return int(label)

    def label(self, u: int) -> str:
        return self.names[u] if u < len(self.names) else str(u)


@dataclass
class CheckResult:
    step: int
    kind: str
    ok: bool
    detail: str = ""


@dataclass
class CertReport:
    claim: str
    alpha: Fraction
    checks: list[CheckResult]
    closure_ok: bool
    closure_detail: str = ""

    @property
    def passed(self) -> bool:
        return self.closure_ok and all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def summary_lines(self) -> list[str]:
        lines = [f"claim {self.claim} at alpha={self.alpha}"]
        by_step: dict[int, list[CheckResult]] = {}
        for c in self.checks:
            by_step.setdefault(c.step, []).append(c)
        for i in sorted(by_step):
            results = by_step[i]
            bad = [c for c in results if not c.ok]
            if bad:
                lines.append(
                    f"  step {i}: FAIL "
                    + "; ".join(f"{c.kind}: {c.detail}" for c in bad)
                )
            else:
                lines.append(f"  step {i}: ok ({len(results)} checks)")
        lines.append(
            "  closure: " + ("ok" if self.closure_ok else f"FAIL {self.closure_detail}")
        )
        lines.append("  verdict: " + ("PASS" if self.passed else "FAIL"))
        return lines


# -- parsing ---------------------------------------------------------------


def _parse_set(token: str) -> list[str]:
    token = token.strip()
    if not (token.startswith("{") and token.endswith("}")):
        raise ValueError(f"expected a {{...}} set, got {token!r}")
    inner = token[1:-1].strip()
    return [t.strip() for t in inner.split(",") if t.strip()] if inner else []


def parse_claim(text: str, name: str = "<claim>") -> CycleClaim:
    lines = [ln.split("#", 1)[0].rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln.strip()]
    cfg_pairs: dict[str, str] = {}
    names: list[str] = []
    net_lines: list[str] = []
    steps: list[ClaimStep] = []
    notes: list[str] = []
    i = 0
    while i < len(lines) and not lines[i].startswith("step"):
        ln = lines[i].strip()
        if ln.startswith("config "):
            for kv in ln[len("config "):].split():
                k, v = kv.split("=", 1)
                cfg_pairs[k] = v
        elif ln.startswith("names "):
            names = [t.strip() for t in ln[len("names "):].split(",")]
        elif ln.startswith("note "):
            notes.append(ln[len("note "):])
        else:
            net_lines.append(ln)
        i += 1
    game = Game(cfg_pairs["game"])
    metric = Metric(cfg_pairs["metric"])
    alpha = Fraction(cfg_pairs.get("alpha", "0"))
    cfg = GameConfig(game, metric, alpha)
    net = parse_network(net_lines)
    claim = CycleClaim(
        name=name,
        config=cfg,
        initial=net,
        steps=steps,
        names=names,
        closure=cfg_pairs.get("closure", "exact"),
        alpha_lo=Fraction(cfg_pairs["alpha-lo"]) if "alpha-lo" in cfg_pairs else None,
        alpha_hi=Fraction(cfg_pairs["alpha-hi"]) if "alpha-hi" in cfg_pairs else None,
        iso_ceiling=int(cfg_pairs.get("iso-ceiling", max(20, net.n))),
        notes=notes,
    )

    def resolve(tok: str) -> int:
        return claim.agent(tok)

    cur_pre: list[Assertion] = []
    cur_move: Optional[Move] = None
    cur_post: list[Assertion] = []

    def flush() -> None:
        nonlocal cur_pre, cur_move, cur_post
        if cur_move is None:
            if cur_pre or cur_post:
                raise ValueError("step block without a move line")
            return
        steps.append(ClaimStep(cur_move, cur_pre, cur_post))
        cur_pre, cur_move, cur_post = [], None, []

    bilateral = game is Game.BILATERAL
    while i < len(lines):
        ln = lines[i].strip()
        i += 1
        if ln == "step":
            flush()
            continue
        if ln == "end":
            break
        if ln.startswith("move "):
            body = ln[len("move "):]
            parts = body.split()
            # resolve agent names inside the move text
            if parts[0] in ("swap", "buy", "delete"):
                resolved = [parts[0]] + [str(resolve(p)) for p in parts[1:]]
                cur_move = move_from_str(" ".join(resolved), bilateral)
            elif parts[0] == "replace":
                targets = frozenset(resolve(t) for t in _parse_set(parts[2]))
                cur_move = Replace(resolve(parts[1]), targets, neighbor_set=bilateral)
            else:
                cur_move = move_from_str(body, bilateral)
            continue
        if not ln.startswith("assert "):
            raise ValueError(f"unexpected line {ln!r}")
        body = ln[len("assert "):]
        parts = body.split()
        kind = parts[0]
        target = cur_post if (cur_move is not None) else cur_pre
        if kind in ("unhappy", "unhappy-multiswap", "unhappy-bg"):
            agents = frozenset(resolve(t) for t in _parse_set(" ".join(parts[1:])))
            target.append(Assertion(kind, (agents,)))
        elif kind == "cost":
            target.append(
                Assertion(kind, (resolve(parts[1]), Fraction(parts[2]), Fraction(parts[3])))
            )
        elif kind == "cost-after":
            cur_post.append(Assertion(kind, (Fraction(parts[1]), Fraction(parts[2]))))
        elif kind in (
            "best",
            "unique-best",
            "unique-improving",
            "bg-best",
            "bg-improving-unique",
            "multiswap-no-better",
            "owns-exactly-one",
            "no-escape",
        ):
            target.append(Assertion(kind, ()))
        elif kind in ("best-targets", "improving-targets"):
            agents = frozenset(resolve(t) for t in _parse_set(" ".join(parts[1:])))
            target.append(Assertion(kind, (agents,)))
        elif kind == "after-iso-to":
            cur_post.append(Assertion(kind, (int(parts[1]),)))
        elif kind in ("blocked", "consent"):
            u = resolve(parts[1])
            targets = frozenset(resolve(t) for t in _parse_set(parts[2]))
            v = resolve(parts[3])
            vals = tuple(Fraction(p) for p in parts[4:8])
            target.append(Assertion(kind, (u, targets, v) + vals))
        else:
            raise ValueError(f"unknown assertion {kind!r}")
    flush()
    if not steps:
        raise ValueError("claim has no steps")
    return claim


def write_claim(claim: CycleClaim) -> str:
    cfg = claim.config
    head = (
        f"config game={cfg.game.value} metric={cfg.metric.value} alpha={cfg.alpha}"
    )
    if claim.alpha_lo is not None:
        head += f" alpha-lo={claim.alpha_lo}"
    if claim.alpha_hi is not None:
        head += f" alpha-hi={claim.alpha_hi}"
    head += f" closure={claim.closure} iso-ceiling={claim.iso_ceiling}"
    out = [head]
    if claim.names:
        out.append("names " + ",".join(claim.names))
    for nt in claim.notes:
        out.append("note " + nt)
    out.append(write_network(claim.initial).rstrip("\n"))

    def fmt_set(agents) -> str:
        return "{" + ",".join(sorted((claim.label(u) for u in agents))) + "}"

    def fmt_assert(a: Assertion) -> str:
        if a.kind in ("unhappy", "unhappy-multiswap", "unhappy-bg",
                      "best-targets", "improving-targets"):
            return f"assert {a.kind} {fmt_set(a.args[0])}"
        if a.kind == "cost":
            return f"assert cost {claim.label(a.args[0])} {a.args[1]} {a.args[2]}"
        if a.kind == "cost-after":
            return f"assert cost-after {a.args[0]} {a.args[1]}"
        if a.kind == "after-iso-to":
            return f"assert after-iso-to {a.args[0]}"
        if a.kind in ("blocked", "consent"):
            u, targets, v, p, q, p2, q2 = a.args
            return (
                f"assert {a.kind} {claim.label(u)} {fmt_set(targets)} "
                f"{claim.label(v)} {p} {q} {p2} {q2}"
            )
        return f"assert {a.kind}"

    def fmt_move(mv: Move) -> str:
        if isinstance(mv, Swap):
            return f"move swap {claim.label(mv.mover)} {claim.label(mv.old)} {claim.label(mv.new)}"
        if isinstance(mv, Replace):
            inner = ",".join(sorted(claim.label(t) for t in mv.targets))
            return f"move replace {claim.label(mv.mover)} {{{inner}}}"
        parts = move_to_str(mv).split()
        return "move " + " ".join([parts[0]] + [claim.label(int(p)) for p in parts[1:]])

    for st in claim.steps:
        out.append("step")
        for a in st.pre_asserts:
            out.append(fmt_assert(a))
        out.append(fmt_move(st.move))
        for a in st.post_asserts:
            out.append(fmt_assert(a))
    out.append("end")
    return "\n".join(out) + "\n"


# -- certification ----------------------------------------------------------


def _canon(net: OwnedNetwork, claim: CycleClaim) -> str:
    unowned = claim.config.game is Game.BILATERAL
    return canonical_form(net, ceiling=claim.iso_ceiling, use_ownership=not unowned)


def _fmt_cost(c: Cost) -> str:
    return str(c)


def certify_cycle(
    claim: CycleClaim, alpha: Optional[Fraction] = None
) -> CertReport:
    """Replay the claim's script and evaluate every assertion exactly."""
    a = Fraction(alpha) if alpha is not None else claim.config.alpha
    cfg = GameConfig(claim.config.game, claim.config.metric, a if a else claim.config.alpha,
                     claim.config.multi_swap)
    if claim.config.edge_cost_mode.value != "none" and a <= 0:
        raise ValueError("buy games need a positive alpha")
    if claim.config.edge_cost_mode.value == "none":
        cfg = GameConfig(claim.config.game, claim.config.metric)
    checks: list[CheckResult] = []
    state = claim.initial
    pre_states: list[OwnedNetwork] = []
    ceiling = max(24, state.n)

    def add(step: int, kind: str, ok: bool, detail: str = "") -> None:
        checks.append(CheckResult(step, kind, ok, detail))

    for idx, st in enumerate(claim.steps, start=1):
        pre_states.append(state)
        mv = st.move
        mover = mv.mover
        delta = move_delta(state, mv, cfg)
        feasible = is_feasible(state, mv, cfg)
        add(
            idx,
            "improving",
            delta > 0 and feasible,
            f"delta={_fmt_cost(delta)} feasible={feasible}",
        )
        successor = apply_move(state, mv)
        for a_ in st.pre_asserts:
            _check_pre(claim, cfg, state, mv, a_, idx, add, ceiling)
        for a_ in st.post_asserts:
            if a_.kind == "cost-after":
                p, q = a_.args
                want = p * cfg.alpha + q
                got = agent_cost(successor, mover, cfg)
                add(idx, "cost-after", got == want,
                    f"{claim.label(mover)}: {_fmt_cost(got)} vs {p}*alpha+{q}={_fmt_cost(want)}")
            elif a_.kind == "after-iso-to":
                k = a_.args[0]
                ref = pre_states[k - 1] if k - 1 < len(pre_states) else None
                ok = ref is not None and _canon(successor, claim) == _canon(ref, claim)
                add(idx, "after-iso-to", ok, f"state {k}")
        state = successor

    closure_ok, closure_detail = _check_closure(claim, state)
    return CertReport(claim.name, cfg.alpha, checks, closure_ok, closure_detail)


def _check_pre(claim, cfg, state, mv, a_, idx, add, ceiling) -> None:
    mover = mv.mover

    if a_.kind == "unhappy":
        want = a_.args[0]
        got = unhappy_agents(state, cfg, ceiling)
        add(idx, "unhappy", got == want,
            "{" + ",".join(sorted(claim.label(u) for u in got)) + "}")
    elif a_.kind == "unhappy-multiswap":
        want = a_.args[0]
        mcfg = GameConfig(cfg.game, cfg.metric, cfg.alpha, multi_swap=True)
        got = unhappy_agents(state, mcfg, ceiling)
        add(idx, "unhappy-multiswap", got == want,
            "{" + ",".join(sorted(claim.label(u) for u in got)) + "}")
    elif a_.kind == "unhappy-bg":
        want = a_.args[0]
        bg = GameConfig(Game.BG, cfg.metric, cfg.alpha)
        got = unhappy_agents(state, bg, ceiling)
        add(idx, "unhappy-bg", got == want,
            "{" + ",".join(sorted(claim.label(u) for u in got)) + "}")
    elif a_.kind == "cost":
        u, p, q = a_.args
        want = p * cfg.alpha + q
        got = agent_cost(state, u, cfg)
        add(idx, "cost", got == want,
            f"{claim.label(u)}: {_fmt_cost(got)} vs {p}*alpha+{q}={_fmt_cost(want)}")
    elif a_.kind == "best":
        _, moves = best_responses(state, mover, cfg, ceiling)
        add(idx, "best", mv in moves, f"{len(moves)} optimal moves")
    elif a_.kind == "unique-best":
        _, moves = best_responses(state, mover, cfg, ceiling)
        add(idx, "unique-best", moves == [mv],
            ", ".join(move_to_str(m) for m in moves[:4]))
    elif a_.kind == "unique-improving":
        imp = [m for m, _ in improving_moves(state, mover, cfg, ceiling)]
        add(idx, "unique-improving", imp == [mv],
            ", ".join(move_to_str(m) for m in imp[:4]))
    elif a_.kind == "best-targets":
        want = a_.args[0]
        _, moves = best_responses(state, mover, cfg, ceiling)
        got = {m.new for m in moves if isinstance(m, Swap)}
        add(idx, "best-targets", got == want,
            "{" + ",".join(sorted(claim.label(u) for u in got)) + "}")
    elif a_.kind == "improving-targets":
        want = a_.args[0]
        imp = improving_moves(state, mover, cfg, ceiling)
        got = {m.new for m, _ in imp if isinstance(m, Swap)}
        add(idx, "improving-targets", got == want,
            "{" + ",".join(sorted(claim.label(u) for u in got)) + "}")
    elif a_.kind == "bg-best":
        bg = GameConfig(Game.BG, cfg.metric, cfg.alpha)
        bg_cost, _ = best_responses(state, mover, bg, ceiling)
        got = agent_cost(apply_move(state, mv), mover, cfg)
        add(idx, "bg-best", got == bg_cost,
            f"move yields {_fmt_cost(got)}, buy-game optimum {_fmt_cost(bg_cost)}")
    elif a_.kind == "bg-improving-unique":
        bg = GameConfig(Game.BG, cfg.metric, cfg.alpha)
        imp = [m for m, _ in improving_moves(state, mover, bg, ceiling)]
        ok = len(imp) == 1 and apply_move(state, imp[0]).edges == apply_move(state, mv).edges
        add(idx, "bg-improving-unique", ok, f"{len(imp)} improving replacements")
    elif a_.kind == "multiswap-no-better":
        mcfg = GameConfig(cfg.game, cfg.metric, cfg.alpha, multi_swap=True)
        best_multi = NEG_INFINITY
        for m2 in iter_multiswap_moves(state, mover, mcfg, ceiling):
            d = move_delta(state, m2, mcfg)
            if d > best_multi:
                best_multi = d
        delta = move_delta(state, mv, cfg)
        add(idx, "multiswap-no-better", not best_multi > delta,
            f"best multi-swap delta {_fmt_cost(best_multi)} vs {_fmt_cost(delta)}")
    elif a_.kind == "owns-exactly-one":
        bad = [u for u in range(state.n) if state.owned_count(u) != 1]
        add(idx, "owns-exactly-one", not bad,
            "violators: " + ",".join(claim.label(u) for u in bad[:5]))
    elif a_.kind == "no-escape":
        succ_label = _canon(apply_move(state, mv), claim)
        offender = ""
        ok = True
        for u in range(state.n):
            for m2, _ in improving_moves(state, u, cfg, ceiling):
                if _canon(apply_move(state, m2), claim) != succ_label:
                    ok = False
                    offender = f"{claim.label(u)}: {move_to_str(m2)}"
                    break
            if not ok:
                break
        add(idx, "no-escape", ok, offender)
    elif a_.kind == "blocked":
        u, targets, v, p, q, p2, q2 = a_.args
        verdict = bilateral_feasibility(state, u, targets, cfg)
        pre = agent_cost(state, v, cfg)
        post = agent_cost(
            apply_move(state, Replace(u, targets, neighbor_set=True)), v, cfg
        )
        ok = (
            not verdict.feasible
            and v in verdict.blockers
            and pre == p * cfg.alpha + q
            and post == p2 * cfg.alpha + q2
        )
        add(idx, "blocked", ok,
            f"{claim.label(v)}: {_fmt_cost(pre)} -> {_fmt_cost(post)}, "
            f"blockers {{{','.join(sorted(claim.label(b) for b in verdict.blockers))}}}")
    elif a_.kind == "consent":
        u, targets, v, p, q, p2, q2 = a_.args
        verdict = bilateral_feasibility(state, u, targets, cfg)
        pre = agent_cost(state, v, cfg)
        post = agent_cost(
            apply_move(state, Replace(u, targets, neighbor_set=True)), v, cfg
        )
        ok = (
            verdict.feasible
            and pre == p * cfg.alpha + q
            and post == p2 * cfg.alpha + q2
        )
        add(idx, "consent", ok,
            f"{claim.label(v)}: {_fmt_cost(pre)} -> {_fmt_cost(post)}")
    else:  # pragma: no cover
        raise ValueError(f"unknown assertion kind {a_.kind}")


def _check_closure(claim: CycleClaim, final: OwnedNetwork) -> tuple[bool, str]:
    initial = claim.initial
    mode = claim.closure
    if mode == "exact":
        return final == initial, "edge/owner sets differ" if final != initial else ""
    if mode == "exact-unowned":
        ok = final.same_edge_set(initial)
        return ok, "" if ok else "edge sets differ"
    use_own = mode == "iso"
    ok = canonical_form(final, claim.iso_ceiling, use_own) == canonical_form(
        initial, claim.iso_ceiling, use_own
    )
    return ok, "" if ok else "final state not isomorphic to initial"


# -- packaged catalog -------------------------------------------------------

CATALOG_NAMES = [
    "fig2", "fig3", "fig3-host", "fig4", "fig4-host", "fig5", "fig6",
    "fig7", "fig7-host", "fig8", "fig8-host", "fig11", "fig12",
]


def catalog_instance(name: str) -> CycleClaim:
    """Load a packaged claim by catalog name."""
    if name not in CATALOG_NAMES:
        raise KeyError(f"unknown catalog instance {name!r}; know {CATALOG_NAMES}")
    res = importlib.resources.files(__package__) / "catalog" / f"{name}.claim"
    return parse_claim(res.read_text(), name)


def load_claim_file(path: str) -> CycleClaim:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_claim(fh.read(), path)
