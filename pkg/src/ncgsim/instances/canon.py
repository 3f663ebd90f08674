"""Canonical labeling of small owned networks.

Ownership turns the network into a digraph (edges point away from their
owner); two networks get the same canonical label iff some vertex bijection
preserves both adjacency and ownership direction.  Labels are computed by
iterated color refinement plus individualization backtracking, which is
exponential in the worst case but fast on the small, nearly rigid graphs the
certifier handles; a ceiling guards against misuse.
"""

from __future__ import annotations

from typing import Optional

from ..netcore import OwnedNetwork

DEFAULT_ISO_CEILING = 16


class IsoCeilingError(RuntimeError):
    pass


class _Canonizer:
    def __init__(self, net: OwnedNetwork, use_ownership: bool) -> None:
        self.n = net.n
        # typed arcs: 0 = owner->other, 1 = other->owner, 2 = undirected
        self.arcs: dict[tuple[int, int], int] = {}
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(net.n)]
        for (a, b), o in net.edges.items():
            if use_ownership:
                u, v = (a, b) if o == a else (b, a)
                self._add(u, v, 0)
                self._add(v, u, 1)
            else:
                self._add(a, b, 2)
                self._add(b, a, 2)
        self.best: Optional[bytes] = None

    def _add(self, u: int, v: int, t: int) -> None:
        self.arcs[(u, v)] = t
        self.adj[u].append((v, t))

    def _refine(self, colors: list[int]) -> list[int]:
        n = self.n
        while True:
            sig = []
            for v in range(n):
                sig.append((colors[v], tuple(sorted((t, colors[w]) for w, t in self.adj[v]))))
            ranking = {s: i for i, s in enumerate(sorted(set(sig)))}
            new = [ranking[s] for s in sig]
            if new == colors:
                return new
            colors = new

    def _emit(self, colors: list[int]) -> bytes:
        # colors are discrete here: rank = label
        label = colors
        rows = sorted(
            (label[u], label[v], t) for (u, v), t in self.arcs.items() if t != 1
        )
        return repr((self.n, rows)).encode()

    def _search(self, colors: list[int]) -> None:
        colors = self._refine(colors)
        classes: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        target = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                target = c
                break
        if target is None:
            cand = self._emit(colors)
            if self.best is None or cand < self.best:
                self.best = cand
            return
        for v in classes[target]:
            branched = list(colors)
            branched[v] = -1  # individualize: unique smallest color
            self._search(branched)

    def canonical(self) -> bytes:
        self._search([0] * self.n)
        assert self.best is not None
        return self.best


def canonical_form(
    net: OwnedNetwork,
    ceiling: int = DEFAULT_ISO_CEILING,
    use_ownership: bool = True,
) -> str:
    """Canonical label string; equal labels iff ownership-isomorphic.

    With ``use_ownership=False`` the label ignores owners (plain graph
    isomorphism), which is the right notion for the bilateral game.
    """
    if net.n > ceiling:
        raise IsoCeilingError(
            f"canonical labeling refused: n={net.n} > ceiling {ceiling}"
        )
    return _Canonizer(net, use_ownership).canonical().hex()


def isomorphic(
    a: OwnedNetwork,
    b: OwnedNetwork,
    ceiling: int = DEFAULT_ISO_CEILING,
    use_ownership: bool = True,
) -> bool:
    if a.n != b.n or a.m != b.m:
        return False
    return canonical_form(a, ceiling, use_ownership) == canonical_form(
        b, ceiling, use_ownership
    )
