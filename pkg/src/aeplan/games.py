"""Parity games (min-even convention), a Zielonka solver, and two gadgets.

The gadgets fold a Buchi-style "good event" condition into a parity
condition: ``parity_and_buchi`` requires both, ``parity_or_buchi`` either.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

EVEN, ODD = 0, 1

Node = Hashable


@dataclass
class ParityGame:
    """Arena with owners and priorities.

    ``terminal`` maps dead-end nodes to their winner; every other node needs
    at least one successor.
    """

    nodes: list = field(default_factory=list)
    owner: dict = field(default_factory=dict)
    priority: dict = field(default_factory=dict)
    succ: dict = field(default_factory=dict)
    terminal: dict = field(default_factory=dict)

    def add(self, v: Node, owner: int, priority: int, succ: Iterable[Node] = ()) -> None:
        if v not in self.owner:
            self.nodes.append(v)
        self.owner[v] = owner
        self.priority[v] = priority
        self.succ[v] = tuple(succ)

    def add_terminal(self, v: Node, winner: int, priority: int = 0) -> None:
        self.add(v, winner, priority)
        self.terminal[v] = winner

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def max_priority(self) -> int:
        return max(self.priority.values(), default=0)

    @property
    def index(self) -> int:
        return len(set(self.priority.values()))

    def validate(self) -> list[str]:
        problems = []
        for v in self.nodes:
            if v in self.terminal:
                if self.succ[v]:
                    problems.append(f"terminal {v!r} has successors")
            elif not self.succ[v]:
                problems.append(f"node {v!r} has no successor")
            for w in self.succ[v]:
                if w not in self.owner:
                    problems.append(f"edge {v!r} -> unknown {w!r}")
        return problems

    def dump(self, win: Iterable[Node] | None = None) -> str:
        win = set(win) if win is not None else None
        lines = [f"game nodes={len(self)} index={self.index}"]
        ids = {v: i for i, v in enumerate(self.nodes)}
        for v in self.nodes:
            who = "E" if self.owner[v] == EVEN else "O"
            tail = ""
            if v in self.terminal:
                tail = f" terminal winner={'even' if self.terminal[v] == EVEN else 'odd'}"
            if win is not None:
                tail += " win=even" if v in win else " win=odd"
            succ = " ".join(str(ids[w]) for w in self.succ[v])
            lines.append(f"  {ids[v]} {who} p={self.priority[v]} {v!r} -> [{succ}]{tail}")
        return "\n".join(lines)


@dataclass
class Solution:
    win_even: frozenset
    win_odd: frozenset
    strategy_even: dict
    strategy_odd: dict

    def winner(self, v: Node) -> int:
        return EVEN if v in self.win_even else ODD


class _Arena:
    """Integer view of a game, with terminals turned into self-loops."""

    def __init__(self, g: ParityGame):
        self.nodes = list(g.nodes)
        index = {v: i for i, v in enumerate(self.nodes)}
        n = len(self.nodes)
        self.owner = [g.owner[v] for v in self.nodes]
        self.pri = [g.priority[v] for v in self.nodes]
        self.succ: list[list[int]] = []
        for i, v in enumerate(self.nodes):
            if v in g.terminal:
                self.pri[i] = g.terminal[v]  # 0: Even wins the loop, 1: Odd wins
                self.succ.append([i])
            else:
                self.succ.append([index[w] for w in g.succ[v]])
        self.pred: list[list[int]] = [[] for _ in range(n)]
        for i, ws in enumerate(self.succ):
            for j in ws:
                self.pred[j].append(i)

    def attractor(self, player: int, target: set[int], alive: set[int], strat: dict) -> set[int]:
        attr = set(target)
        count = {}
        queue = deque(sorted(target))
        while queue:
            j = queue.popleft()
            for i in self.pred[j]:
                if i not in alive or i in attr:
                    continue
                if self.owner[i] == player:
                    attr.add(i)
                    strat[i] = j
                    queue.append(i)
                else:
                    if i not in count:
                        count[i] = sum(1 for k in self.succ[i] if k in alive)
                    count[i] -= 1
                    if count[i] == 0:
                        attr.add(i)
                        queue.append(i)
        return attr

    def solve(self, alive: set[int]) -> tuple[list[set[int]], list[dict]]:
        """Zielonka; loops on the same priority level instead of recursing."""
        win: list[set[int]] = [set(), set()]
        strat: list[dict] = [{}, {}]
        alive = set(alive)
        while alive:
            d = min(self.pri[i] for i in alive)
            p = d % 2
            top = {i for i in alive if self.pri[i] == d}
            attr_strat: dict = {}
            a = self.attractor(p, top, alive, attr_strat)
            sub_win, sub_strat = self.solve(alive - a)
            if not sub_win[1 - p]:
                win[p] |= alive
                strat[p].update(sub_strat[p])
                strat[p].update(attr_strat)
                for i in sorted(top):
                    if self.owner[i] == p and i not in strat[p]:
                        strat[p][i] = next(k for k in self.succ[i] if k in alive)
                break
            b_strat: dict = {}
            b = self.attractor(1 - p, sub_win[1 - p], alive, b_strat)
            win[1 - p] |= b
            strat[1 - p].update({i: k for i, k in sub_strat[1 - p].items() if i in sub_win[1 - p]})
            strat[1 - p].update(b_strat)
            alive -= b
        return win, strat


def solve(g: ParityGame) -> Solution:
    """Winning regions and positional winning strategies of both players."""
    arena = _Arena(g)
    win, strat = arena.solve(set(range(len(arena.nodes))))
    nodes = arena.nodes
    out = []
    for p in (EVEN, ODD):
        s = {}
        for i, k in strat[p].items():
            v = nodes[i]
            if i in win[p] and arena.owner[i] == p and v not in g.terminal:
                s[v] = nodes[k]
        out.append(s)
    return Solution(
        frozenset(nodes[i] for i in win[EVEN]),
        frozenset(nodes[i] for i in win[ODD]),
        out[0],
        out[1],
    )


def one_player_good(
    nodes: Iterable[Node],
    succ: Mapping[Node, Iterable[Node]],
    priority: Mapping[Node, int],
    mode: str,
) -> frozenset:
    """Nodes with some (``exists``) / every (``forall``) path of even parity."""
    if mode not in ("exists", "forall"):
        raise ValueError(f"mode must be 'exists' or 'forall', not {mode!r}")
    who = EVEN if mode == "exists" else ODD
    g = ParityGame()
    for v in nodes:
        g.add(v, who, priority[v], succ[v])
    return solve(g).win_even


# ---------------------------------------------------------------------------
# gadgets


def parity_and_buchi(
    g: ParityGame,
    lam: Callable[[Node], int | None],
    good: Callable[[Node, Node], bool],
    roots: Iterable[Node],
    quiet: Callable[[Node, Node], int | None] | None = None,
) -> tuple[ParityGame, Callable]:
    """Even must see good edges infinitely often *and* satisfy parity ``lam``.

    Nodes are ``(v, m, e)``: ``m`` is the least ``lam`` seen since the last
    good edge and ``e`` the priority emitted on arrival (``m + 2`` after a
    good edge, ``quiet`` otherwise, default ``2k + 3``).  ``lam`` may return
    ``None`` for nodes that carry no priority.  Returns the game and a map
    from arena roots to gadget nodes.
    """
    k = max((lam(v) for v in g.nodes if lam(v) is not None), default=0)
    loud = 2 * k + 3
    idle = 2 * k + 2  # a segment that saw no priority at all

    def combine(m, x):
        if x is None:
            return m
        return x if m is None else min(m, x)

    out = ParityGame()

    def start(v):
        return (v, lam(v), loud)

    todo = deque()
    seen = set()
    for r in roots:
        s = start(r)
        if s not in seen:
            seen.add(s)
            todo.append(s)
    while todo:
        node = todo.popleft()
        v, m, e = node
        if v in g.terminal:
            out.add_terminal(node, g.terminal[v], e)
            continue
        nxt = []
        for w in g.succ[v]:
            if good(v, w):
                emit = idle if m is None else m + 2
                t = (w, lam(w), emit)
            else:
                q = quiet(v, w) if quiet is not None else None
                t = (w, combine(m, lam(w)), loud if q is None else q)
            nxt.append(t)
            if t not in seen:
                seen.add(t)
                todo.append(t)
        out.add(node, g.owner[v], e, nxt)
    return out, start


def parity_or_buchi(
    g: ParityGame,
    lam: Callable[[Node], int | None],
    good: Callable[[Node, Node], bool],
    roots: Iterable[Node],
) -> tuple[ParityGame, Callable]:
    """Even wins if good edges occur infinitely often *or* parity ``lam`` holds.

    Nodes are ``(v, e)`` with ``e = 0`` after a good edge and ``lam(v) + 2``
    otherwise (``None`` counts as a large even value).
    """
    k = max((lam(v) for v in g.nodes if lam(v) is not None), default=0)

    def pri(w):
        x = lam(w)
        return 2 * k + 2 if x is None else x + 2

    out = ParityGame()

    def start(v):
        return (v, pri(v))

    todo = deque()
    seen = set()
    for r in roots:
        s = start(r)
        if s not in seen:
            seen.add(s)
            todo.append(s)
    while todo:
        node = todo.popleft()
        v, e = node
        if v in g.terminal:
            out.add_terminal(node, g.terminal[v], e)
            continue
        nxt = []
        for w in g.succ[v]:
            t = (w, 0) if good(v, w) else (w, pri(w))
            nxt.append(t)
            if t not in seen:
                seen.add(t)
                todo.append(t)
        out.add(node, g.owner[v], e, nxt)
    return out, start
