"""Plan synthesis for goals ``alpha . phi`` by solving parity games.

The game is played on the domain: Even (the planner) picks an action plus
a marking bit ``w`` and, where needed, a designated successor; Odd (the
environment) picks the outcome.  The path condition is a deterministic
parity automaton for ``theta(w) -> phi``, and the branching part of each
quantifier shape is tracked with a single flag per branch:

=========  ========================  =================================
quantifier  branching condition       per-branch acceptance
=========  ========================  =================================
A           (none)                    parity(phi)
E           one designated path       parity(phi) on that path
EA          EF w                      parity(F w -> phi)
AEA         AG EF w                   parity(F w -> phi) and flag fed
AE          AG EX G w                 parity(FG w -> phi) or !w often
EAE         EF AG EX G w              as AE after a designated prefix
(AE)^w      AG EF w                   parity(GF w -> phi) and flag fed
(EA)^w      EF AG EF w                as (AE)^w after a designated prefix
=========  ========================  =================================

Fixpoint planners for reachability (``plan_fq``) and maintenance
(``plan_gq``) goals are provided as well.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .automata import MARK, psi_formula
from .checker import Goal, _check_atoms, as_goal, dpw_for
from .domain import FiniteMemoryPlan, PlanningDomain, memoryless_plan
from .games import EVEN, ODD, ParityGame, parity_and_buchi, parity_or_buchi, solve
from .ltl import Formula, LassoWord, eval_lasso, parse_ltl, substitute
from .quantifier import Canonical

log = logging.getLogger(__name__)


class GameTooLarge(RuntimeError):
    pass


@dataclass
class SynthesisResult:
    solvable: bool
    plan: FiniteMemoryPlan | None = None
    game_nodes: int = 0
    parity_index: int = 0
    losing: frozenset = frozenset()
    game: ParityGame | None = field(default=None, repr=False)

    def summary(self, plan_file: str | None = None) -> dict:
        return {
            "solvable": self.solvable,
            "plan_file": plan_file,
            "game_nodes": self.game_nodes,
            "parity_index": self.parity_index,
        }


# how each canonical quantifier is assembled: (shape, branch mode, prefix)
_LAYOUT = {
    Canonical.A: (None, "plain", False),
    Canonical.E: (None, "path", False),
    Canonical.EA: ("Fw", "commit", True),
    Canonical.AEA: ("Fw", "and", False),
    Canonical.AE: ("FGw", "or", False),
    Canonical.EAE: ("FGw", "or", True),
    Canonical.AE_OMEGA: ("GFw", "and", False),
    Canonical.EA_OMEGA: ("GFw", "and", True),
}

WIN = ("won",)  # Even-won sink for branches nobody constrains


class SynthesisGame:
    """The arena for one domain and goal, before a gadget is applied.

    Even nodes: ``("E", s, q, flag)`` and, for a designated prefix,
    ``("P", s, q)``.  Odd nodes: ``("O", s, a, w, q2, flags, event)`` and
    ``("PO", s, a, q2, d)``.  ``q`` is the automaton state before reading
    ``s``; ``flags`` gives each successor's flag (``"X"`` sends it to
    :data:`WIN`).
    """

    def __init__(self, d: PlanningDomain, goal: Goal, max_nodes: int | None = None):
        self.domain = d
        self.goal = goal
        self.canonical = goal.canonical
        shape, self.mode, self.prefix = _LAYOUT[self.canonical]
        letters = {d.label(s) for s in d.states}
        if shape is None:
            self.dpw = dpw_for(goal.formula, letters)
        else:
            marked = letters | {a | {MARK} for a in letters}
            self.dpw = dpw_for(psi_formula(shape, goal.formula), marked)
        self.max_nodes = max_nodes
        self.arena = ParityGame()
        self.lam: dict = {}
        self.start = ("P", d.init, self.dpw.initial) if self.prefix else (
            "E", d.init, self.dpw.initial, self._entry_flag()
        )
        self._build()

    def _entry_flag(self):
        return {"plain": None, "path": None, "commit": "commit", "and": False, "or": False}[self.mode]

    def _read(self, q: int, s: str, w: bool) -> int:
        label = self.domain.label(s)
        return self.dpw.step(q, label | {MARK} if w else label)

    def _even_moves(self, v) -> list:
        d, dpw = self.domain, self.dpw
        if v[0] == "P":
            _, s, q = v
            q2 = self._read(q, s, False)
            out = [
                ("PO", s, a, q2, i)
                for a in d.applicable(s)
                for i in range(len(d.successors(s, a)))
            ]
            out.append(("E", s, q, self._entry_flag()))
            return out
        _, s, q, flag = v
        out = []
        for a in d.applicable(s):
            n = len(d.successors(s, a))
            mode = self.mode
            if mode == "plain" or (mode == "commit" and flag is None):
                out.append(("O", s, a, False, self._read(q, s, False), (None,) * n, False))
            elif mode == "commit":
                out.append(("O", s, a, True, self._read(q, s, True), (None,) * n, False))
            elif mode == "path":
                q2 = self._read(q, s, False)
                for i in range(n):
                    flags = tuple(None if j == i else "X" for j in range(n))
                    out.append(("O", s, a, False, q2, flags, False))
            elif mode == "and":
                # w discharges the pending obligation; otherwise route it
                out.append(("O", s, a, True, self._read(q, s, True), (False,) * n, True))
                q2 = self._read(q, s, False)
                for i in range(n):
                    flags = tuple(j == i for j in range(n))
                    out.append(("O", s, a, False, q2, flags, not flag))
            elif mode == "or":
                for w in (True,) if flag else (True, False):
                    q2 = self._read(q, s, w)
                    for i in range(n):
                        flags = tuple(j == i for j in range(n))
                        out.append(("O", s, a, w, q2, flags, not w))
        return out

    def _odd_moves(self, v) -> list:
        d = self.domain
        if v[0] == "PO":
            _, s, a, q2, i = v
            return [("P", t, q2) if j == i else WIN for j, t in enumerate(d.successors(s, a))]
        _, s, a, w, q2, flags, _ = v
        return [
            WIN if f == "X" else ("E", t, q2, f)
            for t, f in zip(d.successors(s, a), flags)
        ]

    def _build(self) -> None:
        arena = self.arena
        arena.add_terminal(WIN, EVEN)
        seen = {self.start, WIN}
        todo = deque([self.start])
        while todo:
            v = todo.popleft()
            if v[0] in ("P", "E"):
                succ = self._even_moves(v)
                arena.add(v, EVEN, 0, succ)
                self.lam[v] = None
            else:
                succ = self._odd_moves(v)
                arena.add(v, ODD, 0, succ)
                self.lam[v] = -1 if v[0] == "PO" else self.dpw.priority[v[4]]
            for w in succ:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
            if self.max_nodes is not None and len(seen) > self.max_nodes:
                raise GameTooLarge(f"synthesis arena exceeds {self.max_nodes} nodes")
        self.lam[WIN] = None

    # -- acceptance --------------------------------------------------------

    def parity_game(self) -> tuple[ParityGame, object, callable]:
        """Apply the acceptance gadget; returns (game, start node, base map)."""
        arena, lam = self.arena, self.lam.__getitem__
        if self.mode in ("plain", "path", "commit"):
            k = max((x for x in self.lam.values() if x is not None), default=0)
            g = ParityGame()
            for v in arena.nodes:
                x = lam(v)
                pri = 2 * k + 4 if x is None else x + 2
                if v in arena.terminal:
                    g.add_terminal(v, arena.terminal[v], pri)
                else:
                    g.add(v, arena.owner[v], pri, arena.succ[v])
            return g, self.start, lambda n: n

        def event(u, v) -> bool:
            return v[0] == "O" and v[6]

        if self.mode == "and":
            lam_and = lambda v: None if v[0] == "PO" else lam(v)
            g, embed = parity_and_buchi(arena, lam_and, event, [self.start])
        else:
            g, embed = parity_or_buchi(arena, lam, event, [self.start])
        return g, embed(self.start), lambda n: n[0]


def synthesize(d: PlanningDomain, goal: Goal | str, max_nodes: int | None = None) -> SynthesisResult:
    """A finite-memory plan for ``goal`` on ``d``, or a proof-by-game that none exists."""
    goal = as_goal(goal, d.atoms, d.macros)
    _check_atoms(goal.formula, d.atoms)
    sg = SynthesisGame(d, goal, max_nodes)
    game, root, base = sg.parity_game()
    sol = solve(game)
    result = SynthesisResult(
        solvable=root in sol.win_even,
        game_nodes=len(game),
        parity_index=game.index,
        losing=sol.win_odd,
        game=game,
    )
    log.info("synthesis game for %s: %d nodes, index %d", goal, len(game), game.index)
    if result.solvable:
        result.plan = _extract_plan(d, game, root, base, sol.strategy_even)
    return result


def _extract_plan(d: PlanningDomain, game: ParityGame, root, base, strategy: dict) -> FiniteMemoryPlan:
    """Read a plan off Even's strategy; memory = the Odd node last chosen."""
    INIT, FREE = "init", "free"

    def settle(n):
        # follow Even's strategy through commit edges to an Odd node or a sink
        while n not in game.terminal and game.owner[n] == EVEN:
            n = strategy[n]
        return n

    names: dict = {INIT: "m0"}
    output: dict = {}
    update: dict = {}
    pending = deque([(INIT, d.init, root)])
    done = set()
    while pending:
        mem, s, node = pending.popleft()
        if (mem, s) in done:
            continue
        done.add((mem, s))
        target = FREE if node is None else settle(node)
        if target == FREE or target in game.terminal:
            target = FREE
            names.setdefault(FREE, f"m{len(names)}")
            output[(names[mem], s)] = d.applicable(s)[0]
            update[(names[mem], s)] = names[FREE]
            for t in d.successors(s, d.applicable(s)[0]):
                pending.append((FREE, t, None))
            continue
        arena_node = base(target)
        a = arena_node[2]
        names.setdefault(target, f"m{len(names)}")
        output[(names[mem], s)] = a
        update[(names[mem], s)] = names[target]
        for t, child in zip(d.successors(s, a), game.succ[target]):
            pending.append((target, t, child))
    memory = tuple(sorted(names.values(), key=lambda m: int(m[1:])))
    return FiniteMemoryPlan(memory, "m0", output, update)


# ---------------------------------------------------------------------------
# fixpoint planners


def _holds(q: Formula, label: frozenset[str]) -> bool:
    if any(f.is_temporal for f in _walk(q)):
        raise ValueError(f"{q} is not propositional")
    return eval_lasso(q, LassoWord([], [label]))


def _walk(f: Formula):
    yield f
    for a in f.args:
        yield from _walk(a)


def _layers(d: PlanningDomain, seed: set, step) -> tuple[set, dict]:
    """Least fixpoint from ``seed``; ``step(s, done)`` returns an action or None."""
    done = set(seed)
    choice: dict = {}
    while True:
        new = {}
        for s in d.states:
            if s not in done:
                a = step(s, done)
                if a is not None:
                    new[s] = a
        if not new:
            return done, choice
        done |= set(new)
        choice.update(new)


def _policy(d: PlanningDomain, choice: dict) -> FiniteMemoryPlan:
    return memoryless_plan({s: choice.get(s, d.applicable(s)[0]) for s in d.states})


def _as_prop(q: Formula | str, d: PlanningDomain) -> Formula:
    if isinstance(q, str):
        q = parse_ltl(q, set(d.atoms) | set(d.macros))
    return substitute(q, d.macros)


def plan_fq(d: PlanningDomain, q: Formula | str, mode: str) -> SynthesisResult:
    """Reach ``q``: ``strong`` (A.Fq), ``weak`` (E.Fq) or ``strong_cyclic`` (AE.Fq)."""
    q = _as_prop(q, d)
    target = {s for s in d.states if _holds(q, d.label(s))}
    if mode == "strong":
        def step(s, done):
            return next((a for a in d.applicable(s) if set(d.successors(s, a)) <= done), None)
        win, choice = _layers(d, target, step)
    elif mode == "weak":
        def step(s, done):
            return next((a for a in d.applicable(s) if set(d.successors(s, a)) & done), None)
        win, choice = _layers(d, target, step)
    elif mode == "strong_cyclic":
        alive = set(d.states)
        while True:
            def step(s, done, alive=alive):
                return next(
                    (
                        a
                        for a in d.applicable(s)
                        if set(d.successors(s, a)) <= alive and set(d.successors(s, a)) & done
                    ),
                    None,
                )
            win, choice = _layers(d, target, step)
            if win == alive:
                break
            alive = win
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if d.init not in win:
        return SynthesisResult(False)
    return SynthesisResult(True, _policy(d, choice))


def plan_gq(d: PlanningDomain, q: Formula | str, mode: str) -> SynthesisResult:
    """Keep ``q``: ``strong`` (A.Gq), ``weak`` (E.Gq), ``strong_reach_maintain`` (EA.Gq)."""
    q = _as_prop(q, d)
    good = {s for s in d.states if _holds(q, d.label(s))}

    def keep(inside: set, need_all: bool) -> tuple[set, dict]:
        cur = set(inside)
        while True:
            choice = {}
            for s in cur:
                for a in d.applicable(s):
                    succ = set(d.successors(s, a))
                    if (succ <= cur) if need_all else (succ & cur):
                        choice[s] = a
                        break
            nxt = set(choice)
            if nxt == cur:
                return cur, choice
            cur = nxt

    if mode == "strong":
        win, choice = keep(good, True)
    elif mode == "weak":
        win, choice = keep(good, False)
    elif mode == "strong_reach_maintain":
        safe, choice = keep(good, True)

        def step(s, done):
            if s not in good:
                return None
            return next((a for a in d.applicable(s) if set(d.successors(s, a)) & done), None)

        win, more = _layers(d, safe, step)
        choice = {**more, **choice}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if d.init not in win:
        return SynthesisResult(False)
    return SynthesisResult(True, _policy(d, choice))


FQ_MODES = {"strong": Canonical.A, "weak": Canonical.E, "strong_cyclic": Canonical.AE}
GQ_MODES = {"strong": Canonical.A, "weak": Canonical.E, "strong_reach_maintain": Canonical.EA}
