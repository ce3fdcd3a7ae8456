"""Decide whether a plan's execution tree satisfies a goal ``alpha . phi``.

Everything happens on the product of the execution graph with a
deterministic parity automaton for ``phi``.  Because the automaton is
deterministic, histories that reach the same product node are
interchangeable, so each quantifier reduces to reachability questions over
two node sets:

* ``good_e``: some infinite continuation satisfies ``phi``;
* ``good_a``: every infinite continuation satisfies ``phi``.

Infinite quantifiers are decided by a turn game between the two players.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .automata import ParityWordAutomaton, ltl_to_dpw
from .domain import ExecutionGraph, FiniteMemoryPlan, PlanningDomain, product
from .games import EVEN, ODD, ParityGame, parity_and_buchi, solve
from .ltl import Formula, LTLSyntaxError, atoms_of, parse_ltl, substitute, to_string
from .quantifier import (
    Canonical,
    PathQuantifier,
    QuantifierSyntaxError,
    collapse,
    normalize,
    parse_quantifier,
)


class GoalSyntaxError(ValueError):
    pass


class AtomMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Goal:
    quantifier: PathQuantifier
    formula: Formula

    @property
    def canonical(self) -> Canonical:
        return normalize(self.quantifier)

    def __str__(self) -> str:
        return f"{self.quantifier} . {to_string(self.formula)}"


def parse_goal(
    text: str, atoms: Iterable[str] | None = None, macros: Mapping[str, Formula] | None = None
) -> Goal:
    """Parse ``<quantifier> . <ltl>``, e.g. ``AE . F tower``.

    Names in ``macros`` may be used like atoms and are expanded.
    """
    macros = macros or {}
    if atoms is not None:
        atoms = set(atoms) | set(macros)
    head, dot, tail = text.partition(".")
    if not dot:
        raise GoalSyntaxError(f"goal {text!r} lacks the '.' between quantifier and formula")
    try:
        q = parse_quantifier(head)
    except QuantifierSyntaxError as exc:
        raise GoalSyntaxError(f"in quantifier {head.strip()!r}: {exc}") from None
    try:
        f = parse_ltl(tail, atoms)
    except LTLSyntaxError as exc:
        offset = len(head) + 1 + exc.position
        raise GoalSyntaxError(
            f"in formula {tail.strip()!r}: {exc.message} at offset {exc.position}"
            f" (goal offset {offset})"
        ) from None
    return Goal(q, substitute(f, macros))


def as_goal(
    g: Goal | str, atoms: Iterable[str] | None = None, macros: Mapping[str, Formula] | None = None
) -> Goal:
    if isinstance(g, Goal):
        return Goal(g.quantifier, substitute(g.formula, macros)) if macros else g
    return parse_goal(g, atoms, macros)


# ---------------------------------------------------------------------------
# product with the parity automaton


@lru_cache(maxsize=256)
def _dpw(f: Formula, letters: frozenset) -> ParityWordAutomaton:
    return ltl_to_dpw(f, letters)


def dpw_for(f: Formula, letters: Iterable[frozenset[str]]) -> ParityWordAutomaton:
    atoms = atoms_of(f)
    return _dpw(f, frozenset(frozenset(a) & atoms for a in letters))


@dataclass
class ProductGraph:
    """Execution graph x DPW; node ``(v, q)`` holds the state after reading v."""

    nodes: list
    root: tuple
    succ: dict
    priority: dict
    dpw: ParityWordAutomaton

    def reach(self, start) -> set:
        return _reach([start], self.succ)


def _reach(starts: Iterable, succ) -> set:
    seen = set(starts)
    todo = list(seen)
    while todo:
        for w in succ[todo.pop()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def _can_reach(nodes: Iterable, succ, target: set) -> set:
    """Nodes with a path (possibly empty) into ``target``."""
    pred: dict = {}
    for v in nodes:
        for w in succ[v]:
            pred.setdefault(w, []).append(v)
    out = set(target)
    todo = list(out)
    while todo:
        for p in pred.get(todo.pop(), ()):
            if p not in out:
                out.add(p)
                todo.append(p)
    return out


def graph_product(g: ExecutionGraph, f: Formula) -> ProductGraph:
    d = dpw_for(f, g.labels.values())
    root = (g.root, d.step(d.initial, g.label(g.root)))
    nodes = [root]
    seen = {root}
    succ = {}
    queue = deque([root])
    while queue:
        v, q = x = queue.popleft()
        out = tuple((w, d.step(q, g.label(w))) for w in g.succ[v])
        succ[x] = out
        for y in out:
            if y not in seen:
                seen.add(y)
                nodes.append(y)
                queue.append(y)
    return ProductGraph(nodes, root, succ, {x: d.priority[x[1]] for x in nodes}, d)


def _one_player(p: ProductGraph, who: int):
    game = ParityGame()
    for x in p.nodes:
        game.add(x, who, p.priority[x], p.succ[x])
    return solve(game)


def good_sets(p: ProductGraph) -> tuple[frozenset, frozenset, dict, dict]:
    """``(good_e, good_a, path_e, path_a)``; the strategies trace witness lassos."""
    sol_e = _one_player(p, EVEN)
    sol_a = _one_player(p, ODD)
    return sol_e.win_even, sol_a.win_even, sol_e.strategy_even, sol_a.strategy_odd


def _lasso(start, choose: dict) -> dict:
    path = [start]
    where = {start: 0}
    while True:
        nxt = choose[path[-1]]
        if nxt in where:
            i = where[nxt]
            return {"stem": [_show(x) for x in path[:i]], "loop": [_show(x) for x in path[i:]]}
        where[nxt] = len(path)
        path.append(nxt)


def _show(x) -> str:
    (s, m), _ = x
    return f"{s}@{m}"


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class CheckResult:
    verdict: bool
    canonical: Canonical
    witness: object = None
    stats: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"verdict": self.verdict, "canonical": str(self.canonical), "witness": self.witness},
            sort_keys=True,
        )


def _check_atoms(f: Formula, atoms: Iterable[str]) -> None:
    missing = atoms_of(f) - set(atoms)
    if missing:
        raise AtomMismatch(f"goal uses atoms not in the domain: {sorted(missing)}")


def check(d: PlanningDomain, p: FiniteMemoryPlan, goal: Goal | str) -> CheckResult:
    """Does the execution tree of ``p`` on ``d`` satisfy ``goal``?"""
    goal = as_goal(goal, d.atoms, d.macros)
    _check_atoms(goal.formula, d.atoms)
    return check_graph(product(d, p), goal)


def check_graph(g: ExecutionGraph, goal: Goal | str) -> CheckResult:
    goal = as_goal(goal)
    c = goal.canonical
    prod = graph_product(g, goal.formula)
    good_e, good_a, path_e, path_a = good_sets(prod)
    r = prod.root
    stats = {"product_nodes": len(prod.nodes), "dpw_states": prod.dpw.size}
    reach = prod.reach(r)
    witness = None
    if c is Canonical.E:
        verdict = r in good_e
        witness = _lasso(r, path_e) if verdict else None
    elif c is Canonical.A:
        verdict = r in good_a
        witness = None if verdict else _lasso(r, path_a)
    elif c in (Canonical.EA, Canonical.AEA):
        to_a = _can_reach(prod.nodes, prod.succ, set(good_a))
        if c is Canonical.EA:
            verdict = r in to_a
        else:
            verdict = reach <= to_a
        if verdict:
            witness = _show(next(x for x in prod.nodes if x in good_a and x in reach))
    elif c is Canonical.AE:
        verdict = reach <= good_e
    elif c is Canonical.EAE:
        bad = set(prod.nodes) - good_e
        safe = set(prod.nodes) - _can_reach(prod.nodes, prod.succ, bad)
        verdict = bool(reach & safe)
    else:
        word = c.word
        verdict, region = _omega(prod, good_a, word)
        witness = sorted({_show(x) for x in region if x in reach})
    return CheckResult(verdict, c, witness, stats)


def check_word(g: ExecutionGraph, goal: Goal | str) -> bool:
    """Evaluate a raw, non-normalized quantifier word literally.

    Finite words are read right to left as alternating set operations;
    infinite words go through the generic turn game.  Only adjacent
    duplicates are merged; no other normalization is applied.
    """
    goal = as_goal(goal)
    q = PathQuantifier(collapse(goal.quantifier.prefix), collapse(goal.quantifier.period))
    prod = graph_product(g, goal.formula)
    good_e, good_a, _, _ = good_sets(prod)
    if q.period:
        return _omega(prod, good_a, q)[0]
    word = q.prefix
    s = set(good_a if word[-1] == "A" else good_e)
    everything = set(prod.nodes)
    for letter in reversed(word[:-1]):
        if letter == "E":
            s = _can_reach(prod.nodes, prod.succ, s)
        else:
            s = everything - _can_reach(prod.nodes, prod.succ, everything - s)
    return prod.root in s


def _omega(prod: ProductGraph, good_a: frozenset, word: PathQuantifier) -> tuple[bool, set]:
    """Turn game for ``prefix . period^omega``.

    Node ``(x, j, moved)`` is position ``x`` during turn ``j`` of the word.
    The player of turn ``j`` extends the path edge by edge and then passes.
    If E passes without moving, the strategy has stalled on ``x`` and every
    continuation becomes an outcome: Even wins iff ``x`` is in ``good_a``.
    A turn that never ends is lost by its player; a play with infinitely
    many completed, non-empty turns must satisfy the automaton's parity.
    """
    letters = word.prefix + word.period
    n, loop = len(letters), len(word.prefix)

    def nxt(j: int) -> int:
        return j + 1 if j + 1 < n else loop

    arena = ParityGame()
    start = (prod.root, 0, False)
    todo = deque([start])
    seen = {start}
    while todo:
        v = todo.popleft()
        x, j, moved = v
        succ = [(y, j, True) for y in prod.succ[x]]
        if letters[j] == "E" and not moved:
            stall = ("stall", x)
            if stall not in arena.owner:
                arena.add_terminal(stall, EVEN if x in good_a else ODD)
            succ.append(stall)
        else:
            succ.append((x, nxt(j), False))
        owner = EVEN if letters[j] == "E" else ODD
        arena.add(v, owner, 0, succ)
        for w in succ:
            if w not in seen and w[0] != "stall":
                seen.add(w)
                todo.append(w)

    def lam(v):
        return None if v[0] == "stall" else prod.priority[v[0]]

    def good(u, v):
        # the end of a turn in which the path grew
        return u[2] and v[0] != "stall" and not v[2]

    k = max(prod.priority.values(), default=0)

    def quiet(u, v):
        # A's steps and A's empty passes never hurt Even; E's do
        return 2 * k + 4 if letters[u[1]] == "A" else None

    game, embed = parity_and_buchi(arena, lam, good, [start], quiet)
    sol = solve(game)
    region = {v[0][0] for v in sol.win_even if v[0][0] != "stall"}
    return embed(start) in sol.win_even, region


def strictness_table(formulas: Iterable[str] = ("F p", "GF p", "FG p", "G !q", "X p")) -> dict:
    """Verdict of every canonical quantifier on the {i, p, q} binary tree."""
    from .domain import gen_binary_tree, memoryless_plan

    d = gen_binary_tree()
    plan = memoryless_plan({s: "step" for s in d.states})
    g = product(d, plan)
    table = {}
    for c in Canonical:
        table[c] = tuple(
            check_graph(g, Goal(c.word, parse_ltl(f, d.atoms))).verdict for f in formulas
        )
    return table
