"""Brute-force decision procedures for tiny instances, used as test oracles.

Nothing here touches parity automata or games.  Histories are summarized by
formula progression: after reading a finite path, what remains to be shown
is a Boolean function of the truth values, at the next position, of a fixed
set ``T`` of subformulas.  Infinite continuations are explored as explicit
lassos and evaluated with :func:`aeplan.ltl.eval_lasso`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .domain import ExecutionGraph, FiniteMemoryPlan, PlanningDomain
from .ltl import Formula, LassoWord, closure, subformulas, truth_table
from .quantifier import normalize


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# formula progression


class Progression:
    """Residual obligations as bitmasks over assignments to ``T``."""

    def __init__(self, f: Formula):
        terms = [f]
        for g in subformulas(f):
            if g.op == "next" and g.args[0] not in terms:
                terms.append(g.args[0])
            if g.op in ("until", "eventually", "always", "release") and g not in terms:
                terms.append(g)
        self.terms = terms
        self.index = {t: i for i, t in enumerate(terms)}
        self.size = 1 << len(terms)
        self.initial = sum(1 << b for b in range(self.size) if b & 1)  # "f holds now"
        self._cache: dict = {}

    def now(self, letter: frozenset[str], nxt: int) -> int:
        """Assignment to ``T`` at the current position, given the next one."""
        memo: dict = {}

        def val(g: Formula) -> bool:
            if g in memo:
                return memo[g]
            op = g.op
            if op == "true":
                r = True
            elif op == "false":
                r = False
            elif op == "atom":
                r = g.name in letter
            elif op == "not":
                r = not val(g.args[0])
            elif op == "and":
                r = val(g.args[0]) and val(g.args[1])
            elif op == "or":
                r = val(g.args[0]) or val(g.args[1])
            elif op == "implies":
                r = (not val(g.args[0])) or val(g.args[1])
            elif op == "next":
                r = bool(nxt >> self.index[g.args[0]] & 1)
            else:
                later = bool(nxt >> self.index[g] & 1)
                if op == "until":
                    r = val(g.args[1]) or (val(g.args[0]) and later)
                elif op == "eventually":
                    r = val(g.args[0]) or later
                elif op == "always":
                    r = val(g.args[0]) and later
                else:  # release
                    r = val(g.args[1]) and (val(g.args[0]) or later)
            memo[g] = r
            return r

        return sum(1 << i for i, t in enumerate(self.terms) if val(t))

    def step(self, residual: int, letter: frozenset[str]) -> int:
        key = (residual, letter)
        hit = self._cache.get(key)
        if hit is None:
            hit = sum(
                1 << b for b in range(self.size) if residual >> self.now(letter, b) & 1
            )
            self._cache[key] = hit
        return hit

    def values(self, w: LassoWord) -> int:
        """Assignment to ``T`` at position 0 of ``w``."""
        cache: dict = {}
        return sum(1 << i for i, t in enumerate(self.terms) if truth_table(t, w, cache)[0])


# ---------------------------------------------------------------------------
# lasso enumeration


def _primitive(loop: list) -> bool:
    n = len(loop)
    return all(loop != loop[k:] + loop[:k] for k in range(1, n) if n % k == 0)


def lassos(succ, start, stem_bound: int, loop_bound: int) -> Iterator[tuple[list, list]]:
    """Every ultimately periodic path from ``start`` once, within the bounds.

    Paths are represented with a primitive loop and the shortest stem, so
    each infinite path appears at most once.
    """
    limit = stem_bound + loop_bound
    stack = [[start]]
    while stack:
        walk = stack.pop()
        n = len(walk)
        for k in range(max(0, n - loop_bound), min(stem_bound, n - 1) + 1):
            stem, loop = walk[:k], walk[k:]
            if loop[0] not in succ[loop[-1]]:
                continue
            if stem and stem[-1] == loop[-1]:
                continue
            if _primitive(loop):
                yield stem, loop
        if n < limit:
            for w in reversed(succ[walk[-1]]):
                stack.append(walk + [w])


@dataclass
class GoodSets:
    nodes: list
    root: tuple
    succ: dict
    good_e: frozenset
    good_a: frozenset
    advisory: bool


def good_sets_bruteforce(
    g: ExecutionGraph, f: Formula, stem_bound: int = 4, loop_bound: int = 4
) -> GoodSets:
    """Good_E / Good_A over the history quotient of ``g`` for formula ``f``.

    A quotient node ``(v, r)`` pairs a graph node with the residual after
    reading the path to ``v``.  ``advisory`` is set when the bounds are
    below ``|nodes| * |closure(f)|``, the size at which lasso enumeration
    is guaranteed to be exhaustive.
    """
    prog = Progression(f)
    need = len(g.nodes) * len(closure(f))
    advisory = stem_bound < need or loop_bound < need
    # truth values of T at the start of each enumerated continuation
    outcomes: dict = {}
    for v in g.nodes:
        found = set()
        for stem, loop in lassos(g.succ, v, stem_bound, loop_bound):
            w = LassoWord([g.label(x) for x in stem], [g.label(x) for x in loop])
            found.add(prog.values(w))
        outcomes[v] = found
    root = (g.root, prog.step(prog.initial, g.label(g.root)))
    nodes = [root]
    succ: dict = {}
    queue = deque([root])
    seen = {root}
    while queue:
        v, r = x = queue.popleft()
        out = tuple((w, prog.step(r, g.label(w))) for w in g.succ[v])
        succ[x] = out
        for y in out:
            if y not in seen:
                seen.add(y)
                nodes.append(y)
                queue.append(y)
    good_e, good_a = set(), set()
    for v, r in nodes:
        ok = [bool(r >> b & 1) for w in g.succ[v] for b in outcomes[w]]
        if any(ok):
            good_e.add((v, r))
        if all(ok):
            good_a.add((v, r))
    return GoodSets(nodes, root, succ, frozenset(good_e), frozenset(good_a), advisory)


def check_bruteforce(g: ExecutionGraph, quantifier, f: Formula, **bounds) -> bool:
    """Evaluate a finite canonical quantifier clause by clause."""
    c = normalize(quantifier)
    if not c.is_finite:
        raise ValueError("the brute-force oracle handles finite quantifiers only")
    gs = good_sets_bruteforce(g, f, **bounds)

    def reach(x) -> set:
        seen = {x}
        todo = [x]
        while todo:
            for y in gs.succ[todo.pop()]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    memo: dict = {}

    def holds(x, word: str) -> bool:
        # x |= P word: for all / some finite extensions (x itself included)
        key = (x, word)
        if key in memo:
            return memo[key]
        head, rest = word[0], word[1:]
        if not rest:
            r = x in (gs.good_a if head == "A" else gs.good_e)
        else:
            test = (holds(y, rest) for y in sorted(reach(x), key=repr))
            r = all(test) if head == "A" else any(test)
        memo[key] = r
        return r

    return holds(gs.root, c.value)


# ---------------------------------------------------------------------------
# plan enumeration


def enumerate_plans(
    d: PlanningDomain, memory_bound: int, cap: int = 64, max_plans: int | None = None
) -> Iterator[FiniteMemoryPlan]:
    """All plans with at most ``memory_bound`` memory states, up to renaming.

    Plans are defined exactly on their reachable (memory, state) pairs, and
    memory states are numbered in order of first use, which makes the
    enumeration duplicate-free.  Raises :class:`BudgetExceeded` when
    ``|states| * memory_bound * |actions|`` exceeds ``cap`` or more than
    ``max_plans`` plans would be produced.
    """
    if memory_bound < 1:
        raise ValueError("memory bound must be at least 1")
    size = len(d.states) * memory_bound * len(d.actions)
    if size > cap:
        raise BudgetExceeded(f"|states|*M*|actions| = {size} exceeds cap {cap}")
    produced = 0

    def extend(output: dict, update: dict, used: int, queue: tuple, seen: frozenset):
        nonlocal produced
        if not queue:
            produced += 1
            if max_plans is not None and produced > max_plans:
                raise BudgetExceeded(f"more than {max_plans} plans")
            mem = tuple(f"m{i}" for i in range(used))
            yield FiniteMemoryPlan(mem, "m0", dict(output), dict(update))
            return
        (m, s), rest = queue[0], queue[1:]
        for a in d.applicable(s):
            for m2 in range(min(used + 1, memory_bound)):
                new = [(f"m{m2}", t) for t in d.successors(s, a)]
                fresh = [p for p in dict.fromkeys(new) if p not in seen]
                key = (m, s)
                output[key] = a
                update[key] = f"m{m2}"
                yield from extend(
                    output,
                    update,
                    max(used, m2 + 1),
                    rest + tuple(fresh),
                    seen | frozenset(fresh),
                )
                del output[key], update[key]

    start = ("m0", d.init)
    yield from extend({}, {}, 1, (start,), frozenset([start]))


def count_plans(d: PlanningDomain, memory_bound: int, **kw) -> int:
    return sum(1 for _ in enumerate_plans(d, memory_bound, **kw))
