"""Seeded random instances: quantifier words, formulas, domains and plans."""
from __future__ import annotations

import random
from typing import Sequence

from .domain import FiniteMemoryPlan, PlanningDomain, make_domain
from .ltl import Atom, Formula, LassoWord
from .quantifier import PathQuantifier

UNARY = ("not", "next", "eventually", "always")
BINARY = ("and", "or", "implies", "until")
TEMPORAL = ("next", "eventually", "always", "until")


def random_quantifier(rng: random.Random, max_prefix: int = 12, max_period: int = 6) -> PathQuantifier:
    prefix = "".join(rng.choice("AE") for _ in range(rng.randint(0, max_prefix)))
    period = "".join(rng.choice("AE") for _ in range(rng.randint(0, max_period)))
    if not prefix and not period:
        prefix = rng.choice("AE")
    return PathQuantifier(prefix, period)


def count_temporal(f: Formula) -> int:
    return (f.op in TEMPORAL) + sum(count_temporal(a) for a in f.args)


def random_formula(
    rng: random.Random, atoms: Sequence[str] = ("p", "q"), max_temporal: int = 2, max_size: int = 7
) -> Formula:
    """A formula with at most ``max_temporal`` temporal operators."""
    budget = {"temporal": max_temporal, "size": max_size}

    def grow() -> Formula:
        budget["size"] -= 1
        if budget["size"] <= 0 or rng.random() < 0.3:
            return Atom(rng.choice(list(atoms)))
        ops = [op for op in UNARY + BINARY if op not in TEMPORAL or budget["temporal"] > 0]
        op = rng.choice(ops)
        if op in TEMPORAL:
            budget["temporal"] -= 1
        if op in BINARY:
            return Formula(op, (grow(), grow()))
        return Formula(op, (grow(),))

    return grow()


def random_lasso(rng: random.Random, atoms: Sequence[str] = ("p", "q"), max_len: int = 6) -> LassoWord:
    letters = [frozenset(a for a in atoms if rng.random() < 0.5) for _ in range(rng.randint(1, max_len))]
    k = rng.randint(0, len(letters) - 1)
    return LassoWord(letters[:k], letters[k:])


def random_domain(
    rng: random.Random,
    max_states: int = 4,
    max_actions: int = 2,
    atoms: Sequence[str] = ("p", "q"),
    n_states: int | None = None,
) -> PlanningDomain:
    """A small serial domain; the first action applies everywhere."""
    n = n_states or rng.randint(1, max_states)
    states = [f"s{i}" for i in range(n)]
    actions = [f"a{i}" for i in range(rng.randint(1, max_actions))]
    trans = {}
    for s in states:
        for i, a in enumerate(actions):
            if i == 0 or rng.random() < 0.7:
                trans[(s, a)] = rng.sample(states, rng.randint(1, min(2, n)))
    labels = {s: [x for x in atoms if rng.random() < 0.5] for s in states}
    return make_domain(states, states[0], trans, labels, actions, atoms)


def random_plan(rng: random.Random, d: PlanningDomain, max_memory: int = 2) -> FiniteMemoryPlan:
    memory = tuple(f"m{i}" for i in range(rng.randint(1, max_memory)))
    output, update = {}, {}
    for m in memory:
        for s in d.states:
            output[(m, s)] = rng.choice(d.applicable(s))
            update[(m, s)] = rng.choice(memory)
    return FiniteMemoryPlan(memory, "m0", output, update)
