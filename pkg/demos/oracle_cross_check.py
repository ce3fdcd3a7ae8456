"""
A brute-force second opinion
============================

The checker works with parity automata and games.  The oracle instead
tracks what remains to be shown by formula progression and enumerates
lasso continuations.  On small graphs they must agree.
"""
import random

from aeplan.checker import Goal, check_graph
from aeplan.domain import product
from aeplan.oracle import check_bruteforce, count_plans
from aeplan.quantifier import Canonical
from aeplan.samples import random_domain, random_formula, random_plan

rng = random.Random(42)
finite = [c for c in Canonical if c.is_finite]
agree = total = 0
for _ in range(40):
    d = random_domain(rng)
    g = product(d, random_plan(rng, d))
    f = random_formula(rng)
    for c in finite:
        agree += check_bruteforce(g, c.word, f) == check_graph(g, Goal(c.word, f)).verdict
        total += 1
print(f"oracle vs checker: {agree}/{total} agree")

# Exhaustive plan search is only viable for very small memory bounds
d = random_domain(random.Random(1), n_states=4)
for m in (1, 2):
    print(f"plans with memory <= {m}: {count_plans(d, m, cap=10**6)}")
