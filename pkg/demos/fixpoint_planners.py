"""
Classic planners as special cases
=================================

Strong, weak and strong cyclic planning for reachability, and their
maintenance counterparts, are fixpoint computations.  Each agrees with
the general game-based synthesis on the matching quantifier.
"""
import random

from aeplan.checker import Goal
from aeplan.domain import gen_blocks_world
from aeplan.ltl import parse_ltl
from aeplan.samples import random_domain
from aeplan.synth import FQ_MODES, GQ_MODES, plan_fq, plan_gq, synthesize

d = gen_blocks_world()
for mode in FQ_MODES:
    print(f"reach tower, {mode:<14}: {plan_fq(d, 'tower', mode).solvable}")
for mode in GQ_MODES:
    print(f"keep A_on_table, {mode:<22}: {plan_gq(d, 'A_on_table', mode).solvable}")

# Cross-check on random domains
rng = random.Random(0)
agree = total = 0
for _ in range(50):
    r = random_domain(rng)
    for modes, op, planner in ((FQ_MODES, "F", plan_fq), (GQ_MODES, "G", plan_gq)):
        for mode, c in modes.items():
            general = synthesize(r, Goal(c.word, parse_ltl(f"{op} p"))).solvable
            agree += planner(r, "p", mode).solvable == general
            total += 1
print(f"\nfixpoint vs game synthesis: {agree}/{total} agree")
