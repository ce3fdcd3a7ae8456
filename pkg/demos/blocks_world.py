"""
Building a tower in a clumsy blocks world
=========================================

Puts can fail and knock the destination tower over; waiting can bump the
table.  Which temporally extended goals admit a plan?
"""
from aeplan.checker import check
from aeplan.domain import format_plan, gen_blocks_world, product
from aeplan.synth import synthesize

d = gen_blocks_world()
print(f"{len(d.states)} states, {len(d.actions)} actions, start {d.init}")

goals = [
    "AE . F (tower & F scattered)",
    "AEA . F (tower & F scattered)",
    "AE . F G tower",
    "AEA . F G tower",
    "AE . G F tower",
    "(AE)^w . G F tower",
    "AEA . G F tower",
]
for goal in goals:
    res = synthesize(d, goal)
    line = f"{goal:<32} game {res.game_nodes:>5} nodes  "
    if res.solvable:
        ok = check(d, res.plan, goal).verdict
        size = len(product(d, res.plan).nodes)
        line += f"plan with {len(res.plan.memory)} memory states, {size} reachable, checks {ok}"
    else:
        line += "no plan"
    print(line)

# Keeping a tower forever is hopeless once the adversary may act after the
# planner (AEA), but infinitely many rebuilds can be forced turn by turn.
print()
print(format_plan(synthesize(d, "AE . F G tower").plan, d))
