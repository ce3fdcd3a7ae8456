import random

import pytest
from hypothesis import given, settings, strategies as st

from aeplan.checker import Goal, check
from aeplan.domain import gen_blocks_world, induced_plan, make_domain, product, single_state_domain
from aeplan.ltl import parse_ltl
from aeplan.oracle import enumerate_plans
from aeplan.quantifier import Canonical, implies
from aeplan.samples import random_domain, random_formula
from aeplan.synth import FQ_MODES, GQ_MODES, GameTooLarge, plan_fq, plan_gq, synthesize

C = Canonical
FINITE = [c for c in C if c.is_finite]


@pytest.fixture(scope="module")
def blocks():
    return gen_blocks_world()


def test_self_loop_keeps_p():
    d = single_state_domain({"p"})
    res = synthesize(d, "A . G p")
    assert res.solvable
    assert res.plan.induced(["s"]) == "stay"
    assert not synthesize(d, "A . G !p").solvable


PHI1 = "F (tower & F scattered)"
PHI2 = "F G tower"
PHI3 = "G F tower"


@pytest.mark.parametrize(
    "goal, solvable",
    [
        (f"AE . {PHI1}", True),
        (f"AEA . {PHI1}", True),
        (f"AE . {PHI2}", True),
        (f"AEA . {PHI2}", False),
        (f"AE . {PHI3}", True),
        (f"(AE)^w . {PHI3}", True),
        (f"AEA . {PHI3}", False),
    ],
)
def test_blocks_world_goals(blocks, goal, solvable):
    res = synthesize(blocks, goal)
    assert res.solvable is solvable
    if solvable:
        assert check(blocks, res.plan, goal).verdict


def test_game_too_large(blocks):
    with pytest.raises(GameTooLarge):
        synthesize(blocks, f"AE . {PHI1}", max_nodes=50)


def test_summary_fields(blocks):
    res = synthesize(blocks, f"AEA . {PHI2}")
    assert set(res.summary()) == {"solvable", "plan_file", "game_nodes", "parity_index"}
    assert res.losing and res.game_nodes == len(res.game)


def test_fq_blocks_world(blocks):
    assert plan_fq(blocks, "tower", "weak").solvable
    assert plan_fq(blocks, "tower", "strong_cyclic").solvable
    assert not plan_fq(blocks, "tower", "strong").solvable


def test_fq_trivial_and_unreachable():
    d = single_state_domain({"q"})
    assert all(plan_fq(d, "q", m).solvable for m in FQ_MODES)
    d = make_domain(["s", "t"], "s", {("s", "a"): ["s"], ("t", "a"): ["t"]}, {"t": ["q"]}, atoms=["q"])
    assert not any(plan_fq(d, "q", m).solvable for m in FQ_MODES)


def test_gq_cases(blocks):
    d = single_state_domain({"q"})
    assert all(plan_gq(d, "q", m).solvable for m in GQ_MODES)
    d = make_domain(
        ["s", "t"], "s", {("s", "a"): ["s", "t"], ("t", "a"): ["t"]}, {"s": ["q"]}, atoms=["q"]
    )
    assert not plan_gq(d, "q", "strong").solvable
    assert plan_gq(d, "q", "weak").solvable
    res = plan_gq(blocks, "A_on_table", "strong")
    assert res.solvable
    assert synthesize(blocks, "A . G A_on_table").solvable
    assert check(blocks, res.plan, "A . G A_on_table").verdict


def test_fq_rejects_temporal(blocks):
    with pytest.raises(ValueError):
        plan_fq(blocks, parse_ltl("F tower", list(blocks.atoms) + ["tower"]), "weak")


def _instance(seed):
    rng = random.Random(seed)
    return rng, random_domain(rng), random_formula(rng)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_synthesized_plans_pass_check(seed):
    _, d, f = _instance(seed)
    for c in C:
        res = synthesize(d, Goal(c.word, f))
        if res.solvable:
            assert check(d, res.plan, Goal(c.word, f)).verdict, (c, f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_quantifier_monotonicity(seed):
    _, d, f = _instance(seed)
    ok = {c: synthesize(d, Goal(c.word, f)).solvable for c in C}
    for a in C:
        for b in C:
            if implies(a, b) and ok[a]:
                assert ok[b], (a, b, f)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_bounded_completeness_small_memory(seed):
    rng, d, f = _instance(seed)
    c = rng.choice(FINITE)
    goal = Goal(c.word, f)
    res = synthesize(d, goal)
    if not res.solvable:
        bound = min(res.game_nodes, 2)
        assert not any(check(d, p, goal).verdict for p in enumerate_plans(d, bound, cap=10**6))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["p", "q", "p & q", "!p"]))
def test_fixpoint_planners_agree(seed, q):
    rng = random.Random(seed)
    d = random_domain(rng)
    for modes, op, planner in ((FQ_MODES, "F", plan_fq), (GQ_MODES, "G", plan_gq)):
        for mode, c in modes.items():
            goal = Goal(c.word, parse_ltl(f"{op} ({q})"))
            fast = planner(d, q, mode)
            assert fast.solvable == synthesize(d, goal).solvable, (mode, q)
            if fast.solvable:
                assert check(d, fast.plan, goal).verdict


def _histories(g, depth):
    todo = [[g.root]]
    while todo:
        path = todo.pop()
        yield [v[0] for v in path]
        if len(path) < depth:
            todo.extend(path + [w] for w in g.succ[path[-1]])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_regularity_round_trip(seed):
    rng, d, f = _instance(seed)
    res = synthesize(d, Goal(rng.choice(list(C)).word, f))
    if res.solvable:
        g = product(d, res.plan)
        for h in _histories(g, 5):
            assert induced_plan(g, h) == res.plan.induced(h)


def test_synthesis_is_deterministic(blocks):
    a = synthesize(blocks, f"AE . {PHI3}").plan
    b = synthesize(blocks, f"AE . {PHI3}").plan
    assert a == b and dict(a.output) == dict(b.output)
