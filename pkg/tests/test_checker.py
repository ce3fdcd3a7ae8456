import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from aeplan.checker import (
    AtomMismatch,
    Goal,
    GoalSyntaxError,
    check,
    check_graph,
    check_word,
    good_sets,
    graph_product,
    parse_goal,
    strictness_table,
)
from aeplan.domain import gen_binary_tree, memoryless_plan, product
from aeplan.ltl import parse_ltl
from aeplan.quantifier import Canonical, PathQuantifier, implies, normalize
from aeplan.samples import random_domain, random_formula, random_plan, random_quantifier

C = Canonical
T, F = True, False


@pytest.fixture(scope="module")
def tree():
    d = gen_binary_tree()
    return product(d, memoryless_plan({s: "step" for s in d.states}))


def verdict(g, text):
    return check_graph(g, parse_goal(text)).verdict


@pytest.mark.parametrize(
    "goal, expected",
    [
        ("E . G !q", T),
        ("EA . G !q", F),
        ("A . F p", F),
        ("AEA . F p", T),
        ("(AE)^w . GF p", T),
        ("AEA . GF p", F),
        ("(AE)^w . FG p", F),
        ("EAE . FG p", T),
        ("EA . X p", T),
        ("AE . X p", F),
        ("AE . F p", T),
    ],
)
def test_binary_tree_verdicts(tree, goal, expected):
    assert verdict(tree, goal) is expected


def test_strictness_table():
    expected = {
        C.A: (F, F, F, F, F),
        C.E: (T, T, T, T, T),
        C.AE: (T, T, T, F, F),
        C.EA: (T, F, F, F, T),
        C.AEA: (T, F, F, F, F),
        C.EAE: (T, T, T, F, T),
        C.AE_OMEGA: (T, T, F, F, F),
        C.EA_OMEGA: (T, T, F, F, T),
    }
    assert strictness_table() == expected


def test_every_diagram_edge_is_strict():
    table = strictness_table()
    for a in C:
        for b in C:
            if a is not b and implies(a, b):
                assert table[a] != table[b]
                assert all(x <= y for x, y in zip(table[a], table[b]))


def test_good_sets_on_tree(tree):
    prod = graph_product(tree, parse_ltl("F p"))
    _, good_a, _, _ = good_sets(prod)
    # exactly the nodes whose automaton state has already seen p
    seen_p = {x for x in prod.nodes if x[0][0] == "p"}
    for x in prod.nodes:
        if x in seen_p:
            assert x in good_a
    assert prod.root not in good_a
    prod = graph_product(tree, parse_ltl("G !q"))
    assert good_sets(prod)[1] == frozenset()


def test_goal_errors():
    with pytest.raises(GoalSyntaxError, match="lacks"):
        parse_goal("AE F p")
    with pytest.raises(GoalSyntaxError, match="quantifier"):
        parse_goal("AX . F p")
    with pytest.raises(GoalSyntaxError, match="goal offset 9"):
        parse_goal("AE . F (p")
    d = gen_binary_tree()
    plan = memoryless_plan({s: "step" for s in d.states})
    with pytest.raises((AtomMismatch, GoalSyntaxError)):
        check(d, plan, "E . F r")
    with pytest.raises(AtomMismatch):
        check(d, plan, Goal(C.E.word, parse_ltl("F r")))


def test_result_json(tree):
    res = check_graph(tree, "E . G !q")
    body = json.loads(res.to_json())
    assert body["verdict"] is True and body["canonical"] == "E"
    assert body["witness"]["loop"]


def _instance(seed, max_temporal=3):
    rng = random.Random(seed)
    d = random_domain(rng)
    g = product(d, random_plan(rng, d))
    return rng, g, random_formula(rng, max_temporal=max_temporal)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_lattice_monotonicity(seed):
    _, g, f = _instance(seed)
    verdicts = {c: check_graph(g, Goal(c.word, f)).verdict for c in C}
    for a in C:
        for b in C:
            if implies(a, b) and verdicts[a]:
                assert verdicts[b], (a, b, f)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_normalization_soundness(seed):
    rng, g, f = _instance(seed, max_temporal=2)
    q = random_quantifier(rng, max_prefix=6, max_period=4)
    assert check_word(g, Goal(q, f)) == check_graph(g, Goal(normalize(q).word, f)).verdict


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_raw_words_agree_with_canonical_words(seed):
    _, g, f = _instance(seed, max_temporal=2)
    for c in C:
        assert check_word(g, Goal(c.word, f)) == check_graph(g, Goal(c.word, f)).verdict


REACH = ([C.E, C.EA, C.EAE, C.EA_OMEGA], [C.AE, C.AEA, C.AE_OMEGA])
KEEP = ([C.A, C.AE, C.AEA, C.AE_OMEGA], [C.EA, C.EAE, C.EA_OMEGA])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["p", "q", "p & !q", "p | q"]))
def test_reach_and_keep_collapse(seed, q):
    rng = random.Random(seed)
    d = random_domain(rng)
    g = product(d, random_plan(rng, d))
    for op, groups in (("F", REACH), ("G", KEEP)):
        f = parse_ltl(f"{op} ({q})")
        for group in groups:
            assert len({check_graph(g, Goal(c.word, f)).verdict for c in group}) == 1
