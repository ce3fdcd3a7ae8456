"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section of the pytest summary.  Run just these with
``pytest tests/test_acceptance.py``.
"""
import random
import time

import pytest

from aeplan.automata import dpw_run_lasso, ltl_to_dpw
from aeplan.checker import Goal, check, check_graph, strictness_table
from aeplan.domain import gen_blocks_world, product
from aeplan.ltl import eval_lasso, parse_ltl
from aeplan.oracle import BudgetExceeded, enumerate_plans
from aeplan.quantifier import Canonical, PathQuantifier, diagram_edges, implies, normalize
from aeplan.samples import (
    count_temporal,
    random_domain,
    random_formula,
    random_lasso,
    random_plan,
    random_quantifier,
)
from aeplan.synth import FQ_MODES, GQ_MODES, plan_fq, plan_gq, synthesize

C = Canonical
FINITE = [c for c in C if c.is_finite]

# hand-normalized words
FIXTURE_WORDS = {
    "A": C.A,
    "E": C.E,
    "AA": C.A,
    "EE": C.E,
    "AE": C.AE,
    "EA": C.EA,
    "AEA": C.AEA,
    "EAE": C.EAE,
    "AEAE": C.AE,
    "EAEA": C.EA,
    "AEAEA": C.AEA,
    "EAEAE": C.EAE,
    "AAEEAA": C.AEA,
    "E(A)^w": C.EA,
    "A(E)^w": C.AE,
    "AE(A)^w": C.AEA,
    "(AE)^w": C.AE_OMEGA,
    "(EA)^w": C.EA_OMEGA,
    "A(EA)^w": C.AE_OMEGA,
    "(EAAE)^w": C.EA_OMEGA,
}


def _insert_duplicate(rng, q: PathQuantifier) -> PathQuantifier:
    parts = [q.prefix, q.period]
    i = rng.choice([k for k in (0, 1) if parts[k]])
    w = parts[i]
    j = rng.randrange(len(w))
    parts[i] = w[: j + 1] + w[j] + w[j + 1 :]
    return PathQuantifier(*parts)


def test_criterion_1_normalization(report):
    rng = random.Random(1)
    start = time.perf_counter()
    bad = []
    for _ in range(10_000):
        q = random_quantifier(rng, 12, 6)
        c = normalize(q)
        if not isinstance(c, C) or normalize(c.word) is not c:
            bad.append(str(q))
        elif normalize(_insert_duplicate(rng, q)) is not c:
            bad.append(str(q))
    wrong = [w for w, c in FIXTURE_WORDS.items() if normalize(w) is not c]
    elapsed = time.perf_counter() - start
    ok = not bad and not wrong and len(FIXTURE_WORDS) == 20 and elapsed < 1.0
    report(
        1,
        "canonical normalization",
        ok,
        f"{len(bad)} bad of 10000 random words, {len(wrong)} fixture mismatches, {elapsed:.2f}s",
    )
    assert ok, (bad[:5], wrong)


def test_criterion_2_implication_lattice(report):
    start = time.perf_counter()
    reach = {a: {a} for a in C}
    for _ in C:
        for a, b in diagram_edges():
            for x in C:
                if a in reach[x]:
                    reach[x].add(b)
    lattice_ok = all(implies(a, b) == (b in reach[a]) for a in C for b in C)
    strict = sum(1 for a in C for b in C if a is not b and implies(a, b))
    rng = random.Random(2)
    violations = 0
    for _ in range(100):
        d = random_domain(rng, max_states=4)
        g = product(d, random_plan(rng, d, max_memory=2))
        f = random_formula(rng, max_temporal=3)
        v = {c: check_graph(g, Goal(c.word, f)).verdict for c in C}
        violations += sum(1 for a in C for b in C if implies(a, b) and v[a] and not v[b])
    elapsed = time.perf_counter() - start
    ok = lattice_ok and violations == 0 and elapsed < 60
    report(
        2,
        "implication lattice",
        ok,
        f"closure equals diagram: {lattice_ok} ({strict} strict pairs; the stated count 13 does"
        f" not match the diagram), {violations} monotonicity violations on 100 instances,"
        f" {elapsed:.1f}s",
    )
    assert ok


def test_criterion_3_strictness_matrix(report):
    T, F = True, False
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
    start = time.perf_counter()
    table = strictness_table()
    elapsed = time.perf_counter() - start
    mismatches = [c for c in C if table[c] != expected[c]]
    cells = sum(x == y for c in C for x, y in zip(table[c], expected[c]))
    edges_strict = all(
        table[a] != table[b] for a in C for b in C if a is not b and implies(a, b)
    )
    ok = not mismatches and edges_strict and elapsed < 10
    report(
        3,
        "strictness matrix",
        ok,
        f"{cells}/40 cells match, every edge strict: {edges_strict},"
        f" {elapsed:.2f}s",
    )
    assert ok, mismatches


def test_criterion_4_automata_soundness(report):
    rng = random.Random(4)
    start = time.perf_counter()
    disagree = 0
    for _ in range(10_000):
        f = random_formula(rng, max_temporal=4, max_size=9)
        assert count_temporal(f) <= 4
        w = random_lasso(rng, max_len=6)
        if dpw_run_lasso(ltl_to_dpw(f), w) != eval_lasso(f, w):
            disagree += 1
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and elapsed < 120
    report(4, "automata soundness", ok, f"{10_000 - disagree}/10000 agree, {elapsed:.1f}s")
    assert ok


REACH = ([C.E, C.EA, C.EAE, C.EA_OMEGA], [C.AE, C.AEA, C.AE_OMEGA])
KEEP = ([C.A, C.AE, C.AEA, C.AE_OMEGA], [C.EA, C.EAE, C.EA_OMEGA])
PROPS = ["p", "q", "!p", "p & q", "p | q", "p & !q"]


def test_criterion_5_reach_maintain_collapse(report):
    rng = random.Random(5)
    start = time.perf_counter()
    violations = 0
    for _ in range(120):
        d = random_domain(rng)
        g = product(d, random_plan(rng, d))
        q = rng.choice(PROPS)
        for op, groups in (("F", REACH), ("G", KEEP)):
            f = parse_ltl(f"{op} ({q})")
            for group in groups:
                if len({check_graph(g, Goal(c.word, f)).verdict for c in group}) != 1:
                    violations += 1
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 300
    report(5, "reach/maintain collapse", ok, f"{violations} violations on 120 pairs, {elapsed:.1f}s")
    assert ok


BLOCKS_GOALS = [
    ("AE", "F (tower & F scattered)", True),
    ("AEA", "F (tower & F scattered)", True),
    ("AE", "F G tower", True),
    ("AE", "G F tower", True),
    ("(AE)^w", "G F tower", True),
    ("AEA", "F G tower", False),
    ("AEA", "G F tower", False),
]


def test_criterion_6_blocks_world(report):
    d = gen_blocks_world()
    start = time.perf_counter()
    wrong = []
    for q, f, expected in BLOCKS_GOALS:
        goal = f"{q} . {f}"
        res = synthesize(d, goal)
        if res.solvable != expected or (res.solvable and not check(d, res.plan, goal).verdict):
            wrong.append(goal)
    elapsed = time.perf_counter() - start
    ok = not wrong and elapsed < 600
    report(6, "blocks world", ok, f"{7 - len(wrong)}/7 verdicts exact, plans pass check, {elapsed:.1f}s")
    assert ok, wrong


PLAN_BUDGET = 20_000


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="plan enumeration at memory bound = game size does not finish on most"
    " unsatisfiable instances; see the decisions ledger",
)
def test_criterion_7_synthesis_vs_oracle(report):
    rng = random.Random(2024)
    start = time.perf_counter()
    violations, unverified, unsat = [], [], 0
    for i in range(50):
        d = random_domain(rng, max_states=4, max_actions=2)
        f = random_formula(rng, max_temporal=2)
        goal = Goal(rng.choice(FINITE).word, f)
        res = synthesize(d, goal)
        if res.solvable:
            if not check(d, res.plan, goal).verdict:
                violations.append(i)
            continue
        unsat += 1
        try:
            plans = enumerate_plans(d, res.game_nodes, cap=10**9, max_plans=PLAN_BUDGET)
            if any(check(d, p, goal).verdict for p in plans):
                violations.append(i)
        except BudgetExceeded:
            unverified.append(i)
    elapsed = time.perf_counter() - start
    ok = not violations and not unverified and elapsed < 600
    report(
        7,
        "synthesis vs oracle",
        ok,
        f"{len(violations)} violations; {len(unverified)}/{unsat} unsatisfiable instances not"
        f" exhausted within {PLAN_BUDGET} plans at memory bound = game size, {elapsed:.0f}s",
    )
    assert not violations
    assert ok


def test_criterion_8_specialized_planners(report):
    rng = random.Random(8)
    start = time.perf_counter()
    disagreements = 0
    for _ in range(100):
        d = random_domain(rng)
        q = rng.choice(PROPS)
        for modes, op, planner in ((FQ_MODES, "F", plan_fq), (GQ_MODES, "G", plan_gq)):
            for mode, c in modes.items():
                goal = Goal(c.word, parse_ltl(f"{op} ({q})"))
                if planner(d, q, mode).solvable != synthesize(d, goal).solvable:
                    disagreements += 1
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 300
    report(8, "specialized planners", ok, f"{disagreements} disagreements on 100 domains x 6 modes, {elapsed:.1f}s")
    assert ok
