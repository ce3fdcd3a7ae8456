"""Planning with path-quantified temporal goals in nondeterministic domains.

Goals have the form ``alpha . phi``: ``phi`` is an LTL formula and
``alpha`` a word over {A, E} saying who extends the execution path when
(A is the adversary, E the planner).  The package normalizes quantifiers,
checks plans and synthesizes finite-memory plans.
"""
from .checker import CheckResult, Goal, check, check_graph, parse_goal, strictness_table
from .domain import (
    ExecutionGraph,
    FiniteMemoryPlan,
    PlanningDomain,
    format_domain,
    format_plan,
    gen_binary_tree,
    gen_blocks_world,
    gen_realizability,
    make_domain,
    parse_domain,
    parse_plan,
    product,
    validate,
)
from .ltl import Formula, LassoWord, eval_lasso, parse_ltl
from .quantifier import Canonical, PathQuantifier, implies, normalize, parse_quantifier
from .synth import SynthesisResult, plan_fq, plan_gq, synthesize

__all__ = [
    "Canonical",
    "CheckResult",
    "ExecutionGraph",
    "FiniteMemoryPlan",
    "Formula",
    "Goal",
    "LassoWord",
    "PathQuantifier",
    "PlanningDomain",
    "SynthesisResult",
    "check",
    "check_graph",
    "eval_lasso",
    "format_domain",
    "format_plan",
    "gen_binary_tree",
    "gen_blocks_world",
    "gen_realizability",
    "implies",
    "make_domain",
    "normalize",
    "parse_domain",
    "parse_goal",
    "parse_ltl",
    "parse_plan",
    "parse_quantifier",
    "plan_fq",
    "plan_gq",
    "product",
    "strictness_table",
    "synthesize",
    "validate",
]
