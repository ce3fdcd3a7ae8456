"""
LTL over lasso words, two ways
==============================

An ultimately periodic word ``stem . loop^omega`` can be evaluated
directly, or run through a deterministic parity automaton built from the
formula.  Both answers must agree.
"""
from aeplan.automata import dpw_run_lasso, ltl_to_dpw, ltl_to_nbw
from aeplan.ltl import LassoWord, eval_lasso, parse_ltl

w = LassoWord(stem=[set()], loop=[{"p"}, set()])
print("word: {} . ({p} {})^w")

for text in ["F p", "G p", "GF p", "FG p", "p U q", "X !p"]:
    f = parse_ltl(text)
    nbw = ltl_to_nbw(f)
    dpw = ltl_to_dpw(f)
    print(
        f"{text:>6}: direct={eval_lasso(f, w)!s:5}  automaton={dpw_run_lasso(dpw, w)!s:5}"
        f"  ({len(nbw.states)} Buchi states -> {dpw.size} parity states, index {dpw.index})"
    )

# The automaton for FG p, as a listing
print()
print(ltl_to_dpw(parse_ltl("FG p")).dump())
