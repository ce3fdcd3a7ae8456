"""
Path quantifiers and their implication order
============================================

A goal ``alpha . phi`` lets two players take turns extending the execution
path: ``A`` is the environment, ``E`` the planner.  Arbitrarily long words
collapse to eight canonical forms.
"""
from aeplan.quantifier import Canonical, implies, normalize

# Repeating a letter changes nothing, and so does a second AE round
for word in ["AA", "AEAE", "EAEAE", "AE(A)^w", "E(A)^w", "A(EA)^w", "(EAAE)^w"]:
    print(f"{word:>10}  ->  {normalize(word)}")

# The eight forms are ordered by implication; A is strongest, E weakest
print()
names = [str(c) for c in Canonical]
print(" " * 8 + "".join(f"{n:>8}" for n in names))
for a in Canonical:
    row = "".join(f"{('x' if implies(a, b) else '.'):>8}" for b in Canonical)
    print(f"{str(a):>8}{row}")
