"""
Telling the eight quantifiers apart
===================================

On the infinite binary tree whose root is labelled ``i`` and whose nodes
have a ``p`` child and a ``q`` child, five formulas separate every pair of
canonical quantifiers.
"""
from aeplan.checker import strictness_table

formulas = ("F p", "GF p", "FG p", "G !q", "X p")
table = strictness_table(formulas)

print(f"{'':>8}" + "".join(f"{f:>7}" for f in formulas))
for c, row in table.items():
    print(f"{str(c):>8}" + "".join(f"{('T' if v else 'F'):>7}" for v in row))

# A moving at least once is enough to break "G !q", so only E passes it;
# X p holds exactly when E moves first.
