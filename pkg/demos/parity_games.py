"""
Solving a small parity game
===========================

Min-even parity: the player named by the parity of the least priority
seen infinitely often wins.  Zielonka's algorithm returns both winning
regions and positional strategies.
"""
from aeplan.games import EVEN, ODD, ParityGame, solve

g = ParityGame()
g.add("a", EVEN, 3, ["b", "c"])
g.add("b", ODD, 2, ["a", "d"])
g.add("c", EVEN, 0, ["c", "a"])
g.add("d", ODD, 1, ["d"])

sol = solve(g)
print(g.dump(sol.win_even))
print("Even plays", sol.strategy_even)
print("Odd plays", sol.strategy_odd)
