"""LTL to Buchi automata by tableau, and Buchi to deterministic parity.

Letters are frozensets of atoms.  Automata only look at the atoms of their
formula, so callers may pass richer letters (a domain state's full label);
they are projected on the way in.

Determinization follows Safra's construction with compact, age-ordered node
names (older siblings carry smaller names), which turns the Rabin pairs into
a min-even parity condition directly.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import Iterable, Sequence

from .ltl import (
    FALSE,
    TRUE,
    Always,
    Atom,
    Eventually,
    Formula,
    Implies,
    LassoWord,
    atoms_of,
    nnf,
)

MARK = "_w"  # reserved marking atom used by the quantifier shapes

Letter = frozenset


def powerset(atoms: Iterable[str]) -> list[frozenset[str]]:
    atoms = sorted(atoms)
    subsets = chain.from_iterable(combinations(atoms, k) for k in range(len(atoms) + 1))
    return [frozenset(s) for s in subsets]


# ---------------------------------------------------------------------------
# Buchi automata


@dataclass(frozen=True)
class Guard:
    pos: frozenset[str]
    neg: frozenset[str]

    def holds(self, letter: frozenset[str]) -> bool:
        return self.pos <= letter and not (self.neg & letter)

    def __str__(self) -> str:
        lits = sorted(self.pos) + ["!" + a for a in sorted(self.neg)]
        return " & ".join(lits) if lits else "true"


@dataclass
class BuchiAutomaton:
    """State-based Buchi automaton with guarded edges.

    ``edges[q]`` lists ``(guard, target)``; the alphabet is all subsets of
    ``atoms`` (letters are projected onto ``atoms`` before matching).
    """

    atoms: frozenset[str]
    states: list
    initial: list
    edges: dict
    accepting: set

    def successors(self, q, letter: frozenset[str]) -> list:
        letter = letter & self.atoms
        seen = []
        for g, t in self.edges[q]:
            if g.holds(letter) and t not in seen:
                seen.append(t)
        return seen

    def is_deterministic(self, letters: Iterable[frozenset[str]]) -> bool:
        letters = list(letters)
        if len(self.initial) > 1:
            return False
        return all(len(self.successors(q, a)) <= 1 for q in self.states for a in letters)


def _expand(todo: list[Formula], pos, neg, nxt, postponed, out: list) -> None:
    """Tableau expansion of a set of NNF obligations for one position."""
    while todo:
        f = todo.pop()
        op = f.op
        if op == "true":
            continue
        if op == "false":
            return
        if op == "atom":
            if f.name in neg:
                return
            pos = pos | {f.name}
            continue
        if op == "not":
            name = f.args[0].name
            if name in pos:
                return
            neg = neg | {name}
            continue
        if op == "and":
            todo = todo + list(f.args)
            continue
        if op == "next":
            nxt = nxt | {f.args[0]}
            continue
        if op == "or":
            for g in f.args:
                _expand(todo + [g], pos, neg, nxt, postponed, out)
            return
        if op == "until":
            a, b = f.args
            _expand(todo + [b], pos, neg, nxt, postponed, out)
            _expand(todo + [a], pos, neg, nxt | {f}, postponed | {f}, out)
            return
        if op == "release":
            a, b = f.args
            _expand(todo + [a, b], pos, neg, nxt, postponed, out)
            _expand(todo + [b], pos, neg, nxt | {f}, postponed, out)
            return
        raise ValueError(f"formula not in negation normal form: {f}")
    out.append((frozenset(pos), frozenset(neg), frozenset(nxt), frozenset(postponed)))


def _untils(f: Formula) -> list[Formula]:
    found: list[Formula] = []

    def walk(g: Formula) -> None:
        for a in g.args:
            walk(a)
        if g.op == "until" and g not in found:
            found.append(g)

    walk(f)
    return found


def _is_f(f: Formula) -> bool:
    return f.op == "until" and f.args[0] == TRUE


def _is_g(f: Formula) -> bool:
    return f.op == "release" and f.args[0] == FALSE


def simplify(f: Formula) -> Formula:
    """Cheap language-preserving rewrites on an NNF formula."""
    if not f.args:
        return f
    args = tuple(simplify(a) for a in f.args)
    f = Formula(f.op, args, f.name)
    if f.op == "until":
        a, b = args
        if a == FALSE or a == b or _is_f(b):  # a U F b == F b
            return b
        if a == TRUE and _is_g(b) and _is_f(b.args[1]):  # F G F b == G F b
            return b
    if f.op == "release":
        a, b = args
        if a == TRUE or a == b or _is_g(b):  # a R G b == G b
            return b
        if a == FALSE and _is_f(b) and _is_g(b.args[1]):  # G F G b == F G b
            return b
    return f


def ltl_to_nbw(f: Formula) -> BuchiAutomaton:
    """Tableau automaton for ``f``; states are (obligation set, counter)."""
    g = simplify(nnf(f))
    untils = _untils(g)
    k = len(untils)
    start = (frozenset([g]) if g != TRUE else frozenset(), k)
    states = [start]
    index = {start: 0}
    edges: dict = {}
    queue = deque([start])
    cover_cache: dict = {}
    while queue:
        q = queue.popleft()
        obligations, c = q
        covers = cover_cache.get(obligations)
        if covers is None:
            covers = []
            _expand(list(obligations), frozenset(), frozenset(), frozenset(), frozenset(), covers)
            covers = sorted(set(covers), key=_cover_key)
            cover_cache[obligations] = covers
        out = []
        for pos, neg, nxt, postponed in covers:
            c2 = 0 if c == k else c
            while c2 < k and untils[c2] not in postponed:
                c2 += 1
            t = (nxt, c2)
            if t not in index:
                index[t] = len(states)
                states.append(t)
                queue.append(t)
            edge = (Guard(pos, neg), t)
            if edge not in out:
                out.append(edge)
        edges[q] = out
    accepting = {q for q in states if q[1] == k}
    return reduce_nbw(BuchiAutomaton(frozenset(atoms_of(f)), states, [start], edges, accepting))


def _sccs(states: list, succ) -> list[list]:
    """Tarjan's algorithm, iterative."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0
    for root in states:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def reduce_nbw(b: BuchiAutomaton) -> BuchiAutomaton:
    """Drop states with empty language and merge bisimilar states."""
    succ = {q: [t for _, t in b.edges[q]] for q in b.states}
    live: set = set()
    for comp in _sccs(b.states, succ.__getitem__):
        members = set(comp)
        cyclic = len(comp) > 1 or comp[0] in succ[comp[0]]
        if cyclic and members & b.accepting:
            live |= members
    # backward closure: states that can reach a live accepting cycle
    preds: dict = {q: [] for q in b.states}
    for q in b.states:
        for t in succ[q]:
            preds[t].append(q)
    todo = list(live)
    while todo:
        for p in preds[todo.pop()]:
            if p not in live:
                live.add(p)
                todo.append(p)
    states = [q for q in b.states if q in live]
    edges = {q: [(g, t) for g, t in b.edges[q] if t in live] for q in states}
    # partition refinement on (acceptance, guarded edges to blocks)
    block = {q: int(q in b.accepting) for q in states}
    while True:
        sig = {
            q: (block[q], frozenset((g, block[t]) for g, t in edges[q]))
            for q in states
        }
        ids: dict = {}
        new = {q: ids.setdefault(sig[q], len(ids)) for q in states}
        if len(ids) == len(set(block.values())):
            break
        block = new
    rep: dict = {}
    for q in states:
        rep.setdefault(block[q], q)
    keep = [q for q in states if rep[block[q]] == q]
    new_edges = {}
    for q in keep:
        out = []
        for g, t in edges[q]:
            e = (g, rep[block[t]])
            if e not in out:
                out.append(e)
        new_edges[q] = out
    initial = []
    for q in b.initial:
        if q in live and rep[block[q]] not in initial:
            initial.append(rep[block[q]])
    accepting = {q for q in keep if q in b.accepting}
    return BuchiAutomaton(b.atoms, keep, initial, new_edges, accepting)


def _cover_key(c) -> tuple:
    pos, neg, nxt, postponed = c
    return (sorted(pos), sorted(neg), sorted(map(str, nxt)), sorted(map(str, postponed)))


# ---------------------------------------------------------------------------
# deterministic parity automata


@dataclass
class ParityWordAutomaton:
    """Deterministic, complete, state-based min-even parity automaton.

    States are integers ``0..n-1``; ``delta[(q, letter)]`` is defined for
    every letter of ``alphabet`` (letters already projected to ``atoms``).
    """

    atoms: frozenset[str]
    alphabet: tuple[frozenset[str], ...]
    initial: int
    delta: dict
    priority: list[int]
    names: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.priority)

    @property
    def index(self) -> int:
        return len(set(self.priority))

    def step(self, q: int, letter: frozenset[str]) -> int:
        key = (q, letter & self.atoms)
        if key not in self.delta:
            raise ValueError(f"letter {sorted(letter)} outside the automaton alphabet")
        return self.delta[key]

    def dump(self) -> str:
        """Text digraph listing with stable ordering."""
        lines = [f"dpw states={self.size} initial={self.initial} atoms={','.join(sorted(self.atoms))}"]
        for q in range(self.size):
            lines.append(f"  {q} priority={self.priority[q]}")
            for a in self.alphabet:
                lines.append(f"    {q} -[{','.join(sorted(a)) or '{}'}]-> {self.delta[(q, a)]}")
        return "\n".join(lines)


def _letters(atoms: frozenset[str], letters: Iterable[frozenset[str]] | None) -> tuple:
    if letters is None:
        out = powerset(atoms)
    else:
        out = sorted({frozenset(a) & atoms for a in letters}, key=lambda s: (len(s), sorted(s)))
    return tuple(out)


def _explore(atoms, alphabet, start, step, prio) -> ParityWordAutomaton:
    names = [start]
    index = {start: 0}
    delta = {}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        i = index[s]
        for a in alphabet:
            t = step(s, a)
            if t not in index:
                index[t] = len(names)
                names.append(t)
                queue.append(t)
            delta[(i, a)] = index[t]
    return ParityWordAutomaton(atoms, alphabet, 0, delta, [prio(s) for s in names], names)


# Safra trees: (name, label, children) with children ordered oldest first.


def _safra_step(tree, b: BuchiAutomaton, letter, n_states: int):
    """One Safra transition; returns (new tree or None, priority)."""
    used = set()

    def collect(t):
        used.add(t[0])
        for c in t[2]:
            collect(c)

    collect(tree)
    old_names = set(used)
    fresh = iter(i for i in range(1, 4 * n_states + 4) if i not in used)

    # spawn children for accepting states, then take the powerset step
    def spawn(t):
        name, label, kids = t
        kids = [spawn(c) for c in kids]
        acc = label & b.accepting
        if acc:
            kids.append((next(fresh), acc, []))
        return (name, label, kids)

    def advance(t):
        name, label, kids = t
        nxt = frozenset(s for q in label for s in b.successors(q, letter))
        return (name, nxt, [advance(c) for c in kids])

    t = advance(spawn(tree))
    removed: set[int] = set()
    marked: set[int] = set()

    def names_of(t):
        yield t[0]
        for c in t[2]:
            yield from names_of(c)

    # horizontal merge: a state stays only in the oldest branch
    def horizontal(t):
        name, label, kids = t
        seen: set = set()
        out = []
        for c in kids:
            c = _restrict(c, frozenset(c[1] - seen))
            seen |= c[1]
            out.append(horizontal(c))
        return (name, label, out)

    t = horizontal(t)

    def prune(t):
        name, label, kids = t
        keep = []
        for c in kids:
            if c[1]:
                keep.append(prune(c))
            else:
                removed.update(names_of(c))
        return (name, label, keep)

    t = prune(t)

    def vertical(t):
        name, label, kids = t
        if kids and frozenset().union(*(c[1] for c in kids)) == label:
            for c in kids:
                removed.update(names_of(c))
            marked.add(name)
            return (name, label, [])
        return (name, label, [vertical(c) for c in kids])

    if not t[1]:
        return None, 1
    t = vertical(t)
    removed &= old_names
    e = min(removed, default=None)
    f = min(marked, default=None)
    if f is not None and (e is None or f < e):
        pri = 2 * f
    elif e is not None:
        pri = 2 * e - 1
    else:
        pri = 2 * n_states + 1

    # compaction: close the gaps left by removed names, keeping age order
    alive = sorted(names_of(t))
    rename = {old: new for new, old in enumerate(alive, start=1)}

    def freeze(t):
        name, label, kids = t
        return (rename[name], label, tuple(freeze(c) for c in kids))

    return freeze(t), pri


def _restrict(t, keep: frozenset):
    name, label, kids = t
    return (name, label & keep, [_restrict(c, keep) for c in kids])


def nbw_to_dpw(b: BuchiAutomaton, letters: Iterable[frozenset[str]] | None = None) -> ParityWordAutomaton:
    """Deterministic parity automaton with the language of ``b``."""
    alphabet = _letters(b.atoms, letters)
    if b.is_deterministic(alphabet):
        sink = ("sink",)
        start = b.initial[0] if b.initial else sink

        def step(q, a):
            if q == sink:
                return sink
            nxt = b.successors(q, a)
            return nxt[0] if nxt else sink

        return _explore(b.atoms, alphabet, start, step, lambda q: 0 if q in b.accepting else 1)

    n = len(b.states)
    neutral = 2 * n + 1
    root = (1, frozenset(b.initial), ())
    start = (root, neutral)

    def step(s, a):
        tree, _ = s
        if tree is None:
            return (None, 1)
        return _safra_step(tree, b, a, n)

    return _explore(b.atoms, alphabet, start, step, lambda s: s[1])


def ltl_to_dpw(f: Formula, letters: Iterable[frozenset[str]] | None = None) -> ParityWordAutomaton:
    return nbw_to_dpw(ltl_to_nbw(f), letters)


def dpw_run_lasso(d: ParityWordAutomaton, w: LassoWord) -> bool:
    """Whether ``d`` accepts ``w``: run the stem, then the loop until a repeat."""
    q = d.initial
    for a in w.stem:
        q = d.step(q, a)
    seen: dict[int, int] = {}
    pris: list[int] = []
    while q not in seen:
        seen[q] = len(pris)
        for a in w.loop:
            q = d.step(q, a)
            pris.append(d.priority[q])
    # the states at loop boundaries cycle from seen[q] on
    return min(pris[seen[q]:]) % 2 == 0


# ---------------------------------------------------------------------------
# quantifier shapes

SHAPES = ("Fw", "FGw", "GFw")


def shape_antecedent(shape: str) -> Formula:
    w = Atom(MARK)
    if shape == "Fw":
        return Eventually(w)
    if shape == "FGw":
        return Eventually(Always(w))
    if shape == "GFw":
        return Always(Eventually(w))
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")


def psi_formula(shape: str, f: Formula) -> Formula:
    if MARK in atoms_of(f):
        raise ValueError(f"atom {MARK!r} is reserved for the marking")
    return Implies(shape_antecedent(shape), f)


def dpw_for_psi(
    shape: str, f: Formula, letters: Iterable[frozenset[str]] | None = None
) -> ParityWordAutomaton:
    """DPW for ``theta(w) -> f`` over letters extended with the marking bit.

    ``letters`` are unmarked letters; each is offered with and without
    the marking atom.
    """
    psi = psi_formula(shape, f)
    if letters is not None:
        letters = [a for x in letters for a in (frozenset(x), frozenset(x) | {MARK})]
    return ltl_to_dpw(psi, letters)
