"""Nondeterministic planning domains, finite-memory plans and their product.

Text formats (``#`` starts a comment)::

    # domain file
    states: s0 s1 s2
    init: s0
    label s0: p q
    action go: s0 -> s1 s2 ; s1 -> s0
    define both: p & q        # optional abbreviation usable in goals

    # plan file
    memory: m0 m1
    initial: m0
    at m0 s0: do go goto m1
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Mapping

from .ltl import Formula, LTLSyntaxError, atoms_of, parse_ltl, to_string

log = logging.getLogger(__name__)


class DomainError(ValueError):
    """Malformed domain/plan text or an inconsistent plan."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class PlanningDomain:
    states: tuple[str, ...]
    init: str
    actions: tuple[str, ...]
    transitions: Mapping[tuple[str, str], tuple[str, ...]]
    labels: Mapping[str, frozenset[str]]
    atoms: tuple[str, ...] = ()
    macros: Mapping[str, Formula] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.atoms:
            found = sorted(set().union(*self.labels.values())) if self.labels else []
            object.__setattr__(self, "atoms", tuple(found))
        object.__setattr__(self, "_order", {s: i for i, s in enumerate(self.states)})

    def __hash__(self) -> int:
        return hash((self.states, self.init, self.actions))

    def order(self, s: str) -> int:
        return self._order[s]  # type: ignore[attr-defined]

    def label(self, s: str) -> frozenset[str]:
        return self.labels.get(s, frozenset())

    def applicable(self, s: str) -> list[str]:
        """Actions defined in ``s``, in declaration order."""
        return [a for a in self.actions if self.transitions.get((s, a))]

    def successors(self, s: str, a: str) -> tuple[str, ...]:
        return self.transitions.get((s, a), ())

    @property
    def arities(self) -> frozenset[int]:
        """Branching degrees that occur in the domain."""
        return frozenset(len(t) for t in self.transitions.values() if t)


def make_domain(
    states: Iterable[str],
    init: str,
    transitions: Mapping[tuple[str, str], Iterable[str]],
    labels: Mapping[str, Iterable[str]] | None = None,
    actions: Iterable[str] | None = None,
    atoms: Iterable[str] | None = None,
    macros: Mapping[str, Formula] | None = None,
) -> PlanningDomain:
    """Build a domain, sorting successor tuples by state order."""
    states = tuple(states)
    order = {s: i for i, s in enumerate(states)}
    trans = {}
    for (s, a), succ in transitions.items():
        succ = tuple(sorted(set(succ), key=order.__getitem__))
        if succ:
            trans[(s, a)] = succ
    if actions is None:
        seen: dict[str, None] = {}
        for (_, a) in transitions:
            seen.setdefault(a)
        actions = tuple(seen)
    labels = {s: frozenset((labels or {}).get(s, ())) for s in states}
    return PlanningDomain(
        states, init, tuple(actions), trans, labels, tuple(atoms or ()), dict(macros or {})
    )


def validate(d: PlanningDomain) -> list[str]:
    """Invariant violations of ``d``; empty when the domain is well formed."""
    problems = []
    known = set(d.states)
    if len(known) != len(d.states):
        problems.append("duplicate states")
    if d.init not in known:
        problems.append(f"init {d.init!r} is not a state")
    for (s, a), succ in d.transitions.items():
        if s not in known:
            problems.append(f"transition from unknown state {s!r}")
            continue
        if a not in d.actions:
            problems.append(f"unknown action {a!r}")
        bad = [t for t in succ if t not in known]
        if bad:
            problems.append(f"unknown successors {bad} of ({s}, {a})")
            continue
        if len(set(succ)) != len(succ):
            problems.append(f"duplicate successors of ({s}, {a})")
        if list(succ) != sorted(succ, key=d.order):
            problems.append(f"unordered successors of ({s}, {a})")
    for s in d.states:
        if not d.applicable(s):
            problems.append(f"seriality: state {s!r} has no applicable action")
    for s, lab in d.labels.items():
        if not lab <= set(d.atoms):
            problems.append(f"label of {s!r} uses undeclared atoms")
    for name, f in d.macros.items():
        if name in d.atoms:
            problems.append(f"abbreviation {name!r} shadows an atom")
        if not atoms_of(f) <= set(d.atoms) or any(g.is_temporal for g in _walk(f)):
            problems.append(f"abbreviation {name!r} must be propositional over domain atoms")
    return problems


def _walk(f: Formula):
    yield f
    for a in f.args:
        yield from _walk(a)


# ---------------------------------------------------------------------------
# plans


@dataclass(frozen=True)
class FiniteMemoryPlan:
    """A controller: at ``(memory, state)`` do ``output`` and move to ``update``.

    The memory update depends on the current state only; the next domain
    state is observed on the following step.
    """

    memory: tuple[str, ...]
    initial: str
    output: Mapping[tuple[str, str], str]
    update: Mapping[tuple[str, str], str]

    def __hash__(self) -> int:
        return hash((self.memory, self.initial, tuple(sorted(self.output.items()))))

    def act(self, m: str, s: str) -> str:
        return self.output[(m, s)]

    def induced(self, history: Iterable[str]) -> str | None:
        """The action the plan issues after ``history`` (a state sequence)."""
        m = self.initial
        history = list(history)
        for s in history[:-1]:
            if (m, s) not in self.update:
                return None
            m = self.update[(m, s)]
        return self.output.get((m, history[-1]))


def memoryless_plan(policy: Mapping[str, str]) -> FiniteMemoryPlan:
    return FiniteMemoryPlan(
        ("m0",),
        "m0",
        {("m0", s): a for s, a in policy.items()},
        {("m0", s): "m0" for s in policy},
    )


@dataclass(frozen=True)
class ExecutionGraph:
    """Reachable part of domain x plan; unwinding it gives the execution tree."""

    nodes: tuple[tuple[str, str], ...]
    root: tuple[str, str]
    succ: Mapping[tuple[str, str], tuple[tuple[str, str], ...]]
    action: Mapping[tuple[str, str], str]
    labels: Mapping[tuple[str, str], frozenset[str]]

    def __hash__(self) -> int:
        return hash((self.nodes, self.root))

    def label(self, v: tuple[str, str]) -> frozenset[str]:
        return self.labels[v]


def product(d: PlanningDomain, p: FiniteMemoryPlan) -> ExecutionGraph:
    """Breadth-first product of ``d`` and ``p`` from ``(init, initial)``."""
    root = (d.init, p.initial)
    order = [root]
    seen = {root}
    succ: dict = {}
    action: dict = {}
    queue = deque([root])
    while queue:
        s, m = v = queue.popleft()
        if (m, s) not in p.output or (m, s) not in p.update:
            raise DomainError(f"plan undefined on reachable pair (memory {m}, state {s})")
        a = p.output[(m, s)]
        outs = d.successors(s, a)
        if not outs:
            raise DomainError(f"plan action {a!r} not applicable in state {s!r}")
        m2 = p.update[(m, s)]
        nxt = tuple((t, m2) for t in outs)
        succ[v] = nxt
        action[v] = a
        for w in nxt:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    labels = {v: d.label(v[0]) for v in order}
    return ExecutionGraph(tuple(order), root, succ, action, labels)


def induced_plan(g: ExecutionGraph, history: Iterable[str]) -> str | None:
    """Read the action after ``history`` off the execution graph."""
    history = list(history)
    if not history or history[0] != g.root[0]:
        return None
    v = g.root
    for s in history[1:]:
        nxt = [w for w in g.succ[v] if w[0] == s]
        if not nxt:
            return None
        v = nxt[0]
    return g.action[v]


def validate_plan(d: PlanningDomain, p: FiniteMemoryPlan) -> list[str]:
    try:
        product(d, p)
    except DomainError as exc:
        return [str(exc)]
    return []


# ---------------------------------------------------------------------------
# text formats


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_domain(text: str) -> PlanningDomain:
    states: list[str] | None = None
    init = None
    labels: dict[str, list[str]] = {}
    trans: dict[tuple[str, str], list[str]] = {}
    actions: list[str] = []
    defines: list[tuple[int, str, str]] = []
    for no, line in _lines(text):
        head, sep, rest = line.partition(":")
        if not sep:
            raise DomainError(f"expected 'key: value', got {line!r}", no)
        head = head.strip()
        words = head.split()
        if head == "states":
            states = rest.split()
        elif head == "init":
            init = rest.strip()
        elif head == "atoms":
            labels.setdefault("__atoms__", []).extend(rest.split())
        elif words and words[0] == "label" and len(words) == 2:
            labels[words[1]] = rest.split()
        elif words and words[0] == "define" and len(words) == 2:
            defines.append((no, words[1], rest))
        elif words and words[0] == "action" and len(words) == 2:
            a = words[1]
            if a not in actions:
                actions.append(a)
            for clause in rest.split(";"):
                if not clause.strip():
                    continue
                src, arrow, dst = clause.partition("->")
                if not arrow or len(src.split()) != 1:
                    raise DomainError(f"bad transition clause {clause.strip()!r}", no)
                trans.setdefault((src.strip(), a), []).extend(dst.split())
        else:
            raise DomainError(f"unknown directive {head!r}", no)
    if states is None or init is None:
        raise DomainError("domain needs 'states:' and 'init:' lines")
    known = set(states)
    for (s, a), succ in trans.items():
        for t in [s, *succ]:
            if t not in known:
                raise DomainError(f"unknown state {t!r} in action {a!r}")
        order = {x: i for i, x in enumerate(states)}
        if succ != sorted(succ, key=order.__getitem__):
            log.warning("successors of (%s, %s) reordered to state order", s, a)
    declared = labels.pop("__atoms__", None)
    for s in labels:
        if s not in known:
            raise DomainError(f"label for unknown state {s!r}")
    atoms = declared
    if atoms is None:
        atoms = sorted(set().union(*map(set, labels.values()))) if labels else []
    macros = {}
    for no, name, body in defines:
        try:
            macros[name] = parse_ltl(body, atoms)
        except LTLSyntaxError as exc:
            raise DomainError(f"in abbreviation {name!r}: {exc}", no) from None
    return make_domain(states, init, trans, labels, actions, atoms, macros)


def format_domain(d: PlanningDomain) -> str:
    out = [f"states: {' '.join(d.states)}", f"init: {d.init}"]
    used = set().union(*d.labels.values()) if d.labels else set()
    if set(d.atoms) != used:
        out.append(f"atoms: {' '.join(d.atoms)}")
    for s in d.states:
        out.append(f"label {s}: {' '.join(sorted(d.label(s)))}".rstrip())
    for a in d.actions:
        clauses = [
            f"{s} -> {' '.join(d.transitions[(s, a)])}" for s in d.states if (s, a) in d.transitions
        ]
        if clauses:
            out.append(f"action {a}: {' ; '.join(clauses)}")
    for name, f in d.macros.items():
        out.append(f"define {name}: {to_string(f)}")
    return "\n".join(out) + "\n"


def parse_plan(text: str) -> FiniteMemoryPlan:
    memory = None
    initial = None
    output: dict = {}
    update: dict = {}
    for no, line in _lines(text):
        head, sep, rest = line.partition(":")
        head = head.strip()
        if not sep:
            raise DomainError(f"expected 'key: value', got {line!r}", no)
        if head == "memory":
            memory = tuple(rest.split())
        elif head == "initial":
            initial = rest.strip()
        elif head.startswith("at "):
            words = head.split()
            body = rest.split()
            if len(words) != 3 or len(body) != 4 or body[0] != "do" or body[2] != "goto":
                raise DomainError(f"expected 'at M S: do ACTION goto M2', got {line!r}", no)
            key = (words[1], words[2])
            output[key] = body[1]
            update[key] = body[3]
        else:
            raise DomainError(f"unknown directive {head!r}", no)
    if memory is None or initial is None:
        raise DomainError("plan needs 'memory:' and 'initial:' lines")
    for (m, _), m2 in update.items():
        if m not in memory or m2 not in memory:
            raise DomainError(f"undeclared memory state in {m} -> {m2}")
    return FiniteMemoryPlan(memory, initial, output, update)


def format_plan(p: FiniteMemoryPlan, d: PlanningDomain | None = None) -> str:
    out = [f"memory: {' '.join(p.memory)}", f"initial: {p.initial}"]
    mem_order = {m: i for i, m in enumerate(p.memory)}
    state_key = d.order if d is not None else (lambda s: s)
    for m, s in sorted(p.output, key=lambda k: (mem_order[k[0]], state_key(k[1]))):
        out.append(f"at {m} {s}: do {p.output[(m, s)]} goto {p.update[(m, s)]}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# generators

BLOCKS = ("A", "B", "C")


def _bw_name(towers: frozenset[tuple[str, ...]]) -> str:
    return "_".join("".join(t) for t in sorted(towers))


def _bw_configs() -> list[frozenset[tuple[str, ...]]]:
    table = frozenset((b,) for b in BLOCKS)
    out = [table]
    for x, y in permutations(BLOCKS, 2):
        (z,) = set(BLOCKS) - {x, y}
        out.append(frozenset([(x, y), (z,)]))
    for perm in permutations(BLOCKS):
        out.append(frozenset([perm]))
    return out


def blocks_world_atoms() -> tuple[str, ...]:
    pairs = [f"{x}_on_{y}" for x, y in permutations(BLOCKS, 2)]
    return tuple(pairs + [f"{x}_on_table" for x in BLOCKS])


def gen_blocks_world() -> PlanningDomain:
    """Three-block world with failing puts and a table that may be bumped.

    State names list towers bottom-up, e.g. ``AB_C`` is B on A with C on the
    table.  A failed ``put_X_on_Y`` drops X and the whole tower under Y onto
    the table; a bump during ``wait`` scatters every block.
    """
    configs = _bw_configs()
    names = [_bw_name(c) for c in configs]
    scattered = configs[0]
    trans: dict[tuple[str, str], list[str]] = {}
    labels: dict[str, set[str]] = {}
    actions = [f"put_{x}_on_{y}" for x, y in permutations(BLOCKS, 2)]
    actions += [f"put_{x}_on_table" for x in BLOCKS] + ["wait"]
    for c, name in zip(configs, names):
        lab = set()
        for t in c:
            lab.add(f"{t[0]}_on_table")
            for lower, upper in zip(t, t[1:]):
                lab.add(f"{upper}_on_{lower}")
        labels[name] = lab
        tops = {t[-1]: t for t in c}
        for x, y in permutations(BLOCKS, 2):
            if x in tops and y in tops:
                rest = [t for t in c if t not in (tops[x], tops[y])]
                src = tops[x][:-1]
                base = [src] if src else []
                ok = frozenset(rest + base + [tops[y] + (x,)])
                fail = frozenset(rest + base + [(b,) for b in tops[y]] + [(x,)])
                trans[(name, f"put_{x}_on_{y}")] = [_bw_name(ok), _bw_name(fail)]
        for x, t in tops.items():
            if len(t) > 1:
                rest = [u for u in c if u != t]
                trans[(name, f"put_{x}_on_table")] = [_bw_name(frozenset(rest + [t[:-1], (x,)]))]
        trans[(name, "wait")] = [name, _bw_name(scattered)]
    macros = {
        "tower": parse_ltl("C_on_B & B_on_A & A_on_table"),
        "scattered": parse_ltl("A_on_table & B_on_table & C_on_table"),
    }
    return make_domain(names, names[0], trans, labels, actions, blocks_world_atoms(), macros)


def gen_binary_tree() -> PlanningDomain:
    """States i, p, q each labelled by its own name; ``step`` leads to (p, q)."""
    states = ("i", "p", "q")
    trans = {(s, "step"): ("p", "q") for s in states}
    return make_domain(states, "i", trans, {s: {s} for s in states}, ["step"])


def gen_realizability(sigma: Iterable[str]) -> PlanningDomain:
    """Alternating program/environment domain over the letters ``sigma``.

    In ``<x>_p`` the program picks the next letter (action ``<y>``, leading to
    ``<y>_e``); in ``<x>_e`` only action ``e`` applies and the environment
    picks any ``<y>_p``.  Each state is labelled by its letter.
    """
    sigma = list(dict.fromkeys(sigma))
    if not sigma:
        raise ValueError("alphabet must be nonempty")
    if "e" in sigma:
        raise ValueError("letter 'e' clashes with the environment action")
    states = ["init"] + [f"{x}_p" for x in sigma] + [f"{x}_e" for x in sigma]
    trans: dict[tuple[str, str], list[str]] = {}
    for y in sigma:
        trans[("init", y)] = [f"{y}_e"]
        for x in sigma:
            trans[(f"{x}_p", y)] = [f"{y}_e"]
    for x in sigma:
        trans[(f"{x}_e", "e")] = [f"{y}_p" for y in sigma]
    labels = {f"{x}_{k}": {x} for x in sigma for k in "pe"}
    return make_domain(states, "init", trans, labels, sigma + ["e"], sigma)


def single_state_domain(label: Iterable[str] = (), actions: Iterable[str] = ("stay",)) -> PlanningDomain:
    actions = list(actions)
    return make_domain(["s"], "s", {("s", a): ["s"] for a in actions}, {"s": label}, actions)
