"""LTL formulas: syntax tree, parser, printer and evaluation over lasso words.

Grammar (ASCII, highest precedence first)::

    unary    !  X  F  G
    binary   U          (right associative)
             &
             |
             ->         (right associative)

Atoms match ``[a-zA-Z_][a-zA-Z0-9_]*``; ``true`` and ``false`` are
constants.  An identifier made only of the letters ``X``, ``F`` and ``G``
that is not a declared atom is read as a chain of unary operators, so
``GF p`` parses like ``G F p``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

UNARY = ("not", "next", "eventually", "always")
BINARY = ("and", "or", "implies", "until", "release")

_SYMBOL = {
    "not": "!",
    "next": "X",
    "eventually": "F",
    "always": "G",
    "and": "&",
    "or": "|",
    "implies": "->",
    "until": "U",
    "release": "R",
}


class LTLSyntaxError(ValueError):
    """Raised on malformed formula text; ``position`` is a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class Formula:
    """Immutable LTL syntax tree node.

    ``op`` is one of ``atom``, ``true``, ``false`` or a name from
    :data:`UNARY` / :data:`BINARY`.  ``release`` never comes out of the
    parser; it only appears in negation normal form.
    """

    op: str
    args: tuple["Formula", ...] = ()
    name: str | None = None

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"Formula({to_string(self)!r})"

    def __invert__(self) -> "Formula":
        return Not(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    @property
    def is_temporal(self) -> bool:
        return self.op in ("next", "until", "release", "eventually", "always")


TRUE = Formula("true")
FALSE = Formula("false")


def Atom(name: str) -> Formula:
    return Formula("atom", (), name)


def Not(f: Formula) -> Formula:
    return Formula("not", (f,))


def And(f: Formula, g: Formula) -> Formula:
    return Formula("and", (f, g))


def Or(f: Formula, g: Formula) -> Formula:
    return Formula("or", (f, g))


def Implies(f: Formula, g: Formula) -> Formula:
    return Formula("implies", (f, g))


def Next(f: Formula) -> Formula:
    return Formula("next", (f,))


def Until(f: Formula, g: Formula) -> Formula:
    return Formula("until", (f, g))


def Release(f: Formula, g: Formula) -> Formula:
    return Formula("release", (f, g))


def Eventually(f: Formula) -> Formula:
    return Formula("eventually", (f,))


def Always(f: Formula) -> Formula:
    return Formula("always", (f,))


def conjunction(fs: Iterable[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


# ---------------------------------------------------------------------------
# printing


def to_string(f: Formula, _top: bool = True) -> str:
    op = f.op
    if op == "atom":
        return f.name  # type: ignore[return-value]
    if op in ("true", "false"):
        return op
    if op in UNARY:
        inner = to_string(f.args[0], _top=False)
        return f"!{inner}" if op == "not" else f"{_SYMBOL[op]} {inner}"
    left = to_string(f.args[0], _top=False)
    right = to_string(f.args[1], _top=False)
    text = f"{left} {_SYMBOL[op]} {right}"
    return text if _top else f"({text})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>->|[!&|()]))")


def _tokenize(text: str, atoms: frozenset[str] | None) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise LTLSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("ident") if m.group("ident") else m.start("sym")
        if m.group("ident"):
            word = m.group("ident")
            if word in ("true", "false"):
                tokens.append(("const", word, start))
            elif word == "U":
                tokens.append(("U", word, start))
            elif (atoms is None or word not in atoms) and set(word) <= {"X", "F", "G"}:
                for k, ch in enumerate(word):
                    tokens.append(("unary", ch, start + k))
            else:
                tokens.append(("atom", word, start))
        else:
            sym = m.group("sym")
            kind = {"!": "unary", "(": "(", ")": ")"}.get(sym, sym)
            tokens.append((kind, sym, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, atoms: frozenset[str] | None):
        self.tokens = _tokenize(text, atoms)
        self.i = 0
        self.atoms = atoms

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        kind, value, pos = self.peek()
        if kind != "eof":
            raise LTLSyntaxError(f"unexpected token {value!r}", pos)
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[0] == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.until())
        return left

    def until(self) -> Formula:
        left = self.unary()
        if self.peek()[0] == "U":
            self.take()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "unary":
            op = {"!": "not", "X": "next", "F": "eventually", "G": "always"}[value]
            return Formula(op, (self.unary(),))
        if kind == "const":
            return TRUE if value == "true" else FALSE
        if kind == "atom":
            if self.atoms is not None and value not in self.atoms:
                raise LTLSyntaxError(f"undeclared atom {value!r}", pos)
            return Atom(value)
        if kind == "(":
            f = self.implication()
            kind2, value2, pos2 = self.take()
            if kind2 != ")":
                raise LTLSyntaxError("expected ')'", pos2)
            return f
        if kind == "eof":
            raise LTLSyntaxError("unexpected end of input", pos)
        raise LTLSyntaxError(f"unexpected token {value!r}", pos)


def parse_ltl(text: str, atoms: Iterable[str] | None = None) -> Formula:
    """Parse ``text``; when ``atoms`` is given, other identifiers are errors."""
    declared = frozenset(atoms) if atoms is not None else None
    return _Parser(text, declared).parse()


# ---------------------------------------------------------------------------
# structure


def atoms_of(f: Formula) -> frozenset[str]:
    if f.op == "atom":
        return frozenset([f.name])  # type: ignore[list-item]
    out: frozenset[str] = frozenset()
    for a in f.args:
        out |= atoms_of(a)
    return out


def substitute(f: Formula, table: Mapping[str, Formula]) -> Formula:
    """Replace atoms named in ``table`` by their formulas."""
    if f.op == "atom":
        return table.get(f.name, f)  # type: ignore[arg-type]
    if not f.args:
        return f
    return Formula(f.op, tuple(substitute(a, table) for a in f.args), f.name)


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for a in g.args:
            visit(a)
        seen[g] = None

    visit(f)
    return list(seen)


def negate(f: Formula) -> Formula:
    """Negation that cancels a leading ``!`` instead of stacking it."""
    return f.args[0] if f.op == "not" else Not(f)


def closure(f: Formula) -> frozenset[Formula]:
    """Subformulas of ``f`` together with their negations."""
    out: set[Formula] = set()
    for g in subformulas(f):
        out.add(g)
        out.add(negate(g))
    return frozenset(out)


def temporal_depth(f: Formula) -> int:
    """Number of temporal operators in ``f``."""
    return sum(1 for g in _walk(f) if g.is_temporal)


def _walk(f: Formula):
    yield f
    for a in f.args:
        yield from _walk(a)


def nnf(f: Formula) -> Formula:
    """Negation normal form over true/false/literals/&/|/X/U/R.

    Constants are folded, so the result of e.g. ``F w -> true`` is ``true``.
    """
    return _nnf(f, False)


def _mk_and(a: Formula, b: Formula) -> Formula:
    if a == FALSE or b == FALSE:
        return FALSE
    if a == TRUE:
        return b
    if b == TRUE or a == b:
        return a
    return And(a, b)


def _mk_or(a: Formula, b: Formula) -> Formula:
    if a == TRUE or b == TRUE:
        return TRUE
    if a == FALSE:
        return b
    if b == FALSE or a == b:
        return a
    return Or(a, b)


def _nnf(f: Formula, neg: bool) -> Formula:
    op = f.op
    if op == "true":
        return FALSE if neg else TRUE
    if op == "false":
        return TRUE if neg else FALSE
    if op == "atom":
        return Not(f) if neg else f
    if op == "not":
        return _nnf(f.args[0], not neg)
    if op == "and":
        a, b = _nnf(f.args[0], neg), _nnf(f.args[1], neg)
        return _mk_or(a, b) if neg else _mk_and(a, b)
    if op == "or":
        a, b = _nnf(f.args[0], neg), _nnf(f.args[1], neg)
        return _mk_and(a, b) if neg else _mk_or(a, b)
    if op == "implies":
        a, b = _nnf(f.args[0], not neg), _nnf(f.args[1], neg)
        return _mk_and(a, b) if neg else _mk_or(a, b)
    if op == "next":
        a = _nnf(f.args[0], neg)
        return a if a in (TRUE, FALSE) else Next(a)
    if op == "eventually":
        return _nnf(Until(TRUE, f.args[0]), neg)
    if op == "always":
        return _nnf(Release(FALSE, f.args[0]), neg)
    if op in ("until", "release"):
        a, b = _nnf(f.args[0], neg), _nnf(f.args[1], neg)
        dual = (op == "until") == neg  # until under negation becomes release
        if b in (TRUE, FALSE):
            return b
        return Release(a, b) if dual else Until(a, b)
    raise ValueError(f"unknown operator {op!r}")


# ---------------------------------------------------------------------------
# lasso words


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``stem . loop^omega`` over sets of atoms."""

    stem: tuple[frozenset[str], ...]
    loop: tuple[frozenset[str], ...]

    def __init__(self, stem: Sequence[Iterable[str]], loop: Sequence[Iterable[str]]):
        loop_t = tuple(frozenset(x) for x in loop)
        if not loop_t:
            raise ValueError("lasso loop must be nonempty")
        object.__setattr__(self, "stem", tuple(frozenset(x) for x in stem))
        object.__setattr__(self, "loop", loop_t)

    def __len__(self) -> int:
        return len(self.stem) + len(self.loop)

    def letter(self, i: int) -> frozenset[str]:
        n = len(self.stem)
        if i < n:
            return self.stem[i]
        return self.loop[(i - n) % len(self.loop)]

    def successor(self, i: int) -> int:
        return i + 1 if i + 1 < len(self) else len(self.stem)


def truth_table(f: Formula, w: LassoWord, cache: dict | None = None) -> tuple[bool, ...]:
    """Truth value of ``f`` at every position ``0 .. |stem|+|loop|-1`` of ``w``."""
    if cache is None:
        cache = {}
    hit = cache.get(f)
    if hit is not None:
        return hit
    n = len(w)
    op = f.op
    if op == "true":
        out = (True,) * n
    elif op == "false":
        out = (False,) * n
    elif op == "atom":
        out = tuple(f.name in w.letter(i) for i in range(n))
    elif op == "not":
        out = tuple(not v for v in truth_table(f.args[0], w, cache))
    elif op in ("and", "or", "implies"):
        a = truth_table(f.args[0], w, cache)
        b = truth_table(f.args[1], w, cache)
        if op == "and":
            out = tuple(x and y for x, y in zip(a, b))
        elif op == "or":
            out = tuple(x or y for x, y in zip(a, b))
        else:
            out = tuple((not x) or y for x, y in zip(a, b))
    elif op == "next":
        a = truth_table(f.args[0], w, cache)
        out = tuple(a[w.successor(i)] for i in range(n))
    elif op in ("until", "eventually"):
        if op == "until":
            hold = truth_table(f.args[0], w, cache)
            goal = truth_table(f.args[1], w, cache)
        else:
            hold = (True,) * n
            goal = truth_table(f.args[0], w, cache)
        out = _least_fixpoint(hold, goal, w)
    elif op in ("release", "always"):
        # a R b == !(!a U !b);  G b == false R b
        if op == "release":
            a = truth_table(f.args[0], w, cache)
            b = truth_table(f.args[1], w, cache)
        else:
            a = (False,) * n
            b = truth_table(f.args[0], w, cache)
        dual = _least_fixpoint(tuple(not x for x in a), tuple(not x for x in b), w)
        out = tuple(not x for x in dual)
    else:
        raise ValueError(f"unknown operator {op!r}")
    cache[f] = out
    return out


def _least_fixpoint(hold: Sequence[bool], goal: Sequence[bool], w: LassoWord) -> tuple[bool, ...]:
    # backward sweeps; the second sweep settles the wrap-around of the loop
    n = len(w)
    val = [False] * n
    changed = True
    while changed:
        changed = False
        for i in range(n - 1, -1, -1):
            v = goal[i] or (hold[i] and val[w.successor(i)])
            if v != val[i]:
                val[i] = v
                changed = True
    return tuple(val)


def eval_lasso(f: Formula, w: LassoWord, i: int = 0) -> bool:
    """Decide ``w, i |= f``.  Positions past the end wrap into the loop."""
    n = len(w)
    if i >= n:
        i = len(w.stem) + (i - len(w.stem)) % len(w.loop)
    return truth_table(f, w)[i]
