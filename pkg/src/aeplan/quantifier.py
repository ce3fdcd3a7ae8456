"""Path quantifiers over {A, E}, their canonical forms and implication order.

A quantifier is the word ``prefix . period^omega``; an empty period means a
finite quantifier.  Every quantifier is equivalent to one of eight canonical
values, and those eight are ordered by implication::

    A -> AEA -> (AE)^w -> AE
          |        |       |
          v        v       v
          EA -> (EA)^w -> EAE -> E
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from itertools import groupby


class QuantifierSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class PathQuantifier:
    prefix: str
    period: str = ""

    def __post_init__(self) -> None:
        if set(self.prefix + self.period) - {"A", "E"}:
            raise QuantifierSyntaxError(f"letters must be A or E: {self.prefix!r}, {self.period!r}")
        if not self.prefix + self.period:
            raise QuantifierSyntaxError("empty path quantifier")

    @property
    def is_finite(self) -> bool:
        return not self.period

    def __str__(self) -> str:
        return self.prefix + (f"({self.period})^w" if self.period else "")


class Canonical(enum.Enum):
    A = "A"
    E = "E"
    AE = "AE"
    EA = "EA"
    AEA = "AEA"
    EAE = "EAE"
    AE_OMEGA = "(AE)^w"
    EA_OMEGA = "(EA)^w"

    def __str__(self) -> str:
        return self.value

    @property
    def is_finite(self) -> bool:
        return self not in (Canonical.AE_OMEGA, Canonical.EA_OMEGA)

    @property
    def word(self) -> PathQuantifier:
        if self is Canonical.AE_OMEGA:
            return PathQuantifier("", "AE")
        if self is Canonical.EA_OMEGA:
            return PathQuantifier("", "EA")
        return PathQuantifier(self.value)

    @classmethod
    def from_text(cls, text: str) -> "Canonical":
        return normalize(parse_quantifier(text))


_GRAMMAR = re.compile(r"^([AE]*)(?:\(([AE]+)\)\^(?:w|ω|omega))?$")


def parse_quantifier(text: str) -> PathQuantifier:
    """Parse ``[AE]* ( '(' [AE]+ ')^w' )?``, e.g. ``AEA``, ``E(A)^w``."""
    m = _GRAMMAR.match(text.strip())
    if m is None:
        raise QuantifierSyntaxError(f"malformed path quantifier {text!r}")
    return PathQuantifier(m.group(1), m.group(2) or "")


def collapse(word: str) -> str:
    """Merge adjacent equal letters: ``AAEEA -> AEA``."""
    return "".join(k for k, _ in groupby(word))


def normalize(q: PathQuantifier | Canonical | str) -> Canonical:
    """The canonical quantifier equivalent to ``q``."""
    if isinstance(q, Canonical):
        return q
    if isinstance(q, str):
        q = parse_quantifier(q)
    prefix, period = collapse(q.prefix), collapse(q.period)
    if period:
        if set(period) == {"A", "E"}:
            first = (prefix or period)[0]
            return Canonical.AE_OMEGA if first == "A" else Canonical.EA_OMEGA
        # a constant period behaves like one more letter of the same kind
        prefix = collapse(prefix + period[0])
    word = prefix
    # alternating word: ABAB... of length n is equivalent to its first
    # min(n, 2) letters when n is even and min(n, 3) letters when odd
    if len(word) > 3:
        word = word[:2] if len(word) % 2 == 0 else word[:3]
    return Canonical(word)


_EDGES = {
    Canonical.A: [Canonical.AEA],
    Canonical.AEA: [Canonical.AE_OMEGA, Canonical.EA],
    Canonical.AE_OMEGA: [Canonical.AE, Canonical.EA_OMEGA],
    Canonical.AE: [Canonical.EAE],
    Canonical.EA: [Canonical.EA_OMEGA],
    Canonical.EA_OMEGA: [Canonical.EAE],
    Canonical.EAE: [Canonical.E],
    Canonical.E: [],
}


def diagram_edges() -> list[tuple[Canonical, Canonical]]:
    """Direct (covering) edges of the implication diagram."""
    return [(a, b) for a, bs in _EDGES.items() for b in bs]


def _closure() -> dict[Canonical, frozenset[Canonical]]:
    out = {}
    for start in Canonical:
        seen = {start}
        todo = [start]
        while todo:
            for b in _EDGES[todo.pop()]:
                if b not in seen:
                    seen.add(b)
                    todo.append(b)
        out[start] = frozenset(seen)
    return out


_REACH = _closure()


def implies(a: Canonical | str, b: Canonical | str) -> bool:
    """True iff ``a.phi`` entails ``b.phi`` for every tree and formula."""
    return normalize(b) in _REACH[normalize(a)]
