"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from aeplan.ltl import Formula, LassoWord, TRUE, FALSE
from aeplan.quantifier import PathQuantifier

ATOMS = ("p", "q")

letters = st.frozensets(st.sampled_from(ATOMS))


def formulas(atoms=ATOMS, max_leaves: int = 6):
    leaves = st.one_of(
        st.sampled_from(atoms).map(lambda a: Formula("atom", (), a)),
        st.sampled_from([TRUE, FALSE]),
    )

    def extend(children):
        unary = st.tuples(st.sampled_from(["not", "next", "eventually", "always"]), children)
        binary = st.tuples(
            st.sampled_from(["and", "or", "implies", "until"]), children, children
        )
        return st.one_of(
            unary.map(lambda t: Formula(t[0], (t[1],))),
            binary.map(lambda t: Formula(t[0], (t[1], t[2]))),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


lassos = st.builds(
    LassoWord,
    st.lists(letters, max_size=3),
    st.lists(letters, min_size=1, max_size=3),
)

words = st.text(alphabet="AE", max_size=12)

quantifiers = (
    st.tuples(words, st.text(alphabet="AE", max_size=6))
    .filter(lambda t: t[0] or t[1])
    .map(lambda t: PathQuantifier(*t))
)
