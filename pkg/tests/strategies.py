"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from nafourier.exactnum import CycNum, root_of_unity

conductors = st.sampled_from([1, 2, 3, 4, 5, 6, 8, 9, 12, 15])
small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cycnums(draw, conductor=None):
    n = draw(conductors) if conductor is None else conductor
    terms = draw(st.lists(st.tuples(st.integers(0, 2 * n), small_fracs), max_size=4))
    total = CycNum(0)
    for k, c in terms:
        total = total + root_of_unity(n, k) * c
    return total


nonzero_cycnums = cycnums().filter(lambda x: not x.is_zero())
fractions_ = small_fracs.map(Fraction)
