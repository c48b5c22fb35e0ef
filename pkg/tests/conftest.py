"""Shared hypothesis strategies for exact-arithmetic tests."""

from fractions import Fraction

from hypothesis import strategies as st

from bsat_arr.algebra import Polynomial

small_fractions = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=5),
)


def monomials(n: int, max_degree: int = 4):
    return st.lists(
        st.integers(min_value=0, max_value=max_degree), min_size=n, max_size=n
    ).map(tuple).filter(lambda m: sum(m) <= max_degree)


def polynomials(n: int, max_degree: int = 4, max_terms: int = 5):
    return st.dictionaries(
        monomials(n, max_degree), small_fractions, max_size=max_terms
    ).map(lambda terms: Polynomial(n, terms))


def homogeneous_polynomials(n: int, degree: int, max_terms: int = 4):
    return st.dictionaries(
        monomials(n, degree).filter(lambda m: sum(m) == degree),
        small_fractions,
        min_size=1,
        max_size=max_terms,
    ).map(lambda terms: Polynomial(n, terms))
