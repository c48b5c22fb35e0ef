"""Exact polynomial arithmetic and rational linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsat_arr.algebra import (
    DegreeSlice,
    Polynomial,
    SparseReducer,
    binomial,
    format_rational,
    grevlex_key,
    ideal_slice,
    independent_subsets,
    intersect_row_spaces,
    kernel_basis,
    monomials_of_degree,
    monomials_up_to_degree,
    parse_rational,
    rref,
    solve_linear,
)

from conftest import polynomials, small_fractions


def F(*args) -> Fraction:
    return Fraction(*args)


class TestRationalIO:
    def test_parse_plain(self):
        assert parse_rational("5") == F(5)
        assert parse_rational("-3") == F(-3)
        assert parse_rational(7) == F(7)

    def test_parse_fraction(self):
        assert parse_rational("2/3") == F(2, 3)
        assert parse_rational("-7/5") == F(-7, 5)

    def test_rejects_floats_and_garbage(self):
        for bad in (1.5, True, "1.5", "2/0", "2/-3", "", "x", "1/03"):
            with pytest.raises(ValueError):
                parse_rational(bad)

    def test_format_round_trip(self):
        for text in ("5", "-3", "2/3", "-7/5", "0"):
            assert format_rational(parse_rational(text)) == text

    @given(small_fractions)
    def test_format_parse_inverse(self, q):
        assert parse_rational(format_rational(q)) == q


class TestMonomialOrder:
    def test_grevlex_degree_first(self):
        assert grevlex_key((2, 0, 0)) > grevlex_key((1, 0, 0))

    def test_grevlex_order_n3_degree2(self):
        # x^2 > xy > y^2 > xz > yz > z^2
        expected = [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
        assert monomials_of_degree(3, 2) == expected

    def test_monomials_of_degree_n2(self):
        assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]

    def test_monomial_counts(self):
        for n in (1, 2, 3, 4):
            for d in (0, 1, 2, 3, 5):
                assert len(monomials_of_degree(n, d)) == binomial(d + n - 1, n - 1)

    def test_monomials_up_to_degree(self):
        ms = monomials_up_to_degree(2, 2)
        assert ms == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


class TestPolynomialBasics:
    def test_repr_small_names(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        assert repr(x * x + x * y.scale(2)) in ("x^2 + 2*x*y", "2*x*y + x^2")

    def test_construction_drops_zeros(self):
        p = Polynomial(2, {(1, 0): F(0), (0, 1): F(2)})
        assert p.terms == {(0, 1): F(2)}

    def test_degree_and_homogeneous(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        q = x * x * y + y * y * y
        assert q.degree() == 3
        assert q.is_homogeneous()
        assert not (q + x).is_homogeneous()
        assert Polynomial.zero(2).degree() == -1

    def test_homogeneous_component(self):
        x = Polynomial.variable(2, 0)
        p = x * x + x + Polynomial.one(2)
        assert p.homogeneous_component(1) == x

    def test_power(self):
        x = Polynomial.variable(1, 0)
        assert (x + Polynomial.one(1)) ** 2 == x * x + x.scale(2) + Polynomial.one(1)

    def test_leading_grevlex(self):
        x = Polynomial.variable(3, 0)
        z = Polynomial.variable(3, 2)
        p = x * z + Polynomial.variable(3, 1) ** 2  # y^2 > xz in grevlex
        assert p.leading_monomial() == (0, 2, 0)

    def test_substitute_linear(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        p = x * x - y
        q = p.substitute_linear([x + y, x - y])
        assert q == (x + y) * (x + y) - (x - y)

    def test_divmod_single(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        quot, rem = (x * x * x).divmod_single(x * x - y)
        assert quot == x
        assert rem == x * y
        assert quot * (x * x - y) + rem == x * x * x

    def test_exact_div(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        p = (x + y) * (x - y)
        assert p.exact_div(x + y) == x - y
        with pytest.raises(ValueError):
            (x * x + y).exact_div(x + y)

    def test_partial(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        q = x * x * y
        assert q.partial(0) == x * y.scale(2) * Polynomial.one(2) + x * y - x * y  # 2xy
        assert q.partial(0) == (x * y).scale(2)
        assert q.partial(1) == x * x


class TestPolynomialAxioms:
    @settings(max_examples=60, deadline=None)
    @given(polynomials(2), polynomials(2), polynomials(2))
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=60, deadline=None)
    @given(polynomials(2), polynomials(2))
    def test_leibniz(self, a, b):
        for i in range(2):
            assert (a * b).partial(i) == a.partial(i) * b + a * b.partial(i)

    @settings(max_examples=40, deadline=None)
    @given(polynomials(3))
    def test_partials_commute(self, a):
        assert a.partial(0).partial(1) == a.partial(1).partial(0)

    @settings(max_examples=40, deadline=None)
    @given(polynomials(2))
    def test_homogeneous_components_sum(self, a):
        total = Polynomial.zero(2)
        for d in range(a.degree() + 1):
            total = total + a.homogeneous_component(d)
        assert total == a


class TestLinearAlgebra:
    def test_rref_rank(self):
        rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
        _, rank, pivots = rref(rows)
        assert rank == 2
        assert pivots == [0, 1]

    def test_kernel_basis(self):
        rows = [[F(1), F(1), F(0)], [F(0), F(1), F(1)]]
        ker = kernel_basis(rows, 3)
        assert len(ker) == 1
        v = ker[0]
        for row in rows:
            assert sum(a * b for a, b in zip(row, v)) == 0

    def test_kernel_of_empty(self):
        ker = kernel_basis([], 2)
        assert len(ker) == 2

    def test_solve_linear(self):
        rows = [[F(1), F(1)], [F(1), F(-1)]]
        sol = solve_linear(rows, [F(3), F(1)])
        assert sol == [F(2), F(1)]
        assert solve_linear([[F(1), F(1)], [F(2), F(2)]], [F(1), F(3)]) is None

    def test_intersect_row_spaces(self):
        a = [[F(1), F(0), F(0)], [F(0), F(1), F(0)]]
        b = [[F(0), F(1), F(0)], [F(0), F(0), F(1)]]
        meet = intersect_row_spaces(a, b, 3)
        assert len(meet) == 1
        assert meet[0] == [F(0), F(1), F(0)]

    def test_sparse_reducer_rank(self):
        red = SparseReducer()
        assert red.add_row({0: F(1), 1: F(2)})
        assert red.add_row({1: F(1)})
        assert not red.add_row({0: F(2), 1: F(1)})
        assert red.rank == 2
        assert red.contains({0: F(5), 1: F(-3)})

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(
            st.lists(small_fractions, min_size=3, max_size=3),
            min_size=1,
            max_size=4,
        )
    )
    def test_rank_nullity(self, rows):
        _, rank, _ = rref([list(r) for r in rows])
        ker = kernel_basis([list(r) for r in rows], 3)
        assert rank + len(ker) == 3

    def test_independent_subsets(self):
        vecs = [[F(1), F(0)], [F(0), F(1)], [F(1), F(1)], [F(2), F(2)]]
        pairs = independent_subsets(vecs, 2)
        assert (0, 1) in pairs and (2, 3) not in pairs


class TestDegreeSlice:
    def test_coordinates_round_trip(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        sl = DegreeSlice.from_polynomials([x * x + y * y.scale(3)], 2, 2)
        coords = sl.coordinates(x * x + y * y.scale(3))
        assert coords == {0: F(1), 2: F(3)}

    def test_ideal_slice_of_maximal_ideal_power(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        sl = ideal_slice([x, y], 3, 2)
        assert sl.rank() == 4  # all of degree 3

    def test_ideal_slice_principal(self):
        x = Polynomial.variable(2, 0)
        y = Polynomial.variable(2, 1)
        sl = ideal_slice([x * x], 3, 2)
        assert sl.rank() == 2  # x^3, x^2 y
