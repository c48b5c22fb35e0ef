"""Tests for the Milnor-fiber cohomology dimensions and rewriting."""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsat_arr.algebra import Polynomial, SparseReducer, binomial, monomials_of_degree
from bsat_arr.arrangement import AMonomial, Arrangement, generic_arrangement
from bsat_arr.errors import PreconditionError
from bsat_arr.milnor import (
    CohomologyProfile,
    EGeneratorIndex,
    basis_monomials,
    basis_mult_vectors,
    conjectured_u,
    e_generator,
    e_generator_indices,
    e_generators,
    graded_dim_mod_E,
    is_standard_product,
    jacobian_det_scalar,
    milnor_form,
    or_dimension,
    rewrite_to_basis,
    u_profile,
    verify_rewrite,
)

THREE = Arrangement.from_coeff_rows(2, [[1, 0], [0, 1], [1, 1]])

GRID = [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5)]

FROZEN_PROFILES = {
    (2, 3): [1, 2, 1],
    (2, 4): [1, 2, 3, 2, 1],
    (2, 5): [1, 2, 3, 4, 3, 2, 1],
    (3, 4): [1, 3, 1, 1],
    (3, 5): [1, 3, 6, 3, 3, 2],
}


def standard_vectors(n: int, k: int, r: int):
    """All degree-r multiplicity vectors with at least k-n+1 distinct forms."""

    def gen(pos, remaining, prefix):
        if pos == k:
            if remaining == 0:
                yield tuple(prefix)
            return
        for m in range(remaining + 1):
            yield from gen(pos + 1, remaining - m, prefix + [m])

    return [v for v in gen(0, r, []) if is_standard_product(n, k, v)]


class TestEGenerators:
    def test_degree_one_generators_vanish(self):
        gens = e_generators(THREE, 1)
        assert len(gens) == 3
        assert all(g.is_zero() for g in gens)

    def test_degree_two_rank(self):
        gens = e_generators(THREE, 2)
        assert len(gens) == 6
        assert graded_dim_mod_E(THREE, 2) == 1

    def test_degree_zero_slice_untouched(self):
        assert graded_dim_mod_E(THREE, 0) == 1

    def test_below_threshold_empty(self):
        arr = generic_arrangement(3, 5)
        assert e_generators(arr, 1) == []

    def test_generators_homogeneous_of_degree_r(self):
        for n, k in [(2, 4), (3, 4)]:
            arr = generic_arrangement(n, k)
            for r in range(k - n, 2 * k - n - 1):
                for g in e_generators(arr, r):
                    if not g.is_zero():
                        assert g.is_homogeneous() and g.degree() == r

    def test_nice_bound_above_threshold(self):
        # dim (R/E)_r <= C(k-2, n-1) whenever k does not divide r-k+n
        for n, k in GRID:
            arr = generic_arrangement(n, k)
            for r in range(k - n + 1, 2 * k - n - 1):
                if (r - k + n) % k == 0:
                    continue
                assert graded_dim_mod_E(arr, r) <= binomial(k - 2, n - 1)

    def test_relation_structure_expansion(self):
        # E(a, mu) for an A-monomial a expands over exactly k-n+1 A-monomials
        # a*Q_mu/H_i with every coefficient nonzero when k does not divide
        # deg(a).
        for n, k in [(2, 4), (3, 5)]:
            arr = generic_arrangement(n, k)
            mu = tuple(range(n - 1))
            s_set = tuple(i for i in range(k) if i not in mu)
            for a_mults in [
                tuple(2 if i == k - 1 else 0 for i in range(k)),
                tuple(1 if i in (0, k - 1) else 0 for i in range(k)),
            ]:
                a = AMonomial.build(arr, a_mults)
                if a.degree % k == 0:
                    continue
                lhs = e_generator(arr, a.value, mu)
                rhs = Polynomial.zero(n)
                nonzero_terms = 0
                for i in s_set:
                    c = jacobian_det_scalar(arr, mu, i) * (
                        a.degree - k * a_mults[i]
                    )
                    assert c != 0
                    nonzero_terms += 1
                    repl = list(a_mults)
                    for t in s_set:
                        repl[t] += 1
                    repl[i] -= 1
                    rhs = rhs + AMonomial.build(arr, tuple(repl)).value.scale(c)
                assert nonzero_terms == k - n + 1
                assert lhs == rhs

    def test_non_generic_rejected(self):
        bad = Arrangement.from_coeff_rows(2, [[1, 0], [0, 1], [1, 1], [1, -1]])
        # (2,4) with forms x, y, x+y, x-y is still generic; build a truly
        # degenerate one in three variables instead.
        bad3 = Arrangement.from_coeff_rows(
            3, [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
        )
        with pytest.raises(PreconditionError, match="not generic"):
            e_generators(bad3, 2)
        assert e_generators(bad, 2) is not None


class TestProfiles:
    def test_frozen_profiles(self):
        for (n, k), expected in FROZEN_PROFILES.items():
            prof = u_profile(generic_arrangement(n, k))
            assert list(prof.u) == expected
            assert prof.total == or_dimension(n, k)

    def test_tail_vanishes(self):
        for n, k in GRID:
            prof = u_profile(generic_arrangement(n, k))
            assert all(t == 0 for t in prof.tail)

    def test_window_all_positive(self):
        for n, k in GRID:
            prof = u_profile(generic_arrangement(n, k))
            assert all(u > 0 for u in prof.u)

    def test_proved_window_matches_reference(self):
        # On k-n+1 <= r <= k-1 the reference formula is a theorem.
        for n, k in GRID:
            prof = u_profile(generic_arrangement(n, k))
            for r in range(k - n + 1, k):
                assert prof.u[r] == conjectured_u(n, k, r)

    def test_full_agreement_on_small_grid_observed(self):
        # Beyond the proved window agreement is an observation, recorded here
        # as a frozen fact about these instances (not a general assertion).
        for n, k in GRID:
            prof = u_profile(generic_arrangement(n, k))
            assert list(prof.u) == [
                conjectured_u(n, k, r) for r in range(len(prof.u))
            ]

    def test_two_lines_edge(self):
        prof = u_profile(generic_arrangement(2, 2))
        assert list(prof.u) == [1]
        assert prof.total == or_dimension(2, 2) == 1

    def test_r_max_too_small_rejected(self):
        with pytest.raises(PreconditionError):
            u_profile(THREE, r_max=1)

    def test_non_generic_named_witness(self):
        bad = Arrangement.from_coeff_rows(
            3, [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
        )
        with pytest.raises(PreconditionError, match=r"\{1, 2, 3\}"):
            u_profile(bad)

    def test_degree_bound_with_strictness(self):
        for n, k in GRID:
            prof = u_profile(generic_arrangement(n, k))
            bound = binomial(k - 2, n - 1)
            for r, u in enumerate(prof.u):
                if (r - k + n) % k != 0:
                    assert u <= bound
                    if r >= k:
                        assert u < bound


class TestOrDimension:
    def test_values(self):
        assert or_dimension(2, 3) == 4
        assert or_dimension(3, 4) == 6
        assert or_dimension(3, 5) == 18


class TestConjecturedU:
    def test_three_four_cases(self):
        assert conjectured_u(3, 4, 0) == 1
        assert conjectured_u(3, 4, 1) == 3
        assert conjectured_u(3, 4, 2) == 1
        assert conjectured_u(3, 4, 3) == 1
        assert conjectured_u(3, 4, 4) == 0
        assert conjectured_u(3, 4, -1) == 0


class TestBasisMonomials:
    def test_count_matches_binomial(self):
        for n, k in GRID:
            arr = generic_arrangement(n, k)
            r = k - n + 2
            basis = basis_monomials(arr, r)
            assert len(basis) == binomial(k - 2, n - 1)

    def test_shape(self):
        arr = generic_arrangement(2, 4)
        for b in basis_monomials(arr, 5):
            m = b.multiplicities
            assert m[2] == 1 and m[3] == 3
            assert all(v <= 1 for v in m[:2])
            assert sum(m[:2]) == 1

    def test_square_only_in_last(self):
        arr = generic_arrangement(3, 5)
        for b in basis_monomials(arr, 4):
            assert all(v <= 1 for v in b.multiplicities[:-1])

    def test_k_equals_n_empty(self):
        arr = generic_arrangement(2, 2)
        assert basis_monomials(arr, 1) == []

    def test_low_degree_rejected(self):
        with pytest.raises(PreconditionError):
            basis_mult_vectors(2, 4, 2)


class TestRewrite:
    def test_hand_example_two_forms(self):
        # xy rewrites onto the single basis monomial y(x+y) with coefficient -1
        res = rewrite_to_basis(THREE, (1, 1, 0))
        assert res.basis_coefficients == {(0, 1, 1): Fraction(-1)}
        assert len(res.certificate) == 1
        assert verify_rewrite(THREE, res)

    def test_identity_case(self):
        res = rewrite_to_basis(THREE, (0, 1, 1))
        assert res.basis_coefficients == {(0, 1, 1): Fraction(1)}
        assert res.certificate == []
        assert verify_rewrite(THREE, res)

    def test_dimension_drop_witness(self):
        # Rewriting Q*H_4 in (2,4) must hit the distinguished basis monomial
        # H_1 H_3 H_4^3 with a nonzero coefficient.
        arr = generic_arrangement(2, 4)
        res = rewrite_to_basis(arr, (1, 1, 1, 2))
        assert res.basis_coefficients.get((1, 0, 1, 3), Fraction(0)) != 0
        assert verify_rewrite(arr, res)

    def test_every_standard_product_small_grid(self):
        for n, k in [(2, 3), (2, 4), (3, 4)]:
            arr = generic_arrangement(n, k)
            for r in range(k - n + 1, 2 * k - n - 1):
                if (r - k + n) % k == 0:
                    continue
                for vec in standard_vectors(n, k, r):
                    res = rewrite_to_basis(arr, vec)
                    assert verify_rewrite(arr, res)
                    assert len(res.basis_coefficients) <= binomial(k - 2, n - 1)

    def test_certificate_independent_span_check(self):
        # P - sum(c_b b) must lie in the span of the degree-r generators,
        # checked against the raw generator family (not the certificate).
        arr = generic_arrangement(2, 4)
        vec = (1, 1, 1, 2)
        r = sum(vec)
        res = rewrite_to_basis(arr, vec)
        monos = monomials_of_degree(2, r)
        index = {m: i for i, m in enumerate(monos)}
        red = SparseReducer()
        for g in e_generators(arr, r):
            if not g.is_zero():
                red.add_row({index[m]: c for m, c in g.terms.items()})
        diff = AMonomial.build(arr, vec).value
        for mults, c in res.basis_coefficients.items():
            diff = diff - AMonomial.build(arr, mults).value.scale(c)
        assert red.contains({index[m]: c for m, c in diff.terms.items()})

    def test_certificate_indices_well_formed(self):
        arr = generic_arrangement(3, 5)
        res = rewrite_to_basis(arr, (1, 1, 0, 1, 1))
        assert verify_rewrite(arr, res)
        for coeff, idx in res.certificate:
            assert isinstance(idx, EGeneratorIndex)
            assert coeff != 0
            assert len(idx.mu) == arr.n - 1
            assert sum(idx.a) == sum((1, 1, 0, 1, 1)) - arr.k + arr.n

    def test_k_equals_n_collapses_to_zero(self):
        arr = generic_arrangement(2, 2)
        res = rewrite_to_basis(arr, (2, 1))
        assert res.basis_coefficients == {}
        assert verify_rewrite(arr, res)

    def test_unsupported_degree_rejected(self):
        with pytest.raises(PreconditionError, match="unsupported degree"):
            rewrite_to_basis(THREE, (1, 1, 2))  # r=4, r-k+n=3 divisible by 3

    def test_non_standard_rejected(self):
        with pytest.raises(PreconditionError, match="standard"):
            rewrite_to_basis(THREE, (2, 0, 0))

    def test_non_generic_rejected(self):
        bad = Arrangement.from_coeff_rows(
            3, [[1, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]
        )
        with pytest.raises(PreconditionError, match="not generic"):
            rewrite_to_basis(bad, (1, 1, 1, 0))

    @settings(max_examples=20, deadline=None)
    @given(st.data())
    def test_randomized_rewrites_verify(self, data):
        n, k = data.draw(st.sampled_from([(2, 4), (2, 5), (3, 5)]))
        arr = generic_arrangement(n, k)
        r = data.draw(st.integers(min_value=k - n + 1, max_value=2 * k - n - 2))
        if (r - k + n) % k == 0:
            r += 1
        vectors = standard_vectors(n, k, r)
        vec = data.draw(st.sampled_from(vectors))
        res = rewrite_to_basis(arr, vec)
        assert verify_rewrite(arr, res)


class TestMilnorForm:
    def test_plane_constant(self):
        out = milnor_form(Polynomial.one(2), 3)
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        assert out == [x.scale(Fraction(1, 3)), -y.scale(Fraction(1, 3))]

    def test_space_linear(self):
        x, y, z = (Polynomial.variable(3, i) for i in range(3))
        out = milnor_form(x, 5)
        assert out == [
            (x * x).scale(Fraction(1, 5)),
            -(x * y).scale(Fraction(1, 5)),
            (x * z).scale(Fraction(1, 5)),
        ]

    def test_linearity(self):
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        g1, g2 = x * y, y * y
        left = milnor_form(g1 + g2, 4)
        right = [
            a + b for a, b in zip(milnor_form(g1, 4), milnor_form(g2, 4))
        ]
        assert left == right

    def test_inhomogeneous_rejected(self):
        x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
        with pytest.raises(PreconditionError):
            milnor_form(x + x * y, 3)
