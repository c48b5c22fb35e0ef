"""Bernstein-Sato data for central generic arrangements, exactly.

A b-function is stored as its root multiset: the monic polynomial
prod_rho (s + rho)^m is the map {rho: m} with every rho a positive rational.
This module provides the closed-form generic-arrangement b-function (with
both candidate powers of (s+1)), the independent computation for isolated
homogeneous singularities through the Jacobian ideal's Hilbert function,
the top-degree bound derived from the roots, and the ideal-chain checks
that support the generic formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Polynomial,
    binomial,
    format_rational,
    ideal_slice,
    monomials_of_degree,
)
from .arrangement import (
    Arrangement,
    defining_poly,
    require_generic,
    squarefree_products,
    stratum_generators,
)
from .errors import PreconditionError, UsageError
from .groebner import (
    buchberger,
    contains_m_power,
    hilbert_dim,
    min_m_power,
)
from .reporting import FAIL, PASS, CheckLine


@dataclass(frozen=True)
class BFunction:
    """A monic product prod_rho (s + rho)^m as the multiset {rho: m}."""

    factors: tuple[tuple[Fraction, int], ...]

    @classmethod
    def from_factors(cls, factors: dict[Fraction, int]) -> BFunction:
        cleaned: dict[Fraction, int] = {}
        for rho, mult in factors.items():
            rho = Fraction(rho)
            if mult < 0:
                raise ValueError("multiplicities must be nonnegative")
            if rho <= 0:
                raise ValueError("roots -rho must be negative: rho > 0 required")
            if mult:
                cleaned[rho] = cleaned.get(rho, 0) + mult
        return cls(tuple(sorted(cleaned.items())))

    @classmethod
    def from_roots(cls, roots: list[Fraction]) -> BFunction:
        factors: dict[Fraction, int] = {}
        for rho in roots:
            factors[rho] = factors.get(rho, 0) + 1
        return cls.from_factors(factors)

    def as_dict(self) -> dict[Fraction, int]:
        return dict(self.factors)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.factors)

    def multiplicity(self, rho: Fraction) -> int:
        return dict(self.factors).get(Fraction(rho), 0)

    def factored_string(self) -> str:
        parts = []
        for rho, mult in self.factors:
            base = f"(s+{format_rational(rho)})"
            parts.append(base if mult == 1 else f"{base}^{mult}")
        return "".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return f"BFunction({self.factored_string()})"


def _require_grid(n: int, k: int) -> None:
    if n < 2:
        raise PreconditionError("need at least two variables (n >= 2)")
    if k < n:
        raise PreconditionError("need at least as many hyperplanes as variables")


def generic_shifts(n: int, k: int) -> list[Fraction]:
    """The shift list {(i+n)/k : 0 <= i <= 2k-n-2} of the generic formula."""
    _require_grid(n, k)
    return [Fraction(i + n, k) for i in range(0, 2 * k - n - 1)]


def upper_bound_generic(n: int, k: int) -> BFunction:
    """Divisor bound for the b-function of k generic hyperplanes in n-space.

    (s+1)^(n-1) * prod_{i=0}^{2k-n-2} (s + (i+n)/k); the product contributes
    one extra (s+1) at i = k-n, merged eagerly into the multiset.
    """
    return generic_bsat(n, k, n - 1)


def generic_bsat(n: int, k: int, r: int) -> BFunction:
    """The generic-arrangement b-function with (s+1)-power candidate r.

    The closed form leaves r as either n-1 or n-2; callers report both.
    """
    _require_grid(n, k)
    if r not in (n - 1, n - 2):
        raise UsageError(f"r must be n-1={n - 1} or n-2={n - 2}, got {r}")
    factors: dict[Fraction, int] = {Fraction(1): r} if r else {}
    for rho in generic_shifts(n, k):
        factors[rho] = factors.get(rho, 0) + 1
    return BFunction.from_factors(factors)


def isolated_homog_bsat(q: Polynomial) -> BFunction:
    """B-function of a homogeneous polynomial with an isolated singularity.

    Computed from the Jacobian ideal: each degree d with a nonzero graded
    piece of R/(partials) contributes a factor (s + (d+n)/k), times (s+1).
    The Jacobian ideal must be Artinian (within the degree cap n(k-1)+1);
    otherwise the singularity is non-isolated and this route does not apply.
    """
    if q.is_zero() or not q.is_homogeneous() or q.degree() < 1:
        raise PreconditionError("input must be homogeneous of positive degree")
    n = q.n
    k = q.degree()
    partials = [q.partial(i) for i in range(n)]
    if all(p.is_zero() for p in partials):
        raise PreconditionError("zero gradient: no isolated singularity")
    gb = buchberger(partials)
    cap = n * (k - 1) + 1
    top = min_m_power(gb, cap)
    if top is None:
        raise PreconditionError(
            "Jacobian ideal is not Artinian: the singularity is not isolated. "
            "For arrangements with n >= 3 use the generic closed form instead."
        )
    factors: dict[Fraction, int] = {Fraction(1): 1}
    for d in range(top):
        if hilbert_dim(gb, d, n) > 0:
            rho = Fraction(d + n, k)
            factors[rho] = factors.get(rho, 0) + 1
    return BFunction.from_factors(factors)


def u_q_bound(b: BFunction, n: int, k: int) -> int:
    """Largest integer i with -(i+n)/k a root of b.

    This bounds the degrees of the top de Rham cohomology generators.
    """
    candidates = []
    for rho, _ in b.factors:
        i = rho * k - n
        if i.denominator == 1:
            candidates.append(int(i))
    if not candidates or max(candidates) < 0:
        raise PreconditionError("b has no root of the form -(i+n)/k with i >= 0")
    return max(candidates)


def verify_inplane(arr: Arrangement) -> bool:
    """For n = 2: is m^(2k+1) contained in the ideal of the two partials of Q?"""
    if arr.n != 2:
        raise PreconditionError("the in-plane containment check requires n = 2")
    require_generic(arr)
    q = defining_poly(arr)
    gb = buchberger([q.partial(0), q.partial(1)])
    return contains_m_power(gb, 2 * arr.k + 1)


# -- the Sigma/Delta chain report ----------------------------------------


def _slice_is_full(gens: list[Polynomial], degree: int, n: int) -> bool:
    if degree == 0:
        return any(g.degree() == 0 and not g.is_zero() for g in gens)
    return ideal_slice(gens, degree, n).rank() == binomial(degree + n - 1, n - 1)


def chain_check(arr: Arrangement) -> list[CheckLine]:
    """Verify the squarefree-product ideal chain on one generic arrangement.

    Checks, with exact linear algebra on graded slices:
      * the r-fold product ideal equals the r-th power of the maximal ideal
        for every r <= k-n+1;
      * at the boundary r = k-n+1, the determinant enlargement equals the
        (k-n)-th power of the maximal ideal (one step lower: its minors have
        degree k-n and span that whole slice);
      * for k-n+1 <= r <= k, the (k-n)-th maximal-ideal power multiplies the
        (r-1)-fold products into the determinant enlargement at level r.
    """
    require_generic(arr)
    n, k = arr.n, arr.k
    lines: list[CheckLine] = []

    for r in range(1, k - n + 2):
        gens = squarefree_products(arr, r)
        ok = _slice_is_full(gens, r, n)
        lines.append(
            CheckLine(
                name="products-equal-m-power",
                statement=(
                    "the ideal of r-fold products of the forms equals the "
                    "r-th power of the maximal ideal, for r <= k-n+1"
                ),
                instance=f"n={n}, k={k}, r={r}",
                status=PASS if ok else FAIL,
            )
        )

    r_star = k - n + 1
    gens = stratum_generators(arr, r_star)
    bottom = k - n
    ok = all(g.degree() >= bottom for g in gens) and _slice_is_full(gens, bottom, n)
    lines.append(
        CheckLine(
            name="determinant-ideal-bottom",
            statement=(
                "at r = k-n+1 the determinant enlargement equals the "
                "(k-n)-th power of the maximal ideal"
            ),
            instance=f"n={n}, k={k}, r={r_star}",
            status=PASS if ok else FAIL,
        )
    )

    m_monomials = [Polynomial.monomial(m) for m in monomials_of_degree(n, k - n)]
    for r in range(k - n + 1, k + 1):
        delta_gens = stratum_generators(arr, r)
        if r - 1 == 0:
            lower = [Polynomial.one(n)]
        else:
            lower = squarefree_products(arr, r - 1)
        # Every product m*g is homogeneous of degree (k-n) + (r-1), so one
        # slice of the enlargement ideal serves all membership checks here.
        sl = ideal_slice(delta_gens, (k - n) + (r - 1), n)
        reducer = sl.reducer()
        ok = all(
            reducer.contains(sl.coordinates(m * g))
            for m in m_monomials
            for g in lower
        )
        lines.append(
            CheckLine(
                name="quotient-containment",
                statement=(
                    "the (k-n)-th maximal-ideal power multiplies the "
                    "(r-1)-fold products into the determinant enlargement "
                    "at level r, for k-n+1 <= r <= k"
                ),
                instance=f"n={n}, k={k}, r={r}",
                status=PASS if ok else FAIL,
            )
        )
    return lines
