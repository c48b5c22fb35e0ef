"""Milnor-fiber top cohomology of a generic central arrangement, exactly.

The relation space E is spanned, degree by degree, by the polynomials

    E(a, mu) = deg(a) * a * J_mu(Q_mu) - k * Q_mu * J_mu(a)

for monomials a and (n-1)-subsets mu of hyperplane indices, where Q_mu is
the product of the out-of-mu forms and J_mu pairs the mu-gradients with one
more gradient as a determinant.  The graded pieces u_r of
R / (E + (Q - 1) R) are computed by filtered exact linear algebra.

Standard products (A-monomials divisible by some Q_mu) are rewritten onto
the distinguished basis monomials with an explicit, re-verifiable
certificate of the E-generator combination that was consumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebra import (
    Mono,
    Polynomial,
    SparseReducer,
    binomial,
    monomials_of_degree,
    solve_linear,
)
from .arrangement import (
    AMonomial,
    Arrangement,
    defining_poly,
    jacobian_det,
    product_of,
    require_generic,
)
from .errors import PreconditionError, UsageError


@dataclass(frozen=True)
class EGeneratorIndex:
    """Names one relation generator: the monomial a and the subset mu."""

    a: Mono
    mu: tuple[int, ...]


@dataclass(frozen=True)
class CohomologyProfile:
    """Graded dimensions u_r for r in the window 0 .. 2k-n-2.

    ``tail`` holds the dimensions computed above the window (they must all
    vanish for a generic arrangement and are kept so callers can check).
    """

    n: int
    k: int
    u: tuple[int, ...]
    total: int
    tail: tuple[int, ...]

    @property
    def window_top(self) -> int:
        return 2 * self.k - self.n - 2


def _complement(k: int, mu: tuple[int, ...]) -> tuple[int, ...]:
    mu_set = set(mu)
    return tuple(i for i in range(k) if i not in mu_set)


def e_generator(arr: Arrangement, a: Mono | Polynomial, mu: tuple[int, ...]) -> Polynomial:
    """deg(a) * a * J_mu(Q_mu) - k * Q_mu * J_mu(a) for homogeneous a."""
    n, k = arr.n, arr.k
    mu = tuple(sorted(mu))
    a_poly = Polynomial.monomial(a) if isinstance(a, tuple) else a
    if a_poly.is_zero():
        return Polynomial.zero(n)
    if not a_poly.is_homogeneous():
        raise PreconditionError("a must be homogeneous")
    q_mu = product_of(arr, _complement(k, mu))
    deg = a_poly.degree()
    first = (a_poly * jacobian_det(arr, mu, q_mu)).scale(Fraction(deg))
    second = (q_mu * jacobian_det(arr, mu, a_poly)).scale(Fraction(k))
    return first - second


def e_generator_indices(arr: Arrangement, r: int) -> list[EGeneratorIndex]:
    n, k = arr.n, arr.k
    if r < k - n:
        return []
    return [
        EGeneratorIndex(a=a, mu=mu)
        for a in monomials_of_degree(n, r - k + n)
        for mu in combinations(range(k), n - 1)
    ]


def e_generators(arr: Arrangement, r: int) -> list[Polynomial]:
    """Every degree-r relation generator (possibly zero), one per index."""
    require_generic(arr)
    return [e_generator(arr, idx.a, idx.mu) for idx in e_generator_indices(arr, r)]


def graded_dim_mod_E(arr: Arrangement, r: int) -> int:
    """dim (R_n)_r minus the rank of the degree-r relation generators."""
    require_generic(arr)
    n = arr.n
    monos = monomials_of_degree(n, r)
    index = {m: i for i, m in enumerate(monos)}
    red = SparseReducer()
    for gen in e_generators(arr, r):
        if not gen.is_zero():
            red.add_row({index[m]: c for m, c in gen.terms.items()})
    return len(monos) - red.rank


def or_dimension(n: int, k: int) -> int:
    """C(k-2, n-2) + k * C(k-2, n-1): the expected total of the u_r."""
    return binomial(k - 2, n - 2) + k * binomial(k - 2, n - 1)


def conjectured_u(n: int, k: int, r: int) -> int:
    """The three-branch reference value for u_r (0 outside the window)."""
    if r < 0 or r > 2 * k - n - 2:
        return 0
    if r <= k - n:
        return binomial(r + n - 1, n - 1)
    if r <= k - 1:
        return binomial(k - 2, n - 1)
    return binomial(k - 2, n - 1) - binomial(r - k + n - 1, n - 1)


def filtered_dims(arr: Arrangement, r_max: int) -> list[int]:
    """F_r for r = 0..r_max: surviving dimensions of the degree filtration.

    F_r is the image of the polynomials of degree <= r modulo the span of
    the relation generators of degree <= r together with (Q-1)h for
    deg h <= r - k.  Columns are indexed by monomials in ascending degree.
    """
    require_generic(arr)
    n, k = arr.n, arr.k
    index: dict[Mono, int] = {}
    for d in range(r_max + 1):
        for m in monomials_of_degree(n, d):
            index[m] = len(index)
    q_minus_one = None
    if r_max >= k:
        q_minus_one = defining_poly(arr) - Polynomial.one(n)
    red = SparseReducer()
    dims: list[int] = []
    monos_up_to = 0
    for r in range(r_max + 1):
        monos_up_to += binomial(r + n - 1, n - 1)
        for gen in e_generators(arr, r):
            if not gen.is_zero():
                red.add_row({index[m]: c for m, c in gen.terms.items()})
        if r >= k:
            for h in monomials_of_degree(n, r - k):
                row_poly = q_minus_one * Polynomial.monomial(h)
                red.add_row({index[m]: c for m, c in row_poly.terms.items()})
        dims.append(monos_up_to - red.rank)
    return dims


def u_profile(arr: Arrangement, r_max: int | None = None) -> CohomologyProfile:
    """Graded dimensions u_r = F_r - F_(r-1) across and above the window."""
    n, k = arr.n, arr.k
    window_top = 2 * k - n - 2
    if r_max is None:
        r_max = max(window_top, 0) + 2
    if r_max < window_top:
        raise PreconditionError(
            f"r_max={r_max} must cover the window top 2k-n-2={window_top}"
        )
    dims = filtered_dims(arr, r_max)
    u = [dims[0]] + [dims[r] - dims[r - 1] for r in range(1, r_max + 1)]
    window = tuple(u[: window_top + 1])
    tail = tuple(u[window_top + 1 :])
    return CohomologyProfile(n=n, k=k, u=window, total=sum(window), tail=tail)


# -- the distinguished basis and the rewriting procedure ---------------------


def basis_mult_vectors(n: int, k: int, r: int) -> list[tuple[int, ...]]:
    """Multiplicity vectors of the degree-r basis monomials.

    Shape: a squarefree choice of k-n-1 indices below k-2, then index k-2
    once and index k-1 with multiplicity r-k+n.  Empty when k = n.
    """
    if k < n:
        raise PreconditionError("basis monomials need k >= n")
    if r < k - n + 1:
        raise PreconditionError(
            f"basis monomials need degree r >= k-n+1 = {k - n + 1}"
        )
    if k == n:
        return []
    out = []
    for head in combinations(range(k - 2), k - n - 1):
        mults = [0] * k
        for i in head:
            mults[i] = 1
        mults[k - 2] = 1
        mults[k - 1] = r - k + n
        out.append(tuple(mults))
    return out


def basis_monomials(arr: Arrangement, r: int) -> list[AMonomial]:
    return [
        AMonomial.build(arr, mults)
        for mults in basis_mult_vectors(arr.n, arr.k, r)
    ]


def _is_basis_vector(n: int, k: int, mults: tuple[int, ...]) -> bool:
    if k == n:
        return False
    if mults[k - 2] != 1 or mults[k - 1] < 1:
        return False
    head = mults[: k - 2]
    return all(m <= 1 for m in head) and sum(head) == k - n - 1


def is_standard_product(n: int, k: int, mults: tuple[int, ...]) -> bool:
    """Divisible by some Q_mu: at least k-n+1 distinct forms appear."""
    return sum(1 for m in mults if m) >= k - n + 1


def _solve_form_in_frame(
    arr: Arrangement, target: int, frame: tuple[int, ...]
) -> list[Fraction]:
    """Coordinates of H_target in the basis {H_i : i in frame} (|frame| = n)."""
    n = arr.n
    rows = [
        [arr.hyperplanes[frame[j]].coeffs[t] for j in range(n)] for t in range(n)
    ]
    rhs = list(arr.hyperplanes[target].coeffs)
    sol = solve_linear(rows, rhs)
    if sol is None:
        raise PreconditionError("frame does not span the target form")
    return sol


class RewriteResult:
    """Outcome of rewriting a standard product onto the basis monomials."""

    __slots__ = ("arr", "product", "basis_coefficients", "certificate")

    def __init__(
        self,
        arr: Arrangement,
        product: tuple[int, ...],
        basis_coefficients: dict[tuple[int, ...], Fraction],
        certificate: list[tuple[Fraction, EGeneratorIndex]],
    ):
        self.arr = arr
        self.product = product
        self.basis_coefficients = basis_coefficients
        self.certificate = certificate


def rewrite_to_basis(
    arr: Arrangement, product: AMonomial | tuple[int, ...]
) -> RewriteResult:
    """Express a standard product over the basis monomials modulo E.

    Returns basis coefficients keyed by multiplicity vector plus the exact
    list of (coefficient, E-generator index) pairs consumed, so that

        product = sum(coeff * basis) + sum(coeff * E(a, mu))

    holds as an identity of polynomials.  Requires a generic arrangement,
    a standard product, and k not dividing r-k+n.
    """
    require_generic(arr)
    n, k = arr.n, arr.k
    if k < n:
        raise PreconditionError("rewriting needs k >= n")
    mults = product.multiplicities if isinstance(product, AMonomial) else tuple(product)
    if len(mults) != k or any(m < 0 for m in mults):
        raise UsageError("product must be a length-k nonnegative multiplicity vector")
    r = sum(mults)
    if not is_standard_product(n, k, mults):
        raise PreconditionError(
            "not a standard product: fewer than k-n+1 distinct forms appear"
        )
    if (r - k + n) % k == 0:
        raise PreconditionError(
            f"unsupported degree: k={k} divides r-k+n={r - k + n}"
        )

    queue: dict[tuple[int, ...], Fraction] = {}
    basis_coeffs: dict[tuple[int, ...], Fraction] = {}
    cert: dict[tuple[Mono, tuple[int, ...]], Fraction] = {}

    def add_queue(vec: tuple[int, ...], coeff: Fraction) -> None:
        if not coeff:
            return
        if _is_basis_vector(n, k, vec):
            acc = basis_coeffs.get(vec, Fraction(0)) + coeff
            if acc:
                basis_coeffs[vec] = acc
            else:
                basis_coeffs.pop(vec, None)
            return
        acc = queue.get(vec, Fraction(0)) + coeff
        if acc:
            queue[vec] = acc
        else:
            queue.pop(vec, None)

    def add_certificate(
        a_mults: tuple[int, ...], mu: tuple[int, ...], coeff: Fraction
    ) -> None:
        a_poly = AMonomial.build(arr, a_mults).value
        for mono, gamma in a_poly.terms.items():
            key = (mono, mu)
            acc = cert.get(key, Fraction(0)) + coeff * gamma
            if acc:
                cert[key] = acc
            else:
                cert.pop(key, None)

    def eliminate_with(
        alpha: tuple[int, ...],
        lam: Fraction,
        s_set: tuple[int, ...],
        distinguished: int,
    ) -> None:
        """Use E(a, mu) with a = alpha + e_dist - 1_S to remove alpha."""
        mu = tuple(i for i in range(k) if i not in s_set)
        a_mults = list(alpha)
        a_mults[distinguished] += 1
        for i in s_set:
            a_mults[i] -= 1
        a_vec = tuple(a_mults)
        assert all(m >= 0 for m in a_vec)
        deg_a = sum(a_vec)
        coeffs = {}
        for i in s_set:
            c = jacobian_det_scalar(arr, mu, i) * (deg_a - k * a_vec[i])
            coeffs[i] = c
        c_dist = coeffs[distinguished]
        assert c_dist, "distinguished replacement coefficient vanished"
        add_certificate(a_vec, mu, lam / c_dist)
        for i in s_set:
            if i == distinguished:
                continue
            if not coeffs[i]:
                continue
            repl = list(a_vec)
            # a * Q_mu / H_i puts back every S-form except H_i.
            for t in s_set:
                repl[t] += 1
            repl[i] -= 1
            add_queue(tuple(repl), -lam * coeffs[i] / c_dist)

    add_queue(mults, Fraction(1))
    guard = 0
    while queue:
        guard += 1
        if guard > 200_000:
            raise RuntimeError("rewriting failed to terminate (internal error)")
        alpha, lam = queue.popitem()
        supp = tuple(i for i, m in enumerate(alpha) if m)
        nsupp = len(supp)
        if nsupp > k - n + 1 or (nsupp == k - n + 1 and alpha[k - 1] == 0):
            # Raise the H_(k-1)-multiplicity through one relation.
            pool = [i for i in supp if i != k - 1][: k - n]
            s_set = tuple(sorted(pool + [k - 1]))
            eliminate_with(alpha, lam, s_set, distinguished=k - 1)
            continue
        # Now supp has exactly k-n+1 elements including k-1.
        crowded = [i for i in supp if i != k - 1 and alpha[i] >= 2]
        if crowded:
            # Re-expand one repeated form over a frame through H_(k-1).
            i0 = min(crowded)
            mu = tuple(i for i in range(k) if i not in supp)
            frame = tuple(sorted(mu + (k - 1,)))
            sol = _solve_form_in_frame(arr, i0, frame)
            base = list(alpha)
            base[i0] -= 1
            for pos, j in enumerate(frame):
                repl = list(base)
                repl[j] += 1
                add_queue(tuple(repl), lam * sol[pos])
            continue
        # Squarefree off H_(k-1); either basis-shaped or one relation away.
        assert alpha[k - 2] == 0, "basis vectors never reach the work queue"
        s_set = tuple(sorted([i for i in supp if i != k - 1] + [k - 2]))
        eliminate_with(alpha, lam, s_set, distinguished=k - 2)

    certificate = [
        (coeff, EGeneratorIndex(a=mono, mu=mu))
        for (mono, mu), coeff in sorted(cert.items())
    ]
    return RewriteResult(arr, mults, dict(basis_coeffs), certificate)


def jacobian_det_scalar(
    arr: Arrangement, mu: tuple[int, ...], i: int
) -> Fraction:
    """J_mu(H_i): the constant determinant of the mu-gradients with grad H_i."""
    det_poly = jacobian_det(arr, mu, arr.form(i))
    if det_poly.is_zero():
        return Fraction(0)
    return det_poly.coeff((0,) * arr.n)


def verify_rewrite(arr: Arrangement, result: RewriteResult) -> bool:
    """Re-check the rewriting output as one exact polynomial identity."""
    lhs = AMonomial.build(arr, result.product).value
    for mults, c in result.basis_coefficients.items():
        lhs = lhs - AMonomial.build(arr, mults).value.scale(c)
    for coeff, idx in result.certificate:
        lhs = lhs - e_generator(arr, idx.a, idx.mu).scale(coeff)
    return lhs.is_zero()


# -- the (n-1)-form attached to a cohomology representative -------------------


def milnor_form(g: Polynomial, k: int) -> list[Polynomial]:
    """Coefficients of the contracted volume form g * omega / k.

    Component i (0-based) is (-1)^i * x_(i+1) * g / k in the alternating
    sign convention of the wedge basis with dx_(i+1) omitted.
    """
    if not g.is_zero() and not g.is_homogeneous():
        raise PreconditionError("g must be homogeneous")
    n = g.n
    out = []
    for i in range(n):
        comp = (Polynomial.variable(n, i) * g).scale(Fraction(1, k))
        out.append(comp if i % 2 == 0 else -comp)
    return out
