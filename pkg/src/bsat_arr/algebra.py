"""Exact sparse polynomial arithmetic and rational linear algebra.

Everything here runs over ``fractions.Fraction``; no floating point is used
anywhere in the package.  Monomials are plain exponent tuples, polynomials are
sparse maps from monomial to coefficient, and the one global monomial order is
graded reverse lexicographic with x1 > x2 > ... > xn.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

Mono = tuple[int, ...]
Scalar = int | Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def parse_rational(text: str | int) -> Fraction:
    """Parse an exact rational written as "p" or "p/q".  Floats are rejected."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text.strip())


def format_rational(value: Scalar) -> str:
    """Render a rational canonically: "p" when integral, else "p/q"."""
    f = Fraction(value)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def grevlex_key(mono: Mono) -> tuple:
    """Sort key realising grevlex; ``max(monos, key=grevlex_key)`` is the lead."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(n: int, degree: int) -> list[Mono]:
    """All exponent tuples of total degree ``degree``, leading monomial first.

    The count is C(degree + n - 1, n - 1).
    """
    if n < 1:
        raise ValueError("need at least one variable")
    if degree < 0:
        return []
    out: list[Mono] = []

    def rec(prefix: list[int], remaining: int, slot: int) -> None:
        if slot == n - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slot + 1)

    rec([], degree, 0)
    out.sort(key=grevlex_key, reverse=True)
    return out


def monomials_up_to_degree(n: int, degree: int) -> list[Mono]:
    """Monomials of degree 0..degree, ordered by degree then grevlex-descending."""
    out: list[Mono] = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(n, d))
    return out


_VAR_NAMES = ("x", "y", "z", "w")


def _var_name(i: int, n: int) -> str:
    if n <= len(_VAR_NAMES):
        return _VAR_NAMES[i]
    return f"x{i + 1}"


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients.

    ``terms`` maps exponent tuples of length ``n`` to nonzero coefficients.
    Instances are hashable; treat them as frozen values.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict[Mono, Scalar] | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        self.n = n
        clean: dict[Mono, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != n:
                raise ValueError(f"monomial {mono} has wrong length for n={n}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = Fraction(coeff)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> Polynomial:
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> Polynomial:
        return cls(n, {(0,) * n: Fraction(1)})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> Polynomial:
        return cls(n, {(0,) * n: Fraction(c)})

    @classmethod
    def variable(cls, n: int, i: int) -> Polynomial:
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} out of range for n={n}")
        mono = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, {mono: Fraction(1)})

    @classmethod
    def linear_form(cls, coeffs: list[Scalar] | tuple[Scalar, ...]) -> Polynomial:
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                mono = tuple(1 if j == i else 0 for j in range(n))
                terms[mono] = Fraction(c)
        return cls(n, terms)

    @classmethod
    def monomial(cls, mono: Mono, coeff: Scalar = 1) -> Polynomial:
        return cls(len(mono), {tuple(mono): Fraction(coeff)})

    # -- ring operations ----------------------------------------------

    def _check_same_ring(self, other: Polynomial) -> None:
        if self.n != other.n:
            raise ValueError(f"ambient mismatch: {self.n} vs {other.n} variables")

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check_same_ring(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            acc = terms.get(mono, Fraction(0)) + c
            if acc:
                terms[mono] = acc
            else:
                terms.pop(mono, None)
        return Polynomial(self.n, terms)

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.n, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_same_ring(other)
        terms: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                acc = terms.get(m, Fraction(0)) + c1 * c2
                if acc:
                    terms[m] = acc
                else:
                    terms.pop(m, None)
        return Polynomial(self.n, terms)

    def __rmul__(self, other: Scalar) -> Polynomial:
        return self.scale(other)

    def scale(self, c: Scalar) -> Polynomial:
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.n)
        return Polynomial(self.n, {m: cc * c for m, cc in self.terms.items()})

    def __pow__(self, e: int) -> Polynomial:
        if e < 0:
            raise ValueError("negative power")
        out = Polynomial.one(self.n)
        for _ in range(e):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.n, frozenset(self.terms.items()))))
        return self._hash

    # -- calculus and structure ----------------------------------------

    def partial(self, i: int) -> Polynomial:
        """Exact partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.n:
            raise ValueError(f"variable index {i} out of range for n={self.n}")
        terms: dict[Mono, Fraction] = {}
        for mono, c in self.terms.items():
            e = mono[i]
            if e:
                m = tuple(v - 1 if j == i else v for j, v in enumerate(mono))
                terms[m] = terms.get(m, Fraction(0)) + c * e
        return Polynomial(self.n, terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(m) for m in self.terms}
        return len(degrees) <= 1

    def homogeneous_component(self, d: int) -> Polynomial:
        return Polynomial(self.n, {m: c for m, c in self.terms.items() if sum(m) == d})

    def leading_monomial(self) -> Mono:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=grevlex_key)

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> Polynomial:
        if not self.terms:
            raise ValueError("cannot normalise the zero polynomial")
        return self.scale(1 / self.leading_coeff())

    def coeff(self, mono: Mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def substitute_linear(self, images: list[Polynomial]) -> Polynomial:
        """Substitute x_i -> images[i]; every image must share one ambient ring."""
        if len(images) != self.n:
            raise ValueError("need one image per variable")
        m_out = images[0].n
        out = Polynomial.zero(m_out)
        power_cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = images[i] ** e
            return power_cache[key]

        for mono, c in self.terms.items():
            piece = Polynomial.constant(m_out, c)
            for i, e in enumerate(mono):
                if e:
                    piece = piece * power(i, e)
            out = out + piece
        return out

    def divmod_single(self, divisor: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Multivariate division by one divisor; returns (quotient, remainder)."""
        self._check_same_ring(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead = divisor.leading_monomial()
        lc = divisor.terms[lead]
        quot = Polynomial.zero(self.n)
        rem = Polynomial.zero(self.n)
        work = self
        while work.terms:
            m = work.leading_monomial()
            c = work.terms[m]
            if mono_divides(lead, m):
                t = Polynomial.monomial(mono_div(m, lead), c / lc)
                quot = quot + t
                work = work - t * divisor
            else:
                t = Polynomial.monomial(m, c)
                rem = rem + t
                work = work - t
        return quot, rem

    def exact_div(self, divisor: Polynomial) -> Polynomial:
        """Exact division; raises ValueError when ``divisor`` does not divide."""
        quot, rem = self.divmod_single(divisor)
        if rem.terms:
            raise ValueError("division is not exact")
        return quot

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[mono]
            factors = [
                _var_name(i, self.n) + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(mono)
                if e
            ]
            body = "*".join(factors) if factors else "1"
            if c == 1 and factors:
                bits.append(body)
            elif c == -1 and factors:
                bits.append(f"-{body}")
            elif factors:
                bits.append(f"{format_rational(c)}*{body}")
            else:
                bits.append(format_rational(c))
        text = " + ".join(bits)
        return text.replace("+ -", "- ")


# -- dense exact linear algebra ----------------------------------------


def rref(rows: list[list[Scalar]]) -> tuple[list[list[Fraction]], int, list[int]]:
    """Reduced row echelon form over the rationals.

    Returns (reduced rows, rank, pivot column indices).  Zero rows sink to
    the bottom; pivots are normalised to 1 and cleared above and below.
    """
    mat = [[Fraction(v) for v in row] for row in rows]
    if not mat:
        return [], 0, []
    ncols = len(mat[0])
    if any(len(row) != ncols for row in mat):
        raise ValueError("ragged matrix")
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, r, pivots


def kernel_basis(rows: list[list[Scalar]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of the matrix (solutions of A v = 0)."""
    if not rows:
        return [
            [Fraction(1 if j == i else 0) for j in range(ncols)] for i in range(ncols)
        ]
    mat, _, pivots = rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -mat[r][f]
        basis.append(v)
    return basis


def solve_linear(rows: list[list[Scalar]], rhs: list[Scalar]) -> list[Fraction] | None:
    """One exact solution of A x = b, or None when the system is inconsistent."""
    if not rows:
        return [] if not any(Fraction(v) for v in rhs) else None
    ncols = len(rows[0])
    aug = [list(row) + [rhs[i]] for i, row in enumerate(rows)]
    mat, _, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = mat[r][ncols]
    return x


def intersect_row_spaces(
    rows_a: list[list[Fraction]], rows_b: list[list[Fraction]], ncols: int
) -> list[list[Fraction]]:
    """Basis of the intersection of two row spaces inside Q^ncols."""
    if not rows_a or not rows_b:
        return []
    # Combination sum(c_i a_i) lies in span(b) iff it reduces to zero there.
    reducer = SparseReducer()
    for row in rows_b:
        reducer.add_row({j: v for j, v in enumerate(row) if v})
    residue_rows = []
    for row in rows_a:
        residue = reducer.reduce({j: v for j, v in enumerate(row) if v})
        residue_rows.append([residue.get(j, Fraction(0)) for j in range(ncols)])
    coeff_cols = len(rows_a)
    transposed = [[residue_rows[i][j] for i in range(coeff_cols)] for j in range(ncols)]
    out = []
    for combo in kernel_basis(transposed, coeff_cols):
        vec = [Fraction(0)] * ncols
        for ci, c in enumerate(combo):
            if c:
                for j, v in enumerate(rows_a[ci]):
                    vec[j] += c * v
        if any(vec):
            out.append(vec)
    reduced, _, _ = rref(out)
    return [row for row in reduced if any(row)]


class SparseReducer:
    """Incremental Gaussian elimination over sparse Fraction rows.

    Rows are dicts keyed by column index.  ``add_row`` folds a row into the
    reducer and reports whether it increased the rank; ``reduce`` returns the
    residue of a row against the current span without inserting it.
    """

    def __init__(self) -> None:
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        work = {j: Fraction(v) for j, v in row.items() if v}
        while work:
            lead = min(work)
            pivot = self.pivots.get(lead)
            if pivot is None:
                return work
            factor = work[lead]
            for j, v in pivot.items():
                acc = work.get(j, Fraction(0)) - factor * v
                if acc:
                    work[j] = acc
                else:
                    work.pop(j, None)
        return work

    def add_row(self, row: dict[int, Fraction]) -> bool:
        residue = self.reduce(row)
        if not residue:
            return False
        lead = min(residue)
        inv = 1 / residue[lead]
        self.pivots[lead] = {j: v * inv for j, v in residue.items()}
        return True

    def contains(self, row: dict[int, Fraction]) -> bool:
        return not self.reduce(row)


@dataclass(frozen=True)
class DegreeSlice:
    """A homogeneous degree slice of a list of polynomials.

    ``basis`` lists the degree-d monomials (grevlex-descending) and ``matrix``
    holds one coordinate row per input polynomial.
    """

    n: int
    degree: int
    basis: tuple[Mono, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_polynomials(
        cls, polys: list[Polynomial], degree: int, n: int
    ) -> DegreeSlice:
        basis = monomials_of_degree(n, degree)
        index = {m: i for i, m in enumerate(basis)}
        rows = []
        for p in polys:
            if p.n != n:
                raise ValueError("ambient mismatch in slice construction")
            if p.terms and not all(sum(m) == degree for m in p.terms):
                raise ValueError(f"polynomial is not homogeneous of degree {degree}")
            row = [Fraction(0)] * len(basis)
            for mono, c in p.terms.items():
                row[index[mono]] = c
            rows.append(tuple(row))
        return cls(n=n, degree=degree, basis=tuple(basis), matrix=tuple(rows))

    def rank(self) -> int:
        _, rank, _ = rref([list(r) for r in self.matrix])
        return rank

    def reducer(self) -> SparseReducer:
        red = SparseReducer()
        for row in self.matrix:
            red.add_row({j: v for j, v in enumerate(row) if v})
        return red

    def coordinates(self, poly: Polynomial) -> dict[int, Fraction]:
        index = {m: i for i, m in enumerate(self.basis)}
        out: dict[int, Fraction] = {}
        for mono, c in poly.terms.items():
            if sum(mono) != self.degree:
                raise ValueError(f"polynomial is not homogeneous of degree {self.degree}")
            out[index[mono]] = c
        return out


def ideal_slice(gens: list[Polynomial], degree: int, n: int) -> DegreeSlice:
    """Degree slice of the homogeneous ideal generated by ``gens``.

    The slice is spanned by m*g over generators g and monomials m of the
    complementary degree; this is complete for homogeneous ideals, no
    Groebner basis required.
    """
    polys: list[Polynomial] = []
    for g in gens:
        if g.is_zero():
            continue
        if not g.is_homogeneous():
            raise ValueError("ideal_slice needs homogeneous generators")
        d = g.degree()
        if d > degree:
            continue
        for mono in monomials_of_degree(n, degree - d):
            polys.append(Polynomial.monomial(mono) * g)
    return DegreeSlice.from_polynomials(polys, degree, n)


def binomial(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def independent_subsets(vectors: list[tuple[Fraction, ...]], size: int) -> list[tuple[int, ...]]:
    """Index tuples of the ``size``-subsets of ``vectors`` that are independent."""
    out = []
    for subset in combinations(range(len(vectors)), size):
        rows = [list(vectors[i]) for i in subset]
        _, rank, _ = rref(rows)
        if rank == size:
            out.append(subset)
    return out
