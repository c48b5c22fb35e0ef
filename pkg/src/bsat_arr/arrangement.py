"""Central hyperplane arrangements and their combinatorial ideals.

An arrangement is an ordered list of pairwise non-proportional linear forms
through the origin, each normalised so its first nonzero coefficient is 1.
This module provides the genericity test, dual frames, Jacobian-style
determinants, the chain of squarefree-product ideals together with their
determinant enlargements, and the intersection-lattice flats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .algebra import (
    Polynomial,
    format_rational,
    parse_rational,
    rref,
)
from .errors import PreconditionError, UsageError

Coeffs = tuple[Fraction, ...]


def _normalise(coeffs: list[Fraction]) -> Coeffs:
    lead = next((c for c in coeffs if c), None)
    if lead is None:
        raise UsageError("hyperplane has all-zero coefficients")
    return tuple(c / lead for c in coeffs)


@dataclass(frozen=True)
class Hyperplane:
    """A linear form through the origin, first nonzero coefficient 1."""

    coeffs: Coeffs

    @classmethod
    def from_coeffs(cls, coeffs: list[Fraction | int]) -> Hyperplane:
        return cls(_normalise([Fraction(c) for c in coeffs]))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def polynomial(self) -> Polynomial:
        return Polynomial.linear_form(self.coeffs)


@dataclass(frozen=True)
class Flat:
    """An intersection-lattice flat: closed index set plus its rank."""

    indices: tuple[int, ...]
    rank: int


class Arrangement:
    """An ordered central arrangement of ``k`` hyperplanes in ``n`` variables."""

    def __init__(self, n: int, hyperplanes: list[Hyperplane]):
        if n < 1:
            raise UsageError("need at least one variable")
        if not hyperplanes:
            raise UsageError("need at least one hyperplane")
        if any(h.n != n for h in hyperplanes):
            raise UsageError("hyperplane coefficient length does not match n")
        seen: dict[Coeffs, int] = {}
        for i, h in enumerate(hyperplanes):
            if h.coeffs in seen:
                raise UsageError(
                    f"hyperplanes {seen[h.coeffs] + 1} and {i + 1} are proportional"
                )
            seen[h.coeffs] = i
        self.n = n
        self.hyperplanes = list(hyperplanes)

    @classmethod
    def from_coeff_rows(cls, n: int, rows: list[list[Fraction | int]]) -> Arrangement:
        return cls(n, [Hyperplane.from_coeffs(row) for row in rows])

    @property
    def k(self) -> int:
        return len(self.hyperplanes)

    def form(self, i: int) -> Polynomial:
        return self.hyperplanes[i].polynomial()

    def coeff_rows(self) -> list[list[Fraction]]:
        return [list(h.coeffs) for h in self.hyperplanes]

    def canonical_key(self) -> tuple[Coeffs, ...]:
        """Order-insensitive identity of the underlying arrangement."""
        return tuple(sorted(h.coeffs for h in self.hyperplanes))

    def rank_of(self, indices: tuple[int, ...] | list[int]) -> int:
        rows = [list(self.hyperplanes[i].coeffs) for i in indices]
        if not rows:
            return 0
        _, rank, _ = rref(rows)
        return rank

    def is_independent(self, indices: tuple[int, ...] | list[int]) -> bool:
        return self.rank_of(indices) == len(indices)

    def reordered(self, order: list[int]) -> Arrangement:
        if sorted(order) != list(range(self.k)):
            raise UsageError("reorder must be a permutation of the hyperplanes")
        return Arrangement(self.n, [self.hyperplanes[i] for i in order])

    def transformed(self, matrix: list[list[Fraction | int]]) -> Arrangement:
        """Apply the linear substitution x -> M x to every form."""
        rows = [[Fraction(v) for v in row] for row in matrix]
        _, rank, _ = rref([list(r) for r in rows])
        if rank != self.n:
            raise PreconditionError("coordinate change must be invertible")
        new_rows = []
        for h in self.hyperplanes:
            # form coefficients transform by M^T: (c . M x) = (M^T c) . x
            new_rows.append(
                [
                    sum(h.coeffs[i] * rows[i][j] for i in range(self.n))
                    for j in range(self.n)
                ]
            )
        return Arrangement.from_coeff_rows(self.n, new_rows)

    def __repr__(self) -> str:
        forms = ", ".join(repr(h.polynomial()) for h in self.hyperplanes)
        return f"Arrangement(n={self.n}, [{forms}])"


# -- construction and serialization -------------------------------------


def parse_arrangement(obj: dict) -> Arrangement:
    """Parse the exact JSON input format.

    Expected shape: {"n": int, "hyperplanes": [[rational-string, ...], ...]}
    with every coefficient a string "p" or "p/q" (plain ints are accepted,
    floats never are).
    """
    if not isinstance(obj, dict):
        raise UsageError("arrangement input must be a JSON object")
    missing = {"n", "hyperplanes"} - set(obj)
    if missing:
        raise UsageError(f"arrangement input is missing keys: {sorted(missing)}")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise UsageError("'n' must be a positive integer")
    rows = obj["hyperplanes"]
    if not isinstance(rows, list) or not rows:
        raise UsageError("'hyperplanes' must be a non-empty list")
    parsed_rows = []
    for idx, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise UsageError(f"hyperplane {idx + 1} must be a list of {n} rationals")
        coeffs = []
        for entry in row:
            if isinstance(entry, float):
                raise UsageError(
                    f"hyperplane {idx + 1} contains a float; write rationals as strings"
                )
            try:
                coeffs.append(parse_rational(entry))
            except ValueError as exc:
                raise UsageError(f"hyperplane {idx + 1}: {exc}") from exc
        parsed_rows.append(coeffs)
    return Arrangement.from_coeff_rows(n, parsed_rows)


def arrangement_to_json(arr: Arrangement) -> dict:
    return {
        "n": arr.n,
        "hyperplanes": [
            [format_rational(c) for c in h.coeffs] for h in arr.hyperplanes
        ],
    }


def generic_arrangement(n: int, k: int) -> Arrangement:
    """A deterministic generic arrangement: k points on the moment curve.

    Hyperplane i is sum_j t^j x_{j+1} with t = i, so every n-subset has a
    Vandermonde coefficient matrix and is independent.
    """
    if n < 1 or k < 1:
        raise PreconditionError("need n >= 1 and k >= 1")
    rows = [[Fraction(i**j) for j in range(n)] for i in range(k)]
    return Arrangement.from_coeff_rows(n, rows)


# -- basic invariants ----------------------------------------------------


def first_dependent_subset(arr: Arrangement) -> tuple[int, ...] | None:
    """The lexicographically first dependent min(k, n)-subset, if any."""
    size = min(arr.k, arr.n)
    for subset in combinations(range(arr.k), size):
        if not arr.is_independent(subset):
            return subset
    return None


def is_generic(arr: Arrangement) -> bool:
    """Every min(k, n) of the forms cut out a subspace of that codimension."""
    return first_dependent_subset(arr) is None


def require_generic(arr: Arrangement) -> None:
    witness = first_dependent_subset(arr)
    if witness is not None:
        pretty = ", ".join(str(i + 1) for i in witness)
        raise PreconditionError(
            f"arrangement is not generic: hyperplanes {{{pretty}}} are dependent"
        )


def defining_poly(arr: Arrangement) -> Polynomial:
    """The product of all the linear forms."""
    q = Polynomial.one(arr.n)
    for h in arr.hyperplanes:
        q = q * h.polynomial()
    return q


@dataclass(frozen=True)
class AMonomial:
    """A product of arrangement forms with multiplicities, kept factored."""

    multiplicities: tuple[int, ...]
    value: Polynomial

    @classmethod
    def build(cls, arr: Arrangement, multiplicities: tuple[int, ...]) -> AMonomial:
        if len(multiplicities) != arr.k:
            raise UsageError("multiplicity vector length must equal k")
        if any(m < 0 for m in multiplicities):
            raise UsageError("multiplicities must be nonnegative")
        value = Polynomial.one(arr.n)
        for i, m in enumerate(multiplicities):
            for _ in range(m):
                value = value * arr.form(i)
        return cls(tuple(multiplicities), value)

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, m in enumerate(self.multiplicities) if m)

    def is_squarefree(self) -> bool:
        return all(m <= 1 for m in self.multiplicities)


def product_of(arr: Arrangement, indices: tuple[int, ...] | list[int]) -> Polynomial:
    p = Polynomial.one(arr.n)
    for i in indices:
        p = p * arr.form(i)
    return p


def complement_product(arr: Arrangement, mu: tuple[int, ...] | list[int]) -> AMonomial:
    """The squarefree product of every form whose index is not in ``mu``."""
    mu_set = set(mu)
    if not mu_set <= set(range(arr.k)):
        raise PreconditionError("mu contains an index out of range")
    mults = tuple(0 if i in mu_set else 1 for i in range(arr.k))
    return AMonomial.build(arr, mults)


def dual_frame(arr: Arrangement, frame: tuple[int, ...] | list[int]) -> list[Coeffs]:
    """Constant vector fields v_i with v_i(H_{frame[j]}) = delta_ij.

    ``frame`` must name n independent hyperplanes; the returned coefficient
    rows are aligned with the order of ``frame``.
    """
    frame = tuple(frame)
    if len(frame) != arr.n:
        raise PreconditionError(f"frame must have exactly n={arr.n} indices")
    if len(set(frame)) != len(frame):
        raise PreconditionError("frame indices must be distinct")
    if not arr.is_independent(frame):
        raise PreconditionError("frame hyperplanes are dependent")
    n = arr.n
    # Want V with V . M^T = I where M rows are the frame coefficient vectors.
    mt = [[arr.hyperplanes[frame[j]].coeffs[i] for j in range(n)] for i in range(n)]
    aug = [mt[i] + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    reduced, rank, _ = rref(aug)
    if rank != n:
        raise PreconditionError("frame hyperplanes are dependent")
    # v_i is the i-th row of (M^T)^{-1}: then (V M^T)[i][j] = v_i(H_{frame[j]}).
    return [tuple(reduced[i][n:]) for i in range(n)]


def apply_vector(v: Coeffs, poly: Polynomial) -> Polynomial:
    """Apply the constant vector field sum_l v[l] d/dx_l to a polynomial."""
    out = Polynomial.zero(poly.n)
    for l, c in enumerate(v):
        if c:
            out = out + poly.partial(l).scale(c)
    return out


def _const_det(rows: list[list[Fraction]]) -> Fraction:
    size = len(rows)
    mat = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if mat[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, size):
            if mat[r][col]:
                f = mat[r][col] * inv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    return det


def jacobian_det(
    arr: Arrangement, mu: tuple[int, ...] | list[int], a: Polynomial
) -> Polynomial:
    """Determinant of the gradients of the mu-forms with the gradient of ``a``.

    ``mu`` is an (n-1)-subset; rows are the constant gradients of those forms
    followed by the gradient of ``a``.  May legitimately return zero.
    """
    mu = tuple(mu)
    n = arr.n
    if len(mu) != n - 1:
        raise PreconditionError(f"mu must have exactly n-1={n - 1} indices")
    if len(set(mu)) != len(mu):
        raise PreconditionError("mu indices must be distinct")
    if a.n != n:
        raise PreconditionError("ambient mismatch between a and the arrangement")
    const_rows = [list(arr.hyperplanes[i].coeffs) for i in mu]
    # Laplace expansion along the polynomial row (the last one).
    det = Polynomial.zero(n)
    for j in range(n):
        grad_j = a.partial(j)
        if grad_j.is_zero():
            continue
        minor_rows = [
            [row[c] for c in range(n) if c != j] for row in const_rows
        ]
        minor = _const_det(minor_rows) if minor_rows else Fraction(1)
        if minor:
            sign = -1 if (n - 1 + j) % 2 else 1
            det = det + grad_j.scale(minor * sign)
    return det


# -- the squarefree-product chain ---------------------------------------


def squarefree_products(arr: Arrangement, r: int) -> list[Polynomial]:
    """Generators H_I, |I| = r, of the r-fold product ideal (lexicographic I)."""
    if not 1 <= r <= arr.k:
        raise PreconditionError(f"r must be between 1 and k={arr.k}")
    return [product_of(arr, I) for I in combinations(range(arr.k), r)]


def frame_minor(
    arr: Arrangement,
    j_set: tuple[int, ...] | list[int],
    i_set: tuple[int, ...] | list[int],
    frame: tuple[int, ...] | list[int],
) -> Polynomial:
    """The determinant mixing frame derivatives of out-of-frame forms and H_I.

    With Icheck the indices outside I and the frame, the matrix has rows
    indexed by j in ``j_set`` (a subset of I intersect frame of size
    |Icheck| + 1): constant entries v_j(H_i) for i in Icheck, and a last
    column v_j(H_I).  Homogeneous of degree |I| - 1 when nonzero.
    """
    i_set = tuple(sorted(i_set))
    j_set = tuple(sorted(j_set))
    frame = tuple(frame)
    k, n = arr.k, arr.n
    if len(i_set) < k - n + 1:
        raise PreconditionError(
            f"|I|={len(i_set)} is too small: the minor needs |I| >= k-n+1={k - n + 1}"
        )
    i_check = tuple(i for i in range(k) if i not in i_set and i not in frame)
    i_hat = tuple(i for i in i_set if i in frame)
    rho = len(i_check) + 1
    if len(j_set) != rho:
        raise PreconditionError(
            f"|J|={len(j_set)} must equal |Icheck|+1={rho}"
        )
    if not set(j_set) <= set(i_hat):
        raise PreconditionError("J must be a subset of I intersect frame")
    vs = dual_frame(arr, frame)
    frame_pos = {idx: pos for pos, idx in enumerate(frame)}
    h_i = product_of(arr, i_set)
    rows: list[list[Polynomial]] = []
    for j in j_set:
        v = vs[frame_pos[j]]
        row = [
            Polynomial.constant(
                n, sum(v[l] * arr.hyperplanes[ic].coeffs[l] for l in range(n))
            )
            for ic in i_check
        ]
        row.append(apply_vector(v, h_i))
        rows.append(row)
    return _poly_det(rows, n)


def _poly_det(rows: list[list[Polynomial]], n: int) -> Polynomial:
    size = len(rows)
    if size == 1:
        return rows[0][0]
    det = Polynomial.zero(n)
    for j in range(size):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [
            [rows[r][c] for c in range(size) if c != j] for r in range(1, size)
        ]
        sub = _poly_det(minor, n)
        term = entry * sub
        det = det + (term if j % 2 == 0 else -term)
    return det


def admissible_minor_indices(
    arr: Arrangement, r: int
) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """All (I, frame, J) triples that produce a degree r-1 frame minor."""
    k, n = arr.k, arr.n
    out = []
    for i_set in combinations(range(k), r):
        for frame in combinations(range(k), n):
            if not arr.is_independent(frame):
                continue
            i_check = tuple(
                i for i in range(k) if i not in i_set and i not in frame
            )
            i_hat = tuple(i for i in i_set if i in frame)
            rho = len(i_check) + 1
            if rho > len(i_hat):
                continue
            for j_set in combinations(i_hat, rho):
                out.append((i_set, frame, j_set))
    return out


def stratum_generators(arr: Arrangement, r: int) -> list[Polynomial]:
    """Generators of the determinant enlargement of the r-fold product ideal.

    All admissible frame minors with |I| = r plus the squarefree products of
    size r.  Defined only for r > k - n; exact duplicates are removed, scalar
    multiples are kept.
    """
    k, n = arr.k, arr.n
    if r <= k - n:
        raise PreconditionError(
            f"the enlarged ideal is defined only for r > k-n={k - n}"
        )
    if not 1 <= r <= k:
        raise PreconditionError(f"r must be between 1 and k={k}")
    gens: list[Polynomial] = []
    seen: set[Polynomial] = set()
    for i_set, frame, j_set in admissible_minor_indices(arr, r):
        minor = frame_minor(arr, j_set, i_set, frame)
        if not minor.is_zero() and minor not in seen:
            gens.append(minor)
            seen.add(minor)
    for p in squarefree_products(arr, r):
        if p not in seen:
            gens.append(p)
            seen.add(p)
    return gens


def flats(arr: Arrangement) -> list[Flat]:
    """All intersection-lattice flats, as closed index sets with ranks.

    Brute-force closure over all index subsets; fine for desk-scale k.
    """
    found: dict[tuple[int, ...], int] = {}
    for size in range(arr.k + 1):
        for subset in combinations(range(arr.k), size):
            rank = arr.rank_of(subset)
            closure = tuple(
                j
                for j in range(arr.k)
                if arr.rank_of(tuple(sorted(set(subset) | {j}))) == rank
            )
            found.setdefault(closure, rank)
    return sorted(
        (Flat(indices=idx, rank=rk) for idx, rk in found.items()),
        key=lambda f: (f.rank, f.indices),
    )
