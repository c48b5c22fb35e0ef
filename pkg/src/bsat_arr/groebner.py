"""Buchberger's algorithm and ideal arithmetic over exact rationals.

All computations use the package-wide grevlex order.  The reduced basis a
``GroebnerBasis`` holds is canonical for the ideal, so two ideals are equal
exactly when their reduced bases coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Mono,
    Polynomial,
    SparseReducer,
    binomial,
    grevlex_key,
    ideal_slice,
    intersect_row_spaces,
    kernel_basis,
    mono_div,
    mono_divides,
    mono_lcm,
    monomials_of_degree,
)


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis: monic, inter-reduced, grevlex order."""

    n: int
    generators: tuple[Polynomial, ...]

    def leading_monomials(self) -> list[Mono]:
        return [g.leading_monomial() for g in self.generators]

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()


def _reduce_full(f: Polynomial, basis: list[Polynomial]) -> Polynomial:
    """Full normal form: every term is reduced, not just the leading one."""
    n = f.n
    leads = [(g.leading_monomial(), g) for g in basis if not g.is_zero()]
    remainder = Polynomial.zero(n)
    work = f
    while work.terms:
        mono = work.leading_monomial()
        coeff = work.terms[mono]
        hit = next((lg for lg in leads if mono_divides(lg[0], mono)), None)
        if hit is None:
            t = Polynomial.monomial(mono, coeff)
            remainder = remainder + t
            work = work - t
        else:
            lead, g = hit
            factor = Polynomial.monomial(mono_div(mono, lead), coeff / g.terms[lead])
            work = work - factor * g
    return remainder


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lf, lg)
    tf = Polynomial.monomial(mono_div(lcm, lf), 1 / f.leading_coeff())
    tg = Polynomial.monomial(mono_div(lcm, lg), 1 / g.leading_coeff())
    return tf * f - tg * g


def buchberger(gens: list[Polynomial]) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Plain Buchberger with the two classical pair-elimination criteria
    (coprime leading terms, and the chain criterion), then inter-reduction.
    """
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero:
        raise ValueError("zero ideal: no nonzero generators given")
    n = nonzero[0].n
    if any(g.n != n for g in nonzero):
        raise ValueError("generators live in different ambient rings")

    basis: list[Polynomial] = []
    seen: set[Polynomial] = set()
    for g in sorted(nonzero, key=lambda p: grevlex_key(p.leading_monomial())):
        gm = g.monic()
        if gm not in seen:
            basis.append(gm)
            seen.add(gm)

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}

    def coprime(i: int, j: int) -> bool:
        a, b = basis[i].leading_monomial(), basis[j].leading_monomial()
        return all(x == 0 or y == 0 for x, y in zip(a, b))

    def chain_criterion(i: int, j: int) -> bool:
        lcm = mono_lcm(basis[i].leading_monomial(), basis[j].leading_monomial())
        for l in range(len(basis)):
            if l in (i, j):
                continue
            if not mono_divides(basis[l].leading_monomial(), lcm):
                continue
            p1 = (min(i, l), max(i, l))
            p2 = (min(j, l), max(j, l))
            if p1 not in pairs and p2 not in pairs:
                return True
        return False

    while pairs:
        i, j = min(
            pairs,
            key=lambda p: (
                grevlex_key(
                    mono_lcm(
                        basis[p[0]].leading_monomial(), basis[p[1]].leading_monomial()
                    )
                ),
                p,
            ),
        )
        pairs.discard((i, j))
        if coprime(i, j) or chain_criterion(i, j):
            continue
        rem = _reduce_full(s_polynomial(basis[i], basis[j]), basis)
        if rem.is_zero():
            continue
        basis.append(rem.monic())
        new = len(basis) - 1
        pairs.update((i2, new) for i2 in range(new))

    # Minimalise: drop generators whose lead is divisible by another lead.
    basis.sort(key=lambda p: grevlex_key(p.leading_monomial()))
    minimal: list[Polynomial] = []
    for g in basis:
        lm = g.leading_monomial()
        if any(mono_divides(h.leading_monomial(), lm) for h in minimal):
            continue
        minimal.append(g)
    # Inter-reduce tails for the canonical reduced basis.
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(_reduce_full(g, others).monic())
    reduced.sort(key=lambda p: grevlex_key(p.leading_monomial()), reverse=True)
    return GroebnerBasis(n=n, generators=tuple(reduced))


def normal_form(f: Polynomial, basis: GroebnerBasis) -> Polynomial:
    """Canonical remainder of ``f`` modulo the ideal."""
    if f.n != basis.n:
        raise ValueError("ambient mismatch")
    return _reduce_full(f, list(basis.generators))


def contains_m_power(basis: GroebnerBasis, power: int) -> bool:
    """Whether every monomial of degree ``power`` lies in the ideal."""
    if power < 0:
        raise ValueError("power must be nonnegative")
    return all(
        normal_form(Polynomial.monomial(m), basis).is_zero()
        for m in monomials_of_degree(basis.n, power)
    )


def min_m_power(basis: GroebnerBasis, cap: int) -> int | None:
    """Least N <= cap with every degree-N monomial in the ideal, else None."""
    for power in range(cap + 1):
        if contains_m_power(basis, power):
            return power
    return None


def hilbert_dim(gens: list[Polynomial] | GroebnerBasis, degree: int, n: int) -> int:
    """dim of (R/I) in one degree, via the slice rank of the homogeneous ideal."""
    polys = list(gens.generators) if isinstance(gens, GroebnerBasis) else list(gens)
    total = binomial(degree + n - 1, n - 1)
    return total - ideal_slice(polys, degree, n).rank()


def slice_membership(f: Polynomial, gens: list[Polynomial]) -> bool:
    """Ideal membership for homogeneous data via exact linear algebra.

    Independent of normal_form; used as a cross-checking oracle and as the
    fast path in chain verification.
    """
    if f.is_zero():
        return True
    if not f.is_homogeneous():
        raise ValueError("slice membership needs a homogeneous polynomial")
    degree = f.degree()
    sl = ideal_slice(gens, degree, f.n)
    reducer = sl.reducer()
    return reducer.contains(sl.coordinates(f))


class _IdealSliceReducer:
    """Reducer for the degree-d slice of an ideal, with coordinate lookup."""

    def __init__(self, gens: list[Polynomial], degree: int, n: int):
        sl = ideal_slice(gens, degree, n)
        self._index = {m: i for i, m in enumerate(sl.basis)}
        self.width = len(sl.basis)
        self._reducer = sl.reducer()
        self.degree = degree

    def reduce_coords(self, poly: Polynomial) -> dict[int, Fraction]:
        row: dict[int, Fraction] = {}
        for mono, c in poly.terms.items():
            if sum(mono) != self.degree:
                raise ValueError("degree mismatch in slice reduction")
            row[self._index[mono]] = c
        return self._reducer.reduce(row)


def ideal_quotient(
    basis: GroebnerBasis,
    divisors: list[Polynomial],
    max_degree: int | None = None,
) -> GroebnerBasis:
    """The quotient ideal (I : J) for homogeneous I and J.

    Computed degree by degree without syzygies: in each degree d the slice of
    (I : f) is the kernel of multiplication by f into the degree d+deg(f)
    slice modulo I, and (I : J) intersects those kernels over the divisors.
    Generators are collected up to ``max_degree`` (default: maximum generator
    degree of I plus maximum degree in J plus the number of variables) and
    completed to a reduced Groebner basis.  The output is exact whenever the
    true quotient has no minimal generator above the cap; quotients containing
    a power of the maximal ideal always resolve within such a cap.
    """
    n = basis.n
    gens_i = list(basis.generators)
    divisors = [d for d in divisors if not d.is_zero()]
    if not divisors:
        raise ValueError("quotient by the zero ideal is undefined")
    if any(d.n != n for d in divisors):
        raise ValueError("ambient mismatch")
    if any(not d.is_homogeneous() for d in divisors) or any(
        not g.is_homogeneous() for g in gens_i
    ):
        raise ValueError("ideal_quotient expects homogeneous data")
    if any(d.degree() == 0 for d in divisors):
        return basis  # dividing by a unit changes nothing
    if max_degree is None:
        top_i = max((g.degree() for g in gens_i), default=0)
        top_j = max(d.degree() for d in divisors)
        max_degree = top_i + top_j + n

    found: list[Polynomial] = []
    for d in range(max_degree + 1):
        monos = monomials_of_degree(n, d)
        kernel_rows: list[list[Fraction]] | None = None
        for f in divisors:
            target = _IdealSliceReducer(gens_i, d + f.degree(), n)
            residues = [
                target.reduce_coords(Polynomial.monomial(mono) * f) for mono in monos
            ]
            mat = [
                [residues[i].get(j, Fraction(0)) for i in range(len(monos))]
                for j in range(target.width)
            ]
            sols = kernel_basis(mat, len(monos))
            kernel_rows = (
                sols
                if kernel_rows is None
                else intersect_row_spaces(kernel_rows, sols, len(monos))
            )
            if not kernel_rows:
                break
        if not kernel_rows:
            continue
        # Keep only slice vectors not already generated in lower degrees.
        reducer = ideal_slice(found, d, n).reducer() if found else SparseReducer()
        for vec in kernel_rows:
            if reducer.add_row({i: v for i, v in enumerate(vec) if v}):
                poly = Polynomial(n, {monos[i]: v for i, v in enumerate(vec) if v})
                found.append(poly.monic())

    if not found:
        return basis  # the quotient always contains I itself
    return buchberger(found + gens_i)
