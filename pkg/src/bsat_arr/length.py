"""Holonomic length of the localization R_n[1/Q] for central arrangements.

The length obeys an inclusion-exclusion recursion over sub-arrangements:
removing index sets I of every size contributes (-1)^(i+1) times the length
of the smaller localization, and a final +1 enters exactly when the k forms
are a regular sequence (the top local cohomology module survives, which
over the polynomial ring means the coefficient matrix has rank k).

Everything is exact; the recursion is valid for arbitrary central reduced
arrangements, with no genericity assumption.
"""

from __future__ import annotations

from itertools import combinations

from .algebra import rref
from .arrangement import Arrangement, Hyperplane, generic_arrangement
from .errors import UsageError

CanonicalKey = tuple[tuple, ...]


def h_top_nonvanishing(arr: Arrangement) -> bool:
    """True iff the k forms are a regular sequence (coefficient rank = k)."""
    rows = [list(h.coeffs) for h in arr.hyperplanes]
    _, rank, _ = rref(rows)
    return rank == arr.k


def _subset_key(hyperplanes: list[Hyperplane], subset: tuple[int, ...]) -> CanonicalKey:
    return tuple(sorted(hyperplanes[i].coeffs for i in subset))


def _rank_of_rows(rows: list[list]) -> int:
    if not rows:
        return 0
    _, rank, _ = rref([list(r) for r in rows])
    return rank


def holonomic_length(
    arr: Arrangement, memo: dict[CanonicalKey, int] | None = None
) -> int:
    """Length of R_n[1/Q] by the sub-arrangement recursion, memoized.

    The memo is keyed by the canonical (sorted, normalized) coefficient
    lists, so reorderings of the same forms share entries; passing a dict
    lets callers reuse work across arrangements.
    """
    if memo is None:
        memo = {}
    hs = list(arr.hyperplanes)
    k = arr.k
    empty: CanonicalKey = ()
    memo.setdefault(empty, 1)
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            key = _subset_key(hs, subset)
            if key in memo:
                continue
            total = 0
            for i in range(1, size + 1):
                sign = 1 if i % 2 == 1 else -1
                for removal in combinations(subset, i):
                    rest = tuple(t for t in subset if t not in removal)
                    total += sign * memo[_subset_key(hs, rest)]
            rows = [list(hs[i].coeffs) for i in subset]
            if _rank_of_rows(rows) == size:
                total += 1
            memo[key] = total
    return memo[_subset_key(hs, tuple(range(k)))]


def inclusion_exclusion_table(arr: Arrangement) -> list[tuple[int, int]]:
    """Per-size subtotals of the top-level recursion: (|I|, Σ ℓ(A minus I)).

    The length equals Σ (-1)^(i+1) * subtotal_i plus the regular-sequence
    correction; exposing the rows lets reports show the whole computation.
    """
    memo: dict[CanonicalKey, int] = {}
    holonomic_length(arr, memo)
    hs = list(arr.hyperplanes)
    k = arr.k
    table = []
    for i in range(1, k + 1):
        subtotal = 0
        for removal in combinations(range(k), i):
            rest = tuple(t for t in range(k) if t not in removal)
            subtotal += memo[_subset_key(hs, rest)]
        table.append((i, subtotal))
    return table


def length_profile(n: int, k: int) -> int:
    """Length of the localization for a generic (n, k) arrangement."""
    if n < 1 or k < 1:
        raise UsageError("need n >= 1 and k >= 1")
    return holonomic_length(generic_arrangement(n, k))
