"""Shared run handlers behind the CLI and the HTTP service.

Each handler takes plain data (parsed JSON, integers, strings), performs the
exact computation, and returns a run report: a JSON-safe dictionary with a
command echo, an input digest, a results block, a list of check lines, and
the wall time.  All rationals are serialized as strings "p" or "p/q"; no
floats appear anywhere in a report.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor

from .algebra import Polynomial, format_rational
from .arrangement import (
    Arrangement,
    admissible_minor_indices,
    arrangement_to_json,
    defining_poly,
    generic_arrangement,
    is_generic,
    parse_arrangement,
    product_of,
    require_generic,
)
from .bfunction import (
    BFunction,
    chain_check,
    generic_bsat,
    generic_shifts,
    isolated_homog_bsat,
    u_q_bound,
    verify_inplane,
)
from .errors import PreconditionError, UsageError
from .length import h_top_nonvanishing, holonomic_length, inclusion_exclusion_table
from .milnor import (
    basis_mult_vectors,
    conjectured_u,
    is_standard_product,
    or_dimension,
    rewrite_to_basis,
    u_profile,
    verify_rewrite,
)
from .reporting import (
    CONSISTENT,
    FAIL,
    NOT_APPLICABLE,
    PASS,
    UNVERIFIED,
    CheckLine,
)
from .weyl import (
    TwistedElement,
    annihilates,
    delta_production_check,
    euler_identity_check,
    pij_operator,
)

DEFAULT_GRID = "n=2..3,k=n..6"

# Largest k at which the independent isolated-singularity computation is run
# as a consistency oracle for the plane closed form.
_ORACLE_K_CAP = 8


# -- canonical serialization ----------------------------------------------


def canonical_json(obj) -> str:
    """Canonical report serialization: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


def input_digest(payload) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def report_exit_code(report: dict) -> int:
    """0 when every proved-statement check passed, 1 otherwise."""
    return 1 if any(c["status"] == FAIL for c in report["checks"]) else 0


def _finish(
    command: str, digest_payload, results: dict, checks: list[CheckLine], t0: float
) -> dict:
    return {
        "command": command,
        "input_digest": input_digest(digest_payload),
        "results": results,
        "checks": [c.to_dict() for c in checks],
        "wall_time_ms": int((time.perf_counter() - t0) * 1000),
    }


def _bfunction_block(b: BFunction) -> dict:
    return {
        "factors": [
            {"root": format_rational(rho), "multiplicity": m} for rho, m in b.factors
        ],
        "factored": b.factored_string(),
        "degree": b.degree,
    }


# -- bfunction -------------------------------------------------------------


def run_bfunction_generic(n: int, k: int) -> dict:
    t0 = time.perf_counter()
    candidates = {
        f"r={r}": _bfunction_block(generic_bsat(n, k, r)) for r in (n - 1, n - 2)
    }
    principal = generic_bsat(n, k, n - 1)
    results = {
        "n": n,
        "k": k,
        "candidates": candidates,
        "shifts": [format_rational(rho) for rho in generic_shifts(n, k)],
        "top_degree_bound": u_q_bound(principal, n, k),
    }
    checks = [_exponent_conjecture_line(n, k)]
    payload = {"mode": "generic", "n": n, "k": k}
    return _finish(f"bfunction --generic --n {n} --k {k}", payload, results, checks, t0)


def _exponent_conjecture_line(n: int, k: int) -> CheckLine:
    """Status of the (s+1)-exponent question: r = n-1 or n-2.

    In the plane the independent isolated-singularity computation decides it
    exactly; in higher dimension the run does not decide it.
    """
    statement = (
        "the multiplicity of -1 as a root of the b-function of a generic "
        "arrangement is n-1 (upper bound proved; exactness conjectural for "
        "n >= 3, decided by the Jacobian-ideal computation for n = 2)"
    )
    status = UNVERIFIED
    if n == 2 and k <= _ORACLE_K_CAP:
        oracle = isolated_homog_bsat(defining_poly(generic_arrangement(2, k)))
        if oracle.as_dict() == generic_bsat(2, k, 1).as_dict():
            status = CONSISTENT
    return CheckLine(
        name="exponent-candidate",
        statement=statement,
        instance=f"n={n}, k={k}",
        status=status,
    )


def run_bfunction_isolated(arrangement: dict) -> dict:
    t0 = time.perf_counter()
    arr = parse_arrangement(arrangement)
    q = defining_poly(arr)
    b = isolated_homog_bsat(q)
    results = {
        "n": arr.n,
        "k": arr.k,
        "bfunction": _bfunction_block(b),
        "top_degree_bound": u_q_bound(b, arr.n, arr.k),
    }
    checks: list[CheckLine] = []
    if arr.n >= 2 and arr.k >= arr.n and is_generic(arr):
        expected = generic_bsat(arr.n, arr.k, arr.n - 1)
        checks.append(
            CheckLine(
                name="isolated-matches-closed-form",
                statement=(
                    "the Jacobian-ideal b-function of a generic arrangement "
                    "equals the closed form with (s+1)-exponent n-1"
                ),
                instance=f"n={arr.n}, k={arr.k}",
                status=PASS if b.as_dict() == expected.as_dict() else FAIL,
            )
        )
    payload = {"mode": "isolated", "arrangement": arrangement_to_json(arr)}
    return _finish("bfunction --isolated", payload, results, checks, t0)


# -- milnor ----------------------------------------------------------------


def run_milnor(arrangement: dict, max_degree: int | None = None) -> dict:
    t0 = time.perf_counter()
    arr = parse_arrangement(arrangement)
    require_generic(arr)
    profile = u_profile(arr, r_max=max_degree)
    n, k = arr.n, arr.k
    lattice = or_dimension(n, k)
    results = {
        "n": n,
        "k": k,
        "u": list(profile.u),
        "total": profile.total,
        "window_top": profile.window_top,
        "tail": list(profile.tail),
        "lattice_count": lattice,
    }
    checks = [
        CheckLine(
            name="total-matches-lattice-count",
            statement=(
                "the total top local cohomology dimension equals the "
                "chamber-count formula C(k-2,n-2) + k*C(k-2,n-1)"
            ),
            instance=f"n={n}, k={k}",
            status=PASS if profile.total == lattice else FAIL,
        )
    ]
    if k > n:
        window_ok = all(
            (profile.u[r] != 0) == (r <= profile.window_top)
            for r in range(len(profile.u))
        ) and all(d == 0 for d in profile.tail)
        checks.append(
            CheckLine(
                name="nonvanishing-window",
                statement=(
                    "the graded piece at degree r is nonzero exactly for "
                    "0 <= r <= 2k-n-2"
                ),
                instance=f"n={n}, k={k}",
                status=PASS if window_ok else FAIL,
            )
        )
    else:
        checks.append(
            CheckLine(
                name="nonvanishing-window",
                statement=(
                    "the graded piece at degree r is nonzero exactly for "
                    "0 <= r <= 2k-n-2 (stated for k > n)"
                ),
                instance=f"n={n}, k={k}",
                status=NOT_APPLICABLE,
            )
        )
    for r in range(len(profile.u)):
        expected = conjectured_u(n, k, r)
        matches = profile.u[r] == expected
        if k - n + 1 <= r <= k - 1:
            status = PASS if matches else FAIL
            claim = (
                "on the middle window k-n+1 <= r <= k-1 the graded "
                "dimension equals C(k-2,n-1)"
            )
        else:
            status = CONSISTENT if matches else UNVERIFIED
            claim = (
                "the graded dimension matches the conjectured closed-form "
                "profile (binomial ramp, plateau, symmetric descent)"
            )
        detail = f"n={n}, k={k}, r={r}: observed {profile.u[r]}, closed form {expected}"
        checks.append(
            CheckLine(
                name="profile-degree-value",
                statement=claim,
                instance=detail,
                status=status,
            )
        )
    payload = {"arrangement": arrangement_to_json(arr), "max_degree": max_degree}
    echo = "milnor" if max_degree is None else f"milnor --max-degree {max_degree}"
    return _finish(echo, payload, results, checks, t0)


# -- length ----------------------------------------------------------------


def run_length(arrangement: dict) -> dict:
    t0 = time.perf_counter()
    arr = parse_arrangement(arrangement)
    value = holonomic_length(arr)
    table = inclusion_exclusion_table(arr)
    top = h_top_nonvanishing(arr)
    alternating = sum(sub if i % 2 == 1 else -sub for i, sub in table)
    results = {
        "n": arr.n,
        "k": arr.k,
        "length": value,
        "top_cohomology_nonvanishing": top,
        "inclusion_exclusion": [[i, sub] for i, sub in table],
    }
    checks = [
        CheckLine(
            name="length-recursion-consistency",
            statement=(
                "the alternating sum over proper sublocalizations plus the "
                "top-cohomology correction reproduces the reported length"
            ),
            instance=f"n={arr.n}, k={arr.k}",
            status=PASS if alternating + (1 if top else 0) == value else FAIL,
        )
    ]
    payload = {"arrangement": arrangement_to_json(arr)}
    return _finish("length", payload, results, checks, t0)


# -- rewrite ---------------------------------------------------------------


def parse_product_spec(text: str, k: int) -> tuple[int, ...]:
    """Parse a 1-based comma list of hyperplane indices into multiplicities."""
    mults = [0] * k
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            raise UsageError("empty entry in the product index list")
        try:
            idx = int(piece)
        except ValueError as exc:
            raise UsageError(f"product indices must be integers, got {piece!r}") from exc
        if not 1 <= idx <= k:
            raise UsageError(f"product index {idx} out of range 1..{k}")
        mults[idx - 1] += 1
    if not any(mults):
        raise UsageError("the product index list is empty")
    return tuple(mults)


def run_rewrite(arrangement: dict, product: str, degree: int | None = None) -> dict:
    t0 = time.perf_counter()
    arr = parse_arrangement(arrangement)
    mults = parse_product_spec(product, arr.k)
    r = sum(mults)
    if degree is not None and degree != r:
        raise UsageError(
            f"--degree {degree} does not match the listed product (degree {r})"
        )
    if not is_standard_product(arr.n, arr.k, mults):
        raise PreconditionError(
            "the product is not standard: it must involve at least k-n+1 "
            "distinct hyperplanes"
        )
    result = rewrite_to_basis(arr, mults)
    verified = verify_rewrite(arr, result)
    basis_size = len(basis_mult_vectors(arr.n, arr.k, r))
    coeff_rows = [
        {"monomial": list(m), "coefficient": format_rational(c)}
        for m, c in sorted(result.basis_coefficients.items())
    ]
    results = {
        "n": arr.n,
        "k": arr.k,
        "degree": r,
        "product": list(mults),
        "basis_coefficients": coeff_rows,
        "basis_size": basis_size,
        "monomials_used": len(coeff_rows),
        "certificate_length": len(result.certificate),
    }
    checks = [
        CheckLine(
            name="rewrite-certificate",
            statement=(
                "the difference between the product and its basis combination "
                "equals the certified combination of relation generators, "
                "re-expanded exactly"
            ),
            instance=f"n={arr.n}, k={arr.k}, degree={r}",
            status=PASS if verified else FAIL,
        ),
        CheckLine(
            name="rewrite-basis-bound",
            statement=(
                "a standard product rewrites using at most C(k-2,n-1) basis "
                "monomials"
            ),
            instance=f"n={arr.n}, k={arr.k}, degree={r}",
            status=PASS if len(coeff_rows) <= basis_size else FAIL,
        ),
    ]
    payload = {
        "arrangement": arrangement_to_json(arr),
        "product": sorted(
            i + 1 for i, m in enumerate(mults) for _ in range(m)
        ),
    }
    echo = f"rewrite --product {product} --degree {r}"
    return _finish(echo, payload, results, checks, t0)


# -- verify ----------------------------------------------------------------


def parse_grid(grid: str) -> list[tuple[int, int]]:
    """Parse a grid expression like "n=2..3,k=n..6" into (n, k) instances.

    The lower bound of the k range may be the literal "n", meaning each
    dimension starts at its own diagonal.
    """
    parts: dict[str, tuple[str, str]] = {}
    for piece in grid.split(","):
        piece = piece.strip()
        if "=" not in piece:
            raise UsageError(f"grid entry {piece!r} is not of the form name=range")
        name, _, bounds = piece.partition("=")
        name = name.strip()
        if name not in ("n", "k"):
            raise UsageError(f"unknown grid variable {name!r} (expected n or k)")
        if name in parts:
            raise UsageError(f"grid variable {name!r} given twice")
        lo, sep, hi = bounds.partition("..")
        parts[name] = (lo.strip(), hi.strip() if sep else lo.strip())
    if set(parts) != {"n", "k"}:
        raise UsageError("grid must specify both n and k, e.g. n=2..3,k=n..6")

    def as_int(text: str, what: str) -> int:
        try:
            value = int(text)
        except ValueError as exc:
            raise UsageError(f"bad {what} bound {text!r} in grid") from exc
        if value < 1:
            raise UsageError(f"{what} bounds must be positive, got {value}")
        return value

    n_lo = as_int(parts["n"][0], "n")
    n_hi = as_int(parts["n"][1], "n")
    k_lo_text, k_hi_text = parts["k"]
    instances = []
    for n in range(n_lo, n_hi + 1):
        k_lo = n if k_lo_text == "n" else as_int(k_lo_text, "k")
        k_hi = n if k_hi_text == "n" else as_int(k_hi_text, "k")
        if k_lo < n:
            raise UsageError(
                f"grid includes k={k_lo} < n={n}; the verified statements "
                "require at least as many hyperplanes as variables"
            )
        for k in range(k_lo, k_hi + 1):
            instances.append((n, k))
    if not instances:
        raise UsageError("grid is empty")
    return instances


def _thread_count() -> int:
    raw = os.environ.get("BSAT_ARR_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError as exc:
            raise UsageError(f"BSAT_ARR_THREADS must be an integer, got {raw!r}") from exc
        if value < 1:
            raise UsageError("BSAT_ARR_THREADS must be at least 1")
        return value
    return os.cpu_count() or 1


def _verify_one(arr: Arrangement, label: str) -> list[CheckLine]:
    n, k = arr.n, arr.k
    if k < n:
        raise PreconditionError(
            "verification requires at least as many hyperplanes as variables"
        )
    require_generic(arr)
    lines = list(chain_check(arr))

    if n == 2:
        lines.append(
            CheckLine(
                name="inplane-containment",
                statement=(
                    "in the plane, the (2k+1)-st power of the maximal ideal "
                    "lies in the ideal of the two partial derivatives of Q"
                ),
                instance=label,
                status=PASS if verify_inplane(arr) else FAIL,
            )
        )

    q = defining_poly(arr)
    euler_samples = [
        (Polynomial.one(n), tuple([0] * n)),
        (product_of(arr, tuple(range(k - 1))), tuple([1] + [0] * (n - 1))),
    ]
    euler_ok = all(euler_identity_check(q, g, m) for g, m in euler_samples)
    lines.append(
        CheckLine(
            name="euler-scaling-identity",
            statement=(
                "summing the partials of x_i m g Q^s reproduces "
                "m g (ks + n + deg(mg)) Q^s"
            ),
            instance=f"{label}, sampled numerators",
            status=PASS if euler_ok else FAIL,
        )
    )

    triples = admissible_minor_indices(arr, k - n + 1)
    i_set, frame, j_set = triples[0]
    delta_samples = [tuple([0] * n), tuple([1] + [0] * (n - 1))]
    delta_ok = all(
        delta_production_check(arr, m, i_set, j_set, frame) for m in delta_samples
    )
    lines.append(
        CheckLine(
            name="minor-production-identity",
            statement=(
                "the cofactor combination of frame fields applied to "
                "m H_I Q^s produces (s+1) m Delta Q^s plus V(m) H_I Q^s"
            ),
            instance=f"{label}, first admissible minor",
            status=PASS if delta_ok else FAIL,
        )
    )

    q_s = TwistedElement.q_power_s(q)
    pij_ok = all(
        annihilates(pij_operator(arr, i, j), q_s)
        for i in range(n)
        for j in range(i + 1, n)
    )
    lines.append(
        CheckLine(
            name="pair-derivation-annihilation",
            statement=(
                "every pair-derivation generator built from the full product "
                "annihilates Q^s"
            ),
            instance=f"{label}, all frame pairs",
            status=PASS if pij_ok else FAIL,
        )
    )

    lines.append(
        CheckLine(
            name="relation-completeness",
            statement=(
                "the scaling relations generate all relations among the "
                "negative-degree generators (conjectural beyond the proved "
                "window; not decided by this run)"
            ),
            instance=label,
            status=UNVERIFIED,
        )
    )
    lines.append(_exponent_conjecture_line(n, k))
    return lines


def run_verify(grid: str | None = None, arrangement: dict | None = None) -> dict:
    t0 = time.perf_counter()
    if grid is not None and arrangement is not None:
        raise UsageError("pass either a grid or an arrangement, not both")
    if arrangement is not None:
        arr = parse_arrangement(arrangement)
        jobs = [(arr, f"n={arr.n}, k={arr.k}")]
        payload = {"arrangement": arrangement_to_json(arr)}
        echo = "verify"
    else:
        grid = grid or DEFAULT_GRID
        instances = parse_grid(grid)
        jobs = [
            (generic_arrangement(n, k), f"n={n}, k={k}") for n, k in instances
        ]
        payload = {"grid": grid}
        echo = f"verify --grid {grid}"

    threads = _thread_count()
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_verify_one, arr, label) for arr, label in jobs]
            per_job = [f.result() for f in futures]
    else:
        per_job = [_verify_one(arr, label) for arr, label in jobs]

    checks = [line for lines in per_job for line in lines]
    counts: dict[str, int] = {}
    for line in checks:
        counts[line.status] = counts.get(line.status, 0) + 1
    results = {
        "instances": [{"n": arr.n, "k": arr.k} for arr, _ in jobs],
        "status_counts": dict(sorted(counts.items())),
        "checks_run": len(checks),
    }
    return _finish(echo, payload, results, checks, t0)


# -- human-readable rendering ----------------------------------------------


def report_to_table(report: dict) -> str:
    out = []
    out.append(f"command       {report['command']}")
    out.append(f"input digest  {report['input_digest']}")
    out.append(f"wall time ms  {report['wall_time_ms']}")
    out.append("")
    out.append("results")
    for key in sorted(report["results"]):
        value = report["results"][key]
        rendered = value if isinstance(value, (str, int, bool)) else json.dumps(
            value, sort_keys=True
        )
        out.append(f"  {key:<28} {rendered}")
    checks = report["checks"]
    if checks:
        out.append("")
        out.append("checks")
        name_w = max(len(c["name"]) for c in checks)
        status_w = max(len(c["status"]) for c in checks)
        for c in checks:
            out.append(
                f"  {c['status']:<{status_w}}  {c['name']:<{name_w}}  {c['instance']}"
            )
    return "\n".join(out)
