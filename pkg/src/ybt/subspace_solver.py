"""Exact null spaces: R-symmetric tensors, braid intertwiner spaces, certificates.

The defining relations are linear in the unknown operator Z, vectorized
row-major, and solved by fraction-free elimination over integers so that
every reported basis element satisfies its system exactly.  Deciding
whether a computed subspace holds an invertible element is done by a
seeded randomized search with an explicit budget; a miss is evidence,
never a proof of non-existence.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BackendMismatchError, ShapeMismatchError, SizeCapError
from .tensor_core import (
    Operator,
    RATIONAL,
    determinant,
    embed,
    leg_permute,
    residual,
)
from .twist_engine import CheckReport
from .ybe_check import braid_matrix

#: Largest allowed side N^legs of the operators being solved for.
DEFAULT_SIZE_CAP = 64


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent operators spanning an exact solution space."""

    site_dim: int
    legs: int
    backend: str
    basis: tuple[Operator, ...]

    def __post_init__(self):
        for op in self.basis:
            if (op.site_dim, op.legs, op.backend) != (
                self.site_dim,
                self.legs,
                self.backend,
            ):
                raise ShapeMismatchError("basis elements must share one space")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def is_independent(self) -> bool:
        """Exact rank check: dimension equals the rank of the stacked vectors."""
        eqs = [_vectorize(op) for op in self.basis]
        pivots = _eliminate([_integerize(e) for e in eqs if e])
        return len(pivots) == self.dimension


# ---------------------------------------------------------------------------
# sparse fraction-free linear algebra over the rationals
# ---------------------------------------------------------------------------


def _vectorize(op: Operator) -> dict[int, Fraction]:
    side = op.side
    return {
        i * side + j: v
        for i, row in enumerate(op.rows)
        for j, v in enumerate(row)
        if v
    }


def _integerize(row: dict[int, Fraction]) -> dict[int, int]:
    lcm = 1
    for v in row.values():
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    out = {j: int(v * lcm) for j, v in row.items()}
    g = 0
    for v in out.values():
        g = math.gcd(g, v)
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def _strip_content(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def _eliminate(rows: list[dict[int, int]]) -> dict[int, dict[int, int]]:
    """Online forward elimination; returns pivot column -> reduced row."""
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = _strip_content(row)
                break
            p, a = piv[c], row[c]
            new: dict[int, int] = {}
            for j, v in row.items():
                w = p * v - a * piv.get(j, 0)
                if w:
                    new[j] = w
            for j, v in piv.items():
                if j not in row:
                    new[j] = -a * v
            row = _strip_content(new) if new else new
    return pivots


def _kernel_basis(
    eqs: list[dict[int, Fraction]], num_vars: int
) -> list[dict[int, Fraction]]:
    """Canonical basis of the exact solution set of `eqs` (rows of A x = 0).

    Basis vectors are integer, content-free, leading entry positive, one
    per free column in ascending column order.
    """
    int_rows = [_integerize(e) for e in eqs if e]
    pivots = _eliminate(int_rows)
    piv_cols = sorted(pivots)
    # reduced echelon: express each pivot variable through free ones only
    rref: dict[int, dict[int, Fraction]] = {}
    for c in reversed(piv_cols):
        p = pivots[c][c]
        out: dict[int, Fraction] = {}
        for j, v in pivots[c].items():
            if j == c:
                continue
            coef = Fraction(v, p)
            sub = rref.get(j)
            if sub is None:
                out[j] = out.get(j, Fraction(0)) + coef
                if not out[j]:
                    del out[j]
            else:
                for jj, vv in sub.items():
                    out[jj] = out.get(jj, Fraction(0)) - coef * vv
                    if not out[jj]:
                        del out[jj]
        rref[c] = out  # x_c + sum(out[f] * x_f) = 0, f free
    basis = []
    piv_set = pivots.keys()
    for f in range(num_vars):
        if f in piv_set:
            continue
        vec = {f: Fraction(1)}
        for c in piv_cols:
            w = rref[c].get(f)
            if w:
                vec[c] = -w
        basis.append(_canonical_vector(vec))
    _verify_kernel(int_rows, basis)
    return basis


def _canonical_vector(vec: dict[int, Fraction]) -> dict[int, Fraction]:
    lcm = 1
    for v in vec.values():
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    ints = {j: int(v * lcm) for j, v in vec.items()}
    g = 0
    for v in ints.values():
        g = math.gcd(g, v)
    if ints[min(ints)] < 0:
        g = -g
    return {j: Fraction(v, g) for j, v in ints.items()}


def _verify_kernel(int_rows: list[dict[int, int]], basis: list[dict[int, Fraction]]):
    # independent substitution of every vector into every touched equation
    touching: dict[int, list[tuple[int, int]]] = {}
    for ei, row in enumerate(int_rows):
        for j, v in row.items():
            touching.setdefault(j, []).append((ei, v))
    for vec in basis:
        sums: dict[int, Fraction] = {}
        for j, val in vec.items():
            for ei, coef in touching.get(j, ()):
                sums[ei] = sums.get(ei, Fraction(0)) + coef * val
        assert all(s == 0 for s in sums.values()), "kernel vector fails its system"


def _devectorize(
    vec: dict[int, Fraction], site_dim: int, legs: int
) -> Operator:
    side = site_dim**legs
    rows = [[Fraction(0)] * side for _ in range(side)]
    for idx, v in vec.items():
        rows[idx // side][idx % side] = v
    return Operator(site_dim, legs, RATIONAL, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# the linear systems
# ---------------------------------------------------------------------------


def _require_exact(op: Operator, what: str):
    if op.backend != RATIONAL:
        raise BackendMismatchError(
            f"{what} requires the rational backend; complex matrices can only "
            "be checked for residuals, not solved exactly"
        )


def _commutation_equations(
    b_left: Operator, b_right: Operator
) -> list[dict[int, Fraction]]:
    """Rows of the linear system B_left Z - Z B_right = 0 over vec(Z)."""
    side = b_left.side
    rows_nz = [
        [(c, v) for c, v in enumerate(row) if v] for row in b_left.rows
    ]
    cols_nz: list[list[tuple[int, Fraction]]] = [[] for _ in range(side)]
    for c, row in enumerate(b_right.rows):
        for b, v in enumerate(row):
            if v:
                cols_nz[b].append((c, v))
    eqs = []
    for a in range(side):
        for b in range(side):
            row: dict[int, Fraction] = {}
            for c, v in rows_nz[a]:
                key = c * side + b
                row[key] = row.get(key, Fraction(0)) + v
            for c, v in cols_nz[b]:
                key = a * side + c
                row[key] = row.get(key, Fraction(0)) - v
            row = {k: v for k, v in row.items() if v}
            if row:
                eqs.append(row)
    return eqs


def _embedded_braids(r: Operator, n: int) -> list[Operator]:
    b = braid_matrix(r)
    return [embed(b, [i, i + 1], n) for i in range(1, n)]


def _check_cap(site_dim: int, n: int, size_cap: int):
    if site_dim**n > size_cap:
        raise SizeCapError(
            f"operators on {n} legs have side {site_dim ** n}, above the cap "
            f"{size_cap}; raise size_cap explicitly to proceed"
        )


def _solve_pairs(
    r: Operator, r_tilde: Operator, n: int, size_cap: int
) -> SubspaceBasis:
    _check_cap(r.site_dim, n, size_cap)
    eqs: list[dict[int, Fraction]] = []
    for bl, br in zip(_embedded_braids(r, n), _embedded_braids(r_tilde, n)):
        eqs.extend(_commutation_equations(bl, br))
    side = r.site_dim**n
    vectors = _kernel_basis(eqs, side * side)
    ops = tuple(_devectorize(v, r.site_dim, n) for v in vectors)
    return SubspaceBasis(r.site_dim, n, RATIONAL, ops)


def r_symmetric_space(
    r: Operator, n: int, size_cap: int = DEFAULT_SIZE_CAP
) -> SubspaceBasis:
    """Exact basis of n-leg operators commuting with every adjacent braid matrix.

    For n = 1 the condition is empty and the full matrix space is returned.
    """
    if r.legs != 2:
        raise ShapeMismatchError("r must have 2 legs")
    _require_exact(r, "r_symmetric_space")
    if n < 1:
        raise ShapeMismatchError(f"n must be >= 1, got {n}")
    if n == 1:
        units = []
        d = r.site_dim
        for i in range(d):
            for j in range(d):
                rows = [
                    [Fraction(int(a == i and b == j)) for b in range(d)]
                    for a in range(d)
                ]
                units.append(Operator(d, 1, RATIONAL, tuple(tuple(x) for x in rows)))
        return SubspaceBasis(d, 1, RATIONAL, tuple(units))
    return _solve_pairs(r, r, n, size_cap)


def intertwiner_space(
    r: Operator, r_tilde: Operator, n: int, size_cap: int = DEFAULT_SIZE_CAP
) -> SubspaceBasis:
    """Exact basis of all n-leg Z with R_i Z = tau_i(Z) Rt_i at every position.

    Equivalently B_i Z = Z Bt_i for the embedded braid matrices, so for
    r = r_tilde this is exactly the R-symmetric space.
    """
    if r.legs != 2 or r_tilde.legs != 2:
        raise ShapeMismatchError("r and r_tilde must have 2 legs")
    if r.site_dim != r_tilde.site_dim or r.backend != r_tilde.backend:
        raise ShapeMismatchError("r and r_tilde must share site_dim and backend")
    _require_exact(r, "intertwiner_space")
    if n < 2:
        raise ShapeMismatchError(f"n must be >= 2, got {n}")
    return _solve_pairs(r, r_tilde, n, size_cap)


def braid_intertwine_residual(
    r: Operator, r_tilde: Operator, omega: Operator, tol: float | None = None
) -> CheckReport:
    """Positionwise residuals of R_i Omega - tau_i(Omega) Rt_i, i = 1..n-1."""
    if r.legs != 2 or r_tilde.legs != 2:
        raise ShapeMismatchError("r and r_tilde must have 2 legs")
    n = omega.legs
    if n < 2:
        raise ShapeMismatchError("omega must act on at least 2 legs")
    residuals = {}
    for i in range(1, n):
        r_i = embed(r, [i, i + 1], n)
        rt_i = embed(r_tilde, [i, i + 1], n)
        sigma = list(range(1, n + 1))
        sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
        tau_omega = leg_permute(omega, sigma)
        residuals[f"position_{i}"] = residual(r_i @ omega, tau_omega @ rt_i)
    return CheckReport.build(residuals, omega.backend, tol)


def r_symmetric_residual(r: Operator, z: Operator):
    """Worst commutator entry of z against the embedded braid matrices."""
    if r.legs != 2:
        raise ShapeMismatchError("r must have 2 legs")
    if z.legs < 2:
        return Fraction(0) if z.backend == RATIONAL else 0.0
    worst = None
    for b in _embedded_braids(r, z.legs):
        res = residual(b @ z, z @ b)
        if worst is None or res > worst:
            worst = res
    return worst


def membership_coefficients(basis: SubspaceBasis, op: Operator):
    """Exact coefficients expressing `op` in `basis`, or None if outside the span."""
    if (op.site_dim, op.legs, op.backend) != (
        basis.site_dim,
        basis.legs,
        basis.backend,
    ):
        raise ShapeMismatchError("operator does not live in the basis space")
    _require_exact(op, "membership_coefficients")
    if not basis.basis:
        return None
    d = basis.dimension
    # unknowns: d combination coefficients plus one scale t for the target;
    # kernel vectors with t != 0 witness membership
    columns = [_vectorize(b) for b in basis.basis]
    target = _vectorize(op)
    eqs: dict[int, dict[int, Fraction]] = {}
    for ci, col in enumerate(columns):
        for entry, v in col.items():
            eqs.setdefault(entry, {})[ci] = v
    for entry, v in target.items():
        eqs.setdefault(entry, {})[d] = -v
    kernel = _kernel_basis(list(eqs.values()), d + 1)
    for vec in kernel:
        t = vec.get(d)
        if t:
            return tuple(vec.get(i, Fraction(0)) / t for i in range(d))
    return None


def invertible_certificate(
    basis: SubspaceBasis, budget: int = 50, seed: int = 0
):
    """Search for an invertible element of the span; None after `budget` misses.

    The first attempt is the all-ones combination, later ones draw integer
    coefficients from [-9, 9], widening the range every ten attempts.  A
    returned certificate is exact; a miss is explicitly not a proof that
    no invertible element exists.
    """
    if not basis.basis:
        return None
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    _require_exact(basis.basis[0], "invertible_certificate")
    rng = random.Random(seed)
    d = basis.dimension
    for attempt in range(budget):
        if attempt == 0:
            coeffs = [Fraction(1)] * d
        else:
            bound = 9 + 9 * (attempt // 10)
            coeffs = [Fraction(rng.randint(-bound, bound)) for _ in range(d)]
        combo = None
        for c, op in zip(coeffs, basis.basis):
            if not c:
                continue
            term = c * op
            combo = term if combo is None else combo + term
        if combo is None:
            continue
        if determinant(combo) != 0:
            return tuple(coeffs), combo
    return None
