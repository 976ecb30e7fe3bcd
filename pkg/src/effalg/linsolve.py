"""Exact rational linear feasibility and optimization.

Two independent decision routes:

* a two-phase primal simplex over Fractions (Bland's rule, so runs are
  deterministic and finite), producing either a point or a Farkas
  certificate of infeasibility;
* Fourier-Motzkin elimination, kept deliberately separate so it can serve
  as an oracle for the simplex on small systems.

Everything works on the standard form  A x = b, x >= 0; callers add slack
variables for inequalities and upper bounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .errors import CapExceeded

__all__ = [
    "SimplexResult",
    "solve_standard",
    "verify_farkas",
    "fourier_motzkin_feasible",
    "matrix_rank",
    "FM_VARIABLE_CAP",
]

ZERO = Fraction(0)
ONE = Fraction(1)

FM_VARIABLE_CAP = 12
_FM_ROW_CAP = 200_000


class SimplexResult(NamedTuple):
    status: str  # optimal | infeasible | unbounded
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    farkas: tuple[Fraction, ...] | None = None  # multipliers over input rows


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    inv = ONE / piv
    tab[row] = [v * inv for v in tab[row]]
    prow = tab[row]
    for i, r in enumerate(tab):
        if i != row and r[col] != 0:
            f = r[col]
            tab[i] = [a - f * p for a, p in zip(r, prow)]
    basis[row] = col


def _run_pivots(tab, obj, basis, allowed):
    """Minimize obj (a mutable reduced-cost row with rhs last) with Bland's rule."""
    m = len(tab)
    while True:
        col = -1
        for j in allowed:
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return "optimal"
        row, best = -1, None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row < 0:
            return "unbounded:%d" % col
        _pivot(tab, basis, row, col)
        f = obj[col]
        prow = tab[row]
        for j in range(len(obj)):
            obj[j] -= f * prow[j]


def solve_standard(A, b, c=None) -> SimplexResult:
    """Solve min c.x subject to A x = b, x >= 0 (feasibility if c is None).

    Returns a deterministic optimal vertex, an unbounded verdict, or a
    Farkas certificate: multipliers lam over the rows of A with
    lam.A <= 0 componentwise and lam.b > 0.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    signs = [ONE if b[i] >= 0 else -ONE for i in range(m)]
    tab = [[signs[i] * Fraction(v) for v in A[i]] + [ZERO] * m + [signs[i] * Fraction(b[i])]
           for i in range(m)]
    for i in range(m):
        tab[i][n + i] = ONE
    basis = [n + i for i in range(m)]

    # phase 1: minimize the artificial total
    obj = [ZERO] * (n + m + 1)
    for j in range(n + m + 1):
        obj[j] = -sum(tab[i][j] for i in range(m))
    for i in range(m):
        obj[n + i] += ONE
    allowed = list(range(n + m))
    status = _run_pivots(tab, obj, basis, allowed)
    assert status == "optimal", "phase 1 is bounded below by zero"
    infeas = -obj[-1]
    if infeas > 0:
        # reduced cost under artificial k is 1 - y_k
        lam = tuple(signs[i] * (ONE - obj[n + i]) for i in range(m))
        return SimplexResult("infeasible", farkas=lam)

    # drive leftover artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)

    def extract():
        x = [ZERO] * n
        for i, bi in enumerate(basis):
            if bi < n:
                x[bi] = tab[i][-1]
        return tuple(x)

    if c is None:
        return SimplexResult("optimal", x=extract(), objective=ZERO)

    # phase 2 over the real objective; artificial columns stay out
    cost = [Fraction(v) for v in c]
    obj = [ZERO] * (n + m + 1)
    for j in range(n):
        obj[j] = cost[j]
    for i, bi in enumerate(basis):
        if bi < n and cost[bi] != 0:
            f = cost[bi]
            for j in range(n + m + 1):
                obj[j] -= f * tab[i][j]
    status = _run_pivots(tab, obj, basis, list(range(n)))
    if status.startswith("unbounded"):
        return SimplexResult("unbounded")
    x = extract()
    value = sum(ci * xi for ci, xi in zip(cost, x))
    return SimplexResult("optimal", x=x, objective=value)


def verify_farkas(A, b, lam) -> bool:
    """Independent check that lam certifies infeasibility of Ax=b, x>=0."""
    if len(lam) != len(A):
        return False
    n = len(A[0]) if A else 0
    for j in range(n):
        if sum(lam[i] * A[i][j] for i in range(len(A))) > 0:
            return False
    return sum(li * bi for li, bi in zip(lam, b)) > 0


def _normalize(coeffs, rhs):
    """Scale a <=-row by a positive rational to integer, gcd-1 form."""
    denom = 1
    for v in coeffs:
        denom = denom * v.denominator // gcd(denom, v.denominator)
    denom = denom * rhs.denominator // gcd(denom, rhs.denominator)
    ints = [int(v * denom) for v in coeffs]
    r = int(rhs * denom)
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    g = gcd(g, abs(r))
    if g > 1:
        ints = [v // g for v in ints]
        r //= g
    return tuple(ints), r


def fourier_motzkin_feasible(rows, n_vars) -> bool:
    """Feasibility of a system of <=-rows (coeffs, rhs) by variable elimination.

    Exponential in the worst case; guarded by FM_VARIABLE_CAP and a row cap.
    Kept free of any simplex machinery on purpose.
    """
    if n_vars > FM_VARIABLE_CAP:
        raise CapExceeded(f"{n_vars} variables exceed the elimination cap")

    system = set()
    for coeffs, rhs in rows:
        coeffs = [Fraction(v) for v in coeffs]
        ints, r = _normalize(coeffs, Fraction(rhs))
        if all(v == 0 for v in ints):
            if r < 0:
                return False
            continue
        system.add((ints, r))

    remaining = list(range(n_vars))
    while remaining:
        # pick the variable with the smallest pos*neg fan-out
        best_var, best_cost = None, None
        for v in remaining:
            p = sum(1 for row, _ in system if row[v] > 0)
            q = sum(1 for row, _ in system if row[v] < 0)
            cost = p * q
            if best_cost is None or cost < best_cost:
                best_var, best_cost = v, cost
        var = best_var
        remaining.remove(var)

        pos = [(r, c) for r, c in system if r[var] > 0]
        neg = [(r, c) for r, c in system if r[var] < 0]
        keep = {(r, c) for r, c in system if r[var] == 0}
        for rp, cp in pos:
            ap = rp[var]
            for rn, cn in neg:
                an = -rn[var]
                combo = [Fraction(an * a + ap * b) for a, b in zip(rp, rn)]
                rhs = Fraction(an * cp + ap * cn)
                ints, r = _normalize(combo, rhs)
                if all(v == 0 for v in ints):
                    if r < 0:
                        return False
                    continue
                keep.add((ints, r))
                if len(keep) > _FM_ROW_CAP:
                    raise CapExceeded("elimination blow-up")
        system = keep
    return all(r >= 0 for _, r in system)


def matrix_rank(rows) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    mat = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = ONE / prow[col]
        mat[rank] = prow = [v * inv for v in prow]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * p for a, p in zip(mat[i], prow)]
        rank += 1
    return rank
