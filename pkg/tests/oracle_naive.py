"""Brute-force enumeration oracle: generate every symmetric table, filter by
the axiom checker, and group by explicit permutation isomorphism.

Deliberately naive and independent of the enumeration module; usable for
sizes up to 5.
"""

from itertools import permutations, product

from effalg.core import FiniteEffectAlgebra, validate


def _all_tables(n):
    """Every symmetric candidate table with forced zero and one rows."""
    one = n - 1
    middles = list(range(1, n - 1))
    cells = [(x, y) for i, x in enumerate(middles) for y in middles[i:]]
    domain = [None] + list(range(n))
    for values in product(domain, repeat=len(cells)):
        table = [[None] * n for _ in range(n)]
        for y in range(n):
            table[0][y] = y
            table[y][0] = y
        table[one][0] = one
        for (x, y), v in zip(cells, values):
            table[x][y] = v
            table[y][x] = v
        yield FiniteEffectAlgebra(
            size=n, zero=0, one=one, sum=tuple(tuple(r) for r in table))


def _isomorphic_by_scan(E1, E2):
    """Try every permutation fixing zero and one."""
    n = E1.size
    middles = list(range(1, n - 1))
    for perm in permutations(middles):
        rho = [0] * n
        rho[0] = 0
        rho[n - 1] = n - 1
        for x, px in zip(middles, perm):
            rho[x] = px
        ok = True
        for x in range(n):
            for y in range(n):
                v = E1.sum[x][y]
                w = E2.sum[rho[x]][rho[y]]
                if (v is None) != (w is None) or (v is not None and rho[v] != w):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def naive_classes(n):
    """All valid algebras of size n grouped into isomorphism classes."""
    assert n <= 5, "the naive scan is exponential; keep it tiny"
    reps = []
    for E in _all_tables(n):
        if validate(E):
            continue
        if not any(_isomorphic_by_scan(E, r) for r in reps):
            reps.append(E)
    return reps
