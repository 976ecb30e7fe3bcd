"""Registry of executable claims: hypotheses -> conclusion on one instance.

Every registered claim id maps to a one-sentence statement, a list of
named hypothesis predicates, and a conclusion check returning (holds,
witness).  A conclusion that fails while the hypotheses hold is a
release-blocking finding, so conclusions are computed from first
principles (scans and solvers), never assumed.

Statements about structures that cannot exist at this scale (infinite
complete atomic Boolean algebras, non-Archimedean chains) are listed
separately in SCALE_LIMITED with a fixed verdict, to keep the coverage
accounting honest.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .construct import central_decomposition, interval
from .core import FiniteEffectAlgebra, bits, derive_order, difference, validate
from .errors import EffectAlgebraError, UnknownClaim
from .states import (
    StateVector,
    find_subadditive_state,
    state_from_central_finite,
    verify_state,
)
from .structure import (
    blocks,
    center_by_identity,
    compatibility_center,
    compatible,
    finite_elements,
    greatest_sharp_under,
    is_compact,
    is_lattice_ideal,
    is_modular,
    sharp_elements,
    sharp_hat_formula,
    sharp_mask,
    smallest_sharp_over,
)

__all__ = [
    "ClaimReport",
    "CLAIM_IDS",
    "SCALE_LIMITED",
    "statement",
    "check",
    "check_all",
    "sweep",
    "SweepResult",
    "shrink_counterexample",
    "join_difference_family_holds",
    "join_sum_family_holds",
]

DEFAULT_SEED = 20100108


# -- hypothesis predicates -------------------------------------------------


def _h_lattice(E):
    return derive_order(E).is_lattice


def _h_modular(E):
    return _h_lattice(E) and bool(is_modular(E))


def _h_archimedean(E):
    for x in E.elements():
        if x == E.zero:
            continue
        acc, steps = x, 1
        while True:
            nxt = E.sum[acc][x]
            if nxt is None:
                break
            acc = nxt
            steps += 1
            if steps > E.size:
                return False
    return True


def _h_atomic(E):
    order = derive_order(E)
    amask = 0
    for a in order.atoms:
        amask |= 1 << a
    return all(x == E.zero or (order.down[x] & amask)
               for x in E.elements())


def _h_unsharp(E):
    return sharp_mask(E) != (1 << E.size) - 1


def _compact_set(E):
    return [u for u in E.elements() if is_compact(E, u)]


# -- conclusion checks -----------------------------------------------------


def _finite_diff_of_join(E):
    order = derive_order(E)
    F = finite_elements(E)
    for x in F:
        for y in E.elements():
            j = order.join[x][y]
            if difference(E, j, y) not in F:
                return False, (x, y)
    return True, None


def _finite_downward(E):
    order = derive_order(E)
    F = finite_elements(E)
    for x in F:
        for z in bits(order.down[x]):
            if z not in F:
                return False, (x, z)
    return True, None


def _finite_interval_complete(E):
    F = finite_elements(E)
    for x in F:
        if x == E.zero:
            continue
        sub = interval(E, E.zero, x)
        if not derive_order(sub).is_lattice:
            return False, (x,)
    return True, None


def _finite_join_closed(E):
    order = derive_order(E)
    F = finite_elements(E)
    for x in F:
        for y in F:
            if order.join[x][y] not in F:
                return False, (x, y)
    return True, None


def _finite_ideal(E):
    got = is_lattice_ideal(E, finite_elements(E))
    return got.holds, got.witness


def _sharp_hat(E):
    F = finite_elements(E)
    for x in F:
        try:
            hat = sharp_hat_formula(E, x)
            scan = smallest_sharp_over(E, x)
            greatest_sharp_under(E, x)
        except EffectAlgebraError as exc:
            return False, (x, repr(exc))
        if hat != scan:
            return False, (x, hat, scan)
    return True, None


def join_difference_family_holds(E, family, a):
    """(join of family) - a  ==  join of (b - a), for a below every member."""
    order = derive_order(E)
    j = family[0]
    for b in family[1:]:
        j = order.join[j][b]
    left = difference(E, j, a)
    shifted = [difference(E, b, a) for b in family]
    r = shifted[0]
    for s in shifted[1:]:
        r = order.join[r][s]
    return left == r


def _join_difference_pairs(E):
    order = derive_order(E)
    n = E.size
    for a in E.elements():
        above = list(bits(order.up[a]))
        for x, y in combinations(above, 2):
            if not join_difference_family_holds(E, [x, y], a):
                return False, (a, x, y)
        if n <= 8:
            for t in combinations(above, 3):
                if not join_difference_family_holds(E, list(t), a):
                    return False, (a,) + t
    return True, None


def join_sum_family_holds(E, family, b):
    """(join of family) + b == join of (c + b), when the left side exists."""
    order = derive_order(E)
    j = family[0]
    for c in family[1:]:
        j = order.join[j][c]
        if j is None:
            return True  # no join, nothing to claim
    s = E.sum[j][b]
    if s is None:
        return True
    shifted = []
    for c in family:
        cb = E.sum[c][b]
        if cb is None:
            return False
        shifted.append(cb)
    r = shifted[0]
    for t in shifted[1:]:
        r = order.join[r][t]
        if r is None:
            return False
    return r == s


def _join_sum_pairs(E):
    n = E.size
    for b in E.elements():
        for x in range(n):
            for y in range(x + 1, n):
                if not join_sum_family_holds(E, [x, y], b):
                    return False, (x, y, b)
        if n <= 8:
            for t in combinations(range(n), 3):
                if not join_sum_family_holds(E, list(t), b):
                    return False, t + (b,)
    return True, None


def _interval_atomic(E, z):
    sub = interval(E, E.zero, z)
    order = derive_order(sub)
    amask = 0
    for a in order.atoms:
        amask |= 1 << a
    return all(x == sub.zero or (order.down[x] & amask)
               for x in sub.elements())


def _atomic_from_finite_joins(E):
    order = derive_order(E)
    F = finite_elements(E)
    for z in E.elements():
        if z == E.zero:
            continue
        fz = order.down[z] & F.mask
        least_upper = None
        ub = (1 << E.size) - 1
        for d in bits(fz):
            ub &= order.up[d]
        for cand in bits(ub):
            if order.up[cand] & ub == ub:
                least_upper = cand
                break
        if least_upper != z:
            continue  # hypothesis of the claim fails at this z
        if not _interval_atomic(E, z):
            return False, (z,)
    return True, None


def _block_algebra(E, blk) -> FiniteEffectAlgebra:
    members = blk.members()
    pos = {x: i for i, x in enumerate(members)}
    table = tuple(
        tuple(pos[E.sum[x][y]] if E.sum[x][y] is not None else None
              for y in members)
        for x in members)
    return FiniteEffectAlgebra(
        size=len(members), zero=pos[E.zero], one=pos[E.one], sum=table)


def _h_some_block_archimedean_atomic(E):
    """At least one block, viewed as an algebra, is Archimedean and atomic."""
    return any(_h_archimedean(B) and _h_atomic(B)
               for B in (_block_algebra(E, blk) for blk in blocks(E)))


def _atomic_from_block(E):
    order = derive_order(E)
    amask = 0
    for a in order.atoms:
        amask |= 1 << a
    bad = next((x for x in E.elements()
                if x != E.zero and not (order.down[x] & amask)), None)
    return bad is None, None if bad is None else (bad,)


def _sharp_is_atomic_oml(E):
    order = derive_order(E)
    S = sharp_elements(E)
    sm = S.mask
    for s in S:
        for t in S:
            j, w = order.join[s][t], order.meet[s][t]
            if not (sm >> j & 1):
                return False, ("join-escapes", s, t, j)
            if not (sm >> w & 1):
                return False, ("meet-escapes", s, t, w)
            if order.leq(s, t):
                # orthomodular law inside S: t = s v (t ^ s')
                if order.join[s][order.meet[t][E.orth[s]]] != t:
                    return False, ("orthomodular-law", s, t)
    atoms_of_s = [s for s in S if s != E.zero
                  and order.down[s] & sm == (1 << E.zero) | (1 << s)]
    am = 0
    for a in atoms_of_s:
        am |= 1 << a
    for s in S:
        if s != E.zero and not (order.down[s] & am):
            return False, ("no-sharp-atom-below", s)
    return True, None


def _atom_below_compact(E):
    order = derive_order(E)
    amask = 0
    for a in order.atoms:
        amask |= 1 << a
    for u in _compact_set(E):
        if u != E.zero and not (order.down[u] & amask):
            return False, (u,)
    return True, None


def _compact_join_of_finite(E):
    F = finite_elements(E)
    for u in _compact_set(E):
        # u is itself finite here, so {u} is the finite join
        if u not in F:
            return False, (u,)
    return True, None


def _compact_finite(E):
    F = finite_elements(E)
    for u in _compact_set(E):
        if u not in F:
            return False, (u,)
    return True, None


def _atomic_from_compact_joins(E):
    order = derive_order(E)
    compact = _compact_set(E)
    cm = 0
    for u in compact:
        cm |= 1 << u
    for z in E.elements():
        if z == E.zero:
            continue
        cz = order.down[z] & cm
        ub = (1 << E.size) - 1
        for d in bits(cz):
            ub &= order.up[d]
        least = next((c for c in bits(ub) if order.up[c] & ub == ub), None)
        if least != z:
            continue
        if not _interval_atomic(E, z):
            return False, (z,)
        if z == E.one and not _h_atomic(E):
            return False, ("top",)
    return True, None


def _center_identity(E):
    cen = center_by_identity(E).mask
    other = compatibility_center(E).mask & sharp_elements(E).mask
    if cen != other:
        only = cen ^ other
        return False, tuple(bits(only))
    return True, None


def _modular_measure(E):
    got = find_subadditive_state(E)
    if not isinstance(got, StateVector):
        return True, None  # no subadditive state to test; nothing claimed
    order = derive_order(E)
    w = got.values
    for x in E.elements():
        for y in E.elements():
            if w[x] + w[y] != w[order.join[x][y]] + w[order.meet[x][y]]:
                return False, (x, y)
    return True, None


def _qualifying_centrals(E):
    order = derive_order(E)
    F = finite_elements(E)
    out = []
    for c in center_by_identity(E):
        if c == E.zero or c not in F:
            continue
        sub = interval(E, E.zero, c)
        if derive_order(sub).is_lattice and is_modular(sub):
            out.append(c)
    return out


def _state_from_central(E):
    cs = _qualifying_centrals(E)
    for c in cs:
        try:
            omega = state_from_central_finite(E, c)
        except EffectAlgebraError as exc:
            return False, (c, repr(exc))
        if verify_state(E, omega, require_subadditive=True):
            return False, (c, "verification")
        if c != E.one:
            try:
                central_decomposition(E, c)
            except EffectAlgebraError as exc:
                return False, (c, repr(exc))
    return True, None


def _atom_dichotomy(E):
    order = derive_order(E)
    sm = sharp_mask(E)
    for a in order.atoms:
        if sm >> a & 1:
            continue
        two_a = E.sum[a][a]
        for b in order.atoms:
            if b == a or compatible(E, a, b):
                continue
            if two_a is None or order.join[a][b] != two_a:
                return False, (a, b)
    return True, None


def _subadditive_exists(E):
    got = find_subadditive_state(E)
    if not isinstance(got, StateVector):
        return False, ("infeasible",)
    bad = verify_state(E, got, require_subadditive=True)
    if bad:
        return False, ("verification", str(bad[0]))
    return True, None


# -- the registry ----------------------------------------------------------


@dataclass(frozen=True)
class _Claim:
    statement: str
    hypotheses: tuple  # (name, predicate) pairs
    conclusion: object  # callable E -> (bool, witness)


_H_LAT = ("lattice", _h_lattice)
_H_MOD = ("modular", _h_modular)
_H_ARCH = ("archimedean", _h_archimedean)
_H_ATOM = ("atomic", _h_atomic)
_H_UNSHARP = ("unsharp elements exist", _h_unsharp)

_REGISTRY: dict[str, _Claim] = {
    "finite.diff_of_join": _Claim(
        "subtracting y from x v y keeps finite elements finite on modular "
        "lattice instances",
        (_H_LAT, _H_MOD), _finite_diff_of_join),
    "finite.downward": _Claim(
        "everything below a finite element is finite on modular lattice "
        "instances",
        (_H_LAT, _H_MOD), _finite_downward),
    "finite.interval_complete": _Claim(
        "the interval below a finite element is a complete lattice",
        (_H_LAT, _H_MOD), _finite_interval_complete),
    "finite.join_closed": _Claim(
        "joins of finite elements are finite on modular lattice instances",
        (_H_LAT, _H_MOD), _finite_join_closed),
    "finite.ideal": _Claim(
        "the finite elements form a lattice ideal on modular lattice "
        "instances",
        (_H_LAT, _H_MOD), _finite_ideal),
    "sharp.hat_formula": _Claim(
        "saturating the atom multiplicities of a finite element gives its "
        "smallest sharp upper bound (and a greatest sharp lower bound "
        "exists)",
        (_H_LAT, _H_MOD, _H_ARCH, _H_ATOM), _sharp_hat),
    "diff.distributes_over_join": _Claim(
        "subtracting a common lower bound distributes over joins",
        (_H_LAT,), _join_difference_pairs),
    "sum.distributes_over_join": _Claim(
        "adding a fixed element distributes over existing joins",
        (), _join_sum_pairs),
    "atomic.interval_from_finite_joins": _Claim(
        "if z is the join of the finite elements below it, the interval "
        "below z is atomic (modular lattice instances)",
        (_H_LAT, _H_MOD), _atomic_from_finite_joins),
    "atomic.from_archimedean_block": _Claim(
        "a modular lattice instance with an Archimedean atomic block is "
        "atomic",
        (_H_LAT, _H_MOD,
         ("some block archimedean and atomic", _h_some_block_archimedean_atomic)),
        _atomic_from_block),
    "sharp.atomic_oml": _Claim(
        "the sharp elements of a modular Archimedean atomic lattice "
        "instance form an atomic orthomodular lattice inside it",
        (_H_LAT, _H_MOD, _H_ARCH, _H_ATOM), _sharp_is_atomic_oml),
    "atom.below_compact": _Claim(
        "every nonzero compact element dominates an atom",
        (_H_LAT,), _atom_below_compact),
    "compact.join_of_finite": _Claim(
        "compact elements of Archimedean lattice instances are finite "
        "joins of finite elements",
        (_H_LAT, _H_ARCH), _compact_join_of_finite),
    "compact.finite_in_modular": _Claim(
        "compact elements of modular Archimedean lattice instances are "
        "finite",
        (_H_LAT, _H_MOD, _H_ARCH), _compact_finite),
    "atomic.interval_from_compact_joins": _Claim(
        "if z is the join of the compact elements below it, the interval "
        "below z is atomic; applied at the top this makes the instance "
        "atomic",
        (_H_LAT, _H_MOD, _H_ARCH), _atomic_from_compact_joins),
    "center.identity": _Claim(
        "the center equals the compatibility center intersected with the "
        "sharp elements",
        (_H_LAT,), _center_identity),
    "modular.measure": _Claim(
        "every subadditive state satisfies w(x)+w(y) = w(x v y)+w(x ^ y)",
        (_H_LAT,), _modular_measure),
    "state.from_central_element": _Claim(
        "a nonzero finite central element with a modular interval below it "
        "lifts a subadditive state to the whole instance, via the product "
        "split along the center",
        (_H_LAT, _H_ARCH, _H_ATOM,
         ("qualifying central element exists",
          lambda E: bool(_qualifying_centrals(E)))),
        _state_from_central),
    "state.atom_dichotomy": _Claim(
        "for an unsharp atom a and any atom b incompatible with it, "
        "a v b equals the doubled atom 2a",
        (_H_LAT, _H_MOD, _H_ARCH, _H_ATOM, _H_UNSHARP), _atom_dichotomy),
    "state.exists_unsharp_modular": _Claim(
        "every modular Archimedean atomic lattice instance that is not "
        "orthomodular carries a subadditive state",
        (_H_LAT, _H_MOD, _H_ARCH, _H_ATOM, _H_UNSHARP), _subadditive_exists),
}

CLAIM_IDS = tuple(_REGISTRY)

SCALE_LIMITED = {
    "finite.not_downward_closed_infinite": (
        "finite elements need not be downward closed when one summand is an "
        "infinite complete atomic Boolean algebra; hypotheses unsatisfiable "
        "at this scale"),
    "finite.not_join_closed_infinite": (
        "finite elements need not be join closed across two infinite "
        "Boolean summands; hypotheses unsatisfiable at this scale"),
    "compact.needs_archimedean": (
        "dropping Archimedeanity breaks the finite-join decomposition of "
        "compact elements, but only on infinite chains; hypotheses "
        "unsatisfiable at this scale"),
}


@dataclass(frozen=True)
class ClaimReport:
    claim_id: str
    statement: str
    hypotheses_met: bool
    hypothesis_detail: tuple  # (name, bool) pairs
    conclusion_holds: bool | None  # None iff hypotheses unmet
    witness: tuple | None
    error: str | None = None

    def failed(self) -> bool:
        return self.hypotheses_met and self.conclusion_holds is False


def statement(claim_id: str) -> str:
    if claim_id not in _REGISTRY:
        raise UnknownClaim(claim_id)
    return _REGISTRY[claim_id].statement


def check(E: FiniteEffectAlgebra, claim_id: str) -> ClaimReport:
    """Evaluate one claim on one instance; never raises on bad input."""
    if claim_id not in _REGISTRY:
        raise UnknownClaim(claim_id)
    claim = _REGISTRY[claim_id]
    detail = []
    try:
        # hypotheses are ordered so later ones are only evaluable when the
        # earlier ones hold; stop at the first failure
        for name, pred in claim.hypotheses:
            ok = bool(pred(E))
            detail.append((name, ok))
            if not ok:
                return ClaimReport(claim_id, claim.statement, False,
                                   tuple(detail), None, None)
        holds, witness = claim.conclusion(E)
        return ClaimReport(claim_id, claim.statement, True, tuple(detail),
                           bool(holds), witness)
    except EffectAlgebraError as exc:
        return ClaimReport(claim_id, claim.statement, False, tuple(detail),
                           None, None, error=f"{type(exc).__name__}: {exc}")


def check_all(E: FiniteEffectAlgebra) -> list[ClaimReport]:
    """Every registered claim, in stable registry order."""
    bad = validate(E)
    if bad:
        return [ClaimReport(cid, _REGISTRY[cid].statement, False, (), None,
                            None, error=f"invalid table: {bad[0]}")
                for cid in CLAIM_IDS]
    return [check(E, cid) for cid in CLAIM_IDS]


@dataclass(frozen=True)
class SweepResult:
    claim_id: str
    passed: bool
    counterexample: FiniteEffectAlgebra | None
    hypotheses_met: int
    checked: int


def sweep(config, claim_id: str) -> SweepResult:
    """Check one claim over every enumerated instance of a size."""
    from .enumeration import enumerate_algebras

    if claim_id not in _REGISTRY:
        raise UnknownClaim(claim_id)
    met = 0
    checked = 0
    for E in enumerate_algebras(config):
        checked += 1
        report = check(E, claim_id)
        if report.hypotheses_met:
            met += 1
            if report.conclusion_holds is False:
                return SweepResult(claim_id, False,
                                   shrink_counterexample(E, claim_id),
                                   met, checked)
    return SweepResult(claim_id, True, None, met, checked)


def shrink_counterexample(E: FiniteEffectAlgebra,
                          claim_id: str) -> FiniteEffectAlgebra:
    """Greedy minimization: restrict to the smallest interval [0, z] that
    still fails the claim with hypotheses met."""
    order = derive_order(E)
    best = E
    candidates = sorted(
        (x for x in E.elements() if x != E.zero),
        key=lambda x: bin(order.down[x]).count("1"))
    for z in candidates:
        if z == E.one:
            continue
        try:
            sub = interval(E, E.zero, z)
        except EffectAlgebraError:
            continue
        if sub.size >= best.size:
            break
        report = check(sub, claim_id)
        if report.failed():
            return sub
    return best


def random_families(E: FiniteEffectAlgebra, count: int, seed: int = DEFAULT_SEED):
    """Deterministic random families (size 2..5) for the distributivity laws."""
    rng = random.Random(seed)
    n = E.size
    out = []
    for _ in range(count):
        k = rng.randint(2, 5)
        fam = [rng.randrange(n) for _ in range(k)]
        extra = rng.randrange(n)
        out.append((fam, extra))
    return out
