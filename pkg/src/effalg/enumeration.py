"""Exhaustive, isomorph-free generation of finite effect algebras.

Layout convention for generated tables: zero at index 0, one at index n-1,
middles 1..n-2.  The orthosupplement restricted to the middles is first
normalized to the canonical involution (self-paired elements first, then
adjacent pairs); the search then fills the undetermined cells in a fixed
order with unit propagation (the partner rule x+y=v forces y+v' = x'),
incremental associativity checking, and row-injectivity pruning.  A leaf
is emitted iff its table is lexicographically minimal among relabelings
that preserve the frame (zero, one, and the involution layout), so every
isomorphism class surfaces exactly once.

The canonical key exported here uses the same frame-preserving minimum, so
two algebras have equal keys iff they are isomorphic.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import FiniteEffectAlgebra, validate
from .errors import BudgetExceeded, InternalCheckFailed
from .states import StateVector, find_state
from .structure import is_modular, sharp_mask

__all__ = [
    "EnumerationConfig",
    "enumerate_algebras",
    "canonical_key",
    "is_isomorphic",
    "for_all",
    "ForAllResult",
    "find_stateless",
    "StatelessSearch",
]

UNKNOWN = -2
UNDEF = -1

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class EnumerationConfig:
    """What to enumerate and how hard to try.

    Filters keep only instances with the named property; budgets raise
    BudgetExceeded carrying a resumable checkpoint; jobs > 1 distributes
    search chunks over processes (results keep a deterministic order).
    """

    size: int
    lattice_only: bool = False
    modular_only: bool = False
    unsharp_only: bool = False  # keep only instances with S(E) != E
    node_budget: int | None = None
    time_budget: float | None = None
    jobs: int = 1
    chunk_depth: int = 2
    checkpoint: dict | None = None  # previously returned checkpoint to resume

    def __post_init__(self):
        if self.size < 2:
            raise ValueError("size must be at least 2")
        if self.node_budget is not None and self.node_budget <= 0:
            raise ValueError("node budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time budget must be positive")


def _involution(n: int, f: int) -> list[int]:
    """Full orthosupplement layout: f self-paired middles, then pairs."""
    m = n - 2
    orth = [0] * n
    orth[0] = n - 1
    orth[n - 1] = 0
    for x in range(1, f + 1):
        orth[x] = x
    for p in range(f + 1, m + 1, 2):
        orth[p] = p + 1
        orth[p + 1] = p
    return orth


class _Search:
    """Backtracking state for one (size, involution) frame."""

    def __init__(self, n: int, f: int):
        self.n = n
        self.f = f
        m = n - 2
        self.m = m
        one = n - 1
        self.one = one
        self.orth = _involution(n, f)
        T = [UNKNOWN] * (n * n)
        for y in range(n):
            T[y] = y              # row 0
            T[y * n] = y          # column 0
        for y in range(1, n):
            T[one * n + y] = UNDEF
            T[y * n + one] = UNDEF
        T[one * n] = one
        T[one] = one
        for x in range(1, m + 1):
            T[x * n + self.orth[x]] = one
            T[self.orth[x] * n + x] = one
        self.T = T
        rowvals = [0] * n
        for x in range(n):
            mask = 0
            for y in range(n):
                v = T[x * n + y]
                if v >= 0:
                    mask |= 1 << v
            rowvals[x] = mask
        self.rowvals = rowvals
        self.occ = [[] for _ in range(n)]
        self.trail = []
        self.cells = [(x, y) for x in range(1, m + 1) for y in range(x, m + 1)
                      if self.orth[x] != y]
        self.nodes = 0

    # -- assignment with propagation ------------------------------------

    def _check_triple(self, x, y, z) -> bool:
        T, n = self.T, self.n
        xy = T[x * n + y]
        if xy == UNKNOWN:
            return True
        yz = T[y * n + z]
        if yz == UNKNOWN:
            return True
        left = UNDEF if xy == UNDEF else T[xy * n + z]
        right = UNDEF if yz == UNDEF else T[x * n + yz]
        if left == UNKNOWN or right == UNKNOWN:
            return True
        return left == right

    def assign(self, x, y, v) -> bool:
        """Set cell (x, y) (and its mirror) to v; propagate; False on conflict."""
        T, n = self.T, self.n
        cur = T[x * n + y]
        if cur != UNKNOWN:
            return cur == v
        if v >= 0:
            if (self.rowvals[x] >> v & 1) or (self.rowvals[y] >> v & 1):
                return False
        T[x * n + y] = v
        T[y * n + x] = v
        self.trail.append((x, y))
        if v >= 0:
            self.rowvals[x] |= 1 << v
            if y != x:
                self.rowvals[y] |= 1 << v
            self.occ[v].append((x, y))
            # partner rule: x+y=v forces y+v' = x' and x+v' = y'
            ov = self.orth[v]
            if not self.assign(min(y, ov), max(y, ov), self.orth[x]):
                return False
            if x != y and not self.assign(min(x, ov), max(x, ov), self.orth[y]):
                return False
        check = self._check_triple
        for z in range(n):
            if not check(x, y, z) or not check(z, x, y):
                return False
            if x != y and (not check(y, x, z) or not check(z, y, x)):
                return False
        for p, q in self.occ[x]:
            if not check(p, q, y) or not check(y, p, q):
                return False
            if not check(q, p, y) or not check(y, q, p):
                return False
        if y != x:
            for p, q in self.occ[y]:
                if not check(p, q, x) or not check(x, p, q):
                    return False
                if not check(q, p, x) or not check(x, q, p):
                    return False
        return True

    def undo_to(self, mark: int):
        T, n = self.T, self.n
        while len(self.trail) > mark:
            x, y = self.trail.pop()
            v = T[x * n + y]
            if v >= 0:
                self.occ[v].pop()
                self.rowvals[x] &= ~(1 << v)
                if y != x:
                    self.rowvals[y] &= ~(1 << v)
            T[x * n + y] = UNKNOWN
            T[y * n + x] = UNKNOWN

    def candidates(self, x, y):
        """Branch values for an open cell: middles ascending, then undefined."""
        used = self.rowvals[x] | self.rowvals[y]
        out = [v for v in range(1, self.m + 1) if not (used >> v & 1)]
        out.append(UNDEF)
        return out


def _key_cells(m: int):
    """Cell order whose prefixes are decided by prefixes of a relabeling."""
    return [(i, d) for d in range(1, m + 1) for i in range(1, d + 1)]


def _encode(v: int, pos, one: int, m: int):
    """Key entry for a table value under a partial relabeling (None=open)."""
    if v == UNDEF:
        return m + 2
    if v == one:
        return m + 1
    p = pos[v]
    return p if p else None


def _identity_key(T, n, f):
    m = n - 2
    one = n - 1
    out = []
    for i, d in _key_cells(m):
        v = T[i * n + d]
        if v == UNDEF:
            out.append(m + 2)
        elif v == one:
            out.append(m + 1)
        else:
            out.append(v)
    return tuple(out)


def _min_key_search(T, n, f, stop_below=None):
    """Least key over frame-preserving relabelings.

    Relabelings permute the self-paired middles among positions 1..f and
    the orthosupplement pairs (as pairs, either orientation) among the
    remaining positions.  With stop_below set, the search answers the
    yes/no question "is any relabeling strictly below this key?" and exits
    at the first hit; otherwise it returns the minimum key itself.
    """
    m = n - 2
    one = n - 1
    kcells = _key_cells(m)
    best = list(stop_below) if stop_below is not None else None
    found_smaller = False

    inv = [0] * (m + 2)   # position -> original element
    pos = [0] * n         # original element -> position (0 = unassigned)
    used = [False] * (m + 1)
    fixed = list(range(1, f + 1))
    paired = list(range(f + 1, m + 1))

    def orth_of(e):
        # paired middles sit in adjacent original pairs (f+1,f+2), ...
        return e + 1 if (e - f) % 2 == 1 else e - 1

    def place(d, e, width):
        inv[d] = e
        pos[e] = d
        used[e] = True
        if width == 2:
            p = orth_of(e)
            inv[d + 1] = p
            pos[p] = d + 1
            used[p] = True

    def unplace(d, e, width):
        used[e] = False
        pos[e] = 0
        inv[d] = 0
        if width == 2:
            p = orth_of(e)
            used[p] = False
            pos[p] = 0
            inv[d + 1] = 0

    def leaf_key():
        out = []
        for i, d in kcells:
            v = T[inv[i] * n + inv[d]]
            if v == UNDEF:
                out.append(m + 2)
            elif v == one:
                out.append(m + 1)
            else:
                out.append(pos[v])
        return out

    def descend(d, state):
        # state 0: decided prefix equals best; 1: an undecided entry was
        # passed (no conclusion until the leaf); 2: prefix strictly smaller
        nonlocal best, found_smaller
        if found_smaller:
            return
        if d > m:
            key = leaf_key()
            if best is None or key < best:
                if stop_below is not None:
                    found_smaller = True
                else:
                    best = key
            return
        if d <= f:
            cands = fixed
            width = 1
        else:
            cands = paired
            width = 2
        entry_idx = (d - 1) * d // 2
        for e in cands:
            if used[e]:
                continue
            place(d, e, width)
            nstate = state
            prune = False
            if best is not None and nstate == 0:
                idx = entry_idx
                for dd in range(d, d + width):
                    for i in range(1, dd + 1):
                        v = T[inv[i] * n + inv[dd]]
                        if v == UNDEF:
                            enc = m + 2
                        elif v == one:
                            enc = m + 1
                        else:
                            enc = pos[v] or None
                        if nstate == 0:
                            if enc is None:
                                nstate = 1
                            elif enc < best[idx]:
                                nstate = 2
                                break
                            elif enc > best[idx]:
                                prune = True
                                break
                        idx += 1
                    if prune or nstate == 2:
                        break
            if not prune:
                if nstate == 2 and stop_below is not None:
                    # the first differing entry is already smaller: every
                    # completion of this relabeling beats the base key
                    found_smaller = True
                    unplace(d, e, width)
                    return
                descend(d + width, nstate)
            unplace(d, e, width)
            if found_smaller:
                return

    descend(1, 0)
    if stop_below is not None:
        return found_smaller
    return tuple(best) if best is not None else _identity_key(T, n, f)


def _is_canonical(T, n, f) -> bool:
    base = _identity_key(T, n, f)
    return not _min_key_search(T, n, f, stop_below=base)


def _table_to_algebra(T, n) -> FiniteEffectAlgebra:
    rows = []
    for x in range(n):
        rows.append(tuple(None if T[x * n + y] == UNDEF else T[x * n + y]
                          for y in range(n)))
    return FiniteEffectAlgebra(size=n, zero=0, one=n - 1, sum=tuple(rows))


def canonical_key(E: FiniteEffectAlgebra):
    """A total isomorphism invariant of a valid algebra.

    Moves zero to 0 and one to n-1, lays the orthosupplement out in the
    canonical frame (self-paired middles first, pairs adjacent), then takes
    the least flattened middle-block table over frame-preserving
    relabelings.  Keys are equal iff the algebras are isomorphic.
    """
    n = E.size
    orth = E.orth
    rho = [0] * n
    rho[E.zero] = 0
    rho[E.one] = n - 1
    middles = [x for x in E.elements() if x not in (E.zero, E.one)]
    fixed = [x for x in middles if orth[x] == x]
    pairs = sorted((x, orth[x]) for x in middles if x < orth[x] and orth[x] != x)
    nxt = 1
    for x in fixed:
        rho[x] = nxt
        nxt += 1
    f = len(fixed)
    for x, y in pairs:
        rho[x] = nxt
        rho[y] = nxt + 1
        nxt += 2
    T = [UNDEF] * (n * n)
    for x in range(n):
        for y in range(n):
            v = E.sum[x][y]
            T[rho[x] * n + rho[y]] = UNDEF if v is None else rho[v]
    return (n, f, _min_key_search(T, n, f))


def is_isomorphic(E1: FiniteEffectAlgebra, E2: FiniteEffectAlgebra) -> bool:
    return canonical_key(E1) == canonical_key(E2)


# -- chunked depth-first generation --------------------------------------


def _f_values(n: int):
    m = n - 2
    return list(range(m % 2, m + 1, 2))


class _Budget:
    def __init__(self, node_budget, deadline):
        self.node_budget = node_budget
        self.deadline = deadline
        self.nodes = 0

    def spend(self):
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _BudgetSignal()
        if self.deadline is not None and self.nodes % 1024 == 0 \
                and time.monotonic() > self.deadline:
            raise _BudgetSignal()


class _BudgetSignal(Exception):
    pass


def _next_open(search: _Search, start: int) -> int:
    cells, T, n = search.cells, search.T, search.n
    k = start
    while k < len(cells):
        x, y = cells[k]
        if T[x * n + y] == UNKNOWN:
            return k
        k += 1
    return -1


def _collect_prefixes(n: int, f: int, depth: int):
    """Choice paths of the first `depth` decision levels, in search order.

    Each prefix is a tuple of (cell_index, value) choices that replays to a
    consistent partial table; a prefix shorter than `depth` ends in a leaf.
    """
    search = _Search(n, f)
    out = []

    def walk(level, start, path):
        k = _next_open(search, start)
        if k < 0 or level == depth:
            out.append(tuple(path))
            return
        x, y = search.cells[k]
        for v in search.candidates(x, y):
            mark = len(search.trail)
            if search.assign(x, y, v):
                path.append((k, v))
                walk(level + 1, k + 1, path)
                path.pop()
            search.undo_to(mark)

    walk(0, 0, [])
    return out


def _run_chunk(n, f, prefix, budget: _Budget):
    """All canonical complete tables below one prefix, in search order."""
    search = _Search(n, f)
    for k, v in prefix:
        x, y = search.cells[k]
        assert search.T[x * search.n + y] == UNKNOWN, "prefix replay out of step"
        ok = search.assign(x, y, v)
        assert ok, "prefix replay diverged"
    found = []
    start = (prefix[-1][0] + 1) if prefix else 0

    def dfs(start):
        k = _next_open(search, start)
        if k < 0:
            T = search.T
            if _is_canonical(T, n, f):
                E = _table_to_algebra(T, n)
                bad = validate(E)
                if bad:
                    raise InternalCheckFailed(
                        f"generator emitted an invalid table: {bad[:2]}")
                found.append(tuple(E.sum))
            return
        x, y = search.cells[k]
        for v in search.candidates(x, y):
            budget.spend()
            mark = len(search.trail)
            if search.assign(x, y, v):
                dfs(k + 1)
            search.undo_to(mark)

    dfs(start)
    return found


def _passes_filters(E: FiniteEffectAlgebra, config: EnumerationConfig) -> bool:
    from .core import derive_order

    if config.lattice_only or config.modular_only:
        if not derive_order(E).is_lattice:
            return False
    if config.modular_only and not is_modular(E):
        return False
    if config.unsharp_only and sharp_mask(E) == (1 << E.size) - 1:
        return False
    return True


def _chunk_worker(args):
    n, f, prefix, node_budget = args
    budget = _Budget(node_budget, None)
    try:
        tables = _run_chunk(n, f, prefix, budget)
    except _BudgetSignal:
        return (None, budget.nodes)
    return (tables, budget.nodes)


def _checkpoint_dict(size, completed):
    return {
        "version": CHECKPOINT_VERSION,
        "size": size,
        "completed": sorted(completed),
    }


def _chunk_id(f, prefix):
    return [f, [[k, v] for k, v in prefix]]


def enumerate_algebras(config: EnumerationConfig):
    """Yield one representative per isomorphism class of the given size.

    Deterministic order; honors filters, budgets, checkpoints, and the
    process pool.  Raises BudgetExceeded with a checkpoint of completed
    chunks when a budget runs out.
    """
    n = config.size
    deadline = (time.monotonic() + config.time_budget
                if config.time_budget is not None else None)
    budget = _Budget(config.node_budget, deadline)

    completed = []
    done = set()
    if config.checkpoint is not None:
        cp = config.checkpoint
        if cp.get("version") != CHECKPOINT_VERSION or cp.get("size") != n:
            raise ValueError("checkpoint does not match this enumeration")
        completed = list(cp["completed"])
        done = {_freeze_chunk_id(c) for c in completed}

    chunks = []
    for f in _f_values(n):
        for prefix in _collect_prefixes(n, f, config.chunk_depth):
            chunks.append((f, prefix))
    pending = [(f, p) for f, p in chunks
               if _freeze_chunk_id(_chunk_id(f, p)) not in done]

    def finish(f, prefix, tables):
        cid = _chunk_id(f, prefix)
        completed.append(cid)
        done.add(_freeze_chunk_id(cid))
        out = []
        for rows in tables:
            E = FiniteEffectAlgebra(size=n, zero=0, one=n - 1, sum=rows)
            if _passes_filters(E, config):
                out.append(E)
        return out

    if config.jobs <= 1:
        for f, prefix in pending:
            try:
                tables = _run_chunk(n, f, prefix, budget)
            except _BudgetSignal:
                raise BudgetExceeded(_checkpoint_dict(n, completed))
            yield from finish(f, prefix, tables)
    else:
        import multiprocessing as mp

        per_chunk_nodes = config.node_budget
        args = [(n, f, prefix, per_chunk_nodes) for f, prefix in pending]
        with mp.Pool(config.jobs) as pool:
            for (f, prefix), (tables, nodes) in zip(
                    pending, pool.imap(_chunk_worker, args)):
                budget.nodes += nodes
                over_nodes = (config.node_budget is not None
                              and budget.nodes > config.node_budget)
                over_time = (deadline is not None
                             and time.monotonic() > deadline)
                if tables is None or over_nodes or over_time:
                    pool.terminate()
                    raise BudgetExceeded(_checkpoint_dict(n, completed))
                yield from finish(f, prefix, tables)


def _freeze_chunk_id(cid):
    f, prefix = cid
    return (f, tuple((k, v) for k, v in prefix))


@dataclass(frozen=True)
class ForAllResult:
    holds: bool
    counterexample: FiniteEffectAlgebra | None
    checked: int


def for_all(config: EnumerationConfig, predicate) -> ForAllResult:
    """Apply a predicate to every enumerated instance; first failure wins."""
    checked = 0
    for E in enumerate_algebras(config):
        checked += 1
        if not predicate(E):
            return ForAllResult(False, E, checked)
    return ForAllResult(True, None, checked)


@dataclass(frozen=True)
class StatelessSearch:
    """Outcome of a stateless hunt: the instance (or None), sizes fully
    cleared, and how many classes were examined."""

    found: FiniteEffectAlgebra | None
    cleared_sizes: tuple[int, ...]
    checked: int


def find_stateless(max_n: int, node_budget=None, time_budget=None, jobs=1,
                   checkpoint=None, progress=None) -> StatelessSearch:
    """Scan sizes 2..max_n for an algebra admitting no state.

    Returns the canonically first stateless instance of the smallest size
    that has one.  BudgetExceeded carries a checkpoint (with the sizes fully
    cleared so far and any stateless instances already found at the current
    size) that can be passed back in to resume.
    """
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    cleared = []
    start_size = 2
    found_here = []
    chunk_checkpoint = None
    checked = 0
    if checkpoint is not None:
        cleared = list(checkpoint.get("cleared_sizes", []))
        start_size = checkpoint.get("size", 2)
        found_here = [_rows_from_jsonable(t) for t in checkpoint.get("found", [])]
        chunk_checkpoint = checkpoint.get("chunks")
        checked = checkpoint.get("checked", 0)

    for n in range(start_size, max_n + 1):
        stateless = list(found_here)
        found_here = []
        remaining = None
        if deadline is not None:
            remaining = max(deadline - time.monotonic(), 0.001)
        config = EnumerationConfig(
            size=n, node_budget=node_budget, time_budget=remaining,
            jobs=jobs, checkpoint=chunk_checkpoint)
        chunk_checkpoint = None
        try:
            for E in enumerate_algebras(config):
                checked += 1
                if not isinstance(find_state(E), StateVector):
                    stateless.append(E)
                    if progress is not None:
                        progress(E)
        except BudgetExceeded as exc:
            cp = {
                "version": CHECKPOINT_VERSION,
                "size": n,
                "cleared_sizes": cleared,
                "found": [_rows_to_jsonable(E.sum) for E in stateless],
                "chunks": exc.checkpoint,
                "checked": checked,
            }
            raise BudgetExceeded(cp, cleared_sizes=tuple(cleared)) from None
        if stateless:
            best = min(stateless, key=canonical_key)
            return StatelessSearch(best, tuple(cleared), checked)
        cleared.append(n)
    return StatelessSearch(None, tuple(cleared), checked)


def _rows_to_jsonable(rows):
    return [[-1 if v is None else v for v in row] for row in rows]


def _rows_from_jsonable(data) -> FiniteEffectAlgebra:
    rows = tuple(tuple(None if v == -1 else v for v in row) for row in data)
    return FiniteEffectAlgebra(size=len(rows), zero=0, one=len(rows) - 1, sum=rows)
