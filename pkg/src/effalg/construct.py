"""Constructors for the standard finite effect algebras and gluings.

All constructors return validated FiniteEffectAlgebra instances; a
constructor output failing validation is a bug and raises loudly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import FiniteEffectAlgebra, bits, derive_order, difference, validate
from .errors import (
    EmptyInterval,
    InternalCheckFailed,
    NotBelow,
    NotCentral,
    PartTooSmall,
    SizeOverflow,
    StructuralError,
)

__all__ = [
    "ConstructionSpec",
    "parse_construction",
    "build",
    "boolean_algebra",
    "chain",
    "horizontal_sum",
    "product",
    "interval",
    "central_decomposition",
    "CentralDecomposition",
]

PRODUCT_SIZE_CAP = 4096  # keeps downstream O(n^3) scans tractable
_LATTICE_ASSERT_CAP = 512  # skip the O(n^3) coordinatewise-order check above this


def _freeze(table) -> tuple:
    return tuple(tuple(row) for row in table)


def _checked(E: FiniteEffectAlgebra, what: str) -> FiniteEffectAlgebra:
    bad = validate(E)
    if bad:
        raise InternalCheckFailed(f"{what} produced an invalid table: {bad[:3]}")
    return E


def boolean_algebra(k: int) -> FiniteEffectAlgebra:
    """Powerset algebra on k atoms; the sum is disjoint union."""
    if k < 1:
        raise StructuralError(f"atom count {k} < 1")
    if k > 20:
        raise SizeOverflow(f"boolean algebra on {k} atoms is too large")
    n = 1 << k
    table = [[None] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x & y == 0:
                table[x][y] = x | y
    letters = "abcdefghijklmnopqrstuvwxyz"
    labels = []
    for x in range(n):
        if x == 0:
            labels.append("0")
        elif x == n - 1:
            labels.append("1")
        else:
            labels.append("".join(letters[i] for i in bits(x)))
    E = FiniteEffectAlgebra(size=n, zero=0, one=n - 1,
                            sum=_freeze(table), labels=tuple(labels))
    return _checked(E, f"boolean_algebra({k})")


def chain(m: int) -> FiniteEffectAlgebra:
    """The (m+1)-element chain 0 < a < 2a < ... < ma = 1; j+k defined iff <= m."""
    if m < 1:
        raise StructuralError(f"generator order {m} < 1")
    n = m + 1
    table = [[x + y if x + y <= m else None for y in range(n)] for x in range(n)]
    labels = ["0"] + [("a" if j == 1 else f"{j}a") for j in range(1, m)] + ["1"]
    E = FiniteEffectAlgebra(size=n, zero=0, one=m,
                            sum=_freeze(table), labels=tuple(labels))
    return _checked(E, f"chain({m})")


def horizontal_sum(parts: list[FiniteEffectAlgebra]) -> FiniteEffectAlgebra:
    """Glue the parts at 0 and 1; sums stay inside their part.

    Nontrivial elements of different parts end up with meet 0 and join 1,
    which is asserted after construction.
    """
    if not parts:
        raise PartTooSmall("horizontal sum needs at least one part")
    for p in parts:
        if p.size < 2:
            raise PartTooSmall("degenerate 1-element part")
        _checked(p, "horizontal_sum input")
    if len(parts) == 1:
        return parts[0]

    maps = []  # per part: original index -> glued index
    labels = ["0"]
    nxt = 1
    for i, p in enumerate(parts):
        phi = {}
        for x in p.elements():
            if x == p.zero or x == p.one:
                continue
            phi[x] = nxt
            labels.append(f"p{i}.{p.label(x)}")
            nxt += 1
        maps.append(phi)
    n = nxt + 1
    labels.append("1")

    table = [[None] * n for _ in range(n)]
    for p, phi in zip(parts, maps):
        full = dict(phi)
        full[p.zero] = 0
        full[p.one] = n - 1
        for x in p.elements():
            for y in p.elements():
                s = p.sum[x][y]
                if s is not None:
                    table[full[x]][full[y]] = full[s]
    E = FiniteEffectAlgebra(size=n, zero=0, one=n - 1,
                            sum=_freeze(table), labels=tuple(labels))
    E = _checked(E, "horizontal_sum")

    order = derive_order(E)
    part_of = {}
    for i, phi in enumerate(maps):
        for g in phi.values():
            part_of[g] = i
    for x in range(1, n - 1):
        for y in range(1, n - 1):
            if part_of[x] != part_of[y]:
                if order.meet[x][y] != 0 or order.join[x][y] != n - 1:
                    raise InternalCheckFailed(
                        f"cross-part pair ({x},{y}) has meet {order.meet[x][y]}, "
                        f"join {order.join[x][y]}")
    return E


def product(parts: list[FiniteEffectAlgebra]) -> FiniteEffectAlgebra:
    """Direct product with coordinatewise sums (defined iff defined everywhere)."""
    if not parts:
        raise StructuralError("product needs at least one part")
    for p in parts:
        _checked(p, "product input")
    n = 1
    for p in parts:
        n *= p.size
        if n > PRODUCT_SIZE_CAP:
            raise SizeOverflow(f"product size exceeds {PRODUCT_SIZE_CAP}")

    sizes = [p.size for p in parts]

    def decode(idx):
        coords = []
        for s in reversed(sizes):
            coords.append(idx % s)
            idx //= s
        return tuple(reversed(coords))

    def encode(coords):
        idx = 0
        for c, s in zip(coords, sizes):
            idx = idx * s + c
        return idx

    coords_of = [decode(i) for i in range(n)]
    table = [[None] * n for _ in range(n)]
    for x in range(n):
        cx = coords_of[x]
        for y in range(n):
            cy = coords_of[y]
            out = []
            for p, a, b in zip(parts, cx, cy):
                s = p.sum[a][b]
                if s is None:
                    break
                out.append(s)
            else:
                table[x][y] = encode(out)

    labels = tuple("(" + ",".join(p.label(c) for p, c in zip(parts, coords_of[i])) + ")"
                   for i in range(n))
    E = FiniteEffectAlgebra(
        size=n,
        zero=encode([p.zero for p in parts]),
        one=encode([p.one for p in parts]),
        sum=_freeze(table),
        labels=labels,
    )
    E = _checked(E, "product")

    if n <= _LATTICE_ASSERT_CAP and all(derive_order(p).is_lattice for p in parts):
        order = derive_order(E)
        part_orders = [derive_order(p) for p in parts]
        for x in range(n):
            for y in range(n):
                ej = encode([o.join[a][b] for o, a, b in
                             zip(part_orders, coords_of[x], coords_of[y])])
                em = encode([o.meet[a][b] for o, a, b in
                             zip(part_orders, coords_of[x], coords_of[y])])
                if order.join[x][y] != ej or order.meet[x][y] != em:
                    raise InternalCheckFailed(
                        f"product join/meet not coordinatewise at ({x},{y})")
    return E


def interval(E: FiniteEffectAlgebra, a: int, b: int) -> FiniteEffectAlgebra:
    """The interval [a, b] as an algebra: new zero a, new one b.

    x # y = a + ((x - a) + (y - a)) whenever the inner sum is defined and the
    shifted result stays below b.
    """
    if a == b:
        raise EmptyInterval(f"interval [{a},{a}] is degenerate")
    order = derive_order(E)
    if not order.leq(a, b):
        raise NotBelow(f"{a} is not below {b}")

    carrier = [x for x in E.elements() if order.leq(a, x) and order.leq(x, b)]
    pos = {x: i for i, x in enumerate(carrier)}
    k = len(carrier)
    table = [[None] * k for _ in range(k)]
    for x in carrier:
        u = difference(E, x, a)
        for y in carrier:
            v = difference(E, y, a)
            inner = E.sum[u][v]
            if inner is None:
                continue
            shifted = E.sum[a][inner]
            if shifted is not None and order.leq(shifted, b):
                table[pos[x]][pos[y]] = pos[shifted]
    sub = FiniteEffectAlgebra(
        size=k, zero=pos[a], one=pos[b],
        sum=_freeze(table),
        labels=tuple(E.label(x) for x in carrier),
    )
    bad = validate(sub)
    if bad:
        raise InternalCheckFailed(
            f"interval [{a},{b}] failed validation: {bad[:3]}")
    return sub


@dataclass(frozen=True)
class CentralDecomposition:
    """Factors [0,c] and [0,c'] with the witnessing bijection.

    iso[x] is the product index of (x meet c, x meet c'); carrier_low /
    carrier_high give the parent elements backing each factor index.
    """

    lower: FiniteEffectAlgebra
    upper: FiniteEffectAlgebra
    prod: FiniteEffectAlgebra
    iso: tuple[int, ...]
    carrier_low: tuple[int, ...]
    carrier_high: tuple[int, ...]


def central_decomposition(E: FiniteEffectAlgebra, c: int) -> CentralDecomposition:
    """Split E along a central element c as [0,c] x [0,c']."""
    # local import: structure builds on core only, so this cannot cycle
    from .structure import center

    if c == E.zero or c == E.one:
        raise NotCentral(f"element {c} gives a degenerate factor")
    cen = center(E)
    if c not in cen:
        raise NotCentral(f"element {c} is not central")

    order = derive_order(E)
    cprime = E.orth[c]
    lower = interval(E, E.zero, c)
    upper = interval(E, E.zero, cprime)
    carrier_low = tuple(x for x in E.elements()
                        if order.leq(E.zero, x) and order.leq(x, c))
    carrier_high = tuple(x for x in E.elements()
                         if order.leq(E.zero, x) and order.leq(x, cprime))
    pos_low = {x: i for i, x in enumerate(carrier_low)}
    pos_high = {x: i for i, x in enumerate(carrier_high)}

    prod = product([lower, upper])
    iso = []
    for x in E.elements():
        xl = order.meet[x][c]
        xh = order.meet[x][cprime]
        if xl is None or xh is None:
            raise InternalCheckFailed(f"missing meet with central element at {x}")
        iso.append(pos_low[xl] * upper.size + pos_high[xh])

    if len(set(iso)) != E.size or E.size != prod.size:
        raise InternalCheckFailed("central decomposition map is not a bijection")
    for x in E.elements():
        for y in E.elements():
            s = E.sum[x][y]
            ps = prod.sum[iso[x]][iso[y]]
            if (s is None) != (ps is None) or (s is not None and iso[s] != ps):
                raise InternalCheckFailed(
                    f"central decomposition does not preserve sums at ({x},{y})")
    return CentralDecomposition(
        lower=lower, upper=upper, prod=prod,
        iso=tuple(iso), carrier_low=carrier_low, carrier_high=carrier_high)


@dataclass(frozen=True)
class ConstructionSpec:
    """A declarative recipe: boolean(k), chain(m), horizontal_sum(...),
    product(...), or interval(parent, a, b) with a, b element labels."""

    kind: str
    args: tuple

    def __str__(self):
        if self.kind in ("boolean", "chain"):
            return f"{self.kind}({self.args[0]})"
        return f"{self.kind}({', '.join(str(a) for a in self.args)})"


_TOKEN = re.compile(r"\s*([(),]|[^(),\s]+)")


def _tokenize(text: str) -> list[str]:
    out, i = [], 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            break
        out.append(m.group(1))
        i = m.end()
    return out


def parse_construction(text: str) -> ConstructionSpec:
    """Parse the construction mini-language, e.g.
    horizontal_sum(boolean(2), chain(2))."""
    tokens = _tokenize(text)
    pos = 0

    def fail(msg):
        raise StructuralError(f"construction parse error: {msg} (at token {pos})")

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            fail(f"unexpected end, wanted {expected!r}")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            fail(f"wanted {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def parse_spec():
        kind = take()
        if kind in ("boolean", "chain"):
            take("(")
            arg = take()
            if not arg.isdigit():
                fail(f"{kind} needs an integer, got {arg!r}")
            take(")")
            return ConstructionSpec(kind, (int(arg),))
        if kind in ("horizontal_sum", "product"):
            take("(")
            parts = [parse_spec()]
            while peek() == ",":
                take(",")
                parts.append(parse_spec())
            take(")")
            return ConstructionSpec(kind, tuple(parts))
        if kind == "interval":
            take("(")
            parent = parse_spec()
            take(",")
            a = take()
            take(",")
            b = take()
            take(")")
            return ConstructionSpec(kind, (parent, a, b))
        fail(f"unknown construction {kind!r}")

    spec = parse_spec()
    if pos != len(tokens):
        fail(f"trailing input {tokens[pos:]!r}")
    return spec


def build(spec: ConstructionSpec) -> FiniteEffectAlgebra:
    """Materialize a ConstructionSpec."""
    if spec.kind == "boolean":
        return boolean_algebra(spec.args[0])
    if spec.kind == "chain":
        return chain(spec.args[0])
    if spec.kind == "horizontal_sum":
        return horizontal_sum([build(s) for s in spec.args])
    if spec.kind == "product":
        return product([build(s) for s in spec.args])
    if spec.kind == "interval":
        parent_spec, la, lb = spec.args
        parent = build(parent_spec)
        def resolve(lab):
            for x in parent.elements():
                if parent.label(x) == lab:
                    return x
            raise StructuralError(f"no element labelled {lab!r} in {parent_spec}")
        return interval(parent, resolve(la), resolve(lb))
    raise StructuralError(f"unknown construction kind {spec.kind!r}")
