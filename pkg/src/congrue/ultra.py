"""Ultrametric spaces with distances in a finite join-semilattice.

A semilattice V is stored as dense tables over element indices: an order
matrix, a join table, the index of the least element and, when V is a
lattice, a meet table.  A space over V is a symmetric distance table
``d[x][y]`` of element indices.  Every property here is decided by
exhaustive computation.

On a finite lattice complete meet-distributivity is plain distributivity,
which is what the checks below use.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Any, Iterator, NamedTuple, Sequence

from ._helly import empty_pairwise_family
from .eqvlat import (
    Partition,
    SubLattice,
    UnaryAlgebra,
    cong,
    is_arithmetical,
    meet as partition_meet,
    principal_congruence,
)
from .errors import (
    CarrierTooLarge,
    IndexTooLarge,
    InternalError,
    InvalidInput,
    NotDistributive,
    NotIsometric,
    NotResiduated,
)

__all__ = [
    "FiniteSemilattice",
    "UltraSpace",
    "EqSystem",
    "Violation",
    "MAX_POINTS",
    "residual",
    "is_residuated",
    "lattice_is_distributive",
    "dv_space",
    "dvee_space",
    "verify_axioms",
    "ball",
    "is_convex",
    "is_hyperconvex",
    "contractions",
    "is_contraction",
    "equiv_at",
    "eq_d",
    "cong_d",
    "delta_least_cong",
    "system_space",
    "space_system",
    "isometric_embed",
    "order_isomorphism",
    "representation_check",
    "enumerate_lattices",
    "iter_spaces",
    "semilattice_from_json",
    "space_from_json",
]

MAX_POINTS = 7
MAX_INDEX = 5


def _table(rows) -> tuple[tuple, ...]:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class FiniteSemilattice:
    """A finite join-semilattice with least element ``bottom``."""

    leq: tuple[tuple[bool, ...], ...]
    join: tuple[tuple[int, ...], ...]
    bottom: int = 0
    meet: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        m = len(self.leq)
        object.__setattr__(self, "leq", _table(tuple(bool(v) for v in r) for r in self.leq))
        object.__setattr__(self, "join", _table(self.join))
        if self.meet is not None:
            object.__setattr__(self, "meet", _table(self.meet))
        le = self.leq
        if any(len(r) != m for r in le) or len(self.join) != m or any(len(r) != m for r in self.join):
            raise InvalidInput("order and join tables must be square of the same size")
        for x in range(m):
            if not le[x][x]:
                raise InvalidInput(f"order is not reflexive at {x}")
            if not le[self.bottom][x]:
                raise InvalidInput(f"element {self.bottom} is not below {x}")
            for y in range(m):
                if x != y and le[x][y] and le[y][x]:
                    raise InvalidInput(f"order is not antisymmetric at ({x}, {y})")
                for z in range(m):
                    if le[x][y] and le[y][z] and not le[x][z]:
                        raise InvalidInput(f"order is not transitive at ({x}, {y}, {z})")
        for x in range(m):
            for y in range(m):
                if self.join[x][y] != _lub(le, x, y):
                    raise InvalidInput(f"join[{x}][{y}] is not the least upper bound")
                if self.meet is not None and self.meet[x][y] != _glb(le, x, y):
                    raise InvalidInput(f"meet[{x}][{y}] is not the greatest lower bound")

    @classmethod
    def from_order(cls, leq: Sequence[Sequence[bool]]) -> FiniteSemilattice:
        """Build join (and meet, when every pair has one) from an order matrix."""
        le = _table(tuple(bool(v) for v in r) for r in leq)
        m = len(le)
        bottoms = [x for x in range(m) if all(le[x][y] for y in range(m))]
        if not bottoms:
            raise InvalidInput("order has no least element")
        join = [[_lub(le, x, y) for y in range(m)] for x in range(m)]
        if any(v is None for r in join for v in r):
            raise InvalidInput("some pair has no least upper bound")
        meet = [[_glb(le, x, y) for y in range(m)] for x in range(m)]
        has_meet = all(v is not None for r in meet for v in r)
        return cls(le, _table(join), bottoms[0], _table(meet) if has_meet else None)

    @classmethod
    def chain(cls, k: int) -> FiniteSemilattice:
        return cls.from_order([[i <= j for j in range(k)] for i in range(k)])

    @classmethod
    def boolean(cls, atoms: int) -> FiniteSemilattice:
        """Subsets of range(atoms); element index is the bitmask."""
        m = 1 << atoms
        return cls.from_order([[i & j == i for j in range(m)] for i in range(m)])

    @classmethod
    def divisors(cls, n: int) -> FiniteSemilattice:
        """Divisors of n ordered by divisibility, in increasing numeric order."""
        ds = [d for d in range(1, n + 1) if n % d == 0]
        return cls.from_order([[b % a == 0 for b in ds] for a in ds])

    @classmethod
    def m3(cls) -> FiniteSemilattice:
        return cls.from_order([[i == 0 or j == 4 or i == j for j in range(5)] for i in range(5)])

    @classmethod
    def n5(cls) -> FiniteSemilattice:
        below = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)}
        return cls.from_order([[i == j or (i, j) in below for j in range(5)] for i in range(5)])

    @property
    def size(self) -> int:
        return len(self.leq)

    @property
    def top(self) -> int:
        return next(x for x in range(self.size) if all(self.leq[y][x] for y in range(self.size)))

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def to_json(self) -> dict:
        doc: dict[str, Any] = {
            "size": self.size,
            "order": [list(r) for r in self.leq],
            "join": [list(r) for r in self.join],
        }
        if self.meet is not None:
            doc["meet"] = [list(r) for r in self.meet]
        if self.bottom:
            doc["bottom"] = self.bottom
        return doc


def _lub(le, x, y):
    ups = [z for z in range(len(le)) if le[x][z] and le[y][z]]
    least = [z for z in ups if all(le[z][w] for w in ups)]
    return least[0] if least else None


def _glb(le, x, y):
    downs = [z for z in range(len(le)) if le[z][x] and le[z][y]]
    greatest = [z for z in downs if all(le[w][z] for w in downs)]
    return greatest[0] if greatest else None


def residual(V: FiniteSemilattice, x: int, y: int) -> int:
    """Least z with x <= y v z."""
    ds = [z for z in range(V.size) if V.leq[x][V.join[y][z]]]
    for z in ds:
        if all(V.leq[z][w] for w in ds):
            return z
    raise NotResiduated(x, y)


def is_residuated(V: FiniteSemilattice) -> bool:
    try:
        for x in range(V.size):
            for y in range(V.size):
                residual(V, x, y)
    except NotResiduated:
        return False
    return True


def lattice_is_distributive(V: FiniteSemilattice) -> bool:
    if V.meet is None:
        raise InvalidInput("distributivity needs a meet table")
    j, m, r = V.join, V.meet, range(V.size)
    return all(m[x][j[y][z]] == j[m[x][y]][m[x][z]] for x in r for y in r for z in r)


class Violation(NamedTuple):
    axiom: str
    points: tuple[int, ...]


@dataclass(frozen=True)
class UltraSpace:
    """Points range(n) with distances in V.

    ``separated`` requests the axiom d(x, y) = 0 => x = y; with it off the
    space is only pre-ultrametric.
    """

    V: FiniteSemilattice
    d: tuple[tuple[int, ...], ...]
    separated: bool = True

    def __post_init__(self):
        object.__setattr__(self, "d", _table(self.d))
        n = len(self.d)
        if any(len(r) != n for r in self.d):
            raise InvalidInput("distance table must be square")
        if any(not 0 <= v < self.V.size for r in self.d for v in r):
            raise InvalidInput("distance values must be element indices of V")

    @property
    def n(self) -> int:
        return len(self.d)

    def to_json(self) -> dict:
        return {"points": self.n, "d": [list(r) for r in self.d]}


def dvee_space(V: FiniteSemilattice) -> UltraSpace:
    """d(x, y) = x v y for x != y: the largest distance with d(0, x) = x."""
    m = V.size
    return UltraSpace(V, [[V.bottom if x == y else V.join[x][y] for y in range(m)] for x in range(m)])


def dv_space(V: FiniteSemilattice) -> UltraSpace:
    """d(x, y) = (x \\ y) v (y \\ x): the least distance with d(0, x) = x."""
    m = V.size
    res = [[residual(V, x, y) for y in range(m)] for x in range(m)]
    return UltraSpace(V, [[V.join[res[x][y]][res[y][x]] for y in range(m)] for x in range(m)])


def verify_axioms(S: UltraSpace) -> list[Violation]:
    """Every violated axiom instance; an empty list means S is valid."""
    V, d, n = S.V, S.d, S.n
    out = []
    for x in range(n):
        if d[x][x] != V.bottom:
            out.append(Violation("zero", (x,)))
    for x, y in combinations(range(n), 2):
        if d[x][y] != d[y][x]:
            out.append(Violation("symmetry", (x, y)))
        if S.separated and d[x][y] == V.bottom:
            out.append(Violation("separation", (x, y)))
    for x, y, z in product(range(n), repeat=3):
        if not V.leq[d[x][y]][V.join[d[x][z]][d[z][y]]]:
            out.append(Violation("triangle", (x, y, z)))
    return out


def _ball_mask(S: UltraSpace, a: int, r: int) -> int:
    row, le = S.d[a], S.V.leq
    return sum(1 << x for x in range(S.n) if le[row[x]][r])


def ball(S: UltraSpace, a: int, r: int) -> frozenset[int]:
    """B(a, r) = {x : d(a, x) <= r}."""
    return frozenset(x for x in range(S.n) if S.V.leq[S.d[a][x]][r])


def is_convex(S: UltraSpace) -> bool:
    """d(a, b) <= r v s implies B(a, r) and B(b, s) meet."""
    V, n = S.V, S.n
    masks = [[_ball_mask(S, a, r) for r in range(V.size)] for a in range(n)]
    for a, b in product(range(n), repeat=2):
        for r, s in product(range(V.size), repeat=2):
            if V.leq[S.d[a][b]][V.join[r][s]] and not masks[a][r] & masks[b][s]:
                return False
    return True


def is_hyperconvex(S: UltraSpace) -> bool:
    """Convex, and every pairwise-intersecting family of balls has a common point."""
    if not is_convex(S):
        return False
    balls = sorted({_ball_mask(S, a, r) for a in range(S.n) for r in range(S.V.size)})
    bad = empty_pairwise_family(
        [[b] for b in balls], (1 << S.n) - 1, lambda c1, c2: bool(c1[1] & c2[1])
    )
    return bad is None


def _guard(n: int):
    if n > MAX_POINTS:
        raise CarrierTooLarge(f"{n} points exceed the enumeration guard {MAX_POINTS}")


def is_contraction(S: UltraSpace, f: Sequence[int]) -> bool:
    le, d = S.V.leq, S.d
    return all(le[d[f[x]][f[y]]][d[x][y]] for x in range(S.n) for y in range(S.n))


def contractions(S: UltraSpace) -> list[tuple[int, ...]]:
    """All self-maps with d(f(x), f(y)) <= d(x, y), in lexicographic order."""
    n = S.n
    _guard(n)
    le, d = S.V.leq, S.d
    out: list[tuple[int, ...]] = []
    f = [0] * n

    def assign(x: int):
        if x == n:
            out.append(tuple(f))
            return
        for v in range(n):
            if all(le[d[v][f[y]]][d[x][y]] for y in range(x)):
                f[x] = v
                assign(x + 1)

    assign(0)
    return out


def equiv_at(S: UltraSpace, r: int) -> Partition:
    """The equivalence {(x, y) : d(x, y) <= r}."""
    le = S.V.leq
    p = Partition.from_pairs(S.n, [(x, y) for x, y in combinations(range(S.n), 2) if le[S.d[x][y]][r]])
    if any(p.related(x, y) != le[S.d[x][y]][r] for x, y in combinations(range(S.n), 2)):
        raise InvalidInput(f"relation at radius {r} is not transitive; check the triangle axiom")
    return p


def eq_d(S: UltraSpace) -> SubLattice:
    """Eq_d(E): the family of all equiv_at(S, r), r in V."""
    return SubLattice(S.n, tuple(equiv_at(S, r) for r in range(S.V.size)))


def cong_d(S: UltraSpace) -> SubLattice:
    """Equivalences preserved by every contraction of S."""
    return cong(UnaryAlgebra(S.n, tuple(contractions(S))))


def delta_least_cong(S: UltraSpace, x: int, y: int) -> Partition:
    """Least member of cong_d(S) containing (x, y), computed two ways."""
    maps = contractions(S)
    by_closure = principal_congruence(S.n, maps, x, y)
    by_meet = Partition.indiscrete(S.n)
    for p in cong(UnaryAlgebra(S.n, tuple(maps))):
        if p.related(x, y):
            by_meet = partition_meet(by_meet, p)
    if by_closure != by_meet:
        raise InternalError(f"least congruence mismatch: {by_closure} vs {by_meet}")
    return by_closure


@dataclass(frozen=True)
class EqSystem:
    """An indexed family of equivalences on range(n)."""

    n: int
    relations: tuple[Partition, ...]

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if any(p.n != self.n for p in self.relations):
            raise InvalidInput(f"every relation must live on range({self.n})")


def system_space(M: EqSystem) -> UltraSpace:
    """d(x, y) = {i : (x, y) not in rho_i}, as a bitmask in the powerset lattice."""
    k = len(M.relations)
    if k > MAX_INDEX:
        raise IndexTooLarge(f"index set of size {k} exceeds {MAX_INDEX}")
    d = [
        [sum(1 << i for i, p in enumerate(M.relations) if not p.related(x, y)) for y in range(M.n)]
        for x in range(M.n)
    ]
    inter = Partition.indiscrete(M.n)
    for p in M.relations:
        inter = partition_meet(inter, p)
    return UltraSpace(_powerset(k), d, separated=inter == Partition.discrete(M.n))


@lru_cache(maxsize=None)
def _powerset(k: int) -> FiniteSemilattice:
    return FiniteSemilattice.boolean(k)


def space_system(S: UltraSpace) -> EqSystem:
    """rho_i = {(x, y) : i not in d(x, y)}; S must be over a powerset lattice."""
    k = S.V.size.bit_length() - 1
    if 1 << k != S.V.size or S.V != _powerset(k):
        raise InvalidInput("space_system needs distances in a powerset lattice (bitmask encoding)")
    if k > MAX_INDEX:
        raise IndexTooLarge(f"index set of size {k} exceeds {MAX_INDEX}")
    rels = []
    for i in range(k):
        p = Partition.from_pairs(S.n, [(x, y) for x in range(S.n) for y in range(S.n) if not S.d[x][y] >> i & 1])
        rels.append(p)
    return EqSystem(S.n, tuple(rels))


def isometric_embed(S: UltraSpace) -> tuple[tuple[int, ...], ...]:
    """Coordinates x -> (d(x, e))_e in V^E, checked to be an isometry.

    The distance on V^E is the join over coordinates of d_V.
    """
    V = S.V
    dv = dv_space(V).d
    coords = S.d
    for x, y in product(range(S.n), repeat=2):
        dist = V.bottom
        for e in range(S.n):
            dist = V.join[dist][dv[coords[x][e]][coords[y][e]]]
        if dist != S.d[x][y]:
            raise NotIsometric(f"points {x}, {y}: embedded distance {dist} != {S.d[x][y]}")
    return coords


def order_isomorphism(le1: Sequence[Sequence[bool]], le2: Sequence[Sequence[bool]]) -> list[int] | None:
    """An order isomorphism between two finite posets, as a list, or None."""
    m = len(le1)
    if len(le2) != m:
        return None

    def sig(le, x):
        return (sum(le[y][x] for y in range(m)), sum(le[x][y] for y in range(m)))

    s1 = [sig(le1, x) for x in range(m)]
    s2 = [sig(le2, x) for x in range(m)]
    if sorted(s1) != sorted(s2):
        return None
    phi = [-1] * m
    used = [False] * m

    def extend(x: int) -> bool:
        if x == m:
            return True
        for v in range(m):
            if used[v] or s2[v] != s1[x]:
                continue
            if all(le1[x][y] == le2[v][phi[y]] and le1[y][x] == le2[phi[y]][v] for y in range(x)):
                phi[x], used[v] = v, True
                if extend(x + 1):
                    return True
                used[v] = False
        return False

    return phi if extend(0) else None


def representation_check(V: FiniteSemilattice) -> bool:
    """V is isomorphic to cong_d(dv_space(V)), and that lattice is arithmetical."""
    _guard(V.size)
    if V.meet is None:
        raise InvalidInput("representation_check needs a lattice (meet table)")
    if not lattice_is_distributive(V):
        raise NotDistributive("V is not distributive")
    C = cong_d(dv_space(V))
    le_c = [[p <= q for q in C.elements] for p in C.elements]
    return order_isomorphism(V.leq, le_c) is not None and is_arithmetical(C)


def _canonical_order(le) -> tuple:
    m = len(le)
    best = None
    for perm in permutations(range(1, m - 1)):
        relabel = (0, *perm, m - 1)
        key = tuple(le[relabel[i]][relabel[j]] for i in range(m) for j in range(m))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def enumerate_lattices(max_size: int) -> tuple[FiniteSemilattice, ...]:
    """All lattices with 1..max_size elements, one per isomorphism class.

    Index 0 is the bottom and the last index the top.
    """
    if max_size > MAX_POINTS:
        raise CarrierTooLarge(f"lattice enumeration is limited to {MAX_POINTS} elements")
    out = [FiniteSemilattice.chain(1)] if max_size >= 1 else []
    for m in range(2, max_size + 1):
        k = m - 2
        pairs = list(combinations(range(k), 2))
        seen = set()
        for choice in product((0, 1, 2), repeat=len(pairs)):
            lt = [[False] * k for _ in range(k)]
            for (i, j), c in zip(pairs, choice):
                if c == 1:
                    lt[i][j] = True
                elif c == 2:
                    lt[j][i] = True
            if any(lt[a][b] and lt[b][c] and not lt[a][c] for a in range(k) for b in range(k) for c in range(k)):
                continue
            le = [[False] * m for _ in range(m)]
            for x in range(m):
                le[0][x] = le[x][m - 1] = le[x][x] = True
            for i in range(k):
                for j in range(k):
                    if lt[i][j]:
                        le[i + 1][j + 1] = True
            if any(_lub(le, x, y) is None for x in range(m) for y in range(m)):
                continue
            key = _canonical_order(le)
            if key in seen:
                continue
            seen.add(key)
            out.append(FiniteSemilattice.from_order(le))
    return tuple(out)


def iter_spaces(V: FiniteSemilattice, n: int) -> Iterator[UltraSpace]:
    """Ultrametric (separated) spaces on range(n) over V, one per relabelling class of points."""
    nonzero = [v for v in range(V.size) if v != V.bottom]
    pairs = list(combinations(range(n), 2))
    seen = set()
    perms = list(permutations(range(n)))
    for values in product(nonzero, repeat=len(pairs)):
        d = [[V.bottom] * n for _ in range(n)]
        for (x, y), v in zip(pairs, values):
            d[x][y] = d[y][x] = v
        if any(not V.leq[d[x][y]][V.join[d[x][z]][d[z][y]]] for x in range(n) for y in range(n) for z in range(n)):
            continue
        key = min(tuple(d[p[x]][p[y]] for x, y in pairs) for p in perms)
        if key in seen:
            continue
        seen.add(key)
        yield UltraSpace(V, d)


def _int_table(doc, where, m=None):
    if not isinstance(doc, list) or (m is not None and len(doc) != m):
        raise InvalidInput(f"{where}: expected a {m}x{m} table" if m else f"{where}: expected a table")
    for r in doc:
        if not isinstance(r, list) or len(r) != len(doc):
            raise InvalidInput(f"{where}: rows must have length {len(doc)}")
        for v in r:
            if not isinstance(v, (int, bool)):
                raise InvalidInput(f"{where}: entries must be integers")
    return doc


def semilattice_from_json(doc: Any) -> FiniteSemilattice:
    """Read ``{"size": m, "order": [[...]], "join": [[...]], "meet": [[...]]?}``."""
    if not isinstance(doc, dict):
        raise InvalidInput("semilattice: expected a JSON object")
    m = doc.get("size")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise InvalidInput("size: expected a positive integer")
    order = _int_table(doc.get("order"), "order", m)
    meet = _int_table(doc["meet"], "meet", m) if "meet" in doc else None
    if "join" not in doc:
        V = FiniteSemilattice.from_order(order)
        return V if meet is None else FiniteSemilattice(V.leq, V.join, V.bottom, meet)
    join = _int_table(doc["join"], "join", m)
    bottom = doc.get("bottom", 0)
    if not isinstance(bottom, int) or not 0 <= bottom < m:
        raise InvalidInput("bottom: expected an element index")
    return FiniteSemilattice(order, join, bottom, meet)


def space_from_json(doc: Any, V: FiniteSemilattice) -> UltraSpace:
    """Read ``{"points": n, "d": [[...]]}`` over V."""
    if not isinstance(doc, dict):
        raise InvalidInput("space: expected a JSON object")
    n = doc.get("points")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidInput("points: expected a positive integer")
    d = _int_table(doc.get("d"), "d", n)
    return UltraSpace(V, d, separated=bool(doc.get("separated", True)))
