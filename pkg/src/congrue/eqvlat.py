"""Finite equivalence-relation lattices.

Partitions of ``{0, ..., n-1}`` are stored as canonical label tuples
(restricted growth strings): element i sits in block ``labels[i]`` and block
ids appear in first-occurrence order.  Everything here is exhaustive
computation on small carriers; the guards are hard errors.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Iterator, Sequence

from ._helly import empty_pairwise_family
from .errors import CarrierTooLarge, InvalidInput, OutOfRange

__all__ = [
    "Partition",
    "SubLattice",
    "UnaryAlgebra",
    "Relation",
    "MAX_ENUM_CARRIER",
    "MAX_CONG_CARRIER",
    "all_partitions",
    "bell",
    "eqv",
    "meet",
    "join",
    "compose",
    "commutes",
    "relation_to_partition",
    "lattice_closure",
    "is_distributive",
    "is_arithmetical",
    "crc_holds",
    "crc_counterexample",
    "pol1",
    "preserves",
    "cong",
    "cong_enumerate",
    "principal_congruence",
    "is_dense",
    "find_m3_dense",
    "congruences_of_zm",
    "zm_congruence",
    "partition_from_json",
]

MAX_ENUM_CARRIER = 7
MAX_CONG_CARRIER = 12
MAX_ZM = 60

Relation = frozenset  # of (x, y) pairs


def _canonical(labels: Iterable[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(lab, len(seen)) for lab in labels)


@dataclass(frozen=True)
class Partition:
    """An equivalence relation on ``range(n)``."""

    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", _canonical(self.labels))

    @classmethod
    def discrete(cls, n: int) -> Partition:
        return cls(tuple(range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> Partition:
        return cls((0,) * n)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> Partition:
        blocks = [list(b) for b in blocks]
        elems = [x for b in blocks for x in b]
        if n is None:
            n = max(elems, default=-1) + 1
        if sorted(elems) != list(range(n)):
            raise InvalidInput(f"blocks {blocks} do not partition range({n})")
        labels = [0] * n
        for i, b in enumerate(blocks):
            for x in b:
                labels[x] = i
        return cls(tuple(labels))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Partition:
        """Equivalence relation generated by the given pairs."""
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in pairs:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
        return cls(tuple(find(x) for x in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = []
        for x, lab in enumerate(self.labels):
            if lab == len(out):
                out.append([])
            out[lab].append(x)
        return out

    def block_masks(self) -> list[int]:
        masks = [0] * (max(self.labels, default=-1) + 1)
        for x, lab in enumerate(self.labels):
            masks[lab] |= 1 << x
        return masks

    def related(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    def pairs(self) -> Relation:
        return Relation((x, y) for x in range(self.n) for y in range(self.n) if self.related(x, y))

    def refines(self, other: Partition) -> bool:
        """self is contained in other as a relation."""
        image: dict[int, int] = {}
        return all(image.setdefault(a, b) == b for a, b in zip(self.labels, other.labels))

    def __le__(self, other: Partition) -> bool:
        return self.refines(other)

    def __lt__(self, other: Partition) -> bool:
        return self != other and self.refines(other)

    def meet(self, other: Partition) -> Partition:
        return meet(self, other)

    def join(self, other: Partition) -> Partition:
        return join(self, other)

    def to_json(self) -> list[list[int]]:
        return self.blocks()

    def __str__(self):
        return "|".join("".join(map(str, b)) for b in self.blocks())


def _same_carrier(p: Partition, q: Partition):
    if p.n != q.n:
        raise InvalidInput(f"carrier mismatch: {p.n} vs {q.n}")


def meet(p: Partition, q: Partition) -> Partition:
    _same_carrier(p, q)
    return Partition(tuple(zip(p.labels, q.labels)))  # type: ignore[arg-type]


def join(p: Partition, q: Partition) -> Partition:
    _same_carrier(p, q)
    n = p.n
    pairs = [(x, y) for part in (p, q) for b in part.blocks() for x, y in zip(b, b[1:])]
    return Partition.from_pairs(n, pairs)


def compose(p: Partition, q: Partition) -> Relation:
    """Relational product ``p o q = {(x, y) : x q z and z p y for some z}``."""
    _same_carrier(p, q)
    touching = {(a, b) for a, b in zip(q.labels, p.labels)}
    n = p.n
    return Relation(
        (x, y) for x in range(n) for y in range(n) if (q.labels[x], p.labels[y]) in touching
    )


def commutes(p: Partition, q: Partition) -> bool:
    return compose(p, q) == compose(q, p)


def relation_to_partition(rel: Relation, n: int) -> Partition | None:
    """The partition equal to rel, or None when rel is not an equivalence."""
    p = Partition.from_pairs(n, rel)
    return p if p.pairs() == rel else None


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def _guard(n: int, limit: int = MAX_ENUM_CARRIER):
    if n > limit:
        raise CarrierTooLarge(f"carrier size {n} exceeds the enumeration guard {limit}")


@lru_cache(maxsize=None)
def all_partitions(n: int) -> tuple[Partition, ...]:
    """Every partition of range(n), in lexicographic order of labels."""
    _guard(n)
    out = []

    def rgs(prefix: list[int], top: int):
        if len(prefix) == n:
            out.append(Partition(tuple(prefix)))
            return
        for lab in range(top + 2):
            prefix.append(lab)
            rgs(prefix, max(top, lab))
            prefix.pop()

    rgs([], -1)
    return tuple(out)


@dataclass(frozen=True)
class SubLattice:
    """A finite family of partitions of range(n), deduplicated and sorted."""

    n: int
    elements: tuple[Partition, ...]

    def __post_init__(self):
        elems = set(self.elements)
        for p in elems:
            if p.n != self.n:
                raise InvalidInput(f"partition {p} is not on carrier {self.n}")
        object.__setattr__(self, "elements", tuple(sorted(elems, key=lambda p: p.labels)))

    @property
    def bounded(self) -> bool:
        return Partition.discrete(self.n) in self and Partition.indiscrete(self.n) in self

    def is_closed(self) -> bool:
        s = set(self.elements)
        return all(meet(p, q) in s and join(p, q) in s for p, q in combinations(self.elements, 2))

    def __contains__(self, p) -> bool:
        return p in set(self.elements)

    def __iter__(self) -> Iterator[Partition]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> list:
        return [p.to_json() for p in self.elements]


def eqv(n: int) -> SubLattice:
    """All of Eqv(range(n))."""
    return SubLattice(n, all_partitions(n))


def lattice_closure(gens: Iterable[Partition], n: int | None = None, bounds: bool = True) -> SubLattice:
    """Least meet/join-closed family containing gens (and Delta, Nabla if bounds)."""
    gens = list(gens)
    if n is None:
        if not gens:
            raise InvalidInput("carrier size needed for an empty generator set")
        n = gens[0].n
    elems = set(gens)
    if bounds:
        elems |= {Partition.discrete(n), Partition.indiscrete(n)}
    frontier = list(elems)
    while frontier:
        fresh = set()
        for p in frontier:
            for q in list(elems):
                for r in (meet(p, q), join(p, q)):
                    if r not in elems and r not in fresh:
                        fresh.add(r)
        elems |= fresh
        frontier = list(fresh)
    return SubLattice(n, tuple(elems))


def _op_tables(L: SubLattice):
    elems = L.elements
    index = {p: i for i, p in enumerate(elems)}
    k = len(elems)
    mt = [[0] * k for _ in range(k)]
    jt = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            m = index.get(meet(elems[i], elems[j]))
            jn = index.get(join(elems[i], elems[j]))
            if m is None or jn is None:
                raise InvalidInput("family is not closed under meet and join")
            mt[i][j] = mt[j][i] = m
            jt[i][j] = jt[j][i] = jn
    return mt, jt


def is_distributive(L: SubLattice) -> bool:
    mt, jt = _op_tables(L)
    k = len(L)
    return all(
        mt[x][jt[y][z]] == jt[mt[x][y]][mt[x][z]]
        for x in range(k) for y in range(k) for z in range(y + 1, k)
    )


def is_arithmetical(L: SubLattice) -> bool:
    """Distributive and all members pairwise commute."""
    return is_distributive(L) and all(commutes(p, q) for p, q in combinations(L.elements, 2))


def crc_counterexample(L: SubLattice) -> list[tuple[Partition, list[int]]] | None:
    """A pairwise-compatible system ``x == a_i (theta_i)`` with no solution.

    Returned as ``(theta_i, block)`` pairs; None if L satisfies the Chinese
    remainder condition.
    """
    nabla = Partition.indiscrete(L.n)
    thetas = [p for p in L.elements if p != nabla]
    groups = [p.block_masks() for p in thetas]

    def rep(mask: int) -> int:
        return (mask & -mask).bit_length() - 1

    def compatible(c1, c2):
        (g1, m1), (g2, m2) = c1, c2
        return join(thetas[g1], thetas[g2]).related(rep(m1), rep(m2))

    found = empty_pairwise_family(groups, (1 << L.n) - 1, compatible)
    if found is None:
        return None
    return [(thetas[g], [x for x in range(L.n) if m >> x & 1]) for g, m in found]


def crc_holds(L: SubLattice) -> bool:
    return crc_counterexample(L) is None


@dataclass(frozen=True)
class UnaryAlgebra:
    """A carrier range(n) with a finite set of total self-maps."""

    n: int
    operations: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ops = tuple(sorted({tuple(f) for f in self.operations}))
        for f in ops:
            if len(f) != self.n or any(not 0 <= v < self.n for v in f):
                raise InvalidInput(f"operation {f} is not a total map on range({self.n})")
        object.__setattr__(self, "operations", ops)


def preserves(f: Sequence[int], p: Partition) -> bool:
    image: dict[int, int] = {}
    return all(image.setdefault(lab, p.labels[f[x]]) == p.labels[f[x]] for x, lab in enumerate(p.labels))


def pol1(L: Iterable[Partition], n: int | None = None) -> list[tuple[int, ...]]:
    """All unary maps preserving every member of L, in lexicographic order."""
    parts = list(L)
    if n is None:
        n = getattr(L, "n", None)
        if n is None:
            n = parts[0].n
    _guard(n)
    # checks[x]: (y, p) with y < x and x p y
    checks = [[(y, p) for p in parts for y in range(x) if p.related(x, y)] for x in range(n)]
    out: list[tuple[int, ...]] = []
    f = [0] * n

    def assign(x: int):
        if x == n:
            out.append(tuple(f))
            return
        for v in range(n):
            if all(p.related(v, f[y]) for y, p in checks[x]):
                f[x] = v
                assign(x + 1)

    assign(0)
    return out


def principal_congruence(n: int, ops: Iterable[Sequence[int]], x: int, y: int) -> Partition:
    """Least equivalence containing (x, y) and preserved by every op."""
    ops = list(ops)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queue = [(x, y)]
    if find(x) != find(y):
        parent[find(y)] = find(x)
    while queue:
        a, b = queue.pop()
        for f in ops:
            ra, rb = find(f[a]), find(f[b])
            if ra != rb:
                parent[rb] = ra
                queue.append((f[a], f[b]))
    return Partition(tuple(find(a) for a in range(n)))


def cong(alg: UnaryAlgebra) -> SubLattice:
    """Congruence lattice of a unary algebra.

    Every congruence is a join of principal congruences, so the lattice is
    built as the join-closure of {Delta} and the principal ones.
    """
    n = alg.n
    _guard(n, MAX_CONG_CARRIER)
    principals = {
        principal_congruence(n, alg.operations, x, y) for x, y in combinations(range(n), 2)
    }
    elems = {Partition.discrete(n)}
    for c in sorted(principals, key=lambda p: p.labels):
        elems |= {join(e, c) for e in elems}
    return SubLattice(n, tuple(elems))


def cong_enumerate(alg: UnaryAlgebra) -> SubLattice:
    """Same as cong, by filtering all partitions (carrier <= 7)."""
    return SubLattice(
        alg.n,
        tuple(p for p in all_partitions(alg.n) if all(preserves(f, p) for f in alg.operations)),
    )


def is_dense(L: SubLattice) -> bool:
    """Cong(A, Pol1(L)) == Eqv(A)."""
    c = cong(UnaryAlgebra(L.n, tuple(pol1(L))))
    return len(c) == bell(L.n)


def find_m3_dense(n: int) -> SubLattice | None:
    """First dense copy of M3 in Eqv(range(n)), or None.

    Candidates are triples of pairwise complementary partitions (meet Delta,
    join Nabla), scanned in lexicographic order of their labels.
    """
    if n > 6:
        raise CarrierTooLarge(f"find_m3_dense searches carriers up to 6, got {n}")
    bottom, top = Partition.discrete(n), Partition.indiscrete(n)
    mids = [p for p in all_partitions(n) if p != bottom and p != top]
    comp = {
        (i, j)
        for i, j in combinations(range(len(mids)), 2)
        if meet(mids[i], mids[j]) == bottom and join(mids[i], mids[j]) == top
    }
    for i, j in sorted(comp):
        for k in range(j + 1, len(mids)):
            if (i, k) in comp and (j, k) in comp:
                L = SubLattice(n, (bottom, top, mids[i], mids[j], mids[k]))
                if is_dense(L):
                    return L
    return None


def zm_congruence(m: int, d: int) -> Partition:
    """Residue classes mod d on range(m)."""
    return Partition(tuple(x % d for x in range(m)))


def congruences_of_zm(m: int) -> SubLattice:
    """Congruences of (Z_m, +): one partition per divisor of m."""
    if not 1 <= m <= MAX_ZM:
        raise OutOfRange(f"m must lie in [1, {MAX_ZM}], got {m}")
    return SubLattice(m, tuple(zm_congruence(m, d) for d in range(1, m + 1) if m % d == 0))


def partition_from_json(doc: Any, n: int | None = None, where: str = "partition") -> Partition:
    if not isinstance(doc, list) or not all(
        isinstance(b, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in b) for b in doc
    ):
        raise InvalidInput(f"{where}: expected a list of integer blocks")
    try:
        return Partition.from_blocks(doc, n)
    except InvalidInput as exc:
        raise InvalidInput(f"{where}: {exc}") from None
