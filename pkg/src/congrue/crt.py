"""Chinese remainder solving over Z and extension of congruence-preserving maps.

A finite partial map f preserves all congruences when ``(x - y) | f(x) - f(y)``
for every pair of its points.  Such a map extends one point at a time (each
step is a solvable CRT system) and then to a polynomial whose P_n
coefficients carry the ``lcm(1..n) | a_n`` certificate.
"""
from __future__ import annotations

import math
import re
from collections.abc import Mapping
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .cgg import PnSeries, decompose, tower_interval, tower_point, tower_size_for
from .errors import (
    CertificateViolation,
    DomainExceedsTower,
    InternalUnsolvable,
    InvalidInput,
    NotPreserving,
    Unsolvable,
)

__all__ = [
    "Congruence",
    "PartialMap",
    "solve",
    "parse_constraint",
    "check_partial",
    "first_violation",
    "kaarli_extend",
    "extend_to_tower",
    "extend_to_polynomial",
]


@dataclass(frozen=True)
class Congruence:
    """x == residue (mod modulus); modulus 0 pins x to residue."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 0:
            raise InvalidInput(f"modulus must be non-negative, got {self.modulus}")
        if self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def __contains__(self, x: int) -> bool:
        if self.modulus == 0:
            return x == self.residue
        return (x - self.residue) % self.modulus == 0

    def __str__(self):
        return f"{self.residue} mod {self.modulus}"


_CONSTRAINT_RE = re.compile(r"^\s*(-?\d+)\s+mod\s+(\d+)\s*$")


def parse_constraint(line: str) -> Congruence:
    """Parse ``"a mod r"``."""
    m = _CONSTRAINT_RE.match(line)
    if not m:
        raise InvalidInput(f"cannot parse constraint {line!r}; expected 'a mod r'")
    return Congruence(int(m.group(1)), int(m.group(2)))


def _merge(a1: int, m1: int, a2: int, m2: int) -> tuple[int, int]:
    # both moduli positive and the pair compatible
    g = math.gcd(m1, m2)
    step = m2 // g
    t = ((a2 - a1) // g) * pow(m1 // g, -1, step) % step if step > 1 else 0
    lcm = m1 * step
    return (a1 + m1 * t) % lcm, lcm


def _compatible(c1: Congruence, c2: Congruence) -> bool:
    g = math.gcd(c1.modulus, c2.modulus)
    if g == 0:
        return c1.residue == c2.residue
    return (c1.residue - c2.residue) % g == 0


def solve(constraints: Iterable[Congruence]) -> Congruence:
    """Common solution class of a system of congruences.

    Pairwise compatibility ``a_i == a_j (mod gcd(r_i, r_j))`` decides
    solvability; the first incompatible pair (lexicographic) is reported
    via Unsolvable.
    """
    cs = list(constraints)
    for (i, c1), (j, c2) in combinations(enumerate(cs), 2):
        if not _compatible(c1, c2):
            raise Unsolvable(i, j)
    for c in cs:
        if c.modulus == 0:
            return Congruence(c.residue, 0)
    residue, modulus = 0, 1
    for c in cs:
        residue, modulus = _merge(residue, modulus, c.residue, c.modulus)
    return Congruence(residue, modulus)


class PartialMap(Mapping):
    """Immutable finite map Z -> Z."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        self._entries = dict(sorted(dict(entries).items()))

    def __getitem__(self, x: int) -> int:
        return self._entries[x]

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self):
        return f"PartialMap({self._entries!r})"

    def with_point(self, x: int, v: int) -> PartialMap:
        return PartialMap({**self._entries, x: v})

    def to_json(self) -> dict:
        return {"points": {str(x): str(v) for x, v in self._entries.items()}}


def first_violation(pm: Mapping[int, int]) -> tuple[int, int] | None:
    for x, y in combinations(sorted(pm), 2):
        if (pm[x] - pm[y]) % (x - y):
            return x, y
    return None


def check_partial(pm: Mapping[int, int]) -> bool:
    """True iff every pair of points satisfies (x - y) | f(x) - f(y)."""
    return first_violation(pm) is None


def _require_preserving(pm):
    bad = first_violation(pm)
    if bad is not None:
        raise NotPreserving(*bad)


def kaarli_extend(pm: Mapping[int, int], z: int) -> int:
    """A value v such that pm extended by z -> v still preserves congruences.

    For each value b' of pm, the finest congruence identifying z with every
    point b of the fibre over b' is the meet of the ``==_{|b - z|}``, i.e.
    ``==_{lcm |b - z|}``.  Solving ``x == b' (mod that lcm)`` for all b'
    gives the answer; the least non-negative member of the solution class
    is returned.
    """
    if z in pm:
        raise InvalidInput(f"point {z} is already in the domain")
    _require_preserving(pm)
    fibres: dict[int, int] = {}
    for b, v in pm.items():
        fibres[v] = math.lcm(fibres.get(v, 1), abs(b - z))
    try:
        sol = solve(Congruence(v, m) for v, m in fibres.items())
    except Unsolvable as exc:
        raise InternalUnsolvable(f"extension system unsolvable at {z}: {exc}") from exc
    return sol.residue


def extend_to_tower(pm: Mapping[int, int], n_terms: int) -> PartialMap:
    """Extend pm to all of A_N, filling points in b_n order."""
    _require_preserving(pm)
    interval = tower_interval(n_terms)
    outside = [x for x in pm if x not in interval]
    if outside:
        raise DomainExceedsTower(f"points {outside} lie outside A_{n_terms}")
    out = PartialMap(pm)
    for n in range(n_terms):
        b = tower_point(n)
        if b not in out:
            out = out.with_point(b, kaarli_extend(out, b))
    return out


def extend_to_polynomial(pm: Mapping[int, int]) -> PnSeries:
    """Certified P_n series agreeing with pm on its domain."""
    n_terms = tower_size_for(pm)
    total = extend_to_tower(pm, n_terms)
    series = decompose(total.__getitem__, n_terms)
    if not series.certified:
        raise CertificateViolation(f"series {series.coeffs} lacks the lcm certificate")
    return series
