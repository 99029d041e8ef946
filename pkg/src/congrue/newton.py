"""Integer-valued polynomials in the binomial basis C(X, k).

A polynomial ``sum lambda_k * C(X, k)`` with integer ``lambda_k`` maps the
integers into the integers, and every integer-valued polynomial has this
form.  All arithmetic is exact.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import InvalidInput, NotIntegerValued

__all__ = [
    "NewtonPoly",
    "MonomialPoly",
    "binom",
    "falling_factorial",
    "evaluate",
    "from_values",
    "forward_differences",
    "from_monomial",
    "to_monomial",
    "lcm_upto",
    "poly_from_json",
]


def falling_factorial(x: int, k: int) -> int:
    """x * (x - 1) * ... * (x - k + 1); the empty product for k = 0."""
    result = 1
    for i in range(k):
        result *= x - i
    return result


def binom(x: int, k: int) -> int:
    """Generalized binomial coefficient C(x, k) for any integer x and k >= 0.

    >>> binom(5, 2), binom(-1, 3), binom(2, 5)
    (10, -1, 0)
    """
    if k < 0:
        raise InvalidInput(f"k must be non-negative, got {k}")
    q, r = divmod(falling_factorial(x, k), math.factorial(k))
    assert r == 0
    return q


_lcm_cache = [1]
_lcm_lock = threading.Lock()


def lcm_upto(n: int) -> int:
    """lcm(1, ..., n), with lcm_upto(0) == 1.  Results are memoized."""
    if n < 0:
        raise InvalidInput(f"n must be non-negative, got {n}")
    cache = _lcm_cache
    if n < len(cache):
        return cache[n]
    with _lcm_lock:
        while len(cache) <= n:
            m = len(cache)
            cache.append(math.lcm(cache[-1], m))
        return cache[n]


def _strip(coeffs: Iterable[Any]) -> tuple:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class NewtonPoly:
    """Polynomial ``sum coeffs[k] * C(X, k)`` with integer coefficients.

    Trailing zeros are stripped so equality is tuple equality; the zero
    polynomial has ``coeffs == ()`` and degree -1.
    """

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        for c in self.coeffs:
            if not isinstance(c, int) or isinstance(c, bool):
                raise InvalidInput(f"coefficient {c!r} is not an integer")
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        return evaluate(self, x)

    def to_json(self) -> dict:
        return {"basis": "binomial", "coeffs": [str(c) for c in self.coeffs]}


@dataclass(frozen=True)
class MonomialPoly:
    """Polynomial ``sum coeffs[i] * X**i`` with rational coefficients."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(Fraction(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> dict:
        return {"basis": "monomial", "coeffs": [str(c) for c in self.coeffs]}


def evaluate(p: NewtonPoly, x: int) -> int:
    """Exact value of ``sum lambda_k * C(x, k)``."""
    total = 0
    b = 1  # C(x, k), updated incrementally
    for k, c in enumerate(p.coeffs):
        if k:
            b = b * (x - k + 1) // k
        total += c * b
    return total


def forward_differences(values: Sequence) -> list:
    """Leading entries ``Delta^k f(0)`` of the forward-difference table."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def from_values(values: Sequence[int]) -> NewtonPoly:
    """Interpolate f(0), ..., f(n) by a polynomial of degree <= n."""
    if len(values) == 0:
        raise InvalidInput("from_values needs at least one value")
    return NewtonPoly(tuple(forward_differences(values)))


def from_monomial(q: MonomialPoly) -> NewtonPoly:
    """Change basis from monomials to binomials.

    Raises NotIntegerValued when some binomial coefficient is not an
    integer, which happens exactly when q does not map Z into Z.
    """
    n = max(q.degree, 0)
    lambdas = forward_differences([q(i) for i in range(n + 1)])
    for k, lam in enumerate(lambdas):
        if lam.denominator != 1:
            raise NotIntegerValued(f"coefficient of C(X,{k}) is {lam}")
    return NewtonPoly(tuple(int(lam) for lam in lambdas))


def to_monomial(p: NewtonPoly) -> MonomialPoly:
    """Expand back to the monomial basis (exact rationals)."""
    out = [Fraction(0)] * len(p.coeffs)
    falling = [1]  # coefficients of X^{underline k}
    for k, c in enumerate(p.coeffs):
        if k:
            nxt = [0] * (len(falling) + 1)
            for i, a in enumerate(falling):
                nxt[i + 1] += a
                nxt[i] -= (k - 1) * a
            falling = nxt
        scale = Fraction(c, math.factorial(k))
        for i, a in enumerate(falling):
            out[i] += scale * a
    return MonomialPoly(tuple(out))


def _parse_int(s: Any, where: str) -> int:
    if isinstance(s, bool):
        raise InvalidInput(f"{where}: expected an integer, got {s!r}")
    if isinstance(s, int):
        return s
    if isinstance(s, str):
        try:
            return int(s.strip())
        except ValueError:
            pass
    raise InvalidInput(f"{where}: expected a decimal integer string, got {s!r}")


def _parse_fraction(s: Any, where: str) -> Fraction:
    if isinstance(s, (int, str)) and not isinstance(s, bool):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
    raise InvalidInput(f"{where}: expected a rational string, got {s!r}")


def poly_from_json(doc: Any) -> NewtonPoly | MonomialPoly:
    """Read ``{"basis": "binomial"|"monomial", "coeffs": [...]}``."""
    if not isinstance(doc, dict):
        raise InvalidInput("polynomial: expected a JSON object")
    basis = doc.get("basis")
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, list):
        raise InvalidInput("coeffs: expected a list")
    if basis == "binomial":
        return NewtonPoly(tuple(_parse_int(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)))
    if basis == "monomial":
        return MonomialPoly(tuple(_parse_fraction(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)))
    raise InvalidInput(f"basis: unknown basis {basis!r}")
