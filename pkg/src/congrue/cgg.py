"""Congruence-preserving maps on Z: the interleaved P_n basis and certificates.

``P_{2k}(X) = C(X + k, 2k)`` and ``P_{2k+1}(X) = C(X + k, 2k + 1)``.  P_n
vanishes on the interval ``A_n`` and equals ``(-1)**n`` at ``b_n``, the
unique point of ``A_{n+1} - A_n``; the points b_0, b_1, ... run through
0, -1, 1, -2, 2, ...

A map f: Z -> Z preserves every congruence iff its P_n coefficients satisfy
``lcm(1..n) | a_n``.  For a polynomial in the binomial basis the same test
reads ``lcm(1..k) | lambda_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import InvalidInput
from .newton import NewtonPoly, _parse_int, binom, lcm_upto

__all__ = [
    "PnSeries",
    "pn_eval",
    "tower_point",
    "tower_index",
    "tower_interval",
    "tower_size_for",
    "decompose",
    "series_eval",
    "certify_newton",
    "certify_series",
    "fn_poly",
    "window_oracle",
    "small_window_check",
    "vandermonde_delta",
    "series_from_json",
]


def pn_eval(n: int, x: int) -> int:
    k, odd = divmod(n, 2)
    return binom(x + k, 2 * k + odd)


def tower_point(n: int) -> int:
    """b_n: 0, -1, 1, -2, 2, ..."""
    k, odd = divmod(n, 2)
    return -k - 1 if odd else k


def tower_index(x: int) -> int:
    """Inverse of tower_point."""
    return 2 * x if x >= 0 else -2 * x - 1


def tower_interval(n: int) -> range:
    """A_n as a range: A_{2k} = [-k, k-1], A_{2k+1} = [-k, k]."""
    k, odd = divmod(n, 2)
    return range(-k, k + odd)


def tower_size_for(points) -> int:
    """Least N such that every point lies in A_N."""
    return max((tower_index(x) + 1 for x in points), default=0)


def _is_certified(coeffs) -> bool:
    return all(a % lcm_upto(n) == 0 for n, a in enumerate(coeffs))


@dataclass(frozen=True)
class PnSeries:
    """Finite sum ``sum coeffs[n] * P_n``.

    ``certified`` is computed on construction; an uncertified series is still
    a valid integer-valued polynomial.  Length is kept as given, since it
    records the tower on which the series was fitted.
    """

    coeffs: tuple[int, ...] = ()
    certified: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        object.__setattr__(self, "certified", _is_certified(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, x: int) -> int:
        return series_eval(self, x)

    def to_json(self) -> dict:
        return {
            "basis": "pn",
            "coeffs": [str(a) for a in self.coeffs],
            "certified": self.certified,
        }


def series_from_json(doc: Any) -> PnSeries:
    if not isinstance(doc, dict) or doc.get("basis") != "pn":
        raise InvalidInput('basis: expected "pn"')
    coeffs = doc.get("coeffs")
    if not isinstance(coeffs, list):
        raise InvalidInput("coeffs: expected a list")
    return PnSeries(tuple(_parse_int(c, f"coeffs[{i}]") for i, c in enumerate(coeffs)))


def series_eval(s: PnSeries, x: int) -> int:
    return sum(a * pn_eval(n, x) for n, a in enumerate(s.coeffs) if a)


def decompose(f: Callable[[int], int], n_terms: int) -> PnSeries:
    """Greedy P_n coefficients of f on A_N, N = n_terms.

    f is only called on points of A_N.  The returned series agrees with f
    there.
    """
    coeffs: list[int] = []
    for n in range(n_terms):
        b = tower_point(n)
        rest = f(b) - sum(a * pn_eval(i, b) for i, a in enumerate(coeffs) if a)
        coeffs.append(-rest if n % 2 else rest)  # P_n(b_n) = (-1)^n
    return PnSeries(tuple(coeffs))


def certify_newton(p: NewtonPoly) -> bool:
    """True iff p preserves every congruence of (Z, +)."""
    return all(c % lcm_upto(k) == 0 for k, c in enumerate(p.coeffs))


def certify_series(s: PnSeries) -> bool:
    return _is_certified(s.coeffs)


def fn_poly(n: int) -> NewtonPoly:
    """lcm(1..n) * C(X, n)."""
    return NewtonPoly((0,) * n + (lcm_upto(n),))


def window_oracle(f: Callable[[int], int], lo: int, hi: int) -> bool:
    """Brute force: (x - y) | f(x) - f(y) for all x, y in [lo, hi]."""
    if lo > hi:
        raise InvalidInput(f"empty window [{lo}, {hi}]")
    values = [f(x) for x in range(lo, hi + 1)]
    width = len(values)
    # small gaps first: most failures show up there
    for gap in range(1, width):
        for i in range(width - gap):
            if (values[i + gap] - values[i]) % gap:
                return False
    return True


def small_window_check(p: NewtonPoly) -> bool:
    """Divisibility checked only on {0, ..., deg p}.

    For a polynomial of degree n this already decides preservation of all
    congruences.
    """
    return window_oracle(p, 0, max(p.degree, 0))


def vandermonde_delta(x: int, k: int, n: int) -> tuple[int, int]:
    """(C(x+k, n) - C(x, n), sum_{i=1..n} C(x, n-i) * C(k, i)), computed separately."""
    lhs = binom(x + k, n) - binom(x, n)
    rhs = sum(binom(x, n - i) * binom(k, i) for i in range(1, n + 1))
    return lhs, rhs
