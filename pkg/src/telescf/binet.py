"""Certified rational enclosures of eps_p and of the Binet error term r_n.

``r_n = sum_{p >= n} eps_p`` with ``eps_p = ((2p+1)/2) log((p+1)/p) - 1``.
Each eps_p is enclosed from its positive power series in ``y = 1/(2p+1)``;
the tail ``r_{P+1}`` is enclosed by the alternating Stirling-series bracket
intersected with the Robbins bracket. Everything is exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DomainError, PreconditionError, ResourceError
from .exact import as_rational, format_rational

# -- intervals ----------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def hull(cls, a, b) -> "Interval":
        a, b = as_rational(a), as_rational(b)
        return cls(min(a, b), max(a, b))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __contains__(self, x) -> bool:
        x = as_rational(x)
        return self.lo <= x <= self.hi

    def strictly_contains(self, x) -> bool:
        x = as_rational(x)
        return self.lo < x < self.hi

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> "Interval":
        if not self.intersects(other):
            raise DomainError(f"disjoint enclosures {self} and {other}")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def round_outward(self, bits: int) -> "Interval":
        """Widen to the dyadic grid ``2**-bits`` (keeps denominators small)."""
        scale = 1 << bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return Interval(lo, hi)

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    def decimal(self, digits: int) -> tuple[str, str]:
        """Endpoints rounded outward to ``digits`` decimals, so the printed pair still encloses."""
        return decimal_floor(self.lo, digits), decimal_ceil(self.hi, digits)

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def _decimal(num: int, digits: int) -> str:
    sign = "-" if num < 0 else ""
    s = str(abs(num)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + s
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def decimal_floor(q: Fraction, digits: int) -> str:
    return _decimal(math.floor(q * 10**digits), digits)


def decimal_ceil(q: Fraction, digits: int) -> str:
    return _decimal(math.ceil(q * 10**digits), digits)


# -- Bernoulli numbers and the Stirling series ------------------------------

_BERNOULLI = [Fraction(1), Fraction(-1, 2)]


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from ``sum_{j=0}^{m} C(m+1, j) B_j = 0``."""
    if n < 0:
        raise PreconditionError("n must be >= 0")
    while len(_BERNOULLI) <= n:
        m = len(_BERNOULLI)
        if m % 2:
            _BERNOULLI.append(Fraction(0))
            continue
        s = _BERNOULLI[0] + (m + 1) * _BERNOULLI[1]
        for j in range(2, m, 2):
            s += comb(m + 1, j) * _BERNOULLI[j]
        _BERNOULLI.append(-s / (m + 1))
    return _BERNOULLI[n]


def stirling_coeff(i: int) -> Fraction:
    """Coefficient of ``n^(1-2i)`` in the Stirling series, ``B_2i / ((2i-1) 2i)``."""
    if i < 1:
        raise PreconditionError("i must be >= 1")
    return bernoulli(2 * i) / ((2 * i - 1) * 2 * i)


_PARTIALS: dict[Fraction, list[Fraction]] = {}


def stirling_partial(n, N: int) -> Fraction:
    """``sum_{i=1}^{N} stirling_coeff(i) / n^(2i-1)``; prefix sums are kept per n."""
    n = as_rational(n)
    sums = _PARTIALS.setdefault(n, [Fraction(0)])
    while len(sums) <= N:
        i = len(sums)
        sums.append(sums[-1] + stirling_coeff(i) / n ** (2 * i - 1))
    return sums[N]


def stirling_bracket(n, N: int) -> Interval:
    """Hull of the truncations at N and N+1 terms.

    The remainder after N terms has the sign of, and is smaller than, the
    first omitted term, so r_n lies strictly inside this hull.
    """
    if N < 1:
        raise PreconditionError("N must be >= 1")
    n = as_rational(n)
    if n <= 0:
        raise PreconditionError("n must be positive")
    s = stirling_partial(n, N)
    return Interval.hull(s, s + stirling_coeff(N + 1) / n ** (2 * N + 1))


def stirling_term_size(n, N: int) -> Fraction:
    """Width of ``stirling_bracket(n, N)``."""
    n = as_rational(n)
    return abs(stirling_coeff(N + 1)) / n ** (2 * N + 1)


def minimal_width_N(n, n_cap: int = 2000) -> int:
    """The N at which the bracket width stops shrinking (the series diverges after it)."""
    best, best_w = 1, stirling_term_size(n, 1)
    for N in range(2, n_cap + 1):
        w = stirling_term_size(n, N)
        if w >= best_w:
            return best
        best, best_w = N, w
    return best


def _stirling_tail(q: int, target: Fraction) -> Interval:
    """Enclosure of r_q: first bracket of width <= target, else the narrowest one."""
    best_N, best_w = 1, stirling_term_size(q, 1)
    N = 1
    while best_w > target:
        w = stirling_term_size(q, N + 1)
        if w >= best_w:
            break
        N += 1
        best_N, best_w = N, w
    return stirling_bracket(q, best_N)


def robbins_bracket(n: int) -> Interval:
    return Interval(Fraction(1, 12 * n + 1), Fraction(1, 12 * n))


# -- eps_p ---------------------------------------------------------------------


def epsilon_partial(p: int, J: int) -> Interval:
    """``[S_J, S_J + tail_J]`` with ``S_J = sum_{j=1}^{J} y^(2j)/(2j+1)``."""
    if p < 1:
        raise PreconditionError("p must be >= 1")
    y2 = Fraction(1, (2 * p + 1) ** 2)
    s = Fraction(0)
    term = Fraction(1)
    for j in range(1, J + 1):
        term *= y2
        s += term / (2 * j + 1)
    tail = term * y2 / ((2 * J + 3) * (1 - y2))
    return Interval(s, s + tail)


def epsilon_interval(p: int, width_target) -> Interval:
    """Enclosure of eps_p with width <= width_target, obtained by adding series terms."""
    if p < 1:
        raise PreconditionError("p must be >= 1")
    width_target = as_rational(width_target)
    if width_target <= 0:
        raise PreconditionError("width_target must be positive")
    y2 = Fraction(1, (2 * p + 1) ** 2)
    s = Fraction(0)
    term = Fraction(1)
    j = 0
    while True:
        j += 1
        term *= y2
        s += term / (2 * j + 1)
        tail = term * y2 / ((2 * j + 3) * (1 - y2))
        if tail <= width_target:
            return Interval(s, s + tail)


# -- r_n -----------------------------------------------------------------------

MAX_DOUBLINGS = 64
BASE_BITS = 64


def _schedule_step(n: int, s: int) -> Interval:
    """Enclosure of r_n at schedule step s (independent of any width target).

    Step s sums P = max(n, 8) * 2^s terms, each eps_p to 2^-(64 * 2^s), and
    closes with a tail bracket for r_{P+1} at the same precision.
    """
    P = max(n, 8) << s
    bits = BASE_BITS << s
    grid = bits + max(P - n + 1, 1).bit_length() + 2
    per_term = Fraction(1, 1 << bits) / max(P - n + 1, 1)
    total = Interval(Fraction(0), Fraction(0))
    for p in range(n, P + 1):
        total = total + epsilon_interval(p, per_term).round_outward(grid)
    tail = _stirling_tail(P + 1, Fraction(1, 1 << bits)).intersect(robbins_bracket(P + 1))
    return total + tail.round_outward(grid)


def binet_interval(n: int, width_target, max_doublings: int = MAX_DOUBLINGS) -> Interval:
    """Certified enclosure of r_n with width <= width_target.

    Walks a fixed schedule of steps and intersects every enclosure seen so
    far, so a tighter target always yields a subset of a looser one.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    width_target = as_rational(width_target)
    if width_target <= 0:
        raise PreconditionError("width_target must be positive")
    best = robbins_bracket(n)
    for s in range(max_doublings + 1):
        best = best.intersect(_schedule_step(n, s))
        if best.width <= width_target:
            return best
    raise ResourceError(f"r_{n}: width {best.width} > {width_target} after {max_doublings} doublings",
                        best=best)
