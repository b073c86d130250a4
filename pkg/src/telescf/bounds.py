"""Telescoped continued-fraction bounds g_m(n), the classical bounds on r_n,
and the exact comparison and sandwich checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .binet import Interval, binet_interval
from .errors import DomainError, PreconditionError
from .exact import Poly, SignVerdict, as_rational, format_rational, sign_on_ray
from .telescope import CFCoefficients, stabilized_coefficients

A1 = Fraction(1, 12)
LB1 = CFCoefficients.of([Fraction(1, 12), Fraction(1, 18)], 2)
LB2 = CFCoefficients.of([Fraction(1, 12), Fraction(1, 30)], 3)
LB3 = CFCoefficients.of([Fraction(1, 12), Fraction(1, 30), Fraction(53, 210), Fraction(195, 371)], 5)

CLASSICAL = ("Cesaro", "RobbinsLower", "RobbinsUpper", "Maria", "Nanjundiah", "Popov")


@dataclass(frozen=True)
class BoundSpec:
    """A named bound on r_n. ``TelescopeG`` carries its coefficients and depth ``m``.

    The direction of ``TelescopeG`` (upper for odd m, lower for even m) is
    conjectural; the classical directions are theorems.
    """

    name: str
    m: int | None = None
    coeffs: CFCoefficients | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.name == "TelescopeG":
            if self.m is None or self.coeffs is None or not 1 <= self.m <= len(self.coeffs):
                raise PreconditionError("TelescopeG needs coefficients and 1 <= m <= len(coeffs)")
        elif self.name not in CLASSICAL:
            raise PreconditionError(f"unknown bound {self.name!r}")

    @classmethod
    def telescope(cls, coeffs, m: int | None = None) -> "BoundSpec":
        if not isinstance(coeffs, CFCoefficients):
            coeffs = CFCoefficients.of(coeffs)
        return cls("TelescopeG", len(coeffs) if m is None else m, coeffs)

    @property
    def direction(self) -> str:
        if self.name == "TelescopeG":
            return "lower" if self.m % 2 == 0 else "upper"
        return "upper" if self.name == "RobbinsUpper" else "lower"

    @property
    def label(self) -> str:
        if self.name == "TelescopeG":
            return f"TelescopeG({self.m}; " + ", ".join(map(str, self.coeffs.a[: self.m])) + ")"
        return self.name

    def __call__(self, n) -> Fraction:
        if self.name == "TelescopeG":
            return eval_g(self.coeffs, self.m, n)
        return classical_bound(self, n)


def eval_g(coeffs, m: int, n) -> Fraction:
    """``a_1/(n + a_2/(n + ... + a_m/n))`` evaluated from the innermost level out."""
    a = coeffs.a if isinstance(coeffs, CFCoefficients) else tuple(coeffs)
    if not 1 <= m <= len(a):
        raise PreconditionError(f"m={m} outside 1..{len(a)}")
    n = as_rational(n)
    if n <= 0:
        raise PreconditionError("n must be positive")
    acc = n
    for j in range(m - 1, 0, -1):
        if acc == 0:
            raise DomainError("zero intermediate denominator")
        acc = n + Fraction(a[j]) / acc
    if acc == 0:
        raise DomainError("zero intermediate denominator")
    return Fraction(a[0]) / acc


def eval_g_recurrence(coeffs, m: int, n) -> Fraction:
    """Same value via numerators/denominators ``u_k = n u_{k-1} + a_k u_{k-2}``."""
    a = coeffs.a if isinstance(coeffs, CFCoefficients) else tuple(coeffs)
    n = as_rational(n)
    num_prev, num = Fraction(1), Fraction(0)
    den_prev, den = Fraction(0), Fraction(1)
    for k in range(m):
        num_prev, num = num, n * num + a[k] * num_prev
        den_prev, den = den, n * den + a[k] * den_prev
    return num / den


def classical_bound(spec: BoundSpec | str, n) -> Fraction:
    """The classical bounds, each written as ``(1/12)/(n + t(n))``."""
    name = spec.name if isinstance(spec, BoundSpec) else spec
    n = as_rational(n)
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if name == "RobbinsUpper":
        t = Fraction(0)
    elif name == "RobbinsLower":
        t = Fraction(1, 12)
    elif name == "Cesaro":
        t = Fraction(1, 48)
    elif name == "Maria":
        t = 1 / (16 * n + 8)
    elif name == "Nanjundiah":
        t = n / (30 * n * n - 1)
    elif name == "Popov":
        t = Fraction(1, 30) / n * (1 - Fraction(1, 4) / (n + Fraction(1, 2)) ** 2)
    else:
        raise PreconditionError(f"not a classical bound: {name!r}")
    return A1 / (n + t)


def _as_spec(x) -> BoundSpec:
    return x if isinstance(x, BoundSpec) else BoundSpec(x)


@dataclass
class ComparisonReport:
    """``better[i]`` says whether ``a`` is strictly tighter than ``b`` at n = i + 1."""

    a: BoundSpec
    b: BoundSpec
    n_max: int
    diffs: list[int]
    better: list[bool]

    @property
    def always_better(self) -> bool:
        return all(self.better)

    @property
    def crossovers(self) -> list[int]:
        """Each n at which the better/not-better status differs from n - 1."""
        return [i + 1 for i in range(1, self.n_max) if self.better[i] != self.better[i - 1]]

    @property
    def threshold(self) -> int | None:
        """t such that ``a`` is tighter exactly for t < n <= n_max, if that shape holds."""
        cx = self.crossovers
        if not cx:
            return 0 if self.better and self.better[0] else None
        if len(cx) == 1 and self.better[-1]:
            return cx[0] - 1
        return None

    def better_at(self, n: int) -> bool:
        return self.better[n - 1]

    def to_json(self, rows: bool = False) -> dict:
        out = {
            "a": self.a.label,
            "b": self.b.label,
            "direction": self.a.direction,
            "n_max": self.n_max,
            "always_better": self.always_better,
            "crossovers": self.crossovers,
            "threshold": self.threshold,
        }
        if rows:
            out["rows"] = [{"n": i + 1, "a_better": bool(v)} for i, v in enumerate(self.better)]
        return out


def compare_bounds(a, b, n_max: int) -> ComparisonReport:
    a, b = _as_spec(a), _as_spec(b)
    if a.direction != b.direction:
        raise PreconditionError(f"cannot compare a {a.direction} bound with a {b.direction} bound")
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    sign = 1 if a.direction == "lower" else -1
    diffs, better = [], []
    for n in range(1, n_max + 1):
        d = a(n) - b(n)
        s = (d > 0) - (d < 0)
        diffs.append(s)
        better.append(s * sign > 0)
    return ComparisonReport(a, b, n_max, diffs, better)


def popov_helper_polynomial() -> Poly:
    """``1 - (1/4)/(n+1/2)^2 - 1/(1 + c/(n^2 + d))`` times its positive denominator, in ``n``.

    Here c = 53/210 and d = 195/371; the denominator is ``(n+1/2)^2 (n^2 + c + d)``.
    """
    c, d = Fraction(53, 210), Fraction(195, 371)
    n = Poly([0, 1], "n")
    half_sq = (n + Fraction(1, 2)) * (n + Fraction(1, 2))
    n2 = n * n
    return half_sq * (n2 + c + d) - (n2 + c + d).scale(Fraction(1, 4)) - half_sq * (n2 + d)


def popov_helper_holds(n) -> bool:
    n = as_rational(n)
    lhs = 1 - Fraction(1, 4) / (n + Fraction(1, 2)) ** 2
    rhs = 1 / (1 + Fraction(53, 210) / (n * n + Fraction(195, 371)))
    return lhs > rhs


@dataclass
class DominanceReport:
    n_max: int
    lb2_vs_nanjundiah: ComparisonReport
    helper_failures: list[int]
    lb3_vs_popov: ComparisonReport
    helper_certificate: SignVerdict
    helper_polynomial: Poly
    lb1_lt_lb2_at_1: bool

    @property
    def ok(self) -> bool:
        return (self.lb2_vs_nanjundiah.always_better and not self.helper_failures
                and self.lb3_vs_popov.always_better and self.helper_certificate.sign == 1
                and self.lb1_lt_lb2_at_1)

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "lb2_vs_nanjundiah": self.lb2_vs_nanjundiah.to_json(),
            "helper_failures": self.helper_failures,
            "lb3_vs_popov": self.lb3_vs_popov.to_json(),
            "helper_polynomial": str(self.helper_polynomial),
            "helper_certificate": self.helper_certificate.to_json(),
            "lb1_lt_lb2_at_1": self.lb1_lt_lb2_at_1,
            "ok": self.ok,
        }


def verify_dominance_inequalities(n_max: int) -> DominanceReport:
    if n_max < 10:
        raise PreconditionError("n_max must be >= 10")
    poly = popov_helper_polynomial()
    return DominanceReport(
        n_max=n_max,
        lb2_vs_nanjundiah=compare_bounds(BoundSpec.telescope(LB2), "Nanjundiah", n_max),
        helper_failures=[n for n in range(1, n_max + 1) if not popov_helper_holds(n)],
        lb3_vs_popov=compare_bounds(BoundSpec.telescope(LB3), "Popov", n_max),
        helper_certificate=sign_on_ray(poly, 1),
        helper_polynomial=poly,
        lb1_lt_lb2_at_1=eval_g(LB1, 2, 1) < eval_g(LB2, 2, 1),
    )


# -- sandwich check ------------------------------------------------------------

REFINEMENT = Fraction(1, 10**6)


@dataclass(frozen=True)
class SandwichCell:
    n: int
    m: int
    g: Fraction
    interval: Interval
    verdict: str  # consistent-below | consistent-above | violation | undecided
    refined: bool = False

    @property
    def consistent(self) -> bool:
        return self.verdict.startswith("consistent")

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "g": format_rational(self.g),
                "interval": self.interval.to_json(), "verdict": self.verdict,
                "refined": self.refined}


def _classify(m: int, g: Fraction, interval: Interval) -> str:
    if m % 2 == 0:
        if g < interval.lo:
            return "consistent-below"
        return "violation" if g > interval.hi else "undecided"
    if g > interval.hi:
        return "consistent-above"
    return "violation" if g < interval.lo else "undecided"


@dataclass
class SandwichReport:
    n_max: int
    m_max: int
    width: Fraction
    coeffs: CFCoefficients
    cells: list[SandwichCell]

    def count(self, verdict: str) -> int:
        return sum(1 for c in self.cells if c.verdict == verdict)

    @property
    def all_consistent(self) -> bool:
        return all(c.consistent for c in self.cells)

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "m_max": self.m_max,
            "width": format_rational(self.width),
            "coefficients": [format_rational(a) for a in self.coeffs.a],
            "summary": {v: self.count(v) for v in
                        ("consistent-below", "consistent-above", "violation", "undecided")},
            "cells": [c.to_json() for c in self.cells],
        }


def sandwich_check(n_max: int, m_max: int, width, coeffs: CFCoefficients | None = None) -> SandwichReport:
    """Place g_m(n) relative to a certified enclosure of r_n for every (n, m).

    An undecided cell (g inside the enclosure) gets one retry with the
    enclosure width divided by 10^6.
    """
    width = as_rational(width)
    if coeffs is None:
        coeffs = stabilized_coefficients(m_max)
    if len(coeffs) < m_max:
        raise PreconditionError(f"need {m_max} coefficients, have {len(coeffs)}")
    cells = []
    for n in range(1, n_max + 1):
        interval = binet_interval(n, width)
        fine = None
        for m in range(1, m_max + 1):
            g = eval_g(coeffs, m, n)
            verdict = _classify(m, g, interval)
            if verdict == "undecided":
                if fine is None:
                    fine = binet_interval(n, width * REFINEMENT)
                cells.append(SandwichCell(n, m, g, fine, _classify(m, g, fine), refined=True))
            else:
                cells.append(SandwichCell(n, m, g, interval, verdict))
    return SandwichReport(n_max, m_max, width, coeffs, cells)


# -- telescoping identity --------------------------------------------------------


@dataclass(frozen=True)
class TelescopeSumReport:
    n: int
    P: int
    m: int
    lhs: Fraction
    rhs: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {"n": self.n, "P": self.P, "m": self.m, "lhs": format_rational(self.lhs),
                "rhs": format_rational(self.rhs), "equal": self.equal}


def telescope_sum_check(coeffs, m: int, n: int, P: int) -> TelescopeSumReport:
    """Check ``sum_{p=n}^{P} (g_m(p) - g_m(p+1)) == g_m(n) - g_m(P+1)`` term by term."""
    if P <= n:
        raise PreconditionError("P must exceed n")
    values = [eval_g(coeffs, m, p) for p in range(n, P + 2)]
    lhs = sum((values[i] - values[i + 1] for i in range(len(values) - 1)), Fraction(0))
    return TelescopeSumReport(n, P, m, lhs, values[0] - values[-1])


def telescoping_gains(coeffs, m: int, ps: Sequence[int]) -> list[Fraction]:
    return [eval_g(coeffs, m, p) - eval_g(coeffs, m, p + 1) for p in ps]
