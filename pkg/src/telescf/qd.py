"""Quotient-difference (rhombus) construction of S-fraction coefficients.

Given a series ``c_1 + c_2 w + c_3 w^2 + ...`` the scheme produces ``b_m``
with ``c_1 + c_2 w + ... = b_1/(1 + b_2 w/(1 + b_3 w/(1 + ...)))``. With
``w = 1/n^2`` and the Stirling coefficients as input, ``b_1/n + b_2/n + ...``
is the continued fraction for the Binet function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AlgorithmTerminated, PreconditionError, QDBreakdown
from .exact import format_rational


@dataclass(frozen=True)
class QDTable:
    """``q[r][j]`` and ``e[r][j]`` are column ``r`` at row ``j``; ``e[0]`` is all zero."""

    c: tuple[Fraction, ...]
    q: tuple[tuple[Fraction, ...], ...]
    e: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]


def qd_table(c: Sequence) -> QDTable:
    c = tuple(Fraction(x) for x in c)
    M = len(c)
    if M < 2:
        raise PreconditionError("need at least two series coefficients")
    for i, ci in enumerate(c, start=1):
        if ci == 0:
            raise PreconditionError(f"c_{i} is zero")

    # column r of q needs rows j = 0 .. M-2r, column r of e needs rows 0 .. M-2r-1
    q: list[list[Fraction]] = [[]]
    e: list[list[Fraction]] = [[Fraction(0)] * M]
    q.append([c[j + 1] / c[j] for j in range(M - 1)])
    r = 1
    while True:
        n_e = len(q[r]) - 1
        if n_e < 1:
            break
        e_col = [q[r][j + 1] - q[r][j] + e[r - 1][j + 1] for j in range(n_e)]
        e.append(e_col)
        n_q = n_e - 1
        if n_q < 1:
            break
        q_col = []
        for j in range(n_q):
            if e_col[j] == 0:
                raise QDBreakdown(f"e[{r}][{j}] is zero", ("e", r, j))
            q_col.append(q[r][j + 1] * e_col[j + 1] / e_col[j])
        q.append(q_col)
        r += 1

    b = [c[0]]
    r = 1
    while len(b) < M:
        if r >= len(q) or not q[r]:
            break
        b.append(-q[r][0])
        if len(b) >= M or r >= len(e) or not e[r]:
            break
        b.append(-e[r][0])
        r += 1
    return QDTable(c, tuple(map(tuple, q)), tuple(map(tuple, e)), tuple(b))


def qd_scheme(c: Sequence, M: int | None = None) -> list[Fraction]:
    """Return ``b_1 .. b_M`` (``M`` defaults to ``len(c)``, its maximum)."""
    M = len(c) if M is None else M
    if M > len(c):
        raise PreconditionError(f"{M} coefficients requested from {len(c)} series terms")
    b = qd_table(c).b
    if len(b) < M:
        raise PreconditionError(f"only {len(b)} coefficients derivable")
    return list(b[:M])


def stirling_b(M: int) -> list[Fraction]:
    from .binet import stirling_coeff

    return qd_scheme([stirling_coeff(i) for i in range(1, M + 1)], M)


@dataclass
class EqualityReport:
    M: int
    a: list[Fraction]
    b: list[Fraction]
    equal: list[bool]
    note: str = ""

    @property
    def all_equal(self) -> bool:
        return bool(self.equal) and all(self.equal)

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "rows": [{"m": i + 1, "a": format_rational(a), "b": format_rational(b), "equal": eq}
                     for i, (a, b, eq) in enumerate(zip(self.a, self.b, self.equal))],
            "all_equal": self.all_equal,
            "note": self.note,
        }


def qd_agreement_check(M: int) -> EqualityReport:
    """Compare stabilized telescoping coefficients with the qd coefficients, m = 1..M."""
    from .telescope import stabilized_coefficients

    note = ""
    try:
        b = stirling_b(M)
    except QDBreakdown as exc:
        b, note = [], f"qd breakdown at {exc.cell}"
    try:
        a = list(stabilized_coefficients(M).a)
    except AlgorithmTerminated as exc:
        a, note = list(exc.coefficients), note or f"algorithm terminated at m={exc.last_m}"
    n = min(len(a), len(b))
    return EqualityReport(n, a[:n], b[:n], [x == y for x, y in zip(a, b)], note)
