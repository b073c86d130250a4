"""Legendre and associated (numerator) polynomials, and the convergent error
``x P*_k(x)/P_k(x) - 1`` rewritten as a rational function of ``z = p(p+1)``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InternalInvariantError, PreconditionError
from .exact import Poly, joint_content_normalize, poly_eval, sign_on_ray

X = Poly([0, 1], "x")


@lru_cache(maxsize=None)
def legendre_pair(k: int) -> tuple[Poly, Poly]:
    """Return ``(P_k, P*_k)`` in the variable ``x``.

    Both families obey ``y_{j+1} = (2j+1)/(j+1) x y_j - j/(j+1) y_{j-1}``,
    started from ``P_0 = 1, P_1 = x`` and ``P*_0 = 0, P*_1 = 1``.
    """
    if k < 0:
        raise PreconditionError("k must be >= 0")
    p_prev, p_cur = Poly([1], "x"), X
    s_prev, s_cur = Poly([], "x"), Poly([1], "x")
    if k == 0:
        return p_prev, s_prev
    for j in range(1, k):
        a = Fraction(2 * j + 1, j + 1)
        b = Fraction(j, j + 1)
        p_prev, p_cur = p_cur, (X * p_cur).scale(a) - p_prev.scale(b)
        s_prev, s_cur = s_cur, (X * s_cur).scale(a) - s_prev.scale(b)
    return p_cur, s_cur


def _divide_by_x(p: Poly) -> Poly:
    if p.coeff(0) != 0:
        raise InternalInvariantError(f"expected an odd polynomial, got constant term {p.coeff(0)}")
    return Poly(p.coeffs[1:], p.var)


def even_x_to_z(p: Poly) -> Poly:
    """Rewrite an even polynomial in ``x`` as a polynomial in ``z`` via ``x^2 = 4z + 1``."""
    if not p.is_even():
        raise InternalInvariantError(f"expected an even polynomial in x, got {p}")
    x2 = Poly([1, 4], "z")
    out = Poly([], "z")
    for c in reversed(p.coeffs[0::2]):
        out = out * x2 + c
    return out


@dataclass(frozen=True)
class RatFuncZ:
    """``num/den`` = the k-th convergent error as a function of ``z``
    (the pair ``f*_k``, ``f_k``), jointly content-normalized."""

    num: Poly
    den: Poly
    k: int

    @property
    def degree(self) -> int:
        return self.den.degree()

    def __call__(self, z) -> Fraction:
        return poly_eval(self.num, z) / poly_eval(self.den, z)


@lru_cache(maxsize=None)
def to_z_form(k: int) -> RatFuncZ:
    if k < 2:
        raise PreconditionError("to_z_form needs k >= 2")
    pk, sk = legendre_pair(k)
    num = X * sk - pk
    den = pk
    if k % 2:
        num, den = _divide_by_x(num), _divide_by_x(den)
    num, den = joint_content_normalize(even_x_to_z(num), even_x_to_z(den))
    rf = RatFuncZ(num, den, k)
    if den.degree() != k // 2 or num.degree() != den.degree() - 1:
        raise InternalInvariantError(f"degree law violated at k={k}: {num} / {den}")
    if sign_on_ray(den, 1).sign != 1:
        raise InternalInvariantError(f"f_{k} is not positive on z >= 1")
    return rf


def convergent_value(k: int, p: int) -> Fraction:
    """Exact value of the k-th convergent error at integer ``p >= 1``."""
    if p < 1:
        raise PreconditionError("p must be >= 1")
    return to_z_form(k)(p * (p + 1))


def convergent_value_x(k: int, p: int) -> Fraction:
    """The same quantity computed directly from ``P_k`` and ``P*_k`` at ``x = 2p + 1``."""
    pk, sk = legendre_pair(k)
    x = 2 * p + 1
    return x * poly_eval(sk, x) / poly_eval(pk, x) - 1
