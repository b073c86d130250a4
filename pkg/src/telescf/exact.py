"""Exact scalars, dense univariate polynomials and sign certificates on a ray.

Scalars are :class:`fractions.Fraction` throughout; a Fraction is always
stored reduced with a positive denominator, which is exactly the invariant
we need, so there is no wrapper type.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: nothing in this package may silently pass through
    binary floating point.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimal literals such as ``"1e-30"`` are read exactly."""
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational literal: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


class Poly:
    """Dense polynomial with Fraction coefficients, ``coeffs[i]`` multiplying ``var**i``.

    Instances are immutable and hashable. Trailing zero coefficients are
    stripped on construction so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c, var: str = "z") -> "Poly":
        return cls([c], var)

    @classmethod
    def monomial(cls, degree: int, c=1, var: str = "z") -> "Poly":
        return cls([0] * degree + [c], var)

    # -- structure -------------------------------------------------------
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_even(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def is_odd(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.constant(as_rational(other), self.var)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly((self.coeff(i) + other.coeff(i) for i in range(n)), self.var)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly((-c for c in self.coeffs), self.var)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return Poly((), self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out, self.var)

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def scale(self, c) -> "Poly":
        c = as_rational(c)
        return Poly((c * a for a in self.coeffs), self.var)

    def shift(self, k: int = 1) -> "Poly":
        """Multiply by ``var**k``."""
        if not self.coeffs:
            return self
        return Poly([0] * k + list(self.coeffs), self.var)

    def __call__(self, x) -> Fraction:
        return poly_eval(self, x)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise DomainError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        lc = other.lc()
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1 - dq, -1, -1):
            c = rem[i + dq] / lc
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quot, self.var), Poly(rem[:dq], self.var)

    def derivative(self) -> "Poly":
        return Poly((i * c for i, c in enumerate(self.coeffs) if i), self.var)

    def taylor_shift(self, c) -> "Poly":
        """Return ``q(w) = p(w + c)`` by repeated synthetic division."""
        c = as_rational(c)
        a = list(self.coeffs)
        n = len(a)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] += c * a[j + 1]
        return Poly(a, self.var)

    def substitute_linear(self, alpha, beta, var: str | None = None) -> "Poly":
        """Return ``p(alpha*t + beta)`` as a polynomial in ``t``."""
        lin = Poly([beta, alpha], var or self.var)
        out = Poly((), lin.var)
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, var)

    # -- rendering -------------------------------------------------------
    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]!r}, var={self.var!r})"

    def __str__(self):
        return render(self)


ZPoly = Poly
XPoly = Poly


def render(p: Poly) -> str:
    """Human readable form, highest power first: ``7560z^2 + 1680z + 60``."""
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree(), -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = p.var if i == 1 else f"{p.var}^{i}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag}{mono}"
            else:
                body = f"({mag}){mono}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def poly_arith(a: Poly, b, op: str) -> Poly:
    """Dispatch by name; ``b`` is a Poly for add/sub/mul, a rational for scale, an int for shift."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    if op == "shift":
        return a.shift(int(b))
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_eval(p: Poly, x) -> Fraction:
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def _lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def joint_content_normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Scale both polynomials by one common rational so that every coefficient
    is an integer, the gcd over both lists is 1, and ``den.lc() > 0``."""
    if den.is_zero():
        raise DomainError("denominator polynomial is zero")
    coeffs = num.coeffs + den.coeffs
    scale = Fraction(_lcm(c.denominator for c in coeffs))
    g = 0
    for c in coeffs:
        g = math.gcd(g, (c * scale).numerator)
    scale /= g
    if den.lc() < 0:
        scale = -scale
    return num.scale(scale), den.scale(scale)


# -- sign certification ---------------------------------------------------


class SignKind(str, enum.Enum):
    CONSTANT_POSITIVE = "ConstantPositive"
    CONSTANT_NEGATIVE = "ConstantNegative"
    IDENTICALLY_ZERO = "IdenticallyZero"
    ROOT_ON_RAY = "RootOnRay"


class SignMethod(str, enum.Enum):
    COEFFICIENT_SHIFT = "coefficient-shift"
    STURM = "sturm"


@dataclass(frozen=True)
class SignVerdict:
    """Outcome of :func:`sign_on_ray` for ``z >= lo``.

    ``certificate`` holds the data needed to re-check the claim by hand:
    the shifted coefficients for the coefficient-shift method, or the
    Sturm sign-variation counts for the Sturm method.
    """

    kind: SignKind
    method: SignMethod
    lo: Fraction
    witness: tuple[Fraction, Fraction] | None = None
    certificate: dict = field(default_factory=dict, compare=False)

    @property
    def sign(self) -> int:
        """+1 / -1 for a certified constant sign, 0 otherwise."""
        if self.kind is SignKind.CONSTANT_POSITIVE:
            return 1
        if self.kind is SignKind.CONSTANT_NEGATIVE:
            return -1
        return 0

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "method": self.method.value, "lo": format_rational(self.lo)}
        if self.witness is not None:
            out["witness"] = [format_rational(self.witness[0]), format_rational(self.witness[1])]
        return out


def sign_by_coefficient_shift(p: Poly, lo) -> SignVerdict | None:
    """Certify a constant sign when every coefficient of ``p(w + lo)`` shares it.

    Returns None when the test is inconclusive (mixed signs or a zero constant term).
    """
    lo = as_rational(lo)
    if p.is_zero():
        return None
    q = p.taylor_shift(lo)
    cs = q.coeffs
    cert = {"shifted": [format_rational(c) for c in cs]}
    if cs[0] > 0 and all(c >= 0 for c in cs):
        return SignVerdict(SignKind.CONSTANT_POSITIVE, SignMethod.COEFFICIENT_SHIFT, lo, certificate=cert)
    if cs[0] < 0 and all(c <= 0 for c in cs):
        return SignVerdict(SignKind.CONSTANT_NEGATIVE, SignMethod.COEFFICIENT_SHIFT, lo, certificate=cert)
    return None


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        _, r = seq[-2].divmod(seq[-1])
        seq.append(-r)
    seq.pop()
    return seq


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations_at(seq: Sequence[Poly], x: Fraction) -> int:
    return _variations([_sign(poly_eval(s, x)) for s in seq])


def _variations_at_infinity(seq: Sequence[Poly]) -> int:
    return _variations([_sign(s.lc()) for s in seq])


def count_roots_above(p: Poly, lo) -> int:
    """Number of distinct real roots of ``p`` in the open ray ``(lo, inf)``."""
    seq = sturm_sequence(p)
    return _variations_at(seq, as_rational(lo)) - _variations_at_infinity(seq)


def _root_bound(p: Poly) -> Fraction:
    lc = abs(p.lc())
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def sign_by_sturm(p: Poly, lo) -> SignVerdict:
    """Sturm-sequence verdict on ``[lo, inf)``; never inconclusive for nonzero ``p``."""
    lo = as_rational(lo)
    if p.is_zero():
        return SignVerdict(SignKind.IDENTICALLY_ZERO, SignMethod.STURM, lo)
    at_lo = poly_eval(p, lo)
    if at_lo == 0:
        return SignVerdict(SignKind.ROOT_ON_RAY, SignMethod.STURM, lo, witness=(lo, lo),
                           certificate={"value_at_lo": "0"})
    seq = sturm_sequence(p)
    v_lo = _variations_at(seq, lo)
    v_inf = _variations_at_infinity(seq)
    cert = {"variations_at_lo": v_lo, "variations_at_infinity": v_inf,
            "value_at_lo": format_rational(at_lo)}
    if v_lo == v_inf:
        kind = SignKind.CONSTANT_POSITIVE if at_lo > 0 else SignKind.CONSTANT_NEGATIVE
        return SignVerdict(kind, SignMethod.STURM, lo, certificate=cert)
    a, b = lo, max(lo, Fraction(0)) + _root_bound(p)
    va, vb = v_lo, _variations_at(seq, b)
    while va - vb > 1:
        mid = (a + b) / 2
        if poly_eval(p, mid) == 0:
            a = b = mid
            break
        vm = _variations_at(seq, mid)
        if va - vm >= 1:
            b, vb = mid, vm
        else:
            a, va = mid, vm
    return SignVerdict(SignKind.ROOT_ON_RAY, SignMethod.STURM, lo, witness=(a, b), certificate=cert)


def sign_on_ray(p: Poly, lo) -> SignVerdict:
    """Certify the sign of ``p`` on the closed ray ``z >= lo``.

    The cheap sufficient test (all coefficients of the shifted polynomial
    of one sign) runs first; mixed signs fall through to an exact Sturm count.
    """
    lo = as_rational(lo)
    if p.is_zero():
        return SignVerdict(SignKind.IDENTICALLY_ZERO, SignMethod.COEFFICIENT_SHIFT, lo)
    verdict = sign_by_coefficient_shift(p, lo)
    if verdict is not None:
        return verdict
    return sign_by_sturm(p, lo)


def check_certificate(p: Poly, verdict: SignVerdict) -> bool:
    """Independently re-derive a constant-sign verdict from its certificate."""
    if verdict.sign == 0:
        return False
    if verdict.method is SignMethod.COEFFICIENT_SHIFT:
        shifted = [parse_rational(c) for c in verdict.certificate["shifted"]]
        q = Poly(shifted, p.var)
        if q.substitute_linear(1, -verdict.lo) != p:
            return False
        return shifted[0] * verdict.sign > 0 and all(c * verdict.sign >= 0 for c in shifted)
    seq = sturm_sequence(p)
    return (_variations_at(seq, verdict.lo) == _variations_at_infinity(seq)
            and _sign(poly_eval(p, verdict.lo)) == verdict.sign)
