"""Coefficient algorithm for the telescoping continued fraction.

For a fixed convergent index ``k`` we carry the polynomials Delta_1 (current
and previous step), Delta_2 and Delta_3 in ``z``. Each step picks the unique
``a`` cancelling the top-degree term of ``z*Delta_1 + a*Delta_2`` and then
advances all three polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AlgorithmTerminated, InternalInvariantError, PreconditionError
from .exact import Poly, SignKind, SignVerdict, format_rational, sign_on_ray
from .legendre import to_z_form

Z = Poly([0, 1])
SIGN_DOMAIN = Fraction(1)
FALLBACK_DOMAIN = Fraction(2)


@dataclass(frozen=True)
class DeltaState:
    k: int
    m: int
    d_k: int
    delta1_prev: Poly
    delta1: Poly
    delta2: Poly
    delta3: Poly
    a_chosen: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class StepReport:
    k: int
    m: int
    a_m: Fraction
    delta1_after: Poly
    sign: SignVerdict
    fallback_sign: SignVerdict | None = None

    @property
    def sign_matches_conjecture(self) -> bool:
        expected = SignKind.CONSTANT_POSITIVE if self.m % 2 == 0 else SignKind.CONSTANT_NEGATIVE
        return self.sign.kind is expected

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "m": self.m,
            "a": format_rational(self.a_m),
            "delta1": str(self.delta1_after),
            "sign": self.sign.to_json(),
            "sign_matches_conjecture": self.sign_matches_conjecture,
        }
        if self.fallback_sign is not None:
            out["fallback_sign"] = self.fallback_sign.to_json()
        return out


@dataclass(frozen=True)
class CFCoefficients:
    """``a[0]`` is a_1. ``provenance[i]`` is the k that produced ``a[i]``."""

    a: tuple[Fraction, ...]
    provenance: tuple[int, ...] = field(default=())

    def __len__(self):
        return len(self.a)

    def __getitem__(self, m: int) -> Fraction:
        """1-based access: ``coeffs[1]`` is a_1."""
        if m < 1:
            raise IndexError("coefficients are indexed from 1")
        return self.a[m - 1]

    def head(self, m: int) -> "CFCoefficients":
        return CFCoefficients(self.a[:m], self.provenance[:m])

    @property
    def all_positive(self) -> bool:
        return all(x > 0 for x in self.a)

    @classmethod
    def of(cls, values, k: int | None = None) -> "CFCoefficients":
        vals = tuple(Fraction(v) for v in values)
        prov = (k,) * len(vals) if k is not None else ()
        return cls(vals, prov)


def delta_init(k: int) -> DeltaState:
    if k < 2:
        raise PreconditionError("k must be >= 2")
    f = to_z_form(k)
    d = f.den.degree()
    if d < 1 or f.num.degree() != d - 1:
        raise PreconditionError(f"degree hypothesis fails for k={k}: deg f*={f.num.degree()}, deg f={d}")
    return DeltaState(k=k, m=0, d_k=d, delta1_prev=Poly(), delta1=f.num,
                      delta2=-f.den, delta3=f.den.scale(2))


def choose_a(state: DeltaState) -> Fraction:
    """The unique ``a`` making ``z*Delta_1 + a*Delta_2`` drop below degree d_k."""
    d = state.d_k
    top = state.delta2.coeff(d)
    if state.delta1.degree() != d - 1:
        raise AlgorithmTerminated(
            f"k={state.k}, m={state.m}: deg Delta_1 = {state.delta1.degree()} != {d - 1}",
            last_m=state.m, coefficients=state.a_chosen)
    if top == 0 or state.delta2.degree() > d:
        raise AlgorithmTerminated(
            f"k={state.k}, m={state.m}: Delta_2 has no usable z^{d} coefficient",
            last_m=state.m, coefficients=state.a_chosen)
    return -state.delta1.lc() / top


def next_delta1(state: DeltaState, a) -> Poly:
    return Z * state.delta1 + state.delta2.scale(a) + state.delta1_prev.scale(a * a)


def delta_step(state: DeltaState, a) -> DeltaState:
    a = Fraction(a)
    d1, d2, d3 = state.delta1, state.delta2, state.delta3
    new1 = next_delta1(state, a)
    new2 = (Poly([1, 2]) * d1) + d2.scale(a) + d3.scale(a)
    new3 = -d1 - d3.scale(a)
    if new2 + new3 != (Z * d1).scale(2) + d2.scale(a):
        raise InternalInvariantError(f"Delta_4 identity failed at k={state.k}, m={state.m + 1}")
    m = state.m + 1
    if new1.degree() < state.d_k - 1:
        raise AlgorithmTerminated(
            f"k={state.k}, m={m}: deg Delta_1 fell to {new1.degree()} (< {state.d_k - 1})",
            last_m=state.m, coefficients=state.a_chosen)
    return DeltaState(k=state.k, m=m, d_k=state.d_k, delta1_prev=d1, delta1=new1,
                      delta2=new2, delta3=new3, a_chosen=state.a_chosen + (a,))


def verify_sign(k: int, m: int, delta1: Poly, a_m: Fraction | None = None) -> StepReport:
    """Certify the sign of Delta_1(k, m) on ``z >= 1`` and compare with ``(-1)^m``.

    When the ``z >= 1`` verdict does not match, the ``z >= 2`` verdict (the
    range actually reached by ``z = p(p+1)``) is attached as a diagnostic.
    """
    verdict = sign_on_ray(delta1, SIGN_DOMAIN)
    report = StepReport(k=k, m=m, a_m=a_m if a_m is not None else Fraction(0),
                        delta1_after=delta1, sign=verdict)
    if not report.sign_matches_conjecture:
        fallback = sign_on_ray(delta1, FALLBACK_DOMAIN)
        report = StepReport(k=k, m=m, a_m=report.a_m, delta1_after=delta1, sign=verdict,
                            fallback_sign=fallback)
    return report


def run_algorithm(k: int, m_max: int) -> tuple[CFCoefficients, list[StepReport]]:
    if m_max < 1:
        raise PreconditionError("m_max must be >= 1")
    state = delta_init(k)
    reports: list[StepReport] = []
    try:
        for _ in range(m_max):
            a = choose_a(state)
            state = delta_step(state, a)
            reports.append(verify_sign(k, state.m, state.delta1, a))
    except AlgorithmTerminated as exc:
        exc.coefficients = list(state.a_chosen)
        exc.reports = reports
        raise
    return CFCoefficients.of(state.a_chosen, k), reports


def iterate_states(k: int, m_max: int):
    """Yield the DeltaState after each accepted step (m = 1..m_max)."""
    state = delta_init(k)
    for _ in range(m_max):
        state = delta_step(state, choose_a(state))
        yield state


@dataclass
class StabilizationTable:
    k_max: int
    m_max: int
    rows: dict[int, tuple[Fraction, ...]]
    agrees: dict[int, bool]
    stabilized: CFCoefficients
    terminated: dict[int, int] = field(default_factory=dict)

    def column(self, m: int) -> dict[int, Fraction]:
        return {k: row[m - 1] for k, row in self.rows.items() if len(row) >= m}


def stabilization_table(k_max: int, m_max: int) -> StabilizationTable:
    """Run k = 2..k_max and test whether a_m agrees across all k >= m + 1.

    The stabilized list takes a_m from k = m + 1, so it only extends to
    m = k_max - 1 (or m_max, whichever is smaller).
    """
    if k_max < 3:
        raise PreconditionError("k_max must be >= 3")
    rows: dict[int, tuple[Fraction, ...]] = {}
    terminated: dict[int, int] = {}
    for k in range(2, k_max + 1):
        try:
            coeffs, _ = run_algorithm(k, m_max)
            rows[k] = coeffs.a
        except AlgorithmTerminated as exc:
            rows[k] = tuple(exc.coefficients)
            terminated[k] = exc.last_m
    agrees: dict[int, bool] = {}
    stab, prov = [], []
    for m in range(1, m_max + 1):
        below = [rows[k][m - 1] for k in range(m + 1, k_max + 1) if len(rows[k]) >= m]
        if not below:
            break
        agrees[m] = len(set(below)) == 1
        if len(rows[m + 1]) >= m:
            stab.append(rows[m + 1][m - 1])
            prov.append(m + 1)
    return StabilizationTable(k_max, m_max, rows, agrees, CFCoefficients(tuple(stab), tuple(prov)),
                              terminated)


def stabilized_coefficients(m_max: int) -> CFCoefficients:
    """a_1..a_{m_max}, each taken from the run at k = m + 1."""
    a, prov = [], []
    for m in range(1, m_max + 1):
        coeffs, _ = run_algorithm(m + 1, m)
        a.append(coeffs[m])
        prov.append(m + 1)
    return CFCoefficients(tuple(a), tuple(prov))
