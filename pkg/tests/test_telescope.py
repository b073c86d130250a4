import random
from fractions import Fraction as F

import pytest

from telescf import telescope
from telescf.cli import PUBLISHED_A
from telescf.errors import AlgorithmTerminated, PreconditionError
from telescf.exact import Poly, SignKind, poly_eval
from telescf.legendre import RatFuncZ, to_z_form
from telescf.telescope import (
    DeltaState, choose_a, delta_init, delta_step, iterate_states, next_delta1, run_algorithm,
    stabilization_table, stabilized_coefficients, verify_sign,
)


def z(*coeffs):
    return Poly(coeffs)


def _nd(a, m, p):
    """(n_j, d_j) for j = -1..m of a_1/(p + a_2/(p + ...)) at a number p."""
    n = {-1: F(1), 0: F(0)}
    d = {-1: F(0), 0: F(1)}
    for j in range(1, m + 1):
        n[j] = p * n[j - 1] + a[j - 1] * n[j - 2]
        d[j] = p * d[j - 1] + a[j - 1] * d[j - 2]
    return n, d


def _deltas_from_definition(k, a, m, p):
    """Delta_1..3(k, m) evaluated at z = p(p+1) straight from their definitions."""
    f = to_z_form(k)
    zz = p * (p + 1)
    fs, fk = poly_eval(f.num, zz), poly_eval(f.den, zz)
    n, d = _nd(a, m, F(p))
    np_, dp = _nd(a, m, F(p + 1))
    d1 = fs * d[m] * dp[m] - fk * (n[m] * dp[m] - np_[m] * d[m])
    d2 = (fs * (p * d[m] * dp[m - 1] + (p + 1) * dp[m] * d[m - 1])
          - fk * (p * n[m] * dp[m - 1] - (p + 1) * np_[m] * d[m - 1]
                  + (p + 1) * n[m - 1] * dp[m] - p * np_[m - 1] * d[m]))
    d3 = (fs * (d[m] * dp[m - 1] - dp[m] * d[m - 1])
          - fk * (n[m] * dp[m - 1] + np_[m] * d[m - 1] - np_[m - 1] * d[m] - n[m - 1] * dp[m]))
    return d1, d2, d3


class TestInit:
    def test_k3(self):
        s = delta_init(3)
        assert (s.delta1, s.delta2, s.delta3) == (z(5), z(-6, -60), z(12, 120))
        assert s.delta1_prev.is_zero() and s.m == 0 and s.d_k == 1

    def test_k2(self):
        s = delta_init(2)
        assert (s.delta1, s.delta2, s.delta3) == (z(1), z(-2, -12), z(4, 24))

    def test_k5(self):
        s = delta_init(5)
        den = z(60, 1680, 7560)
        assert (s.delta1, s.delta2, s.delta3) == (z(77, 630), -den, den.scale(2))

    def test_degree_hypothesis(self, monkeypatch):
        monkeypatch.setattr(telescope, "to_z_form", lambda k: RatFuncZ(z(1), z(3), k))
        with pytest.raises(PreconditionError):
            delta_init(4)

    def test_k_too_small(self):
        with pytest.raises(PreconditionError):
            delta_init(1)


class TestChooseAndStep:
    def test_k3_first_two(self):
        s = delta_init(3)
        assert choose_a(s) == F(1, 12)
        s = delta_step(s, F(1, 12))
        assert s.delta1 == z(F(-1, 2))
        assert s.delta2 == z(F(11, 2), 15)
        assert choose_a(s) == F(1, 30)
        s = delta_step(s, F(1, 30))
        assert s.delta1 == z(F(17, 90))

    def test_k5_third(self):
        s = delta_init(5)
        for a in (F(1, 12), F(1, 30)):
            assert choose_a(s) == a
            s = delta_step(s, a)
        assert s.delta1 == z(F(2537, 900), F(53, 2))
        assert choose_a(s) == F(53, 210)

    @pytest.mark.parametrize("k, m, row", [
        # Delta_1(k, m) as a polynomial in z, written as a function of the free a_m
        (2, 2, lambda a: z(a * a + F(7, 6) * a, 3 * a - F(1, 6))),
        (3, 1, lambda a: z(-6 * a, 5 - 60 * a)),
        (3, 2, lambda a: z(5 * a * a + F(11, 2) * a, 15 * a - F(1, 2))),
        (3, 3, lambda a: z(-a * a / 2 - F(31, 60) * a, F(17, 90) - F(5, 6) * a)),
        (3, 4, lambda a: z(F(17, 90) * a * a + F(1037, 4500) * a, F(119, 450) * a - F(357, 2500))),
        (5, 1, lambda a: z(-60 * a, 77 - 1680 * a, 630 - 7560 * a)),
        (5, 2, lambda a: z(77 * a * a + 82 * a, 630 * a * a + 924 * a - 5, 1890 * a - 63)),
        (5, 3, lambda a: z(-5 * a * a - F(31, 6) * a, -(63 * a * a + F(1088, 15) * a - F(2537, 900)),
                           F(53, 2) - 105 * a)),
        (5, 4, lambda a: z(F(2537, 900) * a * a + F(4421, 1260) * a,
                           F(53, 2) * a * a + F(11777, 315) * a - F(159, 98), F(371, 10) * a - F(39, 2))),
    ])
    def test_symbolic_rows(self, k, m, row):
        s = delta_init(k)
        for _ in range(m - 1):
            s = delta_step(s, choose_a(s))
        for a in (F(0), F(1), F(-2), F(3, 7), choose_a(s)):
            assert next_delta1(s, a) == row(a)

    @pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 9])
    def test_matches_definition(self, k):
        for s in iterate_states(k, 6):
            for p in (1, 2, 5):
                d1, d2, d3 = _deltas_from_definition(k, s.a_chosen, s.m, p)
                zz = p * (p + 1)
                assert poly_eval(s.delta1, zz) == d1
                assert poly_eval(s.delta2, zz) == d2
                assert poly_eval(s.delta3, zz) == d3

    @pytest.mark.parametrize("k", range(2, 13))
    def test_degree_contract(self, k):
        for s in iterate_states(k, 10):
            assert s.delta1.degree() == s.d_k - 1
            assert s.delta2.degree() == s.d_k
            assert s.delta3.degree() == s.d_k

    @pytest.mark.parametrize("k", range(2, 9))
    def test_delta4_identity(self, k):
        s = delta_init(k)
        Z = Poly([0, 1])
        for _ in range(8):
            a = choose_a(s)
            nxt = delta_step(s, a)
            assert nxt.delta2 + nxt.delta3 == (Z * s.delta1).scale(2) + s.delta2.scale(a)
            s = nxt

    def test_uniqueness_under_perturbation(self):
        rng = random.Random(20221)
        for _ in range(10):
            k = rng.randint(2, 10)
            m = rng.randint(0, 7)
            s = delta_init(k)
            for _ in range(m):
                s = delta_step(s, choose_a(s))
            a = choose_a(s)
            delta = F(rng.choice([-1, 1]) * rng.randint(1, 1000), rng.randint(1, 1000))
            assert next_delta1(s, a + delta).degree() == s.d_k
            assert next_delta1(s, a).degree() == s.d_k - 1


class TestTermination:
    def test_zero_divisor(self):
        s = DeltaState(k=0, m=3, d_k=1, delta1_prev=Poly(), delta1=z(1), delta2=z(1), delta3=z(1))
        with pytest.raises(AlgorithmTerminated) as info:
            choose_a(s)
        assert info.value.last_m == 3

    def test_degree_drop(self):
        # arbitrary polynomials of the right degrees can lose degree (no f-structure)
        s = DeltaState(k=0, m=0, d_k=1, delta1_prev=Poly(), delta1=z(1), delta2=z(0, -1), delta3=z(0, 2))
        a = choose_a(s)
        assert a == 1
        with pytest.raises(AlgorithmTerminated):
            delta_step(s, a)

    def test_run_keeps_partial_output(self, monkeypatch):
        # f* = z + 1, f = z^2 + z: a_1 = 1 and z(z+1) - (z^2+z) = 0
        monkeypatch.setattr(telescope, "to_z_form", lambda k: RatFuncZ(z(1, 1), z(0, 1, 1), k))
        with pytest.raises(AlgorithmTerminated) as info:
            run_algorithm(99, 4)
        assert info.value.last_m == 0
        assert info.value.coefficients == []


class TestRunAlgorithm:
    def test_k3_steps(self):
        coeffs, reports = run_algorithm(3, 4)
        assert coeffs.a == (F(1, 12), F(1, 30), F(17, 75), F(27, 50))
        assert [r.sign.kind for r in reports] == [SignKind.CONSTANT_NEGATIVE, SignKind.CONSTANT_POSITIVE] * 2
        assert all(r.sign_matches_conjecture for r in reports)

    @pytest.mark.parametrize("k", sorted(PUBLISHED_A))
    def test_published_row(self, k):
        coeffs, _ = run_algorithm(k, 6)
        assert coeffs.a == tuple(F(v) for v in PUBLISHED_A[k])
        assert coeffs.provenance == (k,) * 6

    def test_coefficient_indexing(self):
        coeffs, _ = run_algorithm(7, 6)
        assert coeffs[1] == F(1, 12) and coeffs[6] == F(29944523, 19733142)
        with pytest.raises(IndexError):
            coeffs[0]

    def test_m_max_validation(self):
        with pytest.raises(PreconditionError):
            run_algorithm(3, 0)

    @pytest.mark.parametrize("k", range(2, 13))
    def test_positivity_and_signs(self, k):
        coeffs, reports = run_algorithm(k, 10)
        assert coeffs.all_positive
        assert all(r.sign_matches_conjecture for r in reports)


class TestVerifySign:
    def test_k3_signs(self):
        assert verify_sign(3, 1, z(F(-1, 2))).sign_matches_conjecture
        assert verify_sign(3, 2, z(F(17, 90))).sign_matches_conjecture

    def test_k2_m2(self):
        a2 = F(1, 18)
        rep = verify_sign(2, 2, z(a2 * a2 + F(7, 6) * a2, 3 * a2 - F(1, 6)))
        assert rep.sign.kind is SignKind.CONSTANT_POSITIVE and rep.sign_matches_conjecture

    def test_mismatch_keeps_witness_and_fallback(self):
        rep = verify_sign(4, 2, z(F(-3, 2), 1))
        assert not rep.sign_matches_conjecture
        assert rep.sign.kind is SignKind.ROOT_ON_RAY and rep.sign.witness is not None
        assert rep.fallback_sign.kind is SignKind.CONSTANT_POSITIVE

    def test_zero_is_not_a_match(self):
        assert not verify_sign(3, 2, Poly()).sign_matches_conjecture


class TestStabilization:
    def test_k7_grid(self):
        t = stabilization_table(7, 6)
        assert t.column(4) == {2: F(39, 70), 3: F(27, 50), 4: F(1377, 2597),
                               5: F(195, 371), 6: F(195, 371), 7: F(195, 371)}
        col5 = t.column(5)
        assert col5[6] == col5[7] == F(22999, 22737) and col5[5] == F(56428, 55809)
        assert set(t.column(1).values()) == {F(1, 12)}
        assert all(t.agrees.values())
        assert t.stabilized.a == (F(1, 12), F(1, 30), F(53, 210), F(195, 371), F(22999, 22737),
                                  F(29944523, 19733142))
        assert t.stabilized.provenance == (2, 3, 4, 5, 6, 7)

    def test_longer_range(self):
        t = stabilization_table(12, 10)
        assert all(t.agrees.values()) and not t.terminated
        assert t.stabilized == stabilized_coefficients(10)

    def test_k_max_validation(self):
        with pytest.raises(PreconditionError):
            stabilization_table(2, 3)
