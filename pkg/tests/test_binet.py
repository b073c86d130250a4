from fractions import Fraction as F

import mpmath
import pytest
import sympy

from telescf.binet import (
    Interval, bernoulli, binet_interval, decimal_ceil, decimal_floor, epsilon_interval,
    epsilon_partial, minimal_width_N, robbins_bracket, stirling_bracket, stirling_coeff,
)
from telescf.errors import DomainError, PreconditionError, ResourceError

mpmath.mp.dps = 80


def r_ref(n):
    """log n! - (n + 1/2) log n + n - log(2 pi)/2 in high precision."""
    n = mpmath.mpf(n)
    return mpmath.loggamma(n + 1) - (n + mpmath.mpf(1) / 2) * mpmath.log(n) + n - mpmath.log(2 * mpmath.pi) / 2


def eps_ref(p):
    p = mpmath.mpf(p)
    return (2 * p + 1) / 2 * mpmath.log((p + 1) / p) - 1


def mp(q):
    return mpmath.mpf(q.numerator) / q.denominator


class TestInterval:
    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            Interval(F(1), F(0))

    def test_intersect(self):
        a, b = Interval(F(0), F(2)), Interval(F(1), F(3))
        assert a.intersect(b) == Interval(F(1), F(2))
        with pytest.raises(DomainError):
            a.intersect(Interval(F(5), F(6)))

    def test_round_outward(self):
        i = Interval(F(1, 3), F(2, 3)).round_outward(4)
        assert i == Interval(F(5, 16), F(11, 16))

    def test_decimal_outward(self):
        assert decimal_floor(F(2, 3), 3) == "0.666"
        assert decimal_ceil(F(2, 3), 3) == "0.667"
        assert decimal_floor(F(-1, 3), 2) == "-0.34"
        assert Interval(F(1, 3), F(1, 3)).decimal(2) == ("0.33", "0.34")


class TestBernoulliStirling:
    @pytest.mark.parametrize("n", range(0, 41))
    def test_bernoulli_matches_sympy(self, n):
        if n == 1:
            assert bernoulli(1) == F(-1, 2)
            return
        ref = sympy.bernoulli(n)
        assert bernoulli(n) == F(int(ref.p), int(ref.q))

    def test_first_coefficients(self):
        assert [stirling_coeff(i) for i in range(1, 5)] == [F(1, 12), F(-1, 360), F(1, 1260), F(-1, 1680)]

    @pytest.mark.parametrize("i", range(1, 21))
    def test_sign_alternates(self, i):
        assert (stirling_coeff(i) > 0) == (i % 2 == 1)

    def test_bracket_n10(self):
        assert stirling_bracket(10, 1) == Interval(F(1, 120) - F(1, 360000), F(1, 120))

    def test_bracket_validation(self):
        with pytest.raises(PreconditionError):
            stirling_bracket(10, 0)
        with pytest.raises(PreconditionError):
            stirling_bracket(0, 2)

    @pytest.mark.parametrize("n", [1, 2, 5, 10, 30])
    def test_bracket_contains_reference(self, n):
        for N in range(1, min(minimal_width_N(n), 12) + 1):
            b = stirling_bracket(n, N)
            assert mp(b.lo) < r_ref(n) < mp(b.hi)

    def test_minimal_width_N(self):
        assert minimal_width_N(1) == 3
        assert minimal_width_N(10) == 31
        assert minimal_width_N(100) == 314


class TestEpsilon:
    def test_first_term_bound(self):
        assert epsilon_partial(1, 1).lo == F(1, 27)
        assert F(1, 27) < epsilon_interval(1, F(1, 10**10)).lo

    def test_validation(self):
        with pytest.raises(PreconditionError):
            epsilon_interval(0, F(1, 10))
        with pytest.raises(PreconditionError):
            epsilon_interval(1, 0)

    @pytest.mark.parametrize("p", [1, 2, 3, 10, 100, 1000])
    def test_matches_mpmath(self, p):
        e = epsilon_interval(p, F(1, 10**50))
        assert e.width <= F(1, 10**50)
        assert mp(e.lo) <= eps_ref(p) <= mp(e.hi)

    def test_decreasing(self):
        es = [epsilon_interval(p, F(1, 10**20)) for p in range(1, 101)]
        assert all(b.hi < a.lo for a, b in zip(es, es[1:]))

    def test_inside_robbins_difference(self):
        # eps_p = r_p - r_{p+1}, so it sits between the Robbins differences
        for p in range(1, 30):
            e = epsilon_interval(p, F(1, 10**30))
            assert robbins_bracket(p).lo - robbins_bracket(p + 1).hi < e.lo
            assert e.hi < robbins_bracket(p).hi - robbins_bracket(p + 1).lo


class TestBinetInterval:
    def test_r1_reference(self):
        r = binet_interval(1, F(1, 10**30))
        assert r.width <= F(1, 10**30)
        assert mp(r.lo) <= r_ref(1) <= mp(r.hi)
        assert r.decimal(25)[0].startswith("0.0810614667953272582196")

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 10, 25, 100])
    def test_reference_and_robbins(self, n):
        r = binet_interval(n, F(1, 10**36))
        assert r.width <= F(1, 10**36)
        assert mp(r.lo) <= r_ref(n) <= mp(r.hi)
        assert r.subset_of(robbins_bracket(n))
        assert robbins_bracket(n).strictly_contains(r.mid)

    @pytest.mark.parametrize("n", [1, 4, 20])
    def test_nested(self, n):
        widths = [F(1, 10**e) for e in (5, 10, 20, 30, 40)]
        rs = [binet_interval(n, w) for w in widths]
        assert all(b.subset_of(a) for a, b in zip(rs, rs[1:]))

    @pytest.mark.parametrize("n", range(1, 41))
    def test_cross_oracle_stirling(self, n):
        r = binet_interval(n, F(1, 10**20))
        tight = stirling_bracket(n, minimal_width_N(n))
        assert r.intersects(tight)
        if tight.width > r.width:
            assert r.subset_of(tight)

    def test_resource_cap(self):
        with pytest.raises(ResourceError) as info:
            binet_interval(1, F(1, 10**200), max_doublings=0)
        assert info.value.best.width > F(1, 10**200)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            binet_interval(0, F(1, 10))
        with pytest.raises(PreconditionError):
            binet_interval(1, F(-1, 10))
