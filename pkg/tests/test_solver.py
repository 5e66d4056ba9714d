from fractions import Fraction
from math import factorial

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from eulerops.errors import DegenerateIndicialError, MixedDegreeError, ResonanceError
from eulerops.exact import ASCENDING, DESCENDING, LaurentPoly, XSeries, pochhammer
from eulerops.operators import DiffOp, EulerPoly, EulerRational, GradedOp, separate, to_graded
from eulerops.solver import (check_residual, exp_apply, indicial_roots, normal_separation,
                             proportionality, solve_operator, solve_series)

from conftest import nonint_rationals, small_rationals

x, d, D = DiffOp.x(), DiffOp.d(), DiffOp.euler()
Z = sp.Symbol("z")


def hg_parts(a, b, g):
    return separate(D * (D + (g - 1)) - x * (D + a) * (D + b))


class TestIndicial:
    def test_bessel_like_example(self):
        F, _ = normal_separation(x * x * d * d * 4 + x * d * 2 + x)
        res = indicial_roots(F)
        assert res.roots == [0, Fraction(1, 2)]
        assert res.to_json() == {"roots": ["0", "1/2"]}

    def test_degenerate_double_root(self):
        F, _ = normal_separation(x * d * d + d + x)
        res = indicial_roots(F)
        assert res.rational_roots == ((0, 2),)
        assert res.degenerate == [(0, 2)]

    def test_irrational_part_reported(self):
        res = indicial_roots(EulerPoly((-2, 0, 1)) * EulerPoly.linear(1))
        assert res.roots == [-1]
        assert res.unresolved_degree == 2

    @given(st.lists(small_rationals(6, 4), min_size=1, max_size=4))
    def test_roots_match_sympy(self, roots):
        F = EulerPoly.from_roots(roots)
        res = indicial_roots(F)
        mu = sp.Symbol("mu")
        expected = sp.roots(sp.Poly(sp.prod([mu - sp.Rational(r.numerator, r.denominator) for r in roots]), mu))
        assert {Fraction(str(k)): v for k, v in expected.items()} == dict(res.rational_roots)
        assert res.unresolved_degree == 0


class TestSolveSeries:
    @given(nonint_rationals(), nonint_rationals(), nonint_rationals())
    def test_2f1_matches_pochhammer(self, a, b, g):
        F, P = hg_parts(a, b, g)
        rep = solve_series(F, P, 0, 12)
        for n in range(13):
            ref = pochhammer(a, n) * pochhammer(b, n) / (pochhammer(g, n) * factorial(n))
            assert rep.solution.coefficient(n) == ref

    def test_2f1_matches_sympy_hyper(self):
        a, b, g = Fraction(1, 3), Fraction(-5, 2), Fraction(7, 4)
        F, P = hg_parts(a, b, g)
        y = solve_series(F, P, 0, 8).solution
        ser = sp.series(sp.hyperexpand(sp.hyper([sp.Rational(1, 3), sp.Rational(-5, 2)], [sp.Rational(7, 4)], Z)), Z, 0, 9)
        ser = ser.removeO()
        for n in range(9):
            assert y.coefficient(n) == Fraction(str(ser.coeff(Z, n)))

    def test_terminating_polynomial(self):
        F, P = hg_parts(-2, 1, 1)
        rep = solve_series(F, P, 0, 10)
        assert rep.terminated
        assert rep.solution.to_laurent() == LaurentPoly({0: 1, 1: -2, 2: 1})
        assert rep.iterations == 2

    def test_not_a_root(self):
        F, P = hg_parts(1, 1, 2)
        with pytest.raises(ValueError):
            solve_series(F, P, 3, 4)

    def test_resonance_raises_with_exponent(self):
        # gamma = -1: F = D(D-2) vanishes again at x^2
        F, P = hg_parts(Fraction(1, 2), Fraction(1, 3), -1)
        with pytest.raises(ResonanceError) as err:
            solve_series(F, P, 0, 6)
        assert err.value.exponent == 2

    def test_mixed_degrees_rejected(self):
        P = to_graded(x + d)
        with pytest.raises(MixedDegreeError):
            solve_series(EulerPoly.D(), P, 0, 3)

    def test_descending_mode(self):
        # (D + a)(D + b) - (x d^2 + g d), seed x^-a with a = -2
        op = (D - 2) * (D + 1) - (x * d * d + d * 3)
        F, P = separate(op)
        rep = solve_series(F, P, 2, 5)
        assert rep.mode == DESCENDING and rep.terminated
        y = rep.solution
        assert check_residual(op, y).is_zero()

    def test_json_shape(self):
        F, P = hg_parts(-1, 1, 1)
        doc = solve_series(F, P, 0, 3).to_json()
        assert doc["terminated"] is True
        assert doc["solution"]["coefficients"] == {"0": "1", "1": "-1"}


class TestExpApply:
    def test_requires_order_for_fractional_seed(self):
        with pytest.raises(ValueError):
            exp_apply(x * d * d, Fraction(1, 2))

    def test_requires_lowering(self):
        with pytest.raises(MixedDegreeError):
            exp_apply(x, 2)

    def test_hermite_seed(self):
        y = exp_apply(d * d * Fraction(1, 4), 2)
        assert y.to_laurent() == LaurentPoly({2: 1, 0: Fraction(-1, 2)})

    @given(nonint_rationals(), st.integers(0, 6), st.integers(0, 6))
    def test_mfactorial_identity(self, a, g_num, n):
        # [-(1/((D+a)(D+b))) P]^m x^-b == (1/m!) [(1/(D+a)) P]^m x^-b with b = -n, P = x d^2 + g d
        g = Fraction(g_num, 3) + Fraction(1, 7)
        b = -n
        P = to_graded(x * d * d + d * g)
        A1 = GradedOp.euler(EulerRational(-1, EulerPoly.linear(a) * EulerPoly.linear(b))) * P
        A2 = GradedOp.euler(EulerRational(1, EulerPoly.linear(a))) * P
        u = v = LaurentPoly.monomial(n)
        for m in range(1, n + 1):
            u, v = A1(u), A2(v)
            assert u == v * Fraction(1, factorial(m))


class TestResidualAndProportionality:
    def test_residual_windows(self):
        y = XSeries(0, {0: 1, 1: 1, 2: Fraction(1, 2)}, ASCENDING, 2)
        r = check_residual(d - 1, y)
        assert r.is_zero() and r.bound == 1

    def test_residual_pair(self):
        F, P = hg_parts(Fraction(1, 2), Fraction(1, 2), Fraction(3, 2))
        y = solve_series(F, P, 0, 10).solution
        assert check_residual((F, P), y).is_zero()

    def test_proportionality(self):
        a = LaurentPoly({0: 2, 1: 4})
        assert proportionality(a, LaurentPoly({0: 1, 1: 2})) == 2
        assert proportionality(a, LaurentPoly({0: 1, 1: 3})) is None
        assert proportionality(LaurentPoly(), LaurentPoly()) == 1


class TestSolveOperator:
    def test_degenerate_is_an_error(self):
        with pytest.raises(DegenerateIndicialError) as err:
            solve_operator(x * d * d + d + x, 6)
        assert err.value.roots == [(0, 2)]

    def test_explicit_root_bypasses_degeneracy(self):
        (rep,) = solve_operator(x * d * d + d + 1, 6, root=0)
        # x y'' + y' + y = 0 is solved by J0(2 sqrt(x)) = sum (-x)^k/(k!)^2
        for k in range(7):
            assert rep.solution.coefficient(k) == Fraction((-1) ** k, factorial(k) ** 2)

    def test_bessel_j0(self):
        (rep,) = solve_operator(x * d * d + d + x, 8, root=0)
        ref = sp.series(sp.besselj(0, Z), Z, 0, 9).removeO()
        for k in range(9):
            assert rep.solution.coefficient(k) == Fraction(str(ref.coeff(Z, k)))

    def test_both_roots(self):
        reps = solve_operator(x * x * d * d * 4 + x * d * 2 + x, 5)
        assert [r.root for r in reps] == [0, Fraction(1, 2)]
        for r in reps:
            assert check_residual(x * x * d * d * 4 + x * d * 2 + x, r.solution).is_zero()
