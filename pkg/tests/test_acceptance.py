"""Acceptance gate: one test function per criterion, all comparisons exact.

The terminal summary prints a PASS/FAIL line per criterion (see conftest).
"""
import json
import random
from fractions import Fraction
from math import factorial

import pytest

from eulerops import families as fam
from eulerops import identities as ids
from eulerops import ladder as lad
from eulerops.errors import DegenerateIndicialError
from eulerops.exact import LaurentPoly, XSeries, pochhammer
from eulerops.operators import DiffOp, EulerPoly, EulerRational, GradedOp, commutator, separate, to_graded
from eulerops.solver import (check_residual, indicial_roots, normal_separation,
                             proportionality, solve_operator, solve_series)

x, d, D = DiffOp.x(), DiffOp.d(), DiffOp.euler()


def random_rational(rng, num=15, den=7, integer_ok=True):
    while True:
        q = Fraction(rng.randint(-num, num), rng.randint(1, den))
        if integer_ok or q.denominator != 1:
            return q


def recurrence(kind, n, alpha=Fraction(0)):
    """Textbook three-term recurrences, written out here on plain coefficient dicts."""
    def lin(p, a, b):  # (a + b x) p
        out = {}
        for k, v in p.items():
            out[k] = out.get(k, 0) + a * v
            out[k + 1] = out.get(k + 1, 0) + b * v
        return out

    def axpy(p, c, q):
        out = dict(p)
        for k, v in q.items():
            out[k] = out.get(k, 0) + c * v
        return out

    prev = {0: Fraction(1)}
    if kind == "laguerre":
        cur = {0: 1 + alpha, 1: Fraction(-1)}
    else:
        cur = {1: Fraction(2)}
    if n == 0:
        cur = prev
    for k in range(1, n):
        if kind == "laguerre":
            nxt = axpy(lin(cur, 2 * k + 1 + alpha, -1), -(k + alpha), prev)
            nxt = {e: v / (k + 1) for e, v in nxt.items()}
        elif kind == "hermite":
            nxt = axpy(lin(cur, 0, 2), -2 * k, prev)
        else:
            nxt = axpy(lin(cur, 0, 2), -1, prev)
        prev, cur = cur, nxt
    return LaurentPoly({k: v for k, v in cur.items() if v})


def test_criterion_01_hypergeometric_coefficients():
    rng = random.Random(101)
    for _ in range(10):
        a, b = random_rational(rng), random_rational(rng)
        g = random_rational(rng, integer_ok=False)
        spec = fam.FamilySpec(fam.HG2F1, {"alpha": a, "beta": b, "gamma": g})
        F, P = spec.separation()
        y = solve_series(F, P, 0, 20).solution
        for n in range(21):
            ref = pochhammer(a, n) * pochhammer(b, n) / (pochhammer(g, n) * factorial(n))
            assert y.coefficient(n) == ref, (a, b, g, n)


def test_criterion_02_indicial_examples():
    F, P = separate(x * x * d * d * 4 + x * d * 2 + x)
    assert F == EulerPoly.D() * 2 * (EulerPoly.D() * 2 - 1) and P == to_graded(x)
    assert indicial_roots(F).roots == [0, Fraction(1, 2)]

    # x y'' + y' + y = 0 multiplied by x: D^2 + x
    F, _ = normal_separation(x * (x * d * d + d + 1))
    assert F == EulerPoly.D() * EulerPoly.D()
    assert indicial_roots(F).degenerate == [(0, 2)]
    with pytest.raises(DegenerateIndicialError) as err:
        solve_operator(x * d * d + d + 1, 8)
    assert err.value.roots == [(0, 2)]


def test_criterion_03_exponential_forms():
    g = Fraction(5, 3)
    for n in range(16):
        assert fam.confluent_exp_form(n, g).to_laurent() == fam.confluent_1f1(-n, g, n).to_laurent()
    for a, g in [(Fraction(1, 2), Fraction(3, 2)), (Fraction(-7, 3), Fraction(2, 5)), (Fraction(4), Fraction(9, 4))]:
        for n in range(11):
            assert fam.hypergeometric_exp_form(a, n, g).to_laurent() == fam.hypergeometric_2f1(a, -n, g, n).to_laurent()
    for n in range(13):
        for family, poly in [(fam.HERMITE, fam.hermite(n)), (fam.CHEBYSHEV_U, fam.chebyshev_u(n))]:
            F, P = fam.FamilySpec(family, {"n": n}).separation()
            via_solver = solve_series(F, P, n, n).solution.to_laurent() * 2 ** n
            assert poly == via_solver
            assert poly == recurrence("hermite" if family == fam.HERMITE else "chebyshev", n)

    rng = random.Random(303)
    for _ in range(5):
        a = random_rational(rng, integer_ok=False)
        g = random_rational(rng, integer_ok=False)
        P = to_graded(x * d * d + d * g)
        b = -6
        A1 = GradedOp.euler(EulerRational(-1, EulerPoly.linear(a) * EulerPoly.linear(b))) * P
        A2 = GradedOp.euler(EulerRational(1, EulerPoly.linear(a))) * P
        u = v = LaurentPoly.monomial(6)
        for m in range(1, 7):
            u, v = A1(u), A2(v)
            assert u == v * Fraction(1, factorial(m))


def test_criterion_04_orthogonal_families():
    for n in range(31):
        for alpha in (Fraction(0), Fraction(1, 2)):
            p = fam.laguerre(n, alpha)
            assert p == recurrence("laguerre", n, alpha)
            assert check_residual(fam.FamilySpec(fam.LAGUERRE, {"n": n, "alpha": alpha}).operator(),
                                  XSeries.from_laurent(p)).is_zero()
        h, u = fam.hermite(n), fam.chebyshev_u(n)
        assert h == recurrence("hermite", n)
        assert u == recurrence("chebyshev", n)
        assert check_residual(fam.FamilySpec(fam.HERMITE, {"n": n}).operator(), XSeries.from_laurent(h)).is_zero()
        assert check_residual(fam.FamilySpec(fam.CHEBYSHEV_U, {"n": n}).operator(), XSeries.from_laurent(u)).is_zero()


def test_criterion_05_pfq_two_separations():
    rng = random.Random(505)
    for _ in range(4):
        num = [random_rational(rng) for _ in range(3)]
        den = [random_rational(rng, integer_ok=False) for _ in range(2)]
        y = fam.pfq(num, den, 15)
        for n in range(16):
            top = pochhammer(num[0], n) * pochhammer(num[1], n) * pochhammer(num[2], n)
            bot = pochhammer(den[0], n) * pochhammer(den[1], n) * factorial(n)
            assert y.coefficient(n) == top / bot
    for num, den in [([-4, Fraction(1, 2), Fraction(2, 3)], [Fraction(7, 4), Fraction(5, 2)]),
                     ([Fraction(1, 3), -3, Fraction(-5, 2)], [Fraction(3, 2), Fraction(1, 4)])]:
        idx = next(i for i, a in enumerate(num) if a == int(a) and a < 0)
        desc = fam.pfq_descending(num, den, 10, root_choice=idx)
        assert desc.truncation is None
        c = proportionality(desc.to_laurent(), fam.pfq(num, den, 10).to_laurent())
        assert c is not None and c != 0


def test_criterion_06_periodic_equation():
    for lam in (0, 1):
        y = fam.periodic_cos(1, lam, 12)
        # x^2 (y'' + cos y) = (D(D-1) + x^2 cos) y is exact through x^(lam+12)
        multiplied = fam.FamilySpec(fam.PERIODIC_COS, {"a": 1, "order": 12}).operator()
        r = check_residual(multiplied, y)
        assert r.is_zero() and r.bound >= lam + 12
        # the plain form lowers by two, so its known window ends two steps earlier
        r = check_residual(fam.periodic_cos_operator(1, 12), y)
        assert r.is_zero() and r.bound >= lam + 10
        assert fam.periodic_cos_direct(1, lam, 8) == fam.periodic_cos(1, lam, 8)
    y0 = fam.periodic_cos(1, 0, 12)
    assert (y0.coefficient(2), y0.coefficient(4)) == (Fraction(-1, 2), Fraction(1, 12))
    assert fam.periodic_cos_discrepancy(1, 0, 8) == (4, Fraction(1, 16), Fraction(1, 12))


def test_criterion_07_ladders():
    ns = range(0, 21)
    for g in (Fraction(2), Fraction(1, 2), Fraction(7, 3)):
        for rel in (lad.ch_lowering(g), lad.ch_raising(g)):
            assert rel.holds(ns), rel.name
        assert lad.ch_lowering(g).expected_at(5) == -5
        assert lad.ch_raising(g).expected_at(5) == -(5 + g)
    for a, g in [(Fraction(1, 2), Fraction(3, 2)), (Fraction(2), Fraction(3)), (Fraction(-1, 3), Fraction(5, 2))]:
        mono = lad.hg_lowering_monomial(a, g)
        assert mono.holds(range(1, 21))
        assert all(mono.expected_at(n) == n * (g + n - 1) / (a + n - 1) for n in range(1, 21))
        for rel in (lad.hg_raising(a, g), lad.hg_raising_bar(a, g)):
            assert rel.holds(ns) and all(rel.expected_at(n) == 1 for n in ns)
    for alpha in (Fraction(0), Fraction(1, 2), Fraction(3)):
        up, down = lad.laguerre_ladder(alpha)
        assert up.holds(ns) and down.holds(ns)
        assert [up.expected_at(n) for n in (0, 4)] == [1, 5]
        assert down.expected_at(4) == -(4 + alpha)
        shift = lad.parameter_shift_laguerre(alpha)
        assert shift.holds(ns) and shift.expected_at(3) == -1
    for a, b, g in [(Fraction(1, 3), Fraction(-1, 2), Fraction(5, 4)), (1, 2, 3), (Fraction(3, 2), Fraction(2, 3), Fraction(-5, 2))]:
        rel = lad.parameter_shift_hg(a, b, g, order=10)
        assert rel.holds([0])
        assert rel.expected_at(0) == Fraction(a) * b / g


def test_criterion_08_operator_algebra():
    assert commutator(d, x) == DiffOp.identity()
    for g in (Fraction(2), Fraction(1, 2), Fraction(-7, 3)):
        ok, w = lad.su11_check(g)
        assert ok
        jp, jm, j0 = lad.su11_generators(g)
        assert commutator(jp, jm) == j0 * -2
        assert commutator(j0, jp) == jp and commutator(j0, jm) == -jm
        ok, w = lad.quadratic_check(g)
        assert ok
        assert commutator(x + x * x * d, x * d * d + d * g) == D * (-2 * (g + Fraction(1, 2))) - D * D * 3 - g


def test_criterion_09_canonical_conjugate():
    for a, g in [(Fraction(1, 2), Fraction(3, 2)), (Fraction(2), Fraction(3)), (Fraction(-1, 3), Fraction(5, 2))]:
        jp, delta = lad.hg_canonical_conjugate(a, g)
        assert delta == 1
        # (J0 + alpha - 1)/(J0 + gamma - 1) x with J0 = D + 1: coefficient (D+alpha)/(D+gamma) at shift 1
        assert jp == GradedOp({1: EulerRational(EulerPoly.linear(a), EulerPoly.linear(g))})
        assert lad.canonical_pair_holds(fam.hg_lowering_operator(a, g), jp, 20)


def test_criterion_10_rodriguez():
    for n in range(21):
        assert ids.rodriguez_laguerre(n) == fam.laguerre(n, 0)
        assert ids.rodriguez_hermite(n) == fam.hermite(n)
    for n in range(16):
        assert lad.laguerre_product(n, 0) == fam.laguerre(n, 0) * factorial(n)


def test_criterion_11_generating_functions():
    assert ids.gf_laguerre(15).equal
    rep = ids.gf_chebyshev(12)
    assert rep.equal
    assert [rep.lhs[k] for k in range(3)] == [LaurentPoly.constant(1), LaurentPoly({1: 2}), LaurentPoly({2: 4, 0: -1})]
    assert ids.gf_laguerre_window(6, 6).equal


def test_criterion_12_cli_contract(run_cli):
    code, out, _ = run_cli("indicial", "--op", "4*x^2*d^2 + 2*x*d + x", "--json")
    assert code == 0 and json.loads(out) == {"roots": ["0", "1/2"]}
    code, out, _ = run_cli("family", "laguerre", "--n", "2", "--alpha", "0", "--json")
    assert code == 0 and json.loads(out) == {"coefficients": {"0": "1", "1": "-2", "2": "1/2"}}
    code, out, _ = run_cli("solve", "--op", "x*d^2 + d + x*1", "--json")
    assert code == 3 and json.loads(out)["error"]["kind"] == "degenerate"
    code, out, _ = run_cli("solve", "--op", "x*d^2 + d + 1", "--json")
    assert code == 3 and json.loads(out)["error"]["kind"] == "degenerate"
    code, out, _ = run_cli("solve", "--op", "x*d^2 + (2 - x*)*d", "--json")
    assert code == 2 and json.loads(out)["error"]["kind"] == "parse"
    code, out, _ = run_cli("solve", "--op", "D*(D - 2) - x*(D + 1/2)*(D + 1/3)", "--root", "0", "--json")
    assert code == 3 and json.loads(out)["error"]["kind"] == "resonance"
