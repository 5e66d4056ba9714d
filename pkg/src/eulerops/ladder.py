"""Ladder operators, their algebras, and exact verification over a range of n.

A :class:`LadderRelation` packages an (possibly n-dependent) operator with
the family members it connects and the expected proportionality factor,
stored as a rational function of n.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Optional

from .errors import InconsistentConjugate, ResonanceError
from .exact import LaurentPoly, XSeries, format_rational, rational
from .families import (CHG, HG2F1, HERMITE, LAGUERRE, FamilySpec, ch_lowering_operator,
                       confluent_1f1, hermite, hg_lowering_operator, hypergeometric_2f1, laguerre)
from .operators import DiffOp, EulerPoly, EulerRational, GradedOp, commutator, to_graded
from .solver import proportionality

_x = DiffOp.x()
_d = DiffOp.d()
_D = DiffOp.euler()


def _in_n(*coeffs, den=None):
    """Rational function of n from ascending numerator coefficients."""
    return EulerRational(EulerPoly(coeffs), den)


@dataclass(frozen=True)
class LadderRelation:
    name: str
    operator: Callable  # n -> DiffOp | GradedOp
    source: Callable  # n -> member_n
    target: Callable  # n -> member_{n+shift}, or None past the bottom
    expected: EulerRational  # coefficient as a function of n
    index_shift: tuple = (1, 0)  # (n shift, parameter shift)
    family: Optional[FamilySpec] = None

    def expected_at(self, n) -> Fraction:
        return self.expected(n)

    def measure(self, n):
        """Coefficient c with op(member_n) == c * target_n, or None if not proportional."""
        image = self.operator(n)(self.source(n))
        tgt = self.target(n)
        if tgt is None or _is_zero(tgt):
            return Fraction(0) if _is_zero(image) else None
        if _is_zero(image):
            return Fraction(0)
        return proportionality(image, tgt)

    def verify(self, ns):
        rows = []
        for n in ns:
            exp = self.expected_at(n)
            got = self.measure(n)
            if self.target(n) is None:
                # below the bottom of the family the target is zero: only the image must vanish
                ok = got == 0
            else:
                ok = got is not None and got == exp
            rows.append({
                "n": n,
                "expected": format_rational(exp),
                "measured": None if got is None else format_rational(got),
                "ok": ok,
            })
        return rows

    def holds(self, ns) -> bool:
        return all(row["ok"] for row in self.verify(ns))


def _is_zero(v):
    return v.is_zero()


def _phi(n, gamma):
    return confluent_1f1(-n, gamma, n).to_laurent()


def _hg_poly(alpha, n, gamma):
    return hypergeometric_2f1(alpha, -n, gamma, n).to_laurent()


def ch_lowering(gamma) -> LadderRelation:
    """(x d^2 + gamma d) Phi(-n; gamma; x) = -n Phi(-n+1; gamma; x)."""
    gamma = rational(gamma)
    op = ch_lowering_operator(gamma)
    return LadderRelation(
        "ch-lowering", lambda n: op, lambda n: _phi(n, gamma),
        lambda n: _phi(n - 1, gamma) if n > 0 else None,
        _in_n(0, -1), (-1, 0), FamilySpec(CHG, {"gamma": gamma}))


def ch_raising_operator(gamma) -> DiffOp:
    """x - 2 x d - gamma + x d^2 + gamma d, i.e. exp(-J-) x exp(J-)."""
    gamma = rational(gamma)
    return _x - _x * _d * 2 - gamma + ch_lowering_operator(gamma)


def ch_raising(gamma) -> LadderRelation:
    gamma = rational(gamma)
    op = ch_raising_operator(gamma)
    return LadderRelation(
        "ch-raising", lambda n: op, lambda n: _phi(n, gamma), lambda n: _phi(n + 1, gamma),
        _in_n(-gamma, -1), (1, 0), FamilySpec(CHG, {"gamma": gamma}))


def su11_generators(gamma):
    """(J+, J-, J0) = (x, x d^2 + gamma d, D + gamma/2)."""
    gamma = rational(gamma)
    return _x, ch_lowering_operator(gamma), _D + gamma / 2


def su11_check(gamma):
    """Operator-level check of [J+,J-] = -2J0 and [J0,J+-] = +-J+-."""
    jp, jm, j0 = su11_generators(gamma)
    witnesses = {
        "[J+,J-] = -2J0": (commutator(jp, jm), j0 * -2),
        "[J0,J+] = J+": (commutator(j0, jp), jp),
        "[J0,J-] = -J-": (commutator(j0, jm), -jm),
        "[J0,J0] = 0": (commutator(j0, j0), DiffOp()),
    }
    return all(a == b for a, b in witnesses.values()), witnesses


def quadratic_check(gamma):
    """[x + x^2 d, J-] = -2(gamma+1/2) D - 3 D^2 - gamma and [D, J+-] = +-J+-."""
    gamma = rational(gamma)
    jbar = _x + _x * _x * _d
    jm = ch_lowering_operator(gamma)
    rhs = _D * (-2 * (gamma + Fraction(1, 2))) - _D * _D * 3 - gamma
    witnesses = {
        "[Jbar+,J-]": (commutator(jbar, jm), rhs),
        "[D,Jbar+] = Jbar+": (commutator(_D, jbar), jbar),
        "[D,J-] = -J-": (commutator(_D, jm), -jm),
    }
    return all(a == b for a, b in witnesses.values()), witnesses


def hg_lowering(alpha, gamma) -> LadderRelation:
    """(1/(D+alpha))(x d^2 + gamma d) F(alpha,-n;gamma;x) = -n F(alpha,-n+1;gamma;x)."""
    alpha, gamma = rational(alpha), rational(gamma)
    op = hg_lowering_operator(alpha, gamma)
    return LadderRelation(
        "hg-lowering", lambda n: op, lambda n: _hg_poly(alpha, n, gamma),
        lambda n: _hg_poly(alpha, n - 1, gamma) if n > 0 else None,
        _in_n(0, -1), (-1, 0), FamilySpec(HG2F1, {"alpha": alpha, "gamma": gamma}))


def hg_lowering_monomial(alpha, gamma) -> LadderRelation:
    """Action on bare monomials: x^n -> n(gamma+n-1)/(alpha+n-1) x^(n-1)."""
    alpha, gamma = rational(alpha), rational(gamma)
    op = hg_lowering_operator(alpha, gamma)
    expected = EulerRational(EulerPoly((0, gamma - 1, 1)), EulerPoly((alpha - 1, 1)))
    return LadderRelation(
        "hg-lowering-monomial", lambda n: op, lambda n: LaurentPoly.monomial(n),
        lambda n: LaurentPoly.monomial(n - 1) if n > 0 else None, expected, (-1, 0))


def canonical_conjugate(t_tilde, gamma):
    """Canonical conjugate of J~- = T~(D) o (x d^2 + gamma d).

    Builds J~+ = x T(J0) with J0 = D + gamma/2, g(J0) = -J0(J0+1) and
    T(J0) = T~^{-1} (J0 + delta)/(C - g(J0)). The Casimir value C is read
    off from J- J+ on the monomials, and delta is fixed by requiring
    [J~-, J~+] 1 = 1. Returns (J~+, delta) with delta expressed as the
    constant added to D (so the hypergeometric case gives delta = 1).
    """
    gamma = rational(gamma)
    t_tilde = EulerRational.coerce(t_tilde)
    half = gamma / 2
    j_next = EulerPoly.linear(1) * EulerPoly.linear(gamma)  # J- x^(mu+1) = (mu+1)(mu+gamma) x^mu
    g_shift = -(EulerPoly.linear(half) * EulerPoly.linear(half + 1))  # g(J0) with J0 = D + gamma/2
    casimir = j_next + g_shift
    if casimir.degree > 0:
        raise InconsistentConjugate(f"C - g(J0) does not match J- J+ (C = {casimir})")
    c_minus_g = EulerRational(casimir) - EulerRational(g_shift)

    def build(shift_const):
        # shift_const = gamma/2 + delta, the constant in (J0 + delta) written in D
        return t_tilde.inverse() * EulerRational(EulerPoly.linear(shift_const)) / c_minus_g

    def lowest(shift_const):
        T = build(shift_const)
        try:
            return T(0) * t_tilde(0) * j_next(0)
        except (ResonanceError, ZeroDivisionError) as exc:
            raise InconsistentConjugate(f"lowest-monomial condition undefined: {exc}") from exc

    h0, h1 = lowest(Fraction(0)), lowest(Fraction(1))
    slope = h1 - h0
    if slope == 0:
        raise InconsistentConjugate("lowest-monomial condition does not depend on delta")
    delta_d = (1 - h0) / slope
    return GradedOp({1: build(delta_d)}), delta_d


def hg_canonical_conjugate(alpha, gamma):
    alpha = rational(alpha)
    return canonical_conjugate(EulerRational(1, EulerPoly.linear(alpha)), gamma)


def hg_raising_operator(alpha, gamma) -> GradedOp:
    """1 - ((J0+alpha-1)/(J0+gamma-1)) x, with J0 acting as D on the raised monomial."""
    alpha, gamma = rational(alpha), rational(gamma)
    r = EulerRational(EulerPoly.linear(alpha - 1), EulerPoly.linear(gamma - 1))
    return GradedOp.identity() - GradedOp.euler(r) * to_graded(_x)


def hg_raising_bar_operator(alpha, gamma) -> GradedOp:
    """1 - ((D+alpha-1)/((D+gamma-1)D)) (x + x^2 d)."""
    alpha, gamma = rational(alpha), rational(gamma)
    r = EulerRational(EulerPoly.linear(alpha - 1),
                      EulerPoly.linear(gamma - 1) * EulerPoly.D())
    return GradedOp.identity() - GradedOp.euler(r) * to_graded(_x + _x * _x * _d)


def hg_raising(alpha, gamma) -> LadderRelation:
    alpha, gamma = rational(alpha), rational(gamma)
    op = hg_raising_operator(alpha, gamma)
    return LadderRelation(
        "hg-raising", lambda n: op, lambda n: _hg_poly(alpha, n, gamma),
        lambda n: _hg_poly(alpha, n + 1, gamma), _in_n(1), (1, 0),
        FamilySpec(HG2F1, {"alpha": alpha, "gamma": gamma}))


def hg_raising_bar(alpha, gamma) -> LadderRelation:
    alpha, gamma = rational(alpha), rational(gamma)
    op = hg_raising_bar_operator(alpha, gamma)
    return LadderRelation(
        "hg-raising-bar", lambda n: op, lambda n: _hg_poly(alpha, n, gamma),
        lambda n: _hg_poly(alpha, n + 1, gamma), _in_n(1), (1, 0),
        FamilySpec(HG2F1, {"alpha": alpha, "gamma": gamma}))


def hg_raising_monomial(alpha, gamma) -> LadderRelation:
    """J~+ x^n = (alpha+n)/(gamma+n) x^(n+1)."""
    alpha, gamma = rational(alpha), rational(gamma)
    op, _ = hg_canonical_conjugate(alpha, gamma)
    expected = EulerRational(EulerPoly.linear(alpha), EulerPoly.linear(gamma))
    return LadderRelation(
        "hg-raising-monomial", lambda n: op, lambda n: LaurentPoly.monomial(n),
        lambda n: LaurentPoly.monomial(n + 1), expected, (1, 0))


def canonical_pair_holds(lowering, raising, kmax: int = 20) -> bool:
    """[lowering, raising] x^k == x^k for k = 0..kmax."""
    br = commutator(lowering, raising)
    return all(br(LaurentPoly.monomial(k)) == LaurentPoly.monomial(k) for k in range(kmax + 1))


def hermite_ladder():
    """(raising 2x - d, lowering d, [d/2, 2x - d] == 1)."""
    up = _x * 2 - _d
    down = _d
    raising = LadderRelation("hermite-raising", lambda n: up, hermite, lambda n: hermite(n + 1),
                             _in_n(1), (1, 0), FamilySpec(HERMITE))
    lowering = LadderRelation("hermite-lowering", lambda n: down, hermite,
                              lambda n: hermite(n - 1) if n > 0 else None,
                              _in_n(0, 2), (-1, 0), FamilySpec(HERMITE))
    a, a_dag = _d * Fraction(1, 2), up
    return raising, lowering, commutator(a, a_dag) == DiffOp.identity()


def laguerre_raising_operator(n, alpha) -> DiffOp:
    """x d + (alpha + 1) + n - x."""
    return _x * _d + (rational(alpha) + 1 + n) - _x


def laguerre_lowering_operator(n) -> DiffOp:
    """x d - n."""
    return _x * _d - n


def laguerre_ladder(alpha):
    alpha = rational(alpha)
    spec = FamilySpec(LAGUERRE, {"alpha": alpha})
    raising = LadderRelation(
        "laguerre-raising", lambda n: laguerre_raising_operator(n, alpha),
        lambda n: laguerre(n, alpha), lambda n: laguerre(n + 1, alpha),
        _in_n(1, 1), (1, 0), spec)
    lowering = LadderRelation(
        "laguerre-lowering", laguerre_lowering_operator,
        lambda n: laguerre(n, alpha), lambda n: laguerre(n - 1, alpha) if n > 0 else None,
        _in_n(-alpha, -1), (-1, 0), spec)
    return raising, lowering


def laguerre_product(n: int, alpha=0) -> LaurentPoly:
    """A(alpha+1) A(alpha+2) ... A(alpha+n) 1 with A(c) = x d + c - x.

    The rightmost factor acts first. The A(c) differ from one another by
    scalars, so the order does not matter; the result is n! L^alpha_n.
    """
    alpha = rational(alpha)
    p = LaurentPoly.constant(1)
    for k in range(n, 0, -1):
        p = (_x * _d + (alpha + k) - _x)(p)
    return p


def parameter_shift_laguerre(alpha) -> LadderRelation:
    """d L^alpha_n = -L^(alpha+1)_(n-1)."""
    alpha = rational(alpha)
    return LadderRelation(
        "laguerre-parameter-shift", lambda n: _d, lambda n: laguerre(n, alpha),
        lambda n: laguerre(n - 1, alpha + 1) if n > 0 else None,
        _in_n(-1), (-1, 1), FamilySpec(LAGUERRE, {"alpha": alpha}))


def parameter_shift_hg(alpha, beta, gamma, order: int = 10) -> LadderRelation:
    """d F(a,b;c;x) = (ab/c) F(a+1,b+1;c+1;x), indexed by a -> a+n, b -> b+n, c -> c+n.

    Members are truncated series; the comparison runs through x^order.
    """
    alpha, beta, gamma = rational(alpha), rational(beta), rational(gamma)

    def member(n):
        return hypergeometric_2f1(alpha + n, beta + n, gamma + n, order + 1)

    def target(n):
        return hypergeometric_2f1(alpha + n + 1, beta + n + 1, gamma + n + 1, order)

    expected = EulerRational(EulerPoly.linear(alpha) * EulerPoly.linear(beta),
                             EulerPoly.linear(gamma))
    return LadderRelation("hg-parameter-shift", lambda n: _d, member, target, expected, (0, 1),
                          FamilySpec(HG2F1, {"alpha": alpha, "beta": beta, "gamma": gamma}))


def conjugate_by_exp(A, B, max_terms: int = 64):
    """exp(-A) B exp(A) as the terminating series sum_j (-1)^j ad_A^j(B)/j!."""
    total = B
    term = B
    for j in range(1, max_terms + 1):
        term = commutator(A, term) * Fraction(-1, j)
        if term.is_zero():
            return total
        total = total + term
    raise ValueError(f"adjoint series did not terminate within {max_terms} terms")


def exp_on(A, p: LaurentPoly, sign: int = 1, max_terms: int = 256) -> LaurentPoly:
    """exp(sign*A) p for an operator that is nilpotent on p."""
    total = p
    term = p
    for m in range(1, max_terms + 1):
        term = A(term) * Fraction(sign, m)
        if term.is_zero():
            return total
        total = total + term
    raise ValueError("exponential did not terminate")
