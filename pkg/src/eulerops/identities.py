"""Rodriguez formulas and generating functions, each built by a route
independent of the family constructors so the two can be compared exactly."""

from fractions import Fraction
from math import factorial
from typing import NamedTuple

from .exact import LaurentPoly, TSeries, format_rational, tseries_exp, tseries_inv
from .families import chebyshev_u, hermite, laguerre
from .operators import DiffOp
from .solver import exp_apply

NO_WEIGHT = "none"
EXP_NEG_X = "exp(-x)"
EXP_NEG_X2 = "exp(-x^2)"

_x = DiffOp.x()
_d = DiffOp.d()


class WeightedPoly:
    """p(x) * w(x) with w a symbolic weight that is never expanded."""

    __slots__ = ("poly", "weight")

    def __init__(self, poly, weight=NO_WEIGHT):
        if weight not in (NO_WEIGHT, EXP_NEG_X, EXP_NEG_X2):
            raise ValueError(f"unknown weight {weight!r}")
        self.poly = poly if isinstance(poly, LaurentPoly) else LaurentPoly.constant(poly)
        self.weight = weight

    def derivative(self):
        p = self.poly
        if self.weight == EXP_NEG_X:
            return WeightedPoly(p.derivative() - p, self.weight)
        if self.weight == EXP_NEG_X2:
            return WeightedPoly(p.derivative() - LaurentPoly.x() * p * 2, self.weight)
        return WeightedPoly(p.derivative(), self.weight)

    def nth_derivative(self, n: int):
        w = self
        for _ in range(n):
            w = w.derivative()
        return w

    def __eq__(self, other):
        if not isinstance(other, WeightedPoly):
            return NotImplemented
        return self.weight == other.weight and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.weight))

    def __repr__(self):
        if self.weight == NO_WEIGHT:
            return f"WeightedPoly({self.poly})"
        return f"WeightedPoly(({self.poly})*{self.weight})"


def rodriguez_laguerre(n: int) -> LaurentPoly:
    """(1/n!) e^x d^n/dx^n (e^{-x} x^n)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    w = WeightedPoly(LaurentPoly.monomial(n), EXP_NEG_X).nth_derivative(n)
    return w.poly * Fraction(1, factorial(n))


def rodriguez_hermite(n: int) -> LaurentPoly:
    """(-1)^n e^{x^2} d^n/dx^n e^{-x^2}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    w = WeightedPoly(1, EXP_NEG_X2).nth_derivative(n)
    return w.poly * (-1) ** n


def expform_from_rodriguez(n: int) -> LaurentPoly:
    """Hermite polynomial as (-1)^n (d - 2x)^n 1, checked against the exponential form.

    Moving e^{x^2} through d^n turns the Rodriguez formula into powers of
    d - 2x acting on 1; the result must equal 2^n exp(-d^2/4) x^n.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    step = _d - _x * 2
    p = LaurentPoly.constant(1)
    for _ in range(n):
        p = step(p)
    p = p * (-1) ** n
    via_exp = exp_apply(_d * _d * Fraction(1, 4), n, None, -1).to_laurent() * 2 ** n
    if p != via_exp:
        raise ArithmeticError(f"Rodriguez and exponential forms disagree at n={n}")
    return p


def laguerre_from_rodriguez(n: int) -> LaurentPoly:
    """Laguerre polynomial as (1/n!) (d - 1)^n x^n, the weight moved through d^n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    step = _d - 1
    p = LaurentPoly.monomial(n)
    for _ in range(n):
        p = step(p)
    return p * Fraction(1, factorial(n))


class GFReport(NamedTuple):
    lhs: TSeries
    rhs: TSeries
    equal: bool

    def first_mismatch(self):
        return self.lhs.first_mismatch(self.rhs)

    def to_json(self):
        k = self.first_mismatch()
        doc = {"equal": self.equal, "order": self.lhs.order,
               "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json()}
        if k is not None:
            doc["first_mismatch"] = {"t_power": k, "lhs": str(self.lhs[k]), "rhs": str(self.rhs[k])}
        return doc


def _report(lhs, rhs):
    return GFReport(lhs, rhs, lhs == rhs)


def gf_laguerre(n_t: int) -> GFReport:
    """sum L_n t^n against exp(-x t/(1-t)) / (1-t)."""
    if n_t < 0:
        raise ValueError("N_t must be nonnegative")
    lhs = TSeries([laguerre(n, 0) for n in range(n_t + 1)], n_t)
    inv = tseries_inv(TSeries([1, -1], n_t))
    arg = TSeries.t(n_t) * inv * (-LaurentPoly.x())
    return _report(lhs, tseries_exp(arg) * inv)


def _exp_neg_xt(n_t: int) -> TSeries:
    return TSeries([LaurentPoly.monomial(n) * Fraction((-1) ** n, factorial(n))
                    for n in range(n_t + 1)], n_t)


def _act(op: DiffOp, s: TSeries) -> TSeries:
    return TSeries([op(c) for c in s], s.order)


def gf_laguerre_operator(n_t: int, n_x: int, max_m=None) -> TSeries:
    """exp(-B) e^{-xt} with B = x d^2 + d acting on x, truncated to t^n_t and x^n_x.

    ``max_m`` cuts the operator exponential after that many terms; by
    default the sum runs until (-B)^m e^{-xt} vanishes in the window.
    """
    if n_t < 0 or n_x < 0:
        raise ValueError("N_t and N_x must be nonnegative")
    B = _x * _d * _d + _d
    seed = _exp_neg_xt(n_t)
    total, term = seed, seed
    m = 0
    while max_m is None or m < max_m:
        m += 1
        term = _act(B, term) * Fraction(-1, m)
        if all(c.is_zero() for c in term):
            break
        total = total + term
    return TSeries([c.truncate(n_x) for c in total], n_t)


def gf_laguerre_window(n_t: int, n_x: int) -> GFReport:
    """Operator route against the closed form, both cut to the (n_t, n_x) window."""
    closed = gf_laguerre(n_t).rhs
    rhs = TSeries([c.truncate(n_x) for c in closed], n_t)
    return _report(gf_laguerre_operator(n_t, n_x), rhs)


def gf_chebyshev(n_t: int) -> GFReport:
    """sum U_n t^n against 1/(1 - 2 x t + t^2)."""
    if n_t < 0:
        raise ValueError("N_t must be nonnegative")
    lhs = TSeries([chebyshev_u(n) for n in range(n_t + 1)], n_t)
    rhs = tseries_inv(TSeries([1, LaurentPoly.x() * -2, 1], n_t))
    return _report(lhs, rhs)


def rodriguez_report(family: str, n: int) -> dict:
    """Equality report for the Rodriguez route against the family constructor."""
    if family == "laguerre":
        rf, ref = rodriguez_laguerre(n), laguerre(n, 0)
    elif family == "hermite":
        rf, ref = rodriguez_hermite(n), hermite(n)
    else:
        raise ValueError(f"no Rodriguez formula for family {family!r}")
    return {"family": family, "n": n, "equal": rf == ref,
            "rodriguez": rf.to_json(), "family_value": ref.to_json(),
            "leading": format_rational(rf.leading_coefficient()) if rf else "0"}
