"""Builders for the classical hypergeometric-type families.

Each family is described by a :class:`FamilySpec` that produces its
differential operator and the (F, P) separation. Builders return
:class:`~eulerops.exact.XSeries` for series families and
:class:`~eulerops.exact.LaurentPoly` for the orthogonal polynomials.

Normalisation conventions: constant term 1 for 1F1, 2F1 and pFq;
leading coefficient (-1)^n/n! for Laguerre; 2^n for Hermite and
Chebyshev U.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .errors import ResonanceError, ShapeError
from .exact import LaurentPoly, XSeries, pochhammer, rational
from .operators import DiffOp, EulerPoly, EulerRational, GradedOp, separate, to_graded
from .solver import exp_apply, solve_series

HG2F1 = "HG2F1"
CHG = "CHG"
PFQ = "PFQ"
LAGUERRE = "LAGUERRE"
HERMITE = "HERMITE"
CHEBYSHEV_U = "CHEBYSHEV_U"
PERIODIC_COS = "PERIODIC_COS"
FAMILIES = (HG2F1, CHG, PFQ, LAGUERRE, HERMITE, CHEBYSHEV_U, PERIODIC_COS)

# F carries the D factor (roots 0, 1-b, ...): series ascend from the seed.
EULER_SEEDED = "euler-seeded"
# P is led by d/dx: series descend from the seed.
DERIVATIVE_SEEDED = "derivative-seeded"

_x = DiffOp.x()
_d = DiffOp.d()
_D = DiffOp.euler()


def _shifted(c):
    """The operator D + c."""
    return _D + rational(c)


def _prod(ops):
    out = DiffOp.identity()
    for op in ops:
        out = out * op
    return out


def ch_lowering_operator(gamma) -> DiffOp:
    """x d^2 + gamma d."""
    return _x * _d * _d + _d * rational(gamma)


def hg_lowering_operator(alpha, gamma) -> GradedOp:
    """(1/(D + alpha)) (x d^2 + gamma d)."""
    inv = EulerRational(1, EulerPoly.linear(rational(alpha)))
    return GradedOp.euler(inv) * to_graded(ch_lowering_operator(gamma))


def chebyshev_lowering_operator(n) -> GradedOp:
    """(1/(2(D + n + 2))) d^2."""
    inv = EulerRational(1, EulerPoly.linear(rational(n) + 2) * 2)
    return GradedOp.euler(inv) * to_graded(_d * _d)


def cos_polynomial(max_degree: int) -> LaurentPoly:
    return LaurentPoly({2 * k: Fraction((-1) ** k, factorial(2 * k))
                        for k in range(max_degree // 2 + 1)})


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)
    variant: str = EULER_SEEDED

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.variant not in (EULER_SEEDED, DERIVATIVE_SEEDED):
            raise ValueError(f"unknown separation variant {self.variant!r}")

    def _p(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise ValueError(f"{self.family} needs parameter {name!r}") from None

    def operator(self) -> DiffOp:
        f, v = self.family, self.variant
        if f == HG2F1:
            a, b, g = (rational(self._p(k)) for k in ("alpha", "beta", "gamma"))
            if v == EULER_SEEDED:
                return _D * _shifted(g - 1) - _x * _shifted(a) * _shifted(b)
            return _shifted(a) * _shifted(b) - ch_lowering_operator(g)
        if f == CHG:
            a, g = rational(self._p("alpha")), rational(self._p("gamma"))
            if v == EULER_SEEDED:
                return _D * _shifted(g - 1) - _x * _shifted(a)
            return ch_lowering_operator(g) - _shifted(a)
        if f == PFQ:
            num = [rational(a) for a in self._p("num")]
            den = [rational(b) for b in self._p("den")]
            if len(num) != len(den) + 1:
                raise ShapeError(f"need len(num) == len(den) + 1, got {len(num)} and {len(den)}")
            bottom = _prod(_shifted(b - 1) for b in den)
            top = _prod(_shifted(a) for a in num)
            if v == EULER_SEEDED:
                return _D * bottom - _x * top
            return top - _d * bottom
        if f == LAGUERRE:
            n, a = rational(self._p("n")), rational(self._p("alpha"))
            return _x * _d * _d + _d * (a + 1) - _x * _d + n
        if f == HERMITE:
            n = rational(self._p("n"))
            return _d * _d - _x * _d * 2 + 2 * n
        if f == CHEBYSHEV_U:
            n = rational(self._p("n"))
            return _d * _d - _x * _x * _d * _d - _x * _d * 3 + n * (n + 2)
        a = rational(self._p("a"))
        cos_part = cos_polynomial(int(self._p("order")))
        pot = DiffOp({(k + 2, 0): c * a for k, c in cos_part.items()})
        return _D * _shifted(-1) + pot

    def separation(self):
        return separate(self.operator())

    def roots(self):
        """Seed exponents in the order used by the builders' root_choice."""
        f, v = self.family, self.variant
        p = {k: (rational(x) if not isinstance(x, (list, tuple)) else [rational(y) for y in x])
             for k, x in self.params.items()}
        if f == HG2F1:
            return [Fraction(0), 1 - p["gamma"]] if v == EULER_SEEDED else [-p["alpha"], -p["beta"]]
        if f == CHG:
            return [Fraction(0), 1 - p["gamma"]] if v == EULER_SEEDED else [-p["alpha"]]
        if f == PFQ:
            if v == EULER_SEEDED:
                return [Fraction(0)] + [1 - b for b in p["den"]]
            return [-a for a in p["num"]]
        if f in (LAGUERRE, HERMITE):
            return [p["n"]]
        if f == CHEBYSHEV_U:
            return [p["n"], -p["n"] - 2]
        return [Fraction(0), Fraction(1)]


def _root_index(root_choice):
    if root_choice in ("first", 0):
        return 0
    if root_choice in ("second", 1):
        return 1
    if isinstance(root_choice, int) and root_choice >= 0:
        return root_choice
    raise ValueError(f"bad root choice {root_choice!r}")


def _solve_family(spec: FamilySpec, root_choice, order):
    roots = spec.roots()
    idx = _root_index(root_choice)
    if idx >= len(roots):
        raise ValueError(f"{spec.family} has only {len(roots)} seed roots")
    F, P = spec.separation()
    return solve_series(F, P, roots[idx], order)


def hypergeometric_2f1(alpha, beta, gamma, order: int, root_choice="first") -> XSeries:
    """2F1 from the x-multiplied equation: F = D(D+gamma-1), P = -x(D+alpha)(D+beta)."""
    spec = FamilySpec(HG2F1, {"alpha": alpha, "beta": beta, "gamma": gamma}, EULER_SEEDED)
    return _solve_family(spec, root_choice, order).solution


def hypergeometric_descending(alpha, beta, gamma, order: int, root_choice="second") -> XSeries:
    """Descending HG branch seeded at x^-alpha (first) or x^-beta (second), unnormalised."""
    spec = FamilySpec(HG2F1, {"alpha": alpha, "beta": beta, "gamma": gamma}, DERIVATIVE_SEEDED)
    return _solve_family(spec, root_choice, order).solution


def hypergeometric_exp_form(alpha, n: int, gamma, order=None) -> XSeries:
    """F(alpha, -n; gamma; x) = (-1)^n (alpha)_n/(gamma)_n exp(-J) x^n, J = (D+alpha)^-1 (x d^2 + gamma d)."""
    alpha, gamma = rational(alpha), rational(gamma)
    den = pochhammer(gamma, n)
    if den == 0:
        raise ResonanceError(1 - n, "gamma is a nonpositive integer within the polynomial degree")
    scale = (-1) ** n * pochhammer(alpha, n) / den
    return exp_apply(hg_lowering_operator(alpha, gamma), n, order, -1) * scale


def confluent_1f1(alpha, gamma, order: int, root_choice="first") -> XSeries:
    """1F1 from F = D(D+gamma-1), P = -x(D+alpha)."""
    spec = FamilySpec(CHG, {"alpha": alpha, "gamma": gamma}, EULER_SEEDED)
    return _solve_family(spec, root_choice, order).solution


def confluent_exp_form(n: int, gamma, order=None) -> XSeries:
    """Phi(-n; gamma; x) = (-1)^n/(gamma)_n exp(-(x d^2 + gamma d)) x^n."""
    gamma = rational(gamma)
    den = pochhammer(gamma, n)
    if den == 0:
        raise ResonanceError(1 - n, "gamma is a nonpositive integer within the polynomial degree")
    return exp_apply(ch_lowering_operator(gamma), n, order, -1) * (Fraction((-1) ** n) / den)


def _check_pfq_shape(num, den):
    if len(num) != len(den) + 1:
        raise ShapeError(f"need len(num) == len(den) + 1, got {len(num)} and {len(den)}")


def pfq(num_params, den_params, order: int, root_choice=0) -> XSeries:
    """Ascending p+1Fp branch; root_choice 0 seeds x^0, j >= 1 seeds x^(1-b_j)."""
    _check_pfq_shape(num_params, den_params)
    spec = FamilySpec(PFQ, {"num": tuple(num_params), "den": tuple(den_params)}, EULER_SEEDED)
    return _solve_family(spec, root_choice, order).solution


def pfq_descending(num_params, den_params, order: int, root_choice=0) -> XSeries:
    """Descending branch seeded at x^(-a_i), i = root_choice."""
    _check_pfq_shape(num_params, den_params)
    spec = FamilySpec(PFQ, {"num": tuple(num_params), "den": tuple(den_params)}, DERIVATIVE_SEEDED)
    return _solve_family(spec, root_choice, order).solution


def pochhammer_series(num_params, den_params, order: int) -> XSeries:
    """Reference coefficients prod (a_i)_n / (prod (b_j)_n n!) for n <= order."""
    coeffs = {}
    for n in range(order + 1):
        top = Fraction(1)
        for a in num_params:
            top *= pochhammer(rational(a), n)
        bot = Fraction(factorial(n))
        for b in den_params:
            bot *= pochhammer(rational(b), n)
        coeffs[n] = top / bot
    terminated = any(v == 0 for v in coeffs.values())
    return XSeries(0, coeffs, truncation=None if terminated else order)


def laguerre(n: int, alpha=0) -> LaurentPoly:
    alpha = rational(alpha)
    op = ch_lowering_operator(alpha + 1)
    return exp_apply(op, n, None, -1).to_laurent() * Fraction((-1) ** n, factorial(n))


def hermite(n: int) -> LaurentPoly:
    return exp_apply(_d * _d * Fraction(1, 4), n, None, -1).to_laurent() * 2 ** n


def chebyshev_u(n: int) -> LaurentPoly:
    return exp_apply(chebyshev_lowering_operator(n), n, None, -1).to_laurent() * 2 ** n


def _periodic_parts(a, order):
    spec = FamilySpec(PERIODIC_COS, {"a": a, "order": order})
    return spec.separation()


def periodic_cos(a, lam, order: int) -> XSeries:
    """Series solution of y'' + a cos(x) y = 0 seeded at x^lam, lam in {0, 1}."""
    lam = rational(lam)
    if lam not in (0, 1):
        raise ValueError("lam must be 0 or 1")
    F, P = _periodic_parts(a, order)
    return solve_series(F, P, lam, order).solution


def periodic_cos_operator(a, order: int) -> DiffOp:
    """d^2 + a cos(x) with cos truncated to degree ``order``."""
    a = rational(a)
    return _d * _d + DiffOp({(k, 0): c * a for k, c in cos_polynomial(order).items()})


def _compositions(total_max, parts):
    """All tuples of ``parts`` nonnegative ints with sum <= total_max."""
    if parts == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _compositions(total_max - first, parts - 1):
            yield (first,) + rest


def periodic_cos_direct(a, lam, order: int, m_factorial=False) -> XSeries:
    """Closed multi-index sum for the periodic equation.

    y = sum_{m, n_1..n_m >= 0} (-a)^m prod_i (-1)^{n_i}/(2 n_i)!
        prod_{r=1}^m (2[m + lam/2 - r + S_{m+1-r}])! / (2[m + lam/2 + 1 - r + S_{m+1-r}])!
        x^(2(m + S_m + lam/2)),   S_k = n_1 + ... + n_k,

    with the n_i ordered (n_i is the cos term picked at the i-th
    application). Setting ``m_factorial`` adds a 1/m! weight to each m;
    that variant does not solve the equation (first wrong at x^(lam+4)) and is
    kept only so the discrepancy can be reported.
    """
    a, lam = rational(a), rational(lam)
    if lam not in (0, 1):
        raise ValueError("lam must be 0 or 1")
    lam2 = int(lam)  # 2 * (lam/2)
    coeffs = {}
    for m in range(order // 2 + 1):
        for ns in _compositions(order // 2 - m, m):
            coef = (-a) ** m
            if m_factorial:
                coef /= factorial(m)
            for ni in ns:
                coef *= Fraction((-1) ** ni, factorial(2 * ni))
            for r in range(1, m + 1):
                s = sum(ns[: m + 1 - r])
                top = 2 * m + lam2 - 2 * r + 2 * s
                coef *= Fraction(factorial(top), factorial(top + 2))
            k = 2 * (m + sum(ns))
            coeffs[k] = coeffs.get(k, 0) + coef
    trunc = None if a == 0 else order
    return XSeries(lam, coeffs, truncation=trunc)


def periodic_cos_discrepancy(a, lam, order: int):
    """Compare the 1/m!-weighted closed form with the solver.

    Returns None when they agree through ``order``, else
    (exponent, closed_form_value, solver_value) at the first mismatch.
    """
    ref = periodic_cos(a, lam, order)
    alt = periodic_cos_direct(a, lam, order, m_factorial=True)
    for k in range(order + 1):
        e = rational(lam) + k
        u, v = alt.coefficient(e), ref.coefficient(e)
        if u != v:
            return e, u, v
    return None


def oracle_recurrence(family: str, n: int, **params) -> LaurentPoly:
    """Three-term recurrence evaluation, independent of the operator route."""
    x = LaurentPoly.x()
    one = LaurentPoly.constant(1)
    if family == LAGUERRE:
        a = rational(params.get("alpha", 0))
        prev, cur = one, one * (1 + a) - x
        if n == 0:
            return prev
        for k in range(1, n):
            nxt = (cur * (2 * k + 1 + a) - x * cur - prev * (k + a)) / (k + 1)
            prev, cur = cur, nxt
        return cur
    if family in (HERMITE, CHEBYSHEV_U):
        prev, cur = one, x * 2
        if n == 0:
            return prev
        for k in range(1, n):
            back = 2 * k if family == HERMITE else 1
            prev, cur = cur, x * cur * 2 - prev * back
        return cur
    raise ValueError(f"no recurrence oracle for {family!r}")
