"""Indicial roots, inverse-operator series and exponential-form solutions.

For an equation separated as [F(D) + P] y = 0 and a root F(lam) = 0 the
solution is built as v_0 = x^lam, v_{m+1} = -F(D)^{-1} (P v_m), summed.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import DegenerateIndicialError, MixedDegreeError, ResonanceError
from .exact import ASCENDING, DESCENDING, LaurentPoly, XSeries, format_rational, rational
from .operators import DiffOp, EulerPoly, GradedOp, apply_diffop, apply_graded, to_graded


@dataclass(frozen=True)
class IndicialResult:
    rational_roots: tuple  # ((root, multiplicity), ...) sorted by root
    unresolved_degree: int

    @property
    def roots(self):
        return [r for r, _ in self.rational_roots]

    @property
    def degenerate(self):
        return [(r, m) for r, m in self.rational_roots if m > 1]

    def to_json(self):
        doc = {"roots": [format_rational(r) for r, m in self.rational_roots for _ in range(m)]}
        if self.unresolved_degree:
            doc["unresolved_degree"] = self.unresolved_degree
        return doc


@dataclass(frozen=True)
class SolveReport:
    solution: XSeries
    mode: str
    terminated: bool
    iterations: int
    root: Fraction
    resonances: tuple = field(default=())

    def to_json(self):
        return {
            "solution": self.solution.to_json(),
            "mode": self.mode,
            "terminated": self.terminated,
            "iterations": self.iterations,
            "resonances": [format_rational(r) for r in self.resonances],
        }


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _primitive_integer_coeffs(p: EulerPoly):
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints]


def indicial_roots(F: EulerPoly) -> IndicialResult:
    """All rational roots of F with multiplicities, by rational-root search and deflation."""
    if F.is_zero():
        raise ValueError("indicial polynomial is identically zero")
    found = {}
    p = F
    zero_mult = 0
    while p.coeffs[0] == 0:
        p = EulerPoly(p.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        found[Fraction(0)] = zero_mult
    while p.degree > 0:
        ints = _primitive_integer_coeffs(p)
        root = None
        for q in _divisors(ints[-1]):
            for r in _divisors(ints[0]):
                for cand in (Fraction(r, q), Fraction(-r, q)):
                    if p(cand) == 0:
                        root = cand
                        break
                if root is not None:
                    break
            if root is not None:
                break
        if root is None:
            break
        mult = 0
        while p.degree > 0 and p(root) == 0:
            p = p.divmod(EulerPoly.linear(-root))[0]
            mult += 1
        found[root] = found.get(root, 0) + mult
    return IndicialResult(tuple(sorted(found.items())), p.degree)


def _shift_direction(P: GradedOp):
    shifts = P.shifts()
    if any(s == 0 for s in shifts):
        raise MixedDegreeError("P must not contain degree-0 terms")
    if shifts and shifts[0] < 0 < shifts[-1]:
        raise MixedDegreeError(f"P mixes raising and lowering shifts {shifts}")
    return DESCENDING if shifts and shifts[0] < 0 else ASCENDING


def solve_series(F: EulerPoly, P: GradedOp, lam, order: int) -> SolveReport:
    """Sum_m (-1)^m [F(D)^{-1} P]^m x^lam through |exponent - lam| <= order."""
    lam = rational(lam)
    if order < 0:
        raise ValueError("order must be nonnegative")
    if F(lam) != 0:
        raise ValueError(f"{format_rational(lam)} is not a root of F = {F}")
    if isinstance(P, DiffOp):
        P = to_graded(P)
    mode = _shift_direction(P)
    sign = 1 if mode == ASCENDING else -1

    total = {0: Fraction(1)}
    current = {0: Fraction(1)}
    benign = []
    iterations = 0
    terminated = False
    while True:
        incoming = {}
        overflow = False
        for k, c in current.items():
            mu = lam + sign * k
            for s, r in P.act(mu):
                if not r:
                    continue
                kk = k + sign * s
                if kk > order:
                    overflow = True
                    continue
                incoming[kk] = incoming.get(kk, 0) + c * r
        nxt = {}
        for kk, val in sorted(incoming.items()):
            mu = lam + sign * kk
            f = F(mu)
            if f == 0:
                if val:
                    raise ResonanceError(mu, "F vanishes at a reached exponent (logarithmic case)")
                benign.append(mu)
                continue
            if val:
                nxt[kk] = -val / f
        if not nxt:
            terminated = not overflow
            break
        iterations += 1
        for kk, val in nxt.items():
            total[kk] = total.get(kk, 0) + val
        current = nxt
    sol = XSeries(lam, total, mode, None if terminated else order)
    return SolveReport(sol, mode, terminated, iterations, lam, tuple(benign))


def exp_apply(A, lam, order=None, sign: int = -1) -> XSeries:
    """Sum_m (sign*A)^m / m! applied to x^lam for a lowering operator A.

    ``order`` bounds the depth (in exponent steps below lam); when omitted
    lam must be a nonnegative integer and the window runs down to x^0.
    """
    lam = rational(lam)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(A, DiffOp):
        A = to_graded(A)
    shifts = A.shifts()
    if any(s >= 0 for s in shifts):
        raise MixedDegreeError("exp_apply needs a strictly lowering operator")
    if order is None:
        if lam.denominator != 1 or lam < 0:
            raise ValueError("order is required unless lam is a nonnegative integer")
        order = int(lam)
    total = {0: Fraction(1)}
    current = {0: Fraction(1)}
    m = 0
    terminated = False
    while True:
        m += 1
        nxt = {}
        overflow = False
        for k, c in current.items():
            mu = lam - k
            for s, r in A.act(mu):
                if not r:
                    continue
                kk = k - s
                if kk > order:
                    overflow = True
                    continue
                nxt[kk] = nxt.get(kk, 0) + c * r * Fraction(sign, m)
        nxt = {k: v for k, v in nxt.items() if v}
        if not nxt:
            terminated = not overflow
            break
        for kk, v in nxt.items():
            total[kk] = total.get(kk, 0) + v
        current = nxt
    return XSeries(lam, total, DESCENDING, None if terminated else order)


def check_residual(L, y: XSeries, order=None) -> XSeries:
    """L y with the exactly-known window; L may be a DiffOp, GradedOp or an (F, P) pair."""
    if isinstance(L, tuple):
        F, P = L
        if isinstance(P, DiffOp):
            P = to_graded(P)
        return apply_graded(GradedOp.euler(F) + P, y, order)
    if isinstance(L, DiffOp):
        return apply_diffop(L, y, order)
    if isinstance(L, GradedOp):
        return apply_graded(L, y, order)
    raise TypeError(f"unsupported operator type {type(L).__name__}")


def normal_separation(L, mode=ASCENDING):
    """Separate L after left-multiplying by the power of x that makes one edge degree 0.

    Ascending mode promotes the lowest-degree component to F; descending
    mode the highest.
    """
    g = to_graded(L) if isinstance(L, DiffOp) else L
    shifts = g.shifts()
    if not shifts:
        raise ValueError("zero operator")
    s0 = shifts[0] if mode == ASCENDING else shifts[-1]
    f = g.term(s0)
    if not f.is_polynomial():
        raise ValueError("edge component is not polynomial in D")
    P = GradedOp({s - s0: r for s, r in g.items() if s != s0})
    return f.num, P


def solve_operator(L, order: int, mode=ASCENDING, root=None):
    """Solve L y = 0 for every simple rational indicial root (or the given root)."""
    F, P = normal_separation(L, mode)
    if root is not None:
        return [solve_series(F, P, root, order)]
    ind = indicial_roots(F)
    if ind.degenerate:
        raise DegenerateIndicialError(ind.degenerate)
    return [solve_series(F, P, r, order) for r in ind.roots]


def proportionality(a, b):
    """The rational c with a == c*b, or None. Works on LaurentPolys and on XSeries windows."""
    if isinstance(a, XSeries) or isinstance(b, XSeries):
        ta, tb = _known_terms(a), _known_terms(b)
        bound = _common_bound(a, b)
        ta = {e: v for e, v in ta.items() if _inside(e, bound, a)}
        tb = {e: v for e, v in tb.items() if _inside(e, bound, a)}
    else:
        ta, tb = a.coefficients(), b.coefficients()
    if not ta and not tb:
        return Fraction(1)
    if not ta or not tb or set(ta) != set(tb):
        return None
    e0 = next(iter(tb))
    c = ta[e0] / tb[e0]
    if all(ta[e] == c * tb[e] for e in tb):
        return c
    return None


def _known_terms(s):
    return s.terms() if isinstance(s, XSeries) else {Fraction(k): v for k, v in s.items()}


def _common_bound(a, b):
    bounds = [s.bound for s in (a, b) if isinstance(s, XSeries) and s.bound is not None]
    if not bounds:
        return None
    desc = any(isinstance(s, XSeries) and s.direction == DESCENDING for s in (a, b))
    return max(bounds) if desc else min(bounds)


def _inside(e, bound, ref):
    if bound is None:
        return True
    desc = isinstance(ref, XSeries) and ref.direction == DESCENDING
    return e >= bound if desc else e <= bound
