"""Differential operators in one variable and their Euler-graded form.

Two representations are used:

* :class:`DiffOp` -- finite sums of c * x^a * (d/dx)^b, closed under
  composition and commutators.
* :class:`GradedOp` -- finite sums of terms (R, s) acting as
  x^mu -> R(mu) x^(mu + s), with R a rational function of the Euler
  operator D = x d/dx. R is always evaluated at the *source* exponent.

Polynomials and rational functions in D are :class:`EulerPoly` and
:class:`EulerRational`.
"""

from fractions import Fraction
from math import comb

from .errors import ResonanceError
from .exact import (ASCENDING, LaurentPoly, XSeries, falling_factorial,
                    format_rational, rational)


def _is_scalar(v):
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


class EulerPoly:
    """Polynomial in D with rational coefficients (ascending powers)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def D(cls):
        return cls((0, 1))

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def linear(cls, c):
        """D + c."""
        return cls((c, 1))

    @classmethod
    def from_roots(cls, roots):
        out = cls((1,))
        for r in roots:
            out = out * cls.linear(-rational(r))
        return out

    @classmethod
    def falling(cls, b: int):
        """D(D-1)...(D-b+1), the symbol of x^b d^b."""
        return cls.from_roots(range(b))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, mu) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * mu + c
        return acc

    def _coerce(self, other):
        if isinstance(other, EulerPoly):
            return other
        if _is_scalar(other):
            return EulerPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return EulerPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return EulerPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return EulerPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return EulerPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = EulerPoly((1,))
        for _ in range(n):
            out = out * self
        return out

    def shift(self, c):
        """The polynomial p(D + c)."""
        lin = EulerPoly.linear(c)
        out = EulerPoly()
        for coef in reversed(self.coeffs):
            out = out * lin + coef
        return out

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading()
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + len(other.coeffs) - 1] / lead
            q[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return EulerPoly(q), EulerPoly(rem[: len(other.coeffs) - 1])

    def monic(self):
        if self.is_zero():
            return self
        return self * (1 / self.leading())

    @staticmethod
    def gcd(a, b):
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def to_diffop(self):
        out = DiffOp()
        power = DiffOp.identity()
        euler = DiffOp.euler()
        for c in self.coeffs:
            if c:
                out = out + power * c
            power = power * euler
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"EulerPoly({self})"

    def __str__(self):
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                parts.append(format_rational(c))
                continue
            mono = "D" if k == 1 else f"D^{k}"
            parts.append(mono if c == 1 else "-" + mono if c == -1 else f"{format_rational(c)}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self):
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, doc):
        return cls(rational(c) for c in doc)


class EulerRational:
    """N(D)/Q(D) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, EulerPoly) else EulerPoly.constant(num)
        den = EulerPoly((1,)) if den is None else den
        den = den if isinstance(den, EulerPoly) else EulerPoly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = EulerPoly((1,))
        elif den.degree > 0:
            g = EulerPoly.gcd(num, den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
        lead = den.leading()
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, EulerRational):
            return value
        if isinstance(value, EulerPoly) or _is_scalar(value):
            return cls(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to EulerRational")

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree == 0

    def singular_at(self, mu) -> bool:
        return self.den(mu) == 0

    def __call__(self, mu) -> Fraction:
        q = self.den(mu)
        if q == 0:
            raise ResonanceError(mu, f"denominator {self.den} vanishes")
        return self.num(mu) / q

    def shift(self, c):
        return EulerRational(self.num.shift(c), self.den.shift(c))

    def __add__(self, other):
        other = EulerRational.coerce(other)
        if self.den == other.den:
            return EulerRational(self.num + other.num, self.den)
        return EulerRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return EulerRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-EulerRational.coerce(other))

    def __rsub__(self, other):
        return EulerRational.coerce(other) - self

    def __mul__(self, other):
        other = EulerRational.coerce(other)
        return EulerRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return EulerRational(self.den, self.num)

    def __truediv__(self, other):
        return self * EulerRational.coerce(other).inverse()

    def __eq__(self, other):
        try:
            other = EulerRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"EulerRational({self})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


class DiffOp:
    """Canonical sum of c * x^a * d^b keyed by (a, b)."""

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        t = {}
        for (a, b), c in dict(terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError("x-powers and derivative orders must be nonnegative")
            c = rational(c)
            if c:
                t[(int(a), int(b))] = c
        self._t = t

    @classmethod
    def identity(cls):
        return cls({(0, 0): 1})

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def x(cls, power=1):
        return cls({(power, 0): 1})

    @classmethod
    def d(cls, order=1):
        return cls({(0, order): 1})

    @classmethod
    def euler(cls):
        return cls({(1, 1): 1})

    @classmethod
    def term(cls, coeff, a, b):
        return cls({(a, b): coeff})

    def items(self):
        return sorted(self._t.items(), key=lambda kv: (-kv[0][1], -kv[0][0]))

    def is_zero(self):
        return not self._t

    def degrees(self):
        return sorted({a - b for a, b in self._t})

    def homogeneous_degree(self):
        """The common degree a - b of all terms, or None when mixed/empty."""
        degs = self.degrees()
        return degs[0] if len(degs) == 1 else None

    def __add__(self, other):
        if _is_scalar(other):
            other = DiffOp.const(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        out = dict(self._t)
        for k, v in other._t.items():
            out[k] = out.get(k, 0) + v
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        if _is_scalar(other):
            other = DiffOp.const(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Composition: (self * other) f = self(other(f))."""
        if _is_scalar(other):
            return DiffOp({k: v * other for k, v in self._t.items()})
        if isinstance(other, GradedOp):
            return to_graded(self) * other
        if not isinstance(other, DiffOp):
            return NotImplemented
        out = {}
        for (a, b), c1 in self._t.items():
            for (c, e), c2 in other._t.items():
                # d^b x^c = sum_j C(b,j) c(c-1)..(c-j+1) x^(c-j) d^(b-j)
                for j in range(min(b, c) + 1):
                    coef = c1 * c2 * comb(b, j) * falling_factorial(c, j)
                    key = (a + c - j, b + e - j)
                    out[key] = out.get(key, 0) + coef
        return DiffOp(out)

    def __rmul__(self, other):
        if _is_scalar(other):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = DiffOp.identity()
        for _ in range(n):
            out = out * self
        return out

    def act(self, mu):
        """Image of x^mu as a list of (shift, coefficient)."""
        return [(a - b, c * falling_factorial(mu, b)) for (a, b), c in self._t.items()]

    def __call__(self, p):
        if isinstance(p, LaurentPoly):
            out = {}
            for e, v in p.items():
                for s, r in self.act(e):
                    if r:
                        out[e + s] = out.get(e + s, 0) + v * r
            return LaurentPoly(out)
        if isinstance(p, XSeries):
            return apply_diffop(self, p)
        raise TypeError(f"cannot apply DiffOp to {type(p).__name__}")

    def __eq__(self, other):
        if _is_scalar(other):
            other = DiffOp.const(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __repr__(self):
        return f"DiffOp({self})"

    def __str__(self):
        parts = []
        for (a, b), c in self.items():
            factors = []
            if a:
                factors.append("x" if a == 1 else f"x^{a}")
            if b:
                factors.append("d" if b == 1 else f"d^{b}")
            if not factors:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([format_rational(c)] + factors))
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json(self):
        return [{"coeff": format_rational(c), "x_power": a, "d_order": b}
                for (a, b), c in self.items()]

    @classmethod
    def from_json(cls, doc):
        return cls({(t["x_power"], t["d_order"]): rational(t["coeff"]) for t in doc})


class GradedOp:
    """Sum of graded terms (R, s): x^mu -> R(mu) x^(mu+s), R at the source exponent.

    Each shift keeps the reduced rational R used for equality, printing and
    conversion, plus the factor chains it came from. The action evaluates
    the chains factor by factor, so a right factor that annihilates x^mu
    wins over a pole of a left factor that the reduced R would cancel
    (d^2 then 1/D on x^0 gives 0, not the limit).
    """

    __slots__ = ("_t", "_c")

    def __init__(self, terms=None):
        items = terms.items() if isinstance(terms, dict) else (terms or [])
        chains = {}
        for s, r in items:
            s = int(s)
            chains.setdefault(s, []).append(((s, EulerRational.coerce(r)),))
        self._set(chains)

    @classmethod
    def _from_chains(cls, chains):
        op = cls.__new__(cls)
        op._set(chains)
        return op

    def _set(self, chains):
        t, c = {}, {}
        for s, group in chains.items():
            single = None
            multi = []
            for chain in group:
                chain = _collapse(chain)
                if len(chain) == 1:
                    r = chain[0][1]
                    single = r if single is None else single + r
                else:
                    multi.append(chain)
            total = EulerRational(0) if single is None else single
            for chain in multi:
                total = total + _chain_product(chain)
            kept = multi
            if single is not None and not single.is_zero():
                kept = [((s, single),)] + multi
            if kept and (not total.is_zero() or multi):
                c[s] = tuple(kept)
            if not total.is_zero():
                t[s] = total
        self._t = t
        self._c = c

    @classmethod
    def identity(cls):
        return cls({0: 1})

    @classmethod
    def euler(cls, r):
        """The diagonal operator R(D)."""
        return cls({0: EulerRational.coerce(r)})

    @classmethod
    def shift_op(cls, s: int, r=1):
        return cls({s: EulerRational.coerce(r)})

    def items(self):
        return sorted(self._t.items())

    def term(self, s):
        return self._t.get(s)

    def shifts(self):
        return sorted(self._c)

    def is_zero(self):
        return not self._c

    def act(self, mu):
        return [(s, sum((_chain_eval(ch, mu) for ch in group), Fraction(0)))
                for s, group in self._c.items()]

    def _scaled(self, k):
        k = rational(k)
        if k == 0:
            return GradedOp()
        return GradedOp._from_chains({
            s: [((ch[0][0], ch[0][1] * k),) + ch[1:] for ch in group]
            for s, group in self._c.items()})

    def __add__(self, other):
        if _is_scalar(other):
            other = GradedOp.euler(other)
        elif isinstance(other, DiffOp):
            other = to_graded(other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        chains = {s: list(g) for s, g in self._c.items()}
        for s, g in other._c.items():
            chains.setdefault(s, []).extend(g)
        return GradedOp._from_chains(chains)

    __radd__ = __add__

    def __neg__(self):
        return self._scaled(-1)

    def __sub__(self, other):
        if _is_scalar(other):
            other = GradedOp.euler(other)
        elif isinstance(other, DiffOp):
            other = to_graded(other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Composition self o other."""
        if _is_scalar(other):
            return self._scaled(other)
        if isinstance(other, DiffOp):
            other = to_graded(other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        chains = {}
        for s1, g1 in self._c.items():
            for s2, g2 in other._c.items():
                for c1 in g1:
                    for c2 in g2:
                        chains.setdefault(s1 + s2, []).append(c2 + c1)
        return GradedOp._from_chains(chains)

    def __rmul__(self, other):
        if _is_scalar(other):
            return self * other
        if isinstance(other, DiffOp):
            return to_graded(other) * self
        return NotImplemented

    def __pow__(self, n: int):
        out = GradedOp.identity()
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, p):
        if isinstance(p, LaurentPoly):
            out = {}
            for e, v in p.items():
                for s, r in self.act(e):
                    if r:
                        out[e + s] = out.get(e + s, 0) + v * r
            return LaurentPoly(out)
        if isinstance(p, XSeries):
            return apply_graded(self, p)
        raise TypeError(f"cannot apply GradedOp to {type(p).__name__}")

    def to_diffop(self):
        """Convert back to a DiffOp when every term is polynomially representable."""
        out = DiffOp()
        for s, r in self._t.items():
            if not r.is_polynomial():
                raise ValueError(f"term with shift {s} is not polynomial in D")
            poly = r.num
            if s >= 0:
                out = out + DiffOp.x(s) * poly.to_diffop()
            else:
                q, rem = poly.divmod(EulerPoly.falling(-s))
                if not rem.is_zero():
                    raise ValueError(f"term with shift {s} is not a derivative-led operator")
                out = out + DiffOp.d(-s) * q.to_diffop()
        return out

    def __eq__(self, other):
        if isinstance(other, DiffOp):
            other = to_graded(other)
        if not isinstance(other, GradedOp):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __repr__(self):
        return f"GradedOp({self})"

    def __str__(self):
        if not self._t:
            return "0"
        return " + ".join(f"[{r}]S^{s}" if s else f"[{r}]" for s, r in self.items())

    def to_json(self):
        return [{"num": r.num.to_json(), "den": r.den.to_json(), "shift": s}
                for s, r in self.items()]

    @classmethod
    def from_json(cls, doc):
        return cls([(t["shift"], EulerRational(EulerPoly.from_json(t["num"]),
                                               EulerPoly.from_json(t["den"])))
                    for t in doc])


def _chain_product(chain) -> EulerRational:
    """Generic (reduced) coefficient of a factor chain, rightmost factor first."""
    total, moved = EulerRational(1), 0
    for s, r in chain:
        total = total * r.shift(moved)
        moved += s
    return total


def _chain_eval(chain, mu) -> Fraction:
    v = Fraction(1)
    for s, r in chain:
        v *= r(mu)
        if not v:
            return v
        mu = mu + s
    return v


def _collapse(chain):
    """Merge neighbouring factors whenever no zero of one meets a pole of the other."""
    out = [chain[0]]
    for s, r in chain[1:]:
        s0, r0 = out[-1]
        rs = r.shift(s0)
        if EulerPoly.gcd(r0.num, rs.den).degree == 0 and EulerPoly.gcd(r0.den, rs.num).degree == 0:
            out[-1] = (s0 + s, r0 * rs)
        else:
            out.append((s, r))
    return tuple(out)


def compose(op1, op2):
    return op1 * op2


def commutator(op1, op2):
    """[op1, op2] = op1 op2 - op2 op1."""
    return op1 * op2 - op2 * op1


def to_graded(op: DiffOp) -> GradedOp:
    terms = []
    for (a, b), c in op._t.items():
        terms.append((a - b, EulerRational(EulerPoly.falling(b) * c)))
    return GradedOp(terms)


def separate(op: DiffOp):
    """Split into (F, P): F the degree-0 part as a polynomial in D, P the rest."""
    g = to_graded(op)
    f = g.term(0)
    F = f.num if f is not None else EulerPoly()
    P = GradedOp({s: r for s, r in g.items() if s != 0})
    return F, P


def _apply(s: XSeries, shifts, act, order):
    if order is not None and order < 0:
        raise ValueError("order must be nonnegative")
    if not shifts:
        out = XSeries.zero(s.base, s.direction, s.truncation)
        return out.truncate(order)
    edge = min(shifts) if s.direction == ASCENDING else max(shifts)
    base = s.base + edge
    sign = s.sign
    out = {}
    for k, c in s.offsets():
        mu = s.exponent(k)
        for d, r in act(mu):
            if r:
                kk = int((mu + d - base) * sign)
                out[kk] = out.get(kk, 0) + c * r
    return XSeries(base, out, s.direction, s.truncation).truncate(order)


def apply_diffop(op: DiffOp, s: XSeries, order=None) -> XSeries:
    """Exact action of ``op`` on ``s``, keeping only coefficients fully determined by ``s``."""
    return _apply(s, op.degrees(), op.act, order)


def apply_graded(op: GradedOp, s: XSeries, order=None) -> XSeries:
    """Exact action of a graded operator; raises ResonanceError on a vanishing denominator."""
    return _apply(s, op.shifts(), op.act, order)
