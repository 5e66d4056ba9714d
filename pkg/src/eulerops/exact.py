"""Exact value types: rationals, Laurent polynomials, x-series and t-series.

Everything here is built on :class:`fractions.Fraction`; no floating point
enters any computation path.
"""

from fractions import Fraction
from math import factorial
import re

Rational = Fraction

ASCENDING = "ascending"
DESCENDING = "descending"

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def rational(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions and strings of the form ``"p"`` or ``"p/q"``.
    Floats and decimal strings are rejected, since they are not exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise ValueError(f"not an exact rational literal: {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(num, den)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def pochhammer(a, n: int) -> Fraction:
    """Rising factorial a(a+1)...(a+n-1); 1 when n == 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = Fraction(1)
    a = Fraction(a)
    for k in range(n):
        out *= a + k
    return out


def falling_factorial(mu, b: int) -> Fraction:
    """mu(mu-1)...(mu-b+1); 1 when b == 0."""
    if b < 0:
        raise ValueError("b must be nonnegative")
    out = Fraction(1)
    mu = Fraction(mu)
    for k in range(b):
        out *= mu - k
    return out


def _fmt_term(c, var, k):
    if k == 0:
        return format_rational(c)
    mono = var if k == 1 else f"{var}^{k}" if k > 0 else f"{var}^({k})"
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{format_rational(c)}*{mono}"


def _x_power(e):
    es = format_rational(e)
    if e == 1:
        return "x"
    return f"x^{es}" if e > 0 and e.denominator == 1 else f"x^({es})"


def _join_terms(parts):
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class LaurentPoly:
    """Finite sum of c_k x^k over integer k with exact coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, v in dict(coeffs).items():
                v = rational(v)
                if v:
                    c[int(k)] = v
        self._c = c

    @classmethod
    def monomial(cls, k: int, coeff=1):
        return cls({k: coeff})

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def x(cls):
        return cls({1: 1})

    def items(self):
        return sorted(self._c.items())

    def coefficients(self) -> dict:
        return dict(self.items())

    def __getitem__(self, k):
        return self._c.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def degree(self):
        return max(self._c) if self._c else None

    @property
    def low_degree(self):
        return min(self._c) if self._c else None

    def leading_coefficient(self):
        return self._c[self.degree] if self._c else Fraction(0)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({k: v * other for k, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(scalar))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int):
        """Multiply by x^k."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def derivative(self):
        return LaurentPoly({e - 1: e * v for e, v in self._c.items() if e != 0})

    def __call__(self, value):
        value = Fraction(value)
        return sum((v * value ** e for e, v in self._c.items()), Fraction(0))

    def truncate(self, max_degree: int):
        return LaurentPoly({k: v for k, v in self._c.items() if k <= max_degree})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        parts = [_fmt_term(v, "x", k) for k, v in sorted(self._c.items(), reverse=True)]
        return _join_terms(parts)

    def to_json(self) -> dict:
        return {"coefficients": {str(k): format_rational(v) for k, v in self.items()}}

    @classmethod
    def from_json(cls, doc):
        return cls({int(k): rational(v) for k, v in doc["coefficients"].items()})


class XSeries:
    """Generalised series sum_k c_k x^(base + sign*k), k >= 0.

    ``direction`` fixes the sign: exponents increase from ``base`` for an
    ascending series and decrease for a descending one. ``truncation`` is the
    largest offset k whose coefficient is known exactly, or ``None`` when the
    series is an exact finite sum ("terminated").
    """

    __slots__ = ("base", "direction", "truncation", "_c")

    def __init__(self, base, coefficients=None, direction=ASCENDING, truncation=None):
        if direction not in (ASCENDING, DESCENDING):
            raise ValueError(f"unknown direction {direction!r}")
        if truncation is not None and truncation < 0:
            raise ValueError("truncation must be nonnegative")
        self.base = rational(base)
        self.direction = direction
        self.truncation = truncation
        c = {}
        for k, v in (coefficients or {}).items():
            k = int(k)
            if k < 0:
                raise ValueError("offsets must be nonnegative")
            v = rational(v)
            if v and (truncation is None or k <= truncation):
                c[k] = v
        self._c = c

    @classmethod
    def monomial(cls, exponent, coeff=1, direction=ASCENDING, truncation=None):
        return cls(exponent, {0: coeff}, direction, truncation)

    @classmethod
    def zero(cls, base=0, direction=ASCENDING, truncation=None):
        return cls(base, {}, direction, truncation)

    @classmethod
    def from_laurent(cls, p: LaurentPoly, direction=ASCENDING, base=None):
        if base is None:
            if p.is_zero():
                base = 0
            else:
                base = p.low_degree if direction == ASCENDING else p.degree
        base = rational(base)
        sign = 1 if direction == ASCENDING else -1
        coeffs = {}
        for e, v in p.items():
            k = (e - base) * sign
            if k.denominator != 1 or k < 0:
                raise ValueError(f"exponent {e} not reachable from base {base}")
            coeffs[int(k)] = v
        return cls(base, coeffs, direction, None)

    @property
    def sign(self) -> int:
        return 1 if self.direction == ASCENDING else -1

    @property
    def terminated(self) -> bool:
        return self.truncation is None

    def exponent(self, k: int) -> Fraction:
        return self.base + self.sign * k

    def offset(self, exponent):
        k = (rational(exponent) - self.base) * self.sign
        if k.denominator != 1:
            return None
        return int(k)

    @property
    def bound(self):
        """Last exponent with an exactly known coefficient (None if terminated)."""
        if self.truncation is None:
            return None
        return self.exponent(self.truncation)

    def offsets(self):
        return sorted(self._c.items())

    def terms(self) -> dict:
        """Nonzero coefficients keyed by exponent, in series order."""
        return {self.exponent(k): v for k, v in sorted(self._c.items())}

    def coefficient(self, exponent) -> Fraction:
        k = self.offset(exponent)
        if k is None or k < 0:
            return Fraction(0)
        if self.truncation is not None and k > self.truncation:
            raise ValueError(f"coefficient of x^{exponent} lies outside the known window")
        return self._c.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def within(self, exponent) -> bool:
        """True when the coefficient at ``exponent`` is exactly known."""
        if self.truncation is None:
            return True
        k = self.offset(exponent)
        return k is None or k <= self.truncation

    def truncate(self, order):
        if order is None:
            return self
        if self.truncation is not None and self.truncation <= order:
            return self
        if self.truncation is None and (not self._c or max(self._c) <= order):
            return self
        return XSeries(self.base, self._c, self.direction, order)

    def as_terminated(self):
        """Forget the truncation: treat the known part as an exact finite sum."""
        return XSeries(self.base, self._c, self.direction, None)

    def rebase(self, new_base):
        """Re-express with a different base exponent (integer distance, no loss)."""
        new_base = rational(new_base)
        delta = (self.base - new_base) * self.sign
        if delta.denominator != 1:
            raise ValueError("bases must differ by an integer")
        delta = int(delta)
        if self._c and min(self._c) + delta < 0:
            raise ValueError("rebase would create negative offsets")
        trunc = None if self.truncation is None else self.truncation + delta
        if trunc is not None and trunc < 0:
            raise ValueError("rebase beyond the known window")
        return XSeries(new_base, {k + delta: v for k, v in self._c.items()}, self.direction, trunc)

    def to_laurent(self) -> LaurentPoly:
        if not self.terminated:
            raise ValueError("only terminated series convert to Laurent polynomials")
        out = {}
        for e, v in self.terms().items():
            if e.denominator != 1:
                raise ValueError("non-integer exponent cannot be stored in a LaurentPoly")
            out[int(e)] = v
        return LaurentPoly(out)

    def _align(self, other):
        if not isinstance(other, XSeries):
            raise TypeError("expected XSeries")
        if other.direction != self.direction:
            raise ValueError("cannot combine ascending and descending series")
        if (self.base - other.base).denominator != 1:
            raise ValueError("bases must differ by an integer")
        if self.direction == ASCENDING:
            base = min(self.base, other.base)
        else:
            base = max(self.base, other.base)
        bounds = [b for b in (self.bound, other.bound) if b is not None]
        a, b = self.rebase(base), other.rebase(base)
        if not bounds:
            trunc = None
        else:
            bnd = min(bounds) if self.direction == ASCENDING else max(bounds)
            trunc = int((bnd - base) * self.sign)
        return a, b, base, trunc

    def __add__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        a, b, base, trunc = self._align(other)
        out = dict(a._c)
        for k, v in b._c.items():
            out[k] = out.get(k, 0) + v
        return XSeries(base, out, self.direction, trunc)

    def __neg__(self):
        return XSeries(self.base, {k: -v for k, v in self._c.items()}, self.direction, self.truncation)

    def __sub__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return XSeries(self.base, {k: v * scalar for k, v in self._c.items()},
                       self.direction, self.truncation)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, XSeries):
            return NotImplemented
        return (self.direction == other.direction and self.bound == other.bound
                and self.terminated == other.terminated and self.terms() == other.terms())

    def __hash__(self):
        return hash((self.direction, self.bound, frozenset(self.terms().items())))

    def __repr__(self):
        return f"XSeries({self})"

    def __str__(self):
        parts = []
        for e, v in self.terms().items():
            if e == 0:
                parts.append(format_rational(v))
            else:
                mono = _x_power(e)
                parts.append(mono if v == 1 else "-" + mono if v == -1 else f"{format_rational(v)}*{mono}")
        s = _join_terms(parts)
        if not self.terminated:
            e = self.exponent(self.truncation + 1)
            s += f" + O({_x_power(e) if e else '1'})"
        return s

    def to_json(self) -> dict:
        return {
            "base_exponent": format_rational(self.base),
            "direction": self.direction,
            "truncation": "terminated" if self.terminated else self.truncation,
            "coefficients": {str(k): format_rational(v) for k, v in self.offsets()},
        }

    @classmethod
    def from_json(cls, doc):
        missing = {"base_exponent", "direction", "truncation", "coefficients"} - set(doc)
        if missing:
            raise ValueError(f"series document lacks {', '.join(sorted(missing))}")
        trunc = doc["truncation"]
        if trunc == "terminated":
            trunc = None
        elif not isinstance(trunc, int):
            raise ValueError(f"bad truncation {trunc!r}")
        return cls(rational(doc["base_exponent"]),
                   {int(k): rational(v) for k, v in doc["coefficients"].items()},
                   doc["direction"], trunc)


def _as_poly(c):
    if isinstance(c, LaurentPoly):
        return c
    return LaurentPoly.constant(rational(c))


class TSeries:
    """Truncated power series in t whose coefficients are Laurent polynomials in x."""

    __slots__ = ("order", "_c")

    def __init__(self, coefficients, order: int):
        if order < 0:
            raise ValueError("order must be nonnegative")
        coeffs = [_as_poly(c) for c in list(coefficients)[: order + 1]]
        coeffs += [LaurentPoly()] * (order + 1 - len(coeffs))
        self.order = order
        self._c = tuple(coeffs)

    @classmethod
    def constant(cls, c, order: int):
        return cls([c], order)

    @classmethod
    def t(cls, order: int):
        return cls([0, 1], order)

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def __len__(self):
        return len(self._c)

    def _coerce(self, other):
        if isinstance(other, TSeries):
            return other
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return TSeries.constant(other, self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.order, other.order)
        return TSeries([self._c[i] + other._c[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TSeries([-c for c in self._c], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return TSeries([c * other for c in self._c], self.order)
        if not isinstance(other, TSeries):
            return NotImplemented
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = LaurentPoly()
            for i in range(k + 1):
                a, b = self._c[i], other._c[k - i]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return TSeries(out, n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.order == other.order and self._c == other._c

    def __hash__(self):
        return hash((self.order, self._c))

    def first_mismatch(self, other):
        """Lowest t-power where the two series differ, or None."""
        for n in range(min(self.order, other.order) + 1):
            if self._c[n] != other._c[n]:
                return n
        return None

    def __repr__(self):
        return "TSeries([" + ", ".join(str(c) for c in self._c) + f"], order={self.order})"

    def to_json(self) -> list:
        return [c.to_json() for c in self._c]

    @classmethod
    def from_json(cls, doc):
        return cls([LaurentPoly.from_json(d) for d in doc], len(doc) - 1)


def tseries_inv(s: TSeries) -> TSeries:
    """Multiplicative inverse through order N_t."""
    a0 = s[0]
    if a0.is_zero() or a0.degree != 0 or a0.low_degree != 0:
        raise ZeroDivisionError("constant term in t must be a nonzero constant")
    inv0 = 1 / a0[0]
    out = [LaurentPoly.constant(inv0)]
    for n in range(1, s.order + 1):
        acc = LaurentPoly()
        for k in range(1, n + 1):
            if s[k]:
                acc = acc + s[k] * out[n - k]
        out.append(acc * (-inv0))
    return TSeries(out, s.order)


def tseries_exp(s: TSeries) -> TSeries:
    """exp(s) through order N_t; s must have zero constant term.

    Uses E' = s'E, i.e. n E_n = sum_k k s_k E_{n-k}.
    """
    if not s[0].is_zero():
        raise ValueError("exponential requires zero constant term in t")
    out = [LaurentPoly.constant(1)]
    for n in range(1, s.order + 1):
        acc = LaurentPoly()
        for k in range(1, n + 1):
            if s[k]:
                acc = acc + s[k] * out[n - k] * k
        out.append(acc / n)
    return TSeries(out, s.order)


def tseries_exp_direct(s: TSeries) -> TSeries:
    """exp(s) as the literal sum of s^m/m!; slower, kept as a cross-check."""
    if not s[0].is_zero():
        raise ValueError("exponential requires zero constant term in t")
    total = TSeries.constant(1, s.order)
    power = TSeries.constant(1, s.order)
    for m in range(1, s.order + 1):
        power = power * s
        total = total + power * Fraction(1, factorial(m))
    return total
