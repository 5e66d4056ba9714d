"""Surface syntax for differential operators.

    expr  := term (('+' | '-') term)*
    term  := unary ('*' unary)*
    unary := '-' unary | power
    power := atom ('^' uint)?
    atom  := rational | ident | 'x' | 'd' | 'D' | '(' expr ')'

'*' is composition, read left to right. x, d and D are reserved for
multiplication by x, d/dx and the Euler operator x d/dx.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, UnboundParameter
from .exact import rational
from .operators import DiffOp

GENERATORS = ("x", "d", "D")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Group:
    inner: object


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    pos: int
    value: object = None


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            den = 1
            if j < n and text[j] == ".":
                raise ParseError("decimal literals are not allowed; use p/q", _byte_offset(text, j))
            if j + 1 < n and text[j] == "/" and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                den = int(text[j + 1:k])
                if den == 0:
                    raise ParseError("zero denominator", _byte_offset(text, j + 1))
                j = k
            toks.append(_Tok("num", text[i:j], i, Fraction(num, den)))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("ident", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()":
            toks.append(_Tok("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", _byte_offset(text, i))
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, reason, tok=None):
        tok = tok or self.peek()
        raise ParseError(reason, _byte_offset(self.text, tok.pos))

    def is_op(self, ch):
        tok = self.peek()
        return tok.kind == "op" and tok.text == ch

    def expr(self):
        node = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.take().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.is_op("*"):
            self.take()
            node = Mul(node, self.unary())
        return node

    def unary(self):
        if self.is_op("-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.is_op("^"):
            self.take()
            tok = self.peek()
            if tok.kind != "num" or tok.value.denominator != 1:
                self.fail("exponent must be a nonnegative integer")
            self.take()
            node = Pow(node, int(tok.value))
        return node

    def atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Num(tok.value)
        if tok.kind == "ident":
            self.take()
            return Gen(tok.text) if tok.text in GENERATORS else Ident(tok.text)
        if self.is_op("("):
            self.take()
            inner = self.expr()
            if not self.is_op(")"):
                self.fail("expected ')'")
            self.take()
            return Group(inner)
        if tok.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {tok.text!r}")


def parse_operator(text: str):
    p = _Parser(text)
    node = p.expr()
    if p.peek().kind != "end":
        p.fail(f"unexpected token {p.peek().text!r}")
    return node


def _fmt_num(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def pretty(node) -> str:
    """Canonical text that parses back to the same tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, (Ident, Gen)):
        return node.name
    if isinstance(node, Add):
        return f"{pretty(node.left)} + {pretty(node.right)}"
    if isinstance(node, Sub):
        return f"{pretty(node.left)} - {pretty(node.right)}"
    if isinstance(node, Mul):
        return f"{pretty(node.left)}*{pretty(node.right)}"
    if isinstance(node, Pow):
        return f"{pretty(node.base)}^{node.exponent}"
    if isinstance(node, Neg):
        return "-" + pretty(node.operand)
    if isinstance(node, Group):
        return f"({pretty(node.inner)})"
    raise TypeError(f"not an expression node: {node!r}")


def free_identifiers(node) -> set:
    if isinstance(node, Ident):
        return {node.name}
    if isinstance(node, (Num, Gen)):
        return set()
    if isinstance(node, (Add, Sub, Mul)):
        return free_identifiers(node.left) | free_identifiers(node.right)
    if isinstance(node, Pow):
        return free_identifiers(node.base)
    if isinstance(node, Neg):
        return free_identifiers(node.operand)
    if isinstance(node, Group):
        return free_identifiers(node.inner)
    raise TypeError(f"not an expression node: {node!r}")


_GEN_OPS = {"x": DiffOp.x, "d": DiffOp.d, "D": DiffOp.euler}


def lower(node, bindings=None) -> DiffOp:
    """Turn a parsed expression into a DiffOp, substituting bound parameters."""
    bindings = {k: rational(v) for k, v in (bindings or {}).items()}
    missing = free_identifiers(node) - set(bindings)
    if missing:
        raise UnboundParameter(missing)
    return _lower(node, bindings)


def _lower(node, b):
    if isinstance(node, Num):
        return DiffOp.const(node.value)
    if isinstance(node, Ident):
        return DiffOp.const(b[node.name])
    if isinstance(node, Gen):
        return _GEN_OPS[node.name]()
    if isinstance(node, Add):
        return _lower(node.left, b) + _lower(node.right, b)
    if isinstance(node, Sub):
        return _lower(node.left, b) - _lower(node.right, b)
    if isinstance(node, Mul):
        return _lower(node.left, b) * _lower(node.right, b)
    if isinstance(node, Pow):
        return _lower(node.base, b) ** node.exponent
    if isinstance(node, Neg):
        return -_lower(node.operand, b)
    if isinstance(node, Group):
        return _lower(node.inner, b)
    raise TypeError(f"not an expression node: {node!r}")


def parse_diffop(text: str, bindings=None) -> DiffOp:
    return lower(parse_operator(text), bindings)
