"""Exception types shared across the package."""

from fractions import Fraction


class ResonanceError(ArithmeticError):
    """An Euler-rational denominator vanished at a reached exponent.

    ``exponent`` is the exponent at which the division was attempted.
    """

    def __init__(self, exponent, detail=""):
        self.exponent = Fraction(exponent)
        msg = f"resonance at exponent {self.exponent}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class MixedDegreeError(ValueError):
    """A graded operator mixes raising and lowering shifts where that is not allowed."""


class DegenerateIndicialError(ArithmeticError):
    """The indicial polynomial has a repeated root."""

    def __init__(self, roots):
        self.roots = list(roots)
        desc = ", ".join(f"{r} (x{m})" for r, m in self.roots)
        super().__init__(f"degenerate indicial roots: {desc}")


class ShapeError(ValueError):
    """Wrong number of hypergeometric parameters."""


class InconsistentConjugate(ArithmeticError):
    """No normalisation constant makes the canonical-conjugate condition hold."""


class ParseError(ValueError):
    """Malformed operator expression; ``offset`` is the byte offset of the problem."""

    def __init__(self, reason, offset):
        self.reason = reason
        self.offset = offset
        super().__init__(f"{reason} at byte {offset}")


class UnboundParameter(ValueError):
    def __init__(self, names):
        self.names = sorted(names)
        super().__init__("unbound parameter(s): " + ", ".join(self.names))
