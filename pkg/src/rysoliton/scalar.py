"""Exact arithmetic in the real quadratic field Q(sqrt2).

Every value is stored as ``rat + sqrt2 * sqrt(2)`` with both parts held as
:class:`fractions.Fraction`, so numerators and denominators never overflow
and the representation is canonical (lowest terms, positive denominator).
"""

from __future__ import annotations

import decimal
import re
from fractions import Fraction
from functools import total_ordering
from typing import Union

__all__ = [
    "Scalar",
    "ScalarParseError",
    "ScalarDivisionError",
    "ZERO",
    "ONE",
    "SQRT2",
    "parse_scalar",
    "scalar_arith",
    "to_float",
    "as_scalar",
]

Number = Union[int, Fraction, "Scalar"]


class ScalarParseError(ValueError):
    """A scalar literal does not match the literal grammar."""

    def __init__(self, message: str, token: str | None = None, position: int | None = None):
        super().__init__(message)
        self.token = token
        self.position = position


class ScalarDivisionError(ZeroDivisionError):
    """Division by the zero element of Q(sqrt2)."""


@total_ordering
class Scalar:
    """Element ``a + b*sqrt(2)`` of Q(sqrt2) with rational ``a`` and ``b``.

    Instances are immutable and hashable. Equality is structural on the
    canonical parts; a scalar with zero irrational part compares and hashes
    equal to the matching ``int``/``Fraction``.
    """

    __slots__ = ("_r", "_s")

    def __init__(self, rat: int | Fraction | str = 0, sqrt2: int | Fraction | str = 0):
        self._r = rat if type(rat) is Fraction else Fraction(rat)
        self._s = sqrt2 if type(sqrt2) is Fraction else Fraction(sqrt2)

    @classmethod
    def _raw(cls, r: Fraction, s: Fraction) -> Scalar:
        obj = cls.__new__(cls)
        obj._r = r
        obj._s = s
        return obj

    @property
    def rat_part(self) -> Fraction:
        return self._r

    @property
    def sqrt2_part(self) -> Fraction:
        return self._s

    @property
    def is_rational(self) -> bool:
        return not self._s

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Number) -> Scalar:
        if type(other) is Scalar:
            return Scalar._raw(self._r + other._r, self._s + other._s)
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(self._r + other, self._s)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Number) -> Scalar:
        if type(other) is Scalar:
            return Scalar._raw(self._r - other._r, self._s - other._s)
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(self._r - other, self._s)
        return NotImplemented

    def __rsub__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(other - self._r, -self._s)
        return NotImplemented

    def __mul__(self, other: Number) -> Scalar:
        if type(other) is Scalar:
            a, b, c, d = self._r, self._s, other._r, other._s
            if not b:
                if not d:
                    return Scalar._raw(a * c, d)
                return Scalar._raw(a * c, a * d)
            if not d:
                return Scalar._raw(a * c, b * c)
            return Scalar._raw(a * c + 2 * b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Scalar._raw(self._r * other, self._s * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ScalarDivisionError(f"division of {self} by zero")
            return Scalar._raw(self._r / other, self._s / other)
        if type(other) is Scalar:
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other: Number) -> Scalar:
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, exponent: int) -> Scalar:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __neg__(self) -> Scalar:
        return Scalar._raw(-self._r, -self._s)

    def __pos__(self) -> Scalar:
        return self

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    def conjugate(self) -> Scalar:
        """Galois conjugate ``a - b*sqrt(2)``."""
        return Scalar._raw(self._r, -self._s)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - 2*b**2``; zero only for the zero element."""
        return self._r * self._r - 2 * self._s * self._s

    def inverse(self) -> Scalar:
        if not self._s:
            if not self._r:
                raise ScalarDivisionError("inverse of zero")
            return Scalar._raw(1 / self._r, self._s)
        n = self.norm()
        return Scalar._raw(self._r / n, -self._s / n)

    # -- comparison -------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of the real number ``a + b*sqrt(2)``."""
        a, b = self._r, self._s
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: the term with the larger square wins
        a2, b2 = a * a, 2 * b * b
        if a2 == b2:
            return 0  # unreachable for rationals; kept for safety
        return sa if a2 > b2 else sb

    def __bool__(self) -> bool:
        return bool(self._r) or bool(self._s)

    def __eq__(self, other: object) -> bool:
        if type(other) is Scalar:
            return self._r == other._r and self._s == other._s
        if isinstance(other, (int, Fraction)):
            return not self._s and self._r == other
        return NotImplemented

    def __lt__(self, other: Number) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            return (self - other).sign() < 0
        return NotImplemented

    def __hash__(self) -> int:
        if not self._s:
            return hash(self._r)
        return hash((self._r, self._s))

    # -- conversion -------------------------------------------------------

    def __float__(self) -> float:
        return to_float(self)

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar('{format_scalar(self)}')"

    def __reduce__(self):
        return (Scalar, (self._r, self._s))

    @classmethod
    def parse(cls, text: str) -> Scalar:
        return parse_scalar(text)


ZERO = Scalar(0)
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)


def as_scalar(value: Number | str) -> Scalar:
    """Coerce ints, Fractions and literal strings to :class:`Scalar`."""
    if type(value) is Scalar:
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Scalar")


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``op`` (one of add, sub, mul, div) to two scalars.

    Raises :class:`ScalarDivisionError` for ``div`` by zero.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ScalarDivisionError(f"div({a}, 0)")
        return a / b
    raise ValueError(f"unknown scalar operation {op!r}")


# -- printing ------------------------------------------------------------


def _fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmt_sqrt_term(q: Fraction) -> str:
    if q == 1:
        return "sqrt2"
    return f"{_fmt_rational(q)}*sqrt2"


def format_scalar(x: Scalar) -> str:
    """Canonical literal: ``a``, ``b*sqrt2`` or ``a + b*sqrt2`` / ``a - b*sqrt2``."""
    r, s = x.rat_part, x.sqrt2_part
    if not s:
        return _fmt_rational(r)
    if not r:
        return _fmt_sqrt_term(s)
    if s > 0:
        return f"{_fmt_rational(r)} + {_fmt_sqrt_term(s)}"
    return f"{_fmt_rational(r)} - {_fmt_sqrt_term(-s)}"


# -- parsing -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<sqrt>sqrt2)|(?P<op>[-+*/]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped_end = len(text.rstrip())
    while pos < stripped_end:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = text[pos:].strip().split()[0] if text[pos:].strip() else text[pos:]
            raise ScalarParseError(f"unexpected token {bad!r} at offset {pos}", bad, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ScalarParseError(f"unexpected end of literal {self.text!r}", None, len(self.text))
        self.i += 1
        return tok

    def fail(self, tok: tuple[str, str, int] | None, expected: str) -> ScalarParseError:
        if tok is None:
            return ScalarParseError(
                f"expected {expected} but literal {self.text!r} ended", None, len(self.text)
            )
        return ScalarParseError(
            f"unexpected token {tok[1]!r} at offset {tok[2]} (expected {expected})", tok[1], tok[2]
        )

    def posint(self) -> int:
        tok = self.take()
        if tok[0] != "int":
            raise self.fail(tok, "an integer")
        return int(tok[1])

    def term(self) -> tuple[Fraction, bool]:
        """Return (coefficient, is_sqrt2_term)."""
        tok = self.peek()
        if tok is not None and tok[0] == "sqrt":
            self.take()
            return Fraction(1), True
        negative = False
        if tok is not None and tok[1] == "-":
            self.take()
            negative = True
            tok = self.peek()
        if tok is None or tok[0] != "int":
            raise self.fail(tok, "a rational or 'sqrt2'")
        num = self.posint()
        den = 1
        tok = self.peek()
        if tok is not None and tok[1] == "/":
            self.take()
            den_tok = self.peek()
            den = self.posint()
            if den == 0:
                raise self.fail(den_tok, "a positive denominator")
        value = Fraction(-num if negative else num, den)
        tok = self.peek()
        if tok is not None and tok[1] == "*":
            self.take()
            tok = self.take()
            if tok[0] != "sqrt":
                raise self.fail(tok, "'sqrt2'")
            return value, True
        return value, False

    def scalar(self) -> Scalar:
        rat = Fraction(0)
        irr = Fraction(0)
        seen_sqrt = False
        coeff, is_sqrt = self.term()
        if is_sqrt:
            irr, seen_sqrt = coeff, True
        else:
            rat = coeff
        tok = self.peek()
        if tok is not None:
            if tok[1] not in "+-" or tok[0] != "op":
                raise self.fail(tok, "'+' or '-'")
            self.take()
            sign = -1 if tok[1] == "-" else 1
            start = self.peek()
            coeff, is_sqrt = self.term()
            if is_sqrt:
                if seen_sqrt:
                    raise ScalarParseError(
                        f"literal {self.text!r} has two sqrt2 terms",
                        start[1] if start else None,
                        start[2] if start else None,
                    )
                irr = sign * coeff
            else:
                rat += sign * coeff
        tok = self.peek()
        if tok is not None:
            raise self.fail(tok, "end of literal")
        return Scalar._raw(rat, irr)


def parse_scalar(text: str) -> Scalar:
    """Parse a literal such as ``"-3/2"``, ``"1/2*sqrt2"`` or ``"1 - 1/2*sqrt2"``."""
    if not isinstance(text, str):
        raise ScalarParseError(f"scalar literal must be a string, got {type(text).__name__}")
    if not text.strip():
        raise ScalarParseError("empty scalar literal", "", 0)
    return _Parser(text).scalar()


# -- floating point ------------------------------------------------------


def _decimal(q: Fraction, ctx: decimal.Context) -> decimal.Decimal:
    return ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))


def to_float(x: Scalar) -> float:
    """Nearest double to ``a + b*sqrt(2)``.

    The sum is formed at a working precision that grows until cancellation
    between the two parts can no longer disturb the leading 70 bits, so the
    conversion is monotone in the exact value.
    """
    r, s = x.rat_part, x.sqrt2_part
    if not s:
        return float(r)
    prec = 40
    while True:
        ctx = decimal.Context(prec=prec)
        root = ctx.sqrt(decimal.Decimal(2))
        rd = _decimal(r, ctx)
        sd = ctx.multiply(_decimal(s, ctx), root)
        total = ctx.add(rd, sd)
        scale = max(abs(rd), abs(sd))
        # error of each rounded quantity is bounded by a few ulps at `prec` digits
        bound = scale.scaleb(-prec + 2)
        if total != 0 and abs(total).scaleb(-21) > bound:
            return float(total)
        prec *= 2
