"""Exact scalar arithmetic: rationals and cyclotomic numbers.

A :class:`Field` is either the rationals (``order=None``) or the cyclotomic
field obtained by adjoining a primitive m-th root of unity ``zeta``.
Cyclotomic elements are stored as dense coefficient vectors over the
rationals of length phi(m), always fully reduced modulo the m-th cyclotomic
polynomial, so equality is coefficient-wise.  All arithmetic is exact; there
is no floating point anywhere in this package.

Mixing two cyclotomic fields of different order is rejected.  Rationals embed
into any cyclotomic field and are coerced silently.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials, coefficients low-to-high."""
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        coeff = num[shift + len(den) - 1]
        if coeff % den[-1] != 0:
            raise ArithmeticError("non-exact polynomial division")
        coeff //= den[-1]
        quot[shift] = coeff
        if coeff:
            for k, d in enumerate(den):
                num[shift + k] -= coeff * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _qtrim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qsub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for k, c in enumerate(a):
        out[k] += c
    for k, c in enumerate(b):
        out[k] -= c
    return _qtrim(out)


def _qmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _qtrim(out)


def _qdivmod(num: list[Fraction], den: list[Fraction]):
    """Polynomial division over the rationals, coefficients low-to-high."""
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    num = list(num)
    quot = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    while len(num) >= len(den):
        shift = len(num) - len(den)
        c = num[-1] / den[-1]
        quot[shift] = c
        for k, d in enumerate(den):
            num[shift + k] -= c * d
        _qtrim(num)
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, low-to-high, monic."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {m}")
    poly = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            if rem != [0]:
                raise AssertionError("x^m - 1 not divisible by lower factor")
    return tuple(poly)


class Field:
    """The rationals (``order=None``) or the cyclotomic field of given order."""

    __slots__ = ("order", "degree", "_modulus")

    def __init__(self, order: int | None = None):
        self.order = order
        if order is None:
            self.degree = 1
            self._modulus = None
        else:
            phi = cyclotomic_polynomial(order)
            self.degree = len(phi) - 1
            self._modulus = tuple(Fraction(c) for c in phi)

    def __eq__(self, other):
        return isinstance(other, Field) and self.order == other.order

    def __hash__(self):
        return hash(("Field", self.order))

    def __repr__(self):
        if self.order is None:
            return "Field(rationals)"
        return f"Field(cyclotomic order {self.order})"

    @property
    def is_rational(self) -> bool:
        return self.order is None

    def label(self) -> str:
        """The field tag used on the command line and in JSON reports."""
        return "q" if self.order is None else f"cyclo:{self.order}"

    def elem(self, value) -> FieldElem:
        """Coerce an int, Fraction, string, or FieldElem into this field."""
        if isinstance(value, FieldElem):
            if value.field == self:
                return value
            if value.field.is_rational:
                return self.from_rational(value.coeffs[0])
            if self.is_rational:
                raise ValueError("cannot coerce a cyclotomic number into the rationals")
            raise ValueError(
                f"mixed cyclotomic orders {value.field.order} and {self.order}"
            )
        if isinstance(value, str):
            return parse_scalar(value, self)
        return self.from_rational(Fraction(value))

    def from_rational(self, q) -> FieldElem:
        q = Fraction(q)
        return FieldElem(self, (q,) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> FieldElem:
        return self.from_rational(0)

    def one(self) -> FieldElem:
        return self.from_rational(1)

    def zeta(self, power: int = 1) -> FieldElem:
        """zeta^power, reduced; only available on cyclotomic fields."""
        if self.order is None:
            raise ValueError("the rational field has no root of unity zeta")
        power %= self.order
        coeffs = [Fraction(0)] * (power + 1)
        coeffs[power] = Fraction(1)
        return FieldElem(self, self._reduce(coeffs))

    def _reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        """Reduce a coefficient list modulo the cyclotomic polynomial."""
        mod = self._modulus
        if mod is None:
            if any(coeffs[1:]):
                raise AssertionError("rational element with nontrivial tail")
            return (coeffs[0] if coeffs else Fraction(0),)
        deg = self.degree
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, deg - 1, -1):
            c = coeffs[k]
            if c:
                for j in range(deg + 1):
                    coeffs[k - deg + j] -= c * mod[j]
        coeffs = coeffs[:deg]
        coeffs += [Fraction(0)] * (deg - len(coeffs))
        return tuple(coeffs)


QQ = Field()


class FieldElem:
    """An element of a :class:`Field`, as a reduced coefficient vector."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def _pair(self, other) -> tuple[FieldElem, FieldElem]:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElem):
            raise TypeError(f"cannot combine FieldElem with {type(other).__name__}")
        if other.field == self.field:
            return self, other
        if other.field.is_rational:
            return self, self.field.elem(other)
        if self.field.is_rational:
            return other.field.elem(self), other
        raise ValueError(
            f"mixed cyclotomic orders {self.field.order} and {other.field.order}"
        )

    def __add__(self, other):
        a, b = self._pair(other)
        return FieldElem(a.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return FieldElem(a.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return FieldElem(self.field, tuple(-x for x in self.coeffs))

    def __mul__(self, other):
        a, b = self._pair(other)
        if a.field.is_rational:
            return FieldElem(a.field, (a.coeffs[0] * b.coeffs[0],))
        n = len(a.coeffs)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return FieldElem(a.field, a.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        field = self.field
        if field.is_rational:
            return FieldElem(field, (1 / self.coeffs[0],))
        # extended Euclid in Q[x]: find s with s * self == gcd modulo Phi_m
        r0 = _qtrim(list(self.coeffs))
        r1 = _qtrim(list(field._modulus))
        s0, s1 = [Fraction(1)], []
        while r1:
            quot, rem = _qdivmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qsub(s0, _qmul(quot, s1))
        if len(r0) != 1:
            raise ZeroDivisionError("element not invertible (not coprime to modulus)")
        inv = [c / r0[0] for c in s0]
        return FieldElem(field, field._reduce(inv))

    def __truediv__(self, other):
        a, b = self._pair(other)
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        try:
            a, b = self._pair(other)
        except ValueError:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.field.order, self.coeffs))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                body = str(c)
            else:
                zeta = "zeta" if k == 1 else f"zeta^{k}"
                body = zeta if abs(c) == 1 else f"{abs(c)}*{zeta}"
                if c < 0:
                    body = "-" + body
            parts.append(body)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"FieldElem({self})"

    def is_rational_value(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational_value():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]


_SCALAR_TOKEN = re.compile(r"\s*(zeta|\d+|[+\-*/^()])")


def parse_scalar(text: str, field: Field) -> FieldElem:
    """Parse a scalar literal like ``-3/2``, ``zeta^2`` or ``1/2*zeta - 1``."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _SCALAR_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad scalar literal {text!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise ValueError(f"empty scalar literal {text!r}")

    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else None

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def parse_atom() -> FieldElem:
        tok = peek()
        if tok == "(":
            take()
            val = parse_sum()
            if peek() != ")":
                raise ValueError(f"unbalanced parentheses in scalar {text!r}")
            take()
            return val
        if tok == "zeta":
            take()
            power = 1
            if peek() == "^":
                take()
                power = int(take())
            return field.zeta(power)
        if tok is not None and tok.isdigit():
            num = int(take())
            if peek() == "/":
                take()
                den = take()
                if not den.isdigit():
                    raise ValueError(f"bad denominator in scalar {text!r}")
                return field.from_rational(Fraction(num, int(den)))
            return field.from_rational(num)
        raise ValueError(f"bad scalar literal {text!r}")

    def parse_term() -> FieldElem:
        sign = field.one()
        while peek() in ("+", "-"):
            if take() == "-":
                sign = -sign
        val = parse_atom()
        while peek() == "*":
            take()
            val = val * parse_atom()
        return sign * val

    def parse_sum() -> FieldElem:
        # parse_term absorbs the leading sign itself.
        val = parse_term()
        while peek() in ("+", "-"):
            val = val + parse_term()
        return val

    result = parse_sum()
    if idx != len(tokens):
        raise ValueError(f"trailing garbage in scalar literal {text!r}")
    return result
