"""Exact arithmetic in the biquadratic field Q(sqrt2, sqrt3).

An element is stored as four rational coordinates ``(a, b, c, d)`` standing
for ``a + b*sqrt2 + c*sqrt3 + d*sqrt6``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)

# radical labels in coordinate order
RADICALS = ("", "r2", "r3", "r6")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build a rational from {type(x).__name__}")


class Scalar:
    """Immutable element ``a + b*sqrt2 + c*sqrt3 + d*sqrt6``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        self._c = (_frac(a), _frac(b), _frac(c), _frac(d))
        self._hash = None

    @classmethod
    def _raw(cls, coords: tuple) -> Scalar:
        s = object.__new__(cls)
        s._c = coords
        s._hash = None
        return s

    @classmethod
    def coerce(cls, x: ScalarLike) -> Scalar:
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls._raw((_frac(x), _ZERO, _ZERO, _ZERO))
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    @classmethod
    def sqrt2(cls) -> Scalar:
        return cls(0, 1)

    @classmethod
    def sqrt3(cls) -> Scalar:
        return cls(0, 0, 1)

    @classmethod
    def sqrt6(cls) -> Scalar:
        return cls(0, 0, 0, 1)

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self._c

    a = property(lambda self: self._c[0])
    b = property(lambda self: self._c[1])
    c = property(lambda self: self._c[2])
    d = property(lambda self: self._c[3])

    def is_zero(self) -> bool:
        a, b, c, d = self._c
        return not (a or b or c or d)

    def is_rational(self) -> bool:
        _, b, c, d = self._c
        return not (b or c or d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self._c[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c[0]) if self.is_rational() else hash(self._c)
        return self._hash

    def __add__(self, other) -> Scalar:
        if isinstance(other, Scalar):
            x, y = self._c, other._c
            return Scalar._raw((x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]))
        if isinstance(other, (int, Fraction)):
            x = self._c
            return Scalar._raw((x[0] + other, x[1], x[2], x[3]))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        a, b, c, d = self._c
        return Scalar._raw((-a, -b, -c, -d))

    def __sub__(self, other) -> Scalar:
        if isinstance(other, (Scalar, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other) -> Scalar:
        return (-self) + other

    def __mul__(self, other) -> Scalar:
        if isinstance(other, (int, Fraction)):
            a, b, c, d = self._c
            return Scalar._raw((a * other, b * other, c * other, d * other))
        if not isinstance(other, Scalar):
            return NotImplemented
        a1, b1, c1, d1 = self._c
        a2, b2, c2, d2 = other._c
        if not (b2 or c2 or d2):
            return Scalar._raw((a1 * a2, b1 * a2, c1 * a2, d1 * a2))
        if not (b1 or c1 or d1):
            return Scalar._raw((a1 * a2, a1 * b2, a1 * c2, a1 * d2))
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2
        return Scalar._raw((
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        ))

    __rmul__ = __mul__

    def conjugate(self, flip2: bool, flip3: bool) -> Scalar:
        """Galois conjugate sending sqrt2 -> -sqrt2 and/or sqrt3 -> -sqrt3."""
        a, b, c, d = self._c
        if flip2:
            b, d = -b, -d
        if flip3:
            c, d = -c, -d
        return Scalar._raw((a, b, c, d))

    def norm(self) -> Fraction:
        """Product of the four Galois conjugates; always rational."""
        n = self * self.conjugate(True, False) * self.conjugate(False, True) * self.conjugate(True, True)
        assert n.is_rational()
        return n._c[0]

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise ZeroDivisionError("Scalar inverse of zero")
        if self.is_rational():
            return Scalar._raw((1 / self._c[0], _ZERO, _ZERO, _ZERO))
        others = self.conjugate(True, False) * self.conjugate(False, True) * self.conjugate(True, True)
        n = (self * others)._c[0]
        return others * (1 / n)

    def __truediv__(self, other) -> Scalar:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Scalar division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other) -> Scalar:
        return Scalar.coerce(other) * self.inverse()

    def __float__(self) -> float:
        a, b, c, d = self._c
        return float(a) + float(b) * 2 ** 0.5 + float(c) * 3 ** 0.5 + float(d) * 6 ** 0.5

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def n_components(self) -> int:
        return sum(1 for x in self._c if x)


ScalarLike = Union[Scalar, int, Fraction, str]

ZERO = Scalar()
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)
SQRT3 = Scalar(0, 0, 1)
SQRT6 = Scalar(0, 0, 0, 1)


def scalar_add(x: Scalar, y: Scalar) -> Scalar:
    return x + y


def scalar_mul(x: Scalar, y: Scalar) -> Scalar:
    return x * y


def scalar_neg(x: Scalar) -> Scalar:
    return -x


def scalar_inv(x: Scalar) -> Scalar:
    return x.inverse()


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """Canonical text form, e.g. ``1/2 + 3/4 r2 - r6``; zero prints as ``0``."""
    parts = []
    for q, rad in zip(x.coords, RADICALS):
        if not q:
            continue
        mag = abs(q)
        if rad:
            body = rad if mag == 1 else f"{_fmt_rational(mag)} {rad}"
        else:
            body = _fmt_rational(mag)
        if not parts:
            parts.append(("-" if q < 0 else "") + body)
        else:
            parts.append(("- " if q < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<num>\d+)(?:\s*/\s*(?P<den>\d+))?)?\s*(?P<rad>r[236])?\s*"
)


def parse_scalar(text: str) -> Scalar:
    """Parse the text form produced by :func:`format_scalar`.

    Accepts ``p``, ``p/q``, optionally followed by ``r2``/``r3``/``r6``,
    joined by ``+``/``-``.
    """
    coords = [_ZERO, _ZERO, _ZERO, _ZERO]
    pos = 0
    s = text.strip()
    if not s:
        raise ValueError("empty scalar text")
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos or not (m.group("num") or m.group("rad")):
            raise ValueError(f"malformed scalar {text!r} at column {pos + 1}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing '+' or '-' in scalar {text!r} at column {pos + 1}")
        first = False
        q = Fraction(int(m.group("num")), int(m.group("den") or 1)) if m.group("num") else _ONE
        if m.group("sign") == "-":
            q = -q
        idx = RADICALS.index(m.group("rad") or "")
        coords[idx] += q
        pos = m.end()
    return Scalar._raw(tuple(coords))
