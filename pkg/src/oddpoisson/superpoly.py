"""Supercommutative polynomials in even (q, p, X) and odd (Theta, theta) variables.

Odd factors of a monomial are kept as one bitmask per odd family; bit ``i-1``
stands for index ``i``.  The canonical odd order is all ``Theta`` factors
ascending, then all ``theta`` factors ascending, so every product is brought
to that order and carries the sign of the sorting permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from enum import IntEnum
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from .scalars import ONE, Scalar, ScalarLike, format_scalar

MIXED = "mixed"


class Family(IntEnum):
    Q = 0
    P = 1
    X = 2
    THETA_BIG = 3
    THETA_SMALL = 4

    @property
    def parity(self) -> int:
        return 1 if self >= Family.THETA_BIG else 0


PREFIX = {Family.Q: "q", Family.P: "p", Family.X: "X", Family.THETA_BIG: "T", Family.THETA_SMALL: "th"}


@dataclass(frozen=True, order=True)
class VariableId:
    family: Family
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index}")

    @property
    def parity(self) -> int:
        return self.family.parity

    @property
    def is_odd(self) -> bool:
        return self.family.parity == 1

    def __str__(self) -> str:
        return f"{PREFIX[self.family]}{self.index}"


class SuperMonomial(NamedTuple):
    """``evens`` is a sorted tuple of ``((family, index), exponent)``."""

    evens: tuple = ()
    big: int = 0
    small: int = 0

    @property
    def odd_degree(self) -> int:
        return self.big.bit_count() + self.small.bit_count()

    @property
    def even_degree(self) -> int:
        return sum(e for _, e in self.evens)

    @property
    def parity(self) -> int:
        return self.odd_degree & 1

    def odd_factors(self) -> list[VariableId]:
        return [VariableId(Family.THETA_BIG, i + 1) for i in _bits(self.big)] + [
            VariableId(Family.THETA_SMALL, i + 1) for i in _bits(self.small)
        ]

    def factors(self) -> list[VariableId]:
        """All factors in canonical order, even powers repeated."""
        out = []
        for (fam, idx), e in self.evens:
            out.extend([VariableId(Family(fam), idx)] * e)
        return out + self.odd_factors()


UNIT = SuperMonomial()


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def merge_sign(left: int, right: int) -> int:
    """Sign of sorting ``left`` followed by ``right`` (both ascending bitmasks)."""
    inv = 0
    for c in _bits(right):
        inv += (left >> (c + 1)).bit_count()
    return -1 if inv & 1 else 1


def _merge_evens(e1: tuple, e2: tuple) -> tuple:
    if not e1:
        return e2
    if not e2:
        return e1
    d = dict(e1)
    for v, e in e2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def monomial_product(m1: SuperMonomial, m2: SuperMonomial) -> tuple[int, SuperMonomial | None]:
    """Return ``(sign, m)`` with ``m1*m2 = sign*m``; ``m`` is None when the product vanishes."""
    if m1.big & m2.big or m1.small & m2.small:
        return 0, None
    sign = merge_sign(m1.big, m2.big) * merge_sign(m1.small, m2.small)
    if m1.small.bit_count() * m2.big.bit_count() & 1:
        sign = -sign
    return sign, SuperMonomial(_merge_evens(m1.evens, m2.evens), m1.big | m2.big, m1.small | m2.small)


def monomial_from_factors(factors: Iterable[VariableId]) -> tuple[int, SuperMonomial | None]:
    """Canonicalize an ordered product of variables, returning ``(sign, monomial)``."""
    sign, mono = 1, UNIT
    for v in factors:
        s, mono = monomial_product(mono, _var_monomial(v))
        if mono is None:
            return 0, None
        sign *= s
    return sign, mono


def _var_monomial(v: VariableId) -> SuperMonomial:
    if v.family == Family.THETA_BIG:
        return SuperMonomial((), 1 << (v.index - 1), 0)
    if v.family == Family.THETA_SMALL:
        return SuperMonomial((), 0, 1 << (v.index - 1))
    return SuperMonomial((((int(v.family), v.index), 1),), 0, 0)


class SuperPolynomial:
    """Immutable canonical-form polynomial: a map from monomial to nonzero Scalar."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[SuperMonomial, ScalarLike] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if c:
                clean[m] = c
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> SuperPolynomial:
        p = object.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def zero(cls) -> SuperPolynomial:
        return cls._raw({})

    @classmethod
    def const(cls, c: ScalarLike) -> SuperPolynomial:
        return cls({UNIT: c})

    @classmethod
    def var(cls, family: Family | str, index: int) -> SuperPolynomial:
        if isinstance(family, str):
            family = Family[family]
        return cls._raw({_var_monomial(VariableId(Family(family), index)): ONE})

    @classmethod
    def monomial(cls, factors: Iterable[VariableId], coeff: ScalarLike = 1) -> SuperPolynomial:
        sign, m = monomial_from_factors(factors)
        if m is None:
            return cls.zero()
        return cls({m: Scalar.coerce(coeff) * sign})

    @property
    def terms(self) -> dict[SuperMonomial, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Scalar)):
            other = SuperPolynomial.const(other)
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> SuperPolynomial:
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return SuperPolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> SuperPolynomial:
        return SuperPolynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> SuperPolynomial:
        other = _coerce_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> SuperPolynomial:
        return (-self) + other

    def scale(self, k: ScalarLike) -> SuperPolynomial:
        k = Scalar.coerce(k)
        if not k:
            return SuperPolynomial.zero()
        return SuperPolynomial._raw({m: c * k for m, c in self._terms.items()})

    def __mul__(self, other) -> SuperPolynomial:
        if isinstance(other, (int, Scalar)) or isinstance(other, Fraction):
            return self.scale(other)
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        out: dict[SuperMonomial, Scalar] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                sign, m = monomial_product(m1, m2)
                if m is None:
                    continue
                c = c1 * c2
                if sign < 0:
                    c = -c
                _accumulate(out, m, c)
        return SuperPolynomial._raw(out)

    def __rmul__(self, other) -> SuperPolynomial:
        # scalars are even, so left and right scaling agree
        return self.scale(other)

    def parity(self):
        return parity(self)

    def homogeneous_parts(self) -> tuple[SuperPolynomial, SuperPolynomial]:
        even, odd = {}, {}
        for m, c in self._terms.items():
            (odd if m.parity else even)[m] = c
        return SuperPolynomial._raw(even), SuperPolynomial._raw(odd)

    def variables(self) -> set[VariableId]:
        out = set()
        for m in self._terms:
            out.update(m.factors())
        return out

    def max_index(self) -> int:
        return max((v.index for v in self.variables()), default=0)

    def left_deriv(self, v: VariableId) -> SuperPolynomial:
        return left_deriv_odd(self, v)

    def right_deriv(self, v: VariableId) -> SuperPolynomial:
        return right_deriv_odd(self, v)

    def sorted_terms(self) -> list[tuple[SuperMonomial, Scalar]]:
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"SuperPolynomial({format_polynomial(self)!r})"


def _sort_key(m: SuperMonomial):
    return (m.even_degree + m.odd_degree, m.evens, [b for b in _bits(m.big)], [s for s in _bits(m.small)])


def _accumulate(out: dict, key, c: Scalar) -> None:
    s = out.get(key)
    if s is None:
        out[key] = c
    else:
        s = s + c
        if s:
            out[key] = s
        else:
            del out[key]


def _coerce_poly(x) -> SuperPolynomial | None:
    if isinstance(x, SuperPolynomial):
        return x
    if isinstance(x, (int, Scalar)) or isinstance(x, Fraction):
        return SuperPolynomial.const(x)
    return None


def poly_add(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a + b


def poly_mul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a * b


def parity(p: SuperPolynomial):
    """0 or 1 for homogeneous ``p``, :data:`MIXED` otherwise; zero has parity 0."""
    seen = {m.parity for m in p._terms}
    if not seen:
        return 0
    if len(seen) == 2:
        return MIXED
    return seen.pop()


def _odd_position(m: SuperMonomial, v: VariableId) -> tuple[int, int, SuperMonomial] | None:
    """Return (factors before v, factors after v, monomial without v), or None."""
    bit = 1 << (v.index - 1)
    nb, ns = m.big.bit_count(), m.small.bit_count()
    if v.family == Family.THETA_BIG:
        if not m.big & bit:
            return None
        before = (m.big & (bit - 1)).bit_count()
        rest = SuperMonomial(m.evens, m.big ^ bit, m.small)
    else:
        if not m.small & bit:
            return None
        before = nb + (m.small & (bit - 1)).bit_count()
        rest = SuperMonomial(m.evens, m.big, m.small ^ bit)
    return before, nb + ns - before - 1, rest


def _require_odd(v: VariableId) -> None:
    if not v.is_odd:
        raise ValueError(f"{v} is an even variable; use deriv_even")


def left_deriv_odd(p: SuperPolynomial, v: VariableId) -> SuperPolynomial:
    """Left Grassmann derivative: moving ``v`` to the front costs one sign per factor passed."""
    _require_odd(v)
    out: dict[SuperMonomial, Scalar] = {}
    for m, c in p._terms.items():
        hit = _odd_position(m, v)
        if hit is None:
            continue
        before, _, rest = hit
        _accumulate(out, rest, -c if before & 1 else c)
    return SuperPolynomial._raw(out)


def right_deriv_odd(p: SuperPolynomial, v: VariableId) -> SuperPolynomial:
    """Right Grassmann derivative: ``v`` is moved to the back instead."""
    _require_odd(v)
    out: dict[SuperMonomial, Scalar] = {}
    for m, c in p._terms.items():
        hit = _odd_position(m, v)
        if hit is None:
            continue
        _, after, rest = hit
        _accumulate(out, rest, -c if after & 1 else c)
    return SuperPolynomial._raw(out)


def deriv_even(p: SuperPolynomial, v: VariableId) -> SuperPolynomial:
    if v.is_odd:
        raise ValueError(f"{v} is an odd variable; use left_deriv_odd or right_deriv_odd")
    key = (int(v.family), v.index)
    out: dict[SuperMonomial, Scalar] = {}
    for m, c in p._terms.items():
        evens = dict(m.evens)
        e = evens.get(key)
        if not e:
            continue
        if e == 1:
            del evens[key]
        else:
            evens[key] = e - 1
        _accumulate(out, SuperMonomial(tuple(sorted(evens.items())), m.big, m.small), c * e)
    return SuperPolynomial._raw(out)


def Theta(i: int) -> SuperPolynomial:
    return SuperPolynomial.var(Family.THETA_BIG, i)


def theta(i: int) -> SuperPolynomial:
    return SuperPolynomial.var(Family.THETA_SMALL, i)


def q(i: int) -> SuperPolynomial:
    return SuperPolynomial.var(Family.Q, i)


def p(i: int) -> SuperPolynomial:
    return SuperPolynomial.var(Family.P, i)


def X(i: int) -> SuperPolynomial:
    return SuperPolynomial.var(Family.X, i)


def theta_monomial(mask: int) -> SuperPolynomial:
    """The canonical product of the ``Theta`` variables whose bits are set in ``mask``."""
    return SuperPolynomial._raw({SuperMonomial((), mask, 0): ONE})


def theta_basis(n: int) -> list[SuperPolynomial]:
    return [theta_monomial(mask) for mask in range(1 << n)]


def _format_coeff(c: Scalar, bare: bool) -> tuple[str, str]:
    """Split a coefficient into (sign, magnitude text); magnitude is '' for a unit."""
    text = format_scalar(c)
    if c.n_components() == 1:
        neg = text.startswith("-")
        mag = text[1:] if neg else text
        if mag == "1" and not bare:
            mag = ""
        return ("-" if neg else "+"), mag
    return "+", f"({text})"


def format_polynomial(p: SuperPolynomial) -> str:
    """Text form parseable by :func:`oddpoisson.parsing.parse_expression`."""
    if not p._terms:
        return "0"
    pieces = []
    for m, c in p.sorted_terms():
        names = [str(v) for v in m.factors()]
        sign, mag = _format_coeff(c, bare=not names)
        body = "*".join(([mag] if mag else []) + names)
        if not pieces:
            pieces.append(("-" if sign == "-" else "") + body)
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)


PolyLike = Union[SuperPolynomial, Scalar, int]
