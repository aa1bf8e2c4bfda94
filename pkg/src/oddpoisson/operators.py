"""Normal-ordered differential operators on the Grassmann algebra of T_1..T_N.

A term ``(tmask, dmask) -> c`` stands for ``c * T^A d^B``: multiplication by
the ascending product of the ``T`` whose bits are in ``tmask``, to the left of
the ascending product of left derivatives ``d/dT`` whose bits are in
``dmask``.  The algebra generated by the ``T_i`` and ``d_i`` is the full
matrix algebra of the 2^N-dimensional Grassmann algebra, so every linear map
has exactly one normal form (see :meth:`GrassmannOperator.from_action`).
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .scalars import ONE, ZERO, Scalar, ScalarLike, format_scalar
from .superpoly import (
    MIXED,
    SuperMonomial,
    SuperPolynomial,
    _accumulate,
    _bits,
    merge_sign,
    theta_monomial,
)

Key = tuple[int, int]


class OperatorError(ValueError):
    pass


@lru_cache(maxsize=None)
def normal_order(dmask: int, tmask: int) -> tuple[tuple[int, int, int], ...]:
    """Normal-order ``d^B T^C`` into a tuple of ``(sign, theta_mask, deriv_mask)``.

    Uses ``d_b T^C = [b in C] (-1)^{#C below b} T^{C-b} + (-1)^{|C|} T^C d_b``,
    peeling derivatives off from the highest index (the one adjacent to T^C).
    """
    if not dmask:
        return ((1, tmask, 0),)
    b = dmask.bit_length() - 1
    bit = 1 << b
    rest = dmask ^ bit
    out: dict[tuple[int, int], int] = {}
    if tmask & bit:
        s = -1 if (tmask & (bit - 1)).bit_count() & 1 else 1
        for sign, t, d in normal_order(rest, tmask ^ bit):
            out[t, d] = out.get((t, d), 0) + s * sign
    s = -1 if tmask.bit_count() & 1 else 1
    for sign, t, d in normal_order(rest, tmask):
        # every index in d is below b, so appending d_b keeps ascending order
        out[t, d | bit] = out.get((t, d | bit), 0) + s * sign
    return tuple((v, t, d) for (t, d), v in out.items() if v)


@lru_cache(maxsize=None)
def _deriv_sign(dmask: int, mmask: int) -> int:
    """Sign of ``d^B T^M = sign * T^{M-B}`` when ``B`` is a subset of ``M``."""
    flips = 0
    for b in _bits(dmask):
        flips += (mmask & ((1 << b) - 1)).bit_count()
    return -1 if flips & 1 else 1


def _term_parity(key: Key) -> int:
    return (key[0].bit_count() + key[1].bit_count()) & 1


class GrassmannOperator:
    """Immutable operator in normal form on ``dim`` Grassmann generators."""

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Mapping[Key, ScalarLike] | None = None):
        limit = 1 << dim
        clean = {}
        for (t, d), c in (terms or {}).items():
            if t >= limit or d >= limit or t < 0 or d < 0:
                raise OperatorError(f"term ({t:b}, {d:b}) uses an index beyond dim={dim}")
            c = Scalar.coerce(c)
            if c:
                clean[t, d] = c
        self.dim = dim
        self._terms = clean

    @classmethod
    def _raw(cls, dim: int, terms: dict) -> GrassmannOperator:
        op = object.__new__(cls)
        op.dim = dim
        op._terms = terms
        return op

    # -- constructors

    @classmethod
    def zero(cls, dim: int) -> GrassmannOperator:
        return cls._raw(dim, {})

    @classmethod
    def identity(cls, dim: int, k: ScalarLike = 1) -> GrassmannOperator:
        return cls(dim, {(0, 0): k})

    @classmethod
    def theta(cls, dim: int, i: int) -> GrassmannOperator:
        """Left multiplication by ``T_{i+1}`` (0-based ``i``)."""
        return cls._raw(dim, {(1 << i, 0): ONE})

    @classmethod
    def deriv(cls, dim: int, i: int) -> GrassmannOperator:
        """Left derivative with respect to ``T_{i+1}`` (0-based ``i``)."""
        return cls._raw(dim, {(0, 1 << i): ONE})

    @classmethod
    def multiplication(cls, dim: int, poly: SuperPolynomial) -> GrassmannOperator:
        """Left multiplication by a polynomial in the ``T`` variables."""
        terms = {}
        for m, c in poly.items():
            if m.evens or m.small:
                raise OperatorError(f"multiplication operator needs a pure T polynomial, got {poly}")
            terms[m.big, 0] = c
        return cls(dim, terms)

    @classmethod
    def from_factors(cls, dim: int, coeff: ScalarLike, thetas: Iterable[int], derivs: Iterable[int]) -> GrassmannOperator:
        """``coeff * T_{i1} T_{i2} ... d_{j1} d_{j2} ...`` with factors in the given order."""
        sign, t = _ordered_mask(thetas)
        if not sign:
            return cls.zero(dim)
        s2, d = _ordered_mask(derivs)
        if not s2:
            return cls.zero(dim)
        return cls(dim, {(t, d): Scalar.coerce(coeff) * (sign * s2)})

    @classmethod
    def from_action(cls, dim: int, action: Callable[[SuperPolynomial], SuperPolynomial]) -> GrassmannOperator:
        """Recover the unique normal form of a linear map from its values on the basis.

        Basis monomials ``T^M`` are visited by increasing degree.  Only terms with
        ``B`` a subset of ``M`` act on ``T^M``, and the ``B = M`` terms are fixed by
        what remains after subtracting the already-known terms.
        """
        terms: dict[Key, Scalar] = {}
        order = sorted(range(1 << dim), key=lambda m: (m.bit_count(), m))
        by_deriv: dict[int, list[tuple[int, Scalar]]] = {}
        for mmask in order:
            target = dict(action(theta_monomial(mmask)).items())
            residual: dict[int, Scalar] = {}
            for m, c in target.items():
                if m.evens or m.small:
                    raise OperatorError("action left the Grassmann algebra of the T variables")
                residual[m.big] = c
            for dmask, entries in by_deriv.items():
                if dmask & ~mmask or dmask == mmask:
                    continue
                rest = mmask ^ dmask
                s = _deriv_sign(dmask, mmask)
                for tmask, c in entries:
                    if tmask & rest:
                        continue
                    sign = s * merge_sign(tmask, rest)
                    _accumulate(residual, tmask | rest, -c if sign > 0 else c)
            s = _deriv_sign(mmask, mmask)
            new = []
            for tmask, c in residual.items():
                c = c if s > 0 else -c
                terms[tmask, mmask] = c
                new.append((tmask, c))
            if new:
                by_deriv[mmask] = new
        return cls(dim, terms)

    # -- inspection

    @property
    def terms(self) -> dict[Key, Scalar]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def parity(self):
        seen = {_term_parity(k) for k in self._terms}
        if not seen:
            return 0
        if len(seen) == 2:
            return MIXED
        return seen.pop()

    def derivative_order(self) -> int:
        return max((d.bit_count() for _, d in self._terms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrassmannOperator):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self):
        return hash((self.dim, frozenset(self._terms.items())))

    # -- linear structure

    def _check_dim(self, other: GrassmannOperator) -> None:
        if not isinstance(other, GrassmannOperator):
            raise TypeError(f"expected GrassmannOperator, got {type(other).__name__}")
        if other.dim != self.dim:
            raise OperatorError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: GrassmannOperator) -> GrassmannOperator:
        self._check_dim(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(out, k, c)
        return GrassmannOperator._raw(self.dim, out)

    def __neg__(self) -> GrassmannOperator:
        return GrassmannOperator._raw(self.dim, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: GrassmannOperator) -> GrassmannOperator:
        return self + (-other)

    def scale(self, k: ScalarLike) -> GrassmannOperator:
        k = Scalar.coerce(k)
        if not k:
            return GrassmannOperator.zero(self.dim)
        return GrassmannOperator._raw(self.dim, {key: c * k for key, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, GrassmannOperator):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    __matmul__ = __mul__

    # -- action

    def apply(self, p: SuperPolynomial) -> SuperPolynomial:
        return apply(self, p)

    def __call__(self, p: SuperPolynomial) -> SuperPolynomial:
        return apply(self, p)

    # -- output

    def sorted_terms(self) -> list[tuple[Key, Scalar]]:
        return sorted(
            self._terms.items(),
            key=lambda kv: (kv[0][0].bit_count() + kv[0][1].bit_count(), list(_bits(kv[0][0])), list(_bits(kv[0][1]))),
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for (t, d), c in self.sorted_terms():
            names = [f"T{i + 1}" for i in _bits(t)] + [f"dT{i + 1}" for i in _bits(d)]
            text = format_scalar(c)
            if c.n_components() > 1:
                coef, neg = f"({text})", False
            else:
                neg = text.startswith("-")
                coef = text[1:] if neg else text
                if coef == "1" and names:
                    coef = ""
            body = "*".join(([coef] if coef else []) + names)
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"GrassmannOperator(dim={self.dim}, {self})"

    def to_json(self) -> list[dict]:
        return [
            {"theta": [i + 1 for i in _bits(t)], "deriv": [i + 1 for i in _bits(d)], "coeff": format_scalar(c)}
            for (t, d), c in self.sorted_terms()
        ]


def _ordered_mask(indices: Iterable[int]) -> tuple[int, int]:
    """Canonicalize an ordered product of anticommuting factors: ``(sign, mask)``."""
    mask, sign = 0, 1
    for i in indices:
        bit = 1 << i
        if mask & bit:
            return 0, 0
        if (mask >> (i + 1)).bit_count() & 1:
            sign = -sign
        mask |= bit
    return sign, mask


def apply(op: GrassmannOperator, p: SuperPolynomial) -> SuperPolynomial:
    """Apply ``op`` to a polynomial in ``T_1..T_dim``: derivatives first, then the T prefix."""
    limit = 1 << op.dim
    out: dict[SuperMonomial, Scalar] = {}
    for m, c in p.items():
        if m.evens or m.small or m.big >= limit:
            raise OperatorError(f"operator on {op.dim} generators cannot act on {SuperPolynomial({m: c})}")
        for (t, d), k in op._terms.items():
            if d & ~m.big:
                continue
            rest = m.big ^ d
            if t & rest:
                continue
            sign = _deriv_sign(d, m.big) * merge_sign(t, rest)
            v = k * c
            _accumulate(out, SuperMonomial((), t | rest, 0), v if sign > 0 else -v)
    return SuperPolynomial._raw(out)


def compose(a: GrassmannOperator, b: GrassmannOperator) -> GrassmannOperator:
    """Normal form of ``a`` followed-after ``b``, i.e. the product ``a b``."""
    a._check_dim(b)
    out: dict[Key, Scalar] = {}
    for (ta, da), ca in a._terms.items():
        for (tb, db), cb in b._terms.items():
            expansion = normal_order(da, tb)
            c = None
            for sign, t, d in expansion:
                if ta & t or d & db:
                    continue
                s = sign * merge_sign(ta, t) * merge_sign(d, db)
                if c is None:
                    c = ca * cb
                _accumulate(out, (ta | t, d | db), c if s > 0 else -c)
    return GrassmannOperator._raw(a.dim, out)


def graded_bracket(a: GrassmannOperator, b: GrassmannOperator) -> GrassmannOperator:
    """``ab - (-1)^{g(a)g(b)} ba``: anticommutator for two odd operators, commutator otherwise."""
    pa, pb = a.parity(), b.parity()
    if pa == MIXED or pb == MIXED:
        raise OperatorError("graded bracket needs operators of definite parity")
    ab, ba = compose(a, b), compose(b, a)
    return ab + ba if pa and pb else ab - ba


def commutator(a: GrassmannOperator, b: GrassmannOperator) -> GrassmannOperator:
    return compose(a, b) - compose(b, a)


def anticommutator(a: GrassmannOperator, b: GrassmannOperator) -> GrassmannOperator:
    return compose(a, b) + compose(b, a)


def ratio(a: GrassmannOperator, b: GrassmannOperator) -> Scalar | None:
    """The scalar ``k`` with ``a = k b``, or None if there is none (``b`` nonzero)."""
    a._check_dim(b)
    if not b:
        raise OperatorError("ratio by the zero operator")
    if set(a._terms) - set(b._terms):
        return None
    key, cb = next(iter(b._terms.items()))
    k = a._terms.get(key, ZERO) / cb
    return k if a == b.scale(k) else None


def action_matrix(op: GrassmannOperator) -> list[SuperPolynomial]:
    """Images of all 2^dim basis monomials (the extensional description of ``op``)."""
    return [apply(op, theta_monomial(m)) for m in range(1 << op.dim)]


def extensionally_equal(a: GrassmannOperator, b: GrassmannOperator, basis_masks: Iterable[int] | None = None) -> bool:
    a._check_dim(b)
    masks = range(1 << a.dim) if basis_masks is None else basis_masks
    return all(apply(a, theta_monomial(m)) == apply(b, theta_monomial(m)) for m in masks)
