"""Canonical and linear Poisson brackets, even and odd, with axiom checkers.

All four brackets are evaluated from their derivative formulas::

    canonical even  {A,B} = A (<d_q d_p> - <d_p d_q>) B        on (q, p)
    canonical odd   {A,B} = A (<d_q d_th> - <d_th d_q>) B      on (q, theta)
    linear even     {A,B} = (d_X_a A) c_ab^g X_g (d_X_b B)
    linear odd      {A,B} = (A <-d_T_a) c_ab^g T_g (->d_T_b B)

so the generator relations are consequences that the tests confirm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .liealg import KillingMetric, StructureConstants, killing, validate
from .reports import PASS, FAIL, CheckResult, Report
from .scalars import Scalar
from .superpoly import (
    Family,
    SuperMonomial,
    SuperPolynomial,
    VariableId,
    deriv_even,
    left_deriv_odd,
    parity,
    right_deriv_odd,
)


class BracketError(ValueError):
    pass


class Tag(Enum):
    CANONICAL_EVEN = "canonical-even"
    CANONICAL_ODD = "canonical-odd"
    LINEAR_EVEN = "linear-even"
    LINEAR_ODD = "linear-odd"

    @property
    def shift(self) -> int:
        """Parity of the bracket itself: 1 for the odd brackets."""
        return 1 if self in (Tag.CANONICAL_ODD, Tag.LINEAR_ODD) else 0

    @property
    def linear(self) -> bool:
        return self in (Tag.LINEAR_EVEN, Tag.LINEAR_ODD)


ALLOWED = {
    Tag.CANONICAL_EVEN: {Family.Q, Family.P},
    Tag.CANONICAL_ODD: {Family.Q, Family.THETA_SMALL},
    Tag.LINEAR_EVEN: {Family.X},
    Tag.LINEAR_ODD: {Family.THETA_BIG},
}


@dataclass(frozen=True)
class BracketKind:
    """Which bracket, plus the structure constants for the linear ones.

    ``checked=False`` skips the Jacobi validation so that deliberately broken
    tables can be fed to the axiom checker as negative controls.
    """

    tag: Tag
    sc: StructureConstants | None = None
    dim: int | None = None
    checked: bool = True

    def __post_init__(self):
        if self.tag.linear:
            if self.sc is None:
                raise BracketError(f"{self.tag.value} bracket needs structure constants")
            if self.checked:
                report = validate(self.sc)
                if not report.ok:
                    raise BracketError(
                        f"structure constants fail validation ({report.total} violations); "
                        "pass checked=False for a deliberate negative control"
                    )

    @property
    def n(self) -> int | None:
        if self.sc is not None:
            return self.sc.dim
        return self.dim

    @classmethod
    def parse(cls, name: str, sc: StructureConstants | None = None, **kw) -> BracketKind:
        try:
            tag = Tag(name.lower().replace("_", "-"))
        except ValueError:
            raise BracketError(f"unknown bracket {name!r}; known: {', '.join(t.value for t in Tag)}") from None
        return cls(tag, sc if tag.linear else None, dim=None if tag.linear else (sc.dim if sc else None), **kw)


def _check_vars(kind: BracketKind, *polys: SuperPolynomial) -> None:
    allowed = ALLOWED[kind.tag]
    n = kind.n
    for poly in polys:
        for v in poly.variables():
            if v.family not in allowed:
                names = ", ".join(f.name for f in sorted(allowed))
                raise BracketError(f"{kind.tag.value} bracket does not accept variable {v}; allowed families: {names}")
            if n is not None and v.index > n:
                raise BracketError(f"variable {v} exceeds the dimension {n}")


def _structure_poly(sc: StructureConstants, a: int, b: int, family: Family) -> SuperPolynomial:
    return SuperPolynomial({_mono(family, g + 1): v for g, v in sc.row(a, b).items()})


def _mono(family: Family, index: int) -> SuperMonomial:
    if family == Family.THETA_BIG:
        return SuperMonomial((), 1 << (index - 1), 0)
    return SuperMonomial((((int(family), index), 1),), 0, 0)


def _linear(kind: BracketKind, a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    sc = kind.sc
    n = sc.dim
    if kind.tag == Tag.LINEAR_ODD:
        fam = Family.THETA_BIG
        da = [right_deriv_odd(a, VariableId(fam, i + 1)) for i in range(n)]
        db = [left_deriv_odd(b, VariableId(fam, i + 1)) for i in range(n)]
    else:
        fam = Family.X
        da = [deriv_even(a, VariableId(fam, i + 1)) for i in range(n)]
        db = [deriv_even(b, VariableId(fam, i + 1)) for i in range(n)]
    result = SuperPolynomial.zero()
    for al in range(n):
        if not da[al]:
            continue
        for be in range(n):
            if not db[be] or not sc.row(al, be):
                continue
            result = result + da[al] * _structure_poly(sc, al, be, fam) * db[be]
    return result


def _canonical(kind: BracketKind, a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    odd = kind.tag == Tag.CANONICAL_ODD
    n = kind.n or max(a.max_index(), b.max_index())
    result = SuperPolynomial.zero()
    for i in range(1, n + 1):
        qv = VariableId(Family.Q, i)
        if odd:
            mv = VariableId(Family.THETA_SMALL, i)
            first = deriv_even(a, qv) * left_deriv_odd(b, mv)
            second = right_deriv_odd(a, mv) * deriv_even(b, qv)
        else:
            mv = VariableId(Family.P, i)
            first = deriv_even(a, qv) * deriv_even(b, mv)
            second = deriv_even(a, mv) * deriv_even(b, qv)
        result = result + first - second
    return result


def bracket(kind: BracketKind, a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    _check_vars(kind, a, b)
    if kind.tag.linear:
        return _linear(kind, a, b)
    return _canonical(kind, a, b)


def linear_odd(sc: StructureConstants, **kw) -> BracketKind:
    return BracketKind(Tag.LINEAR_ODD, sc, **kw)


def linear_even(sc: StructureConstants, **kw) -> BracketKind:
    return BracketKind(Tag.LINEAR_EVEN, sc, **kw)


def canonical_odd(dim: int | None = None) -> BracketKind:
    return BracketKind(Tag.CANONICAL_ODD, dim=dim)


def canonical_even(dim: int | None = None) -> BracketKind:
    return BracketKind(Tag.CANONICAL_EVEN, dim=dim)


# ---------------------------------------------------------------- random inputs

MAX_EVEN_DEGREE = 3
MAX_TERMS = 3


def random_rational(rng: random.Random) -> Fraction:
    num = rng.choice([i for i in range(-16, 17) if i])
    return Fraction(num, rng.randint(1, 16))


def random_polynomial(kind: BracketKind, rng: random.Random, par: int, n: int) -> SuperPolynomial:
    """A random polynomial of definite parity ``par`` in the variables ``kind`` accepts."""
    tag = kind.tag
    terms: dict[SuperMonomial, Fraction] = {}
    for _ in range(rng.randint(1, MAX_TERMS)):
        evens: dict = {}
        big = small = 0
        if tag == Tag.LINEAR_ODD:
            degs = [d for d in range(n + 1) if d % 2 == par]
            big = _random_mask(rng, n, rng.choice(degs))
        elif tag == Tag.CANONICAL_ODD:
            degs = [d for d in range(n + 1) if d % 2 == par]
            small = _random_mask(rng, n, rng.choice(degs))
            for _ in range(rng.randint(0, MAX_EVEN_DEGREE)):
                key = (int(Family.Q), rng.randint(1, n))
                evens[key] = evens.get(key, 0) + 1
        else:
            fams = [Family.X] if tag == Tag.LINEAR_EVEN else [Family.Q, Family.P]
            for _ in range(rng.randint(0, MAX_EVEN_DEGREE)):
                key = (int(rng.choice(fams)), rng.randint(1, n))
                evens[key] = evens.get(key, 0) + 1
        mono = SuperMonomial(tuple(sorted(evens.items())), big, small)
        terms[mono] = terms.get(mono, Fraction(0)) + random_rational(rng)
    return SuperPolynomial(terms)


def _random_mask(rng: random.Random, n: int, k: int) -> int:
    mask = 0
    for i in rng.sample(range(n), k):
        mask |= 1 << i
    return mask


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


AXIOMS = ("bilinearity", "parity", "symmetry", "jacobi", "leibniz")


@dataclass
class AxiomResult:
    axiom: str
    samples: int
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "samples": self.samples, "failures": self.failures}


@dataclass
class AxiomReport:
    kind: str
    seed: int
    samples: int
    results: list[AxiomResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __getitem__(self, axiom: str) -> AxiomResult:
        return next(r for r in self.results if r.axiom == axiom)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "samples": self.samples,
            "status": PASS if self.ok else FAIL,
            "axioms": [r.to_json() for r in self.results],
        }


MAX_FAILURES_LISTED = 10


def check_axioms(kind: BracketKind, samples: int, seed: int = 0, n: int | None = None) -> AxiomReport:
    """Exactly check the five bracket axioms on ``samples`` seeded random homogeneous triples.

    Triple ``i`` is drawn from ``random.Random(f"{seed}:{i}")``, so any failing
    triple can be regenerated on its own.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n = n or kind.n or 3
    s = kind.tag.shift
    results = {ax: AxiomResult(ax, samples) for ax in AXIOMS}
    br = lambda x, y: bracket(kind, x, y)
    has_odd = any(f.parity for f in ALLOWED[kind.tag])

    def fail(ax, inputs, lhs, rhs):
        r = results[ax]
        if len(r.failures) < MAX_FAILURES_LISTED:
            r.failures.append({"inputs": [str(x) for x in inputs], "lhs": str(lhs), "rhs": str(rhs)})

    for i in range(samples):
        rng = random.Random(f"{seed}:{i}")
        if has_odd:
            ga, gb, gc = (rng.randint(0, 1) for _ in range(3))
        else:
            ga = gb = gc = 0
        A = random_polynomial(kind, rng, ga, n)
        B = random_polynomial(kind, rng, gb, n)
        C = random_polynomial(kind, rng, gc, n)
        k = Scalar(random_rational(rng), random_rational(rng))
        inputs = (A, B, C)

        AB, BC, CA, AC = br(A, B), br(B, C), br(C, A), br(A, C)

        lhs, rhs = br(A, B + C), AB + AC
        if lhs != rhs:
            fail("bilinearity", inputs, lhs, rhs)
        lhs, rhs = br(A, B.scale(k)), AB.scale(k)
        if lhs != rhs:
            fail("bilinearity", inputs, lhs, rhs)

        for x, y, val, gx, gy in ((A, B, AB, ga, gb), (B, C, BC, gb, gc), (C, A, CA, gc, ga)):
            got = parity(val)
            if val and got != (gx + gy + s) % 2:
                fail("parity", (x, y, C), got, (gx + gy + s) % 2)

        BA = br(B, A)
        rhs = BA.scale(-_sign((ga + s) * (gb + s)))
        if AB != rhs:
            fail("symmetry", inputs, AB, rhs)

        jac = (
            br(A, BC).scale(_sign((ga + s) * (gc + s)))
            + br(B, CA).scale(_sign((gb + s) * (ga + s)))
            + br(C, AB).scale(_sign((gc + s) * (gb + s)))
        )
        if jac:
            fail("jacobi", inputs, jac, 0)

        lhs = br(A, B * C)
        rhs = AB * C + (B * AC).scale(_sign((ga + s) * gb))
        if lhs != rhs:
            fail("leibniz", inputs, lhs, rhs)

    return AxiomReport(kind.tag.value, seed, samples, [results[ax] for ax in AXIOMS])


# ---------------------------------------------------------------- realizations


class Sector(Enum):
    EVEN = "even"
    ODD = "odd"


def bilinear_realization(kind: Sector | str, sc: StructureConstants) -> list[SuperPolynomial]:
    """``X_a = c_ab^g q^b p_g`` (EVEN) or ``T_a = c_ab^g q^b theta_g`` (ODD)."""
    kind = Sector(kind.value if isinstance(kind, Sector) else str(kind).lower())
    mom = Family.P if kind == Sector.EVEN else Family.THETA_SMALL
    out = []
    for a in range(sc.dim):
        terms: dict[SuperMonomial, Scalar] = {}
        for b in range(sc.dim):
            for g, v in sc.row(a, b).items():
                key = (((int(Family.Q), b + 1), 1),)
                if mom == Family.P:
                    key = tuple(sorted(key + (((int(Family.P), g + 1), 1),)))
                    mono = SuperMonomial(key, 0, 0)
                else:
                    mono = SuperMonomial(key, 0, 1 << g)
                terms[mono] = terms.get(mono, Scalar()) + v
        out.append(SuperPolynomial(terms))
    return out


def check_reduction(kind: Sector | str, sc: StructureConstants) -> CheckResult:
    """The canonical bracket of realized generators equals the realized linear bracket."""
    kind = Sector(kind.value if isinstance(kind, Sector) else str(kind).lower())
    gens = bilinear_realization(kind, sc)
    canon = canonical_even(sc.dim) if kind == Sector.EVEN else canonical_odd(sc.dim)
    for a in range(sc.dim):
        for b in range(sc.dim):
            lhs = bracket(canon, gens[a], gens[b])
            rhs = SuperPolynomial.zero()
            for g, v in sc.row(a, b).items():
                rhs = rhs + gens[g].scale(v)
            if lhs != rhs:
                return CheckResult(
                    f"reduction_{kind.value}", FAIL, {"pair": [a + 1, b + 1], "lhs": str(lhs), "rhs": str(rhs)}
                )
    return CheckResult(f"reduction_{kind.value}", PASS)


def check_generator_relation(sc: StructureConstants, checked: bool = True) -> CheckResult:
    """``{T_a, T_b}_1 = c_ab^g T_g`` for every pair."""
    kind = linear_odd(sc, checked=checked)
    for a in range(sc.dim):
        for b in range(sc.dim):
            ta = SuperPolynomial.var(Family.THETA_BIG, a + 1)
            tb = SuperPolynomial.var(Family.THETA_BIG, b + 1)
            lhs = bracket(kind, ta, tb)
            rhs = _structure_poly(sc, a, b, Family.THETA_BIG)
            if lhs != rhs:
                return CheckResult("generator_relation", FAIL, {"pair": [a + 1, b + 1], "lhs": str(lhs), "rhs": str(rhs)})
    return CheckResult("generator_relation", PASS)


def even_casimir(sc: StructureConstants, km: KillingMetric | None = None) -> SuperPolynomial:
    """``C = X_a X_b g^{ab}``."""
    km = km or killing(sc)
    ginv = km.require_inverse("the even Casimir")
    xs = [SuperPolynomial.var(Family.X, i + 1) for i in range(sc.dim)]
    out = SuperPolynomial.zero()
    for a in range(sc.dim):
        for b in range(sc.dim):
            if ginv[a][b]:
                out = out + (xs[a] * xs[b]).scale(ginv[a][b])
    return out


def check_casimir(sc: StructureConstants, km: KillingMetric | None = None) -> CheckResult:
    cas = even_casimir(sc, km)
    kind = linear_even(sc)
    for a in range(sc.dim):
        val = bracket(kind, SuperPolynomial.var(Family.X, a + 1), cas)
        if val:
            return CheckResult("even_casimir", FAIL, {"alpha": a + 1, "bracket": str(val)})
    return CheckResult("even_casimir", PASS, details={"casimir": str(cas)})


def bracket_report(sc: StructureConstants, samples: int, seed: int) -> Report:
    """Axiom suites for all four brackets plus the structural bracket identities."""
    rep = Report("bracket-axioms", info={"samples": samples, "seed": seed})
    kinds = [linear_odd(sc), linear_even(sc), canonical_even(sc.dim), canonical_odd(sc.dim)]
    for kind in kinds:
        ar = check_axioms(kind, samples, seed)
        for r in ar.results:
            rep.add(CheckResult(f"{kind.tag.value}:{r.axiom}", PASS if r.ok else FAIL, r.failures or None))
    rep.add(check_generator_relation(sc))
    rep.add(check_reduction(Sector.ODD, sc))
    rep.add(check_reduction(Sector.EVEN, sc))
    km = killing(sc)
    if not km.degenerate:
        rep.add(check_casimir(sc, km))
    return rep
