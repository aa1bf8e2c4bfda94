"""The Delta-operators of the linear odd bracket and the Lie superalgebra they span.

Upper-index quantities are expanded at build time through the Killing metric::

    T^a = g^{ab} T_b,        d/dT^a = g_{ab} d/dT_b

so every operator is stored on the lowered variables only.  Algebra indices
are 0-based.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from enum import Enum

from .liealg import (
    KillingMetric,
    StructureConstants,
    StructureConstantsError,
    is_antisymmetric,
    killing,
    raised_structure,
    validate,
)
from .operators import (
    GrassmannOperator,
    OperatorError,
    anticommutator,
    apply,
    commutator,
    compose,
    graded_bracket,
    ratio,
)
from .reports import FAIL, PASS, CheckResult, Report, check
from .scalars import ONE, SQRT2, SQRT6, ZERO, Scalar
from .superpoly import SuperMonomial, SuperPolynomial, theta_monomial

INV_SQRT2 = SQRT2 / 2
INV_SQRT6 = SQRT6 / 6
HALF = Scalar(1, 0, 0, 0) / 2


class Which(Enum):
    PLUS3 = 3
    PLUS1 = 1
    MINUS1 = -1
    MINUS3 = -3

    @property
    def label(self) -> str:
        return f"Delta{self.value:+d}"


LAMBDAS = (Which.MINUS3, Which.MINUS1, Which.PLUS1, Which.PLUS3)


class Aux(Enum):
    D = "D"
    K = "K"
    Z = "Z"
    N_CONST = "N"


class NotDegenerateError(ValueError):
    """verify_degenerate was given an algebra whose Killing metric is invertible."""


class _Builder:
    """Accumulates ``coeff * T_{i..} d_{j..}`` terms given in arbitrary factor order."""

    def __init__(self, dim: int):
        self.dim = dim
        self.terms: dict[tuple[int, int], Scalar] = defaultdict(lambda: ZERO)

    def add(self, coeff: Scalar, thetas, derivs) -> None:
        if not coeff:
            return
        for key, c in GrassmannOperator.from_factors(self.dim, coeff, thetas, derivs).items():
            self.terms[key] = self.terms[key] + c

    def build(self, scale: Scalar = ONE) -> GrassmannOperator:
        return GrassmannOperator(self.dim, {k: v * scale for k, v in self.terms.items()})


def _metric(sc: StructureConstants, km: KillingMetric | None) -> KillingMetric:
    return km if km is not None else killing(sc)


def _raise_pair(ginv, n: int, tensor: dict) -> dict:
    """Raise the first two indices of a sparse 3-tensor: ``sum g^{ax} g^{by} t[x, y, c]``."""
    out: dict[tuple[int, int, int], Scalar] = defaultdict(lambda: ZERO)
    for (x, y, c), v in tensor.items():
        for a in range(n):
            if not ginv[a][x]:
                continue
            gav = ginv[a][x] * v
            for b in range(n):
                if ginv[b][y]:
                    out[a, b, c] = out[a, b, c] + gav * ginv[b][y]
    return {k: v for k, v in out.items() if v}


def build_delta(sc: StructureConstants, km: KillingMetric | None, which: Which | int) -> GrassmannOperator:
    which = Which(which) if not isinstance(which, Which) else which
    n = sc.dim
    km = _metric(sc, km)
    b = _Builder(n)
    if which == Which.PLUS3:
        # (1/sqrt6) T^a T^b T^c c_{abc} = (1/sqrt6) c^{abc} T_a T_b T_c
        km.require_inverse("Delta+3")
        for (x, y, z), v in raised_structure(km).items():
            b.add(v, (x, y, z), ())
        return b.build(INV_SQRT6)
    if which == Which.PLUS1:
        # (1/sqrt2) T^a T^b c_ab^g d/dT^g, with c_ab^g g_{gd} = c_{abd}
        ginv = km.require_inverse("Delta+1")
        for (x, y, d), v in _raise_pair(ginv, n, km.c_low).items():
            b.add(v, (x, y), (d,))
        return b.build(INV_SQRT2)
    if which == Which.MINUS1:
        for (a, bb, g), v in sc.items():
            b.add(v, (g,), (a, bb))
        return b.build(INV_SQRT2)
    for (x, y, z), v in km.c_low.items():
        b.add(v, (), (x, y, z))
    return b.build(INV_SQRT6)


def build_deltas(sc: StructureConstants, km: KillingMetric | None = None) -> dict[Which, GrassmannOperator]:
    km = _metric(sc, km)
    return {w: build_delta(sc, km, w) for w in LAMBDAS}


def build_generators(sc: StructureConstants) -> list[GrassmannOperator]:
    """``S_a = T_g c_ab^g d/dT_b``."""
    out = []
    for a in range(sc.dim):
        b = _Builder(sc.dim)
        for bb in range(sc.dim):
            for g, v in sc.row(a, bb).items():
                b.add(v, (g,), (bb,))
        out.append(b.build())
    return out


def build_auxiliary(sc: StructureConstants, km: KillingMetric | None, which: Aux | str) -> GrassmannOperator:
    which = Aux(which) if not isinstance(which, Aux) else which
    n = sc.dim
    if which == Aux.N_CONST:
        return GrassmannOperator.identity(n, n)
    if which == Aux.D:
        # T^a d/dT^a = g^{ab} g_{ac} T_b d/dT_c, and g^{ab} g_{ac} = delta_bc
        return GrassmannOperator(n, {(1 << i, 1 << i): ONE for i in range(n)})
    km = _metric(sc, km)
    ginv = km.require_inverse(f"operator {which.value}")
    if which == Aux.K:
        # (1/2) T^a T^b c_ab^l c_{l c d} d_c d_d
        raised = _raise_pair(ginv, n, {k: v for k, v in sc.items()})
        low_by_first: dict[int, list] = defaultdict(list)
        for (l, c, d), v in km.c_low.items():
            low_by_first[l].append((c, d, v))
        b = _Builder(n)
        for (x, y, l), v in raised.items():
            for c, d, w in low_by_first.get(l, ()):
                b.add(v * w, (x, y), (c, d))
        return b.build(HALF)
    return build_auxiliary(sc, km, Aux.D) - build_auxiliary(sc, km, Aux.K)


def build_brst(
    sc: StructureConstants, km: KillingMetric | None, generators: list[GrassmannOperator]
) -> GrassmannOperator:
    """``Q = T^a G_a - (1/2) T^a T^b c_ab^g d/dT^g`` for the supplied ``G_a``."""
    n = sc.dim
    if len(generators) != n:
        raise OperatorError(f"BRST charge needs {n} generators, got {len(generators)}")
    km = _metric(sc, km)
    ginv = km.require_inverse("the BRST charge")
    q = GrassmannOperator.zero(n)
    for a, g_a in enumerate(generators):
        if g_a.dim != n:
            raise OperatorError(f"generator {a + 1} acts on {g_a.dim} variables, expected {n}")
        for x in range(n):
            if ginv[a][x]:
                q = q + compose(GrassmannOperator.theta(n, x), g_a).scale(ginv[a][x])
    b = _Builder(n)
    for (x, y, d), v in _raise_pair(ginv, n, km.c_low).items():
        b.add(v, (x, y), (d,))
    return q - b.build(HALF)


def brst_constant(sc: StructureConstants, km: KillingMetric | None = None) -> tuple[Scalar | None, GrassmannOperator]:
    """Build ``Q`` with ``G_a = S_a`` and divide it by Delta+1 in normal form."""
    km = _metric(sc, km)
    q = build_brst(sc, km, build_generators(sc))
    return ratio(q, build_delta(sc, km, Which.PLUS1)), q


# ---------------------------------------------------------------- contraction identities


def _jacobi_pieces(sc: StructureConstants):
    """``(c_ab^l c_lg^d, c_ga^l c_lb^d)`` as sparse maps over ``(a, b, g, d)``."""
    n = sc.dim
    first: dict = defaultdict(lambda: ZERO)
    for (a, b, l), v in sc.items():
        for g in range(n):
            for d, w in sc.row(l, g).items():
                first[a, b, g, d] = first[a, b, g, d] + v * w
    second: dict = defaultdict(lambda: ZERO)
    for (g, a, l), v in sc.items():
        for b in range(n):
            for d, w in sc.row(l, b).items():
                second[a, b, g, d] = second[a, b, g, d] + v * w
    return first, second


def contraction_identities(sc: StructureConstants, km: KillingMetric | None = None) -> dict[str, list]:
    """Evaluate the four contracted Jacobi identities; each list entry should be zero.

    ``raised_pair``/``raised_triple`` contract with raised ``T^a`` and yield
    polynomials, one per free index tuple; ``deriv_pair``/``deriv_triple``
    contract with derivatives and yield operators.
    """
    n = sc.dim
    km = _metric(sc, km)
    ginv = km.require_inverse("the contraction identities")
    first, second = _jacobi_pieces(sc)
    two = Scalar(2)
    # raised variables T^a = g^{ax} T_x
    ta = [
        SuperPolynomial({SuperMonomial((), 1 << x, 0): ginv[a][x] for x in range(n) if ginv[a][x]})
        for a in range(n)
    ]
    out = {"raised_pair": [], "raised_triple": [], "deriv_pair": [], "deriv_triple": []}
    for g, d in itertools.product(range(n), repeat=2):
        poly = SuperPolynomial.zero()
        op = _Builder(n)
        for a, b in itertools.product(range(n), repeat=2):
            coef = first.get((a, b, g, d), ZERO) + two * second.get((a, b, g, d), ZERO)
            if coef:
                poly = poly + (ta[a] * ta[b]).scale(coef)
                op.add(coef, (), (a, b))
        out["raised_pair"].append(((g, d), poly))
        out["deriv_pair"].append(((g, d), op.build()))
    for d in range(n):
        poly = SuperPolynomial.zero()
        op = _Builder(n)
        for (a, b, g, dd), v in first.items():
            if dd != d or not v:
                continue
            poly = poly + (ta[a] * ta[b] * ta[g]).scale(v)
            op.add(v, (), (a, b, g))
        out["raised_triple"].append(((d,), poly))
        out["deriv_triple"].append(((d,), op.build()))
    return out


def check_contraction_identities(sc: StructureConstants, km: KillingMetric | None = None) -> CheckResult:
    for label, entries in contraction_identities(sc, km).items():
        for idx, value in entries:
            if value:
                return CheckResult(
                    "contraction_identities", FAIL, {"identity": label, "indices": [i + 1 for i in idx], "value": str(value)}
                )
    return CheckResult("contraction_identities", PASS)


# ---------------------------------------------------------------- checks


def _first_failure(name: str, pairs) -> CheckResult:
    """``pairs`` yields ``(label, difference)``; the first nonzero difference is the witness."""
    for label, diff in pairs:
        if diff:
            return CheckResult(name, FAIL, {"case": label, "difference": str(diff)})
    return CheckResult(name, PASS)


def check_lie_relations(sc: StructureConstants, gens: list[GrassmannOperator] | None = None) -> CheckResult:
    """``[S_a, S_b] = c_ab^g S_g``."""
    gens = gens or build_generators(sc)
    n = sc.dim

    def cases():
        for a in range(n):
            for b in range(a + 1, n):
                rhs = GrassmannOperator.zero(n)
                for g, v in sc.row(a, b).items():
                    rhs = rhs + gens[g].scale(v)
                yield f"[S{a + 1},S{b + 1}]", commutator(gens[a], gens[b]) - rhs

    return _first_failure("lie_relations", cases())


def check_casimir_invariance(sc: StructureConstants, km: KillingMetric | None = None) -> CheckResult:
    """``S_a Delta+3 = 0`` with Delta+3 read as a polynomial."""
    km = _metric(sc, km)
    d3 = build_delta(sc, km, Which.PLUS3)
    poly = SuperPolynomial({SuperMonomial((), t, 0): c for (t, _), c in d3.items()})
    gens = build_generators(sc)
    return _first_failure("casimir_invariance", ((f"S{a + 1}", apply(s, poly)) for a, s in enumerate(gens)))


def check_divergence(sc: StructureConstants, km: KillingMetric | None = None, extensional: bool = True) -> CheckResult:
    """``d/dT_a (S_a A) = -sqrt2 Delta-1 A`` as operators and, optionally, on every basis monomial."""
    n = sc.dim
    km = _metric(sc, km)
    gens = build_generators(sc)
    div = GrassmannOperator.zero(n)
    for a, s in enumerate(gens):
        div = div + compose(GrassmannOperator.deriv(n, a), s)
    target = build_delta(sc, km, Which.MINUS1).scale(-SQRT2)
    if div != target:
        return CheckResult("divergence", FAIL, {"case": "operator", "difference": str(div - target)})
    if extensional:
        for m in range(1 << n):
            mono = theta_monomial(m)
            lhs = SuperPolynomial.zero()
            for a, s in enumerate(gens):
                lhs = lhs + apply(GrassmannOperator.deriv(n, a), apply(s, mono))
            rhs = apply(target, mono)
            if lhs != rhs:
                return CheckResult("divergence", FAIL, {"case": str(mono), "difference": str(lhs - rhs)})
    return CheckResult("divergence", PASS)


def check_brst(sc: StructureConstants, km: KillingMetric | None = None) -> CheckResult:
    k, q = brst_constant(sc, km)
    if k is None:
        return CheckResult("brst", FAIL, {"reason": "Q is not a scalar multiple of Delta+1", "Q": str(q)})
    sq = compose(q, q)
    if sq:
        return CheckResult("brst", FAIL, {"reason": "Q^2 != 0", "Q^2": str(sq)}, {"constant": str(k)})
    return CheckResult("brst", PASS, details={"constant": str(k)})


def verify_superalgebra(sc: StructureConstants, km: KillingMetric | None = None) -> Report:
    """Run the eleven superalgebra checks as exact normal-form identities."""
    km = _metric(sc, km)
    km.require_inverse("the superalgebra verification")
    n = sc.dim
    deltas = build_deltas(sc, km)
    D = build_auxiliary(sc, km, Aux.D)
    Z = build_auxiliary(sc, km, Aux.Z)
    NC = build_auxiliary(sc, km, Aux.N_CONST)
    gens = build_generators(sc)
    ginv = km.g_inv
    rep = Report("superalgebra", info={"dim": n, "algebra": sc.name})

    rep.add(check_contraction_identities(sc, km))
    rep.add(_first_failure("nilpotency", ((w.label, compose(op, op)) for w, op in deltas.items())))
    rep.add(check("anticommutator_minus1_plus1", anticommutator(deltas[Which.MINUS1], deltas[Which.PLUS1]) - Z))
    rep.add(check(
        "anticommutator_minus3_plus3",
        anticommutator(deltas[Which.MINUS3], deltas[Which.PLUS3]) - (NC - Z.scale(3)),
    ))
    rep.add(_first_failure("z_central", ((w.label, commutator(Z, op)) for w, op in deltas.items())))
    rep.add(_first_failure(
        "dilatation_grading", ((w.label, commutator(D, op) - op.scale(w.value)) for w, op in deltas.items())
    ))
    rep.add(check("z_commutes_with_d", commutator(Z, D)))

    def invariance():
        for a, s in enumerate(gens):
            for w, op in deltas.items():
                yield f"[S{a + 1},{w.label}]", graded_bracket(s, op)
            yield f"[S{a + 1},Z]", commutator(s, Z)
            yield f"[S{a + 1},D]", commutator(s, D)

    rep.add(_first_failure("s_invariance", invariance()))

    casimir = GrassmannOperator.zero(n)
    for a in range(n):
        for b in range(n):
            if ginv[a][b]:
                casimir = casimir + compose(gens[a], gens[b]).scale(ginv[a][b])
    rep.add(check("z_is_quadratic_casimir", casimir - Z))

    unlisted = []
    for i, wi in enumerate(LAMBDAS):
        for wj in LAMBDAS[i:]:
            if {wi, wj} in ({Which.MINUS1, Which.PLUS1}, {Which.MINUS3, Which.PLUS3}):
                continue
            unlisted.append((f"{{{wi.label},{wj.label}}}", anticommutator(deltas[wi], deltas[wj])))
    res = _first_failure("unlisted_anticommutators_vanish", unlisted)
    if not res.ok:
        res.details["finding"] = "an anticommutator outside the listed relations is nonzero"
    rep.add(res)

    rep.add(check_divergence(sc, km, extensional=n <= 8))
    return rep


def verify_degenerate(sc: StructureConstants) -> Report:
    """For a degenerate Killing metric: only Delta-1 and Delta-3 exist, and they anticommute."""
    km = killing(sc)
    if not km.degenerate:
        raise NotDegenerateError(
            f"{sc.name or 'algebra'} has an invertible Killing metric; use verify_superalgebra instead"
        )
    m1 = build_delta(sc, km, Which.MINUS1)
    m3 = build_delta(sc, km, Which.MINUS3)
    rep = Report("degenerate", info={
        "dim": sc.dim,
        "algebra": sc.name,
        "killing_rank": km.rank,
        "delta_minus1_zero": m1.is_zero(),
        "delta_minus3_zero": m3.is_zero(),
    })
    rep.add(check("nilpotency_minus1", compose(m1, m1)))
    rep.add(check("nilpotency_minus3", compose(m3, m3)))
    rep.add(check("anticommutator_minus1_minus3", anticommutator(m1, m3)))
    return rep


def compatibility_tensor(sc1: StructureConstants, sc2: StructureConstants) -> dict[tuple[int, int, int, int], Scalar]:
    """Nonzero entries of ``sum_cyc(abg) (c1_ab^l c2_lg^d + c2_ab^l c1_lg^d)``."""
    n = sc1.dim
    out: dict = defaultdict(lambda: ZERO)
    for a, b, g in itertools.product(range(n), repeat=3):
        for x, y, z in ((a, b, g), (b, g, a), (g, a, b)):
            for p, q in ((sc1, sc2), (sc2, sc1)):
                for l, v in p.row(x, y).items():
                    for d, w in q.row(l, z).items():
                        out[a, b, g, d] = out[a, b, g, d] + v * w
    return {k: v for k, v in out.items() if v}


def verify_compatibility(sc1: StructureConstants, sc2: StructureConstants) -> Report:
    """Compare the tensor compatibility condition with ``{Delta1-1, Delta2-1} = 0``.

    Both tables must be antisymmetric; the Jacobi identity is reported but not
    required, because the equivalence holds for any antisymmetric pair.
    """
    if sc1.dim != sc2.dim:
        raise StructureConstantsError(f"dimension mismatch: {sc1.dim} vs {sc2.dim}")
    for label, sc in (("first", sc1), ("second", sc2)):
        if not is_antisymmetric(sc):
            raise StructureConstantsError(f"{label} table is not antisymmetric in its lower indices")
    tensor = compatibility_tensor(sc1, sc2)
    anti = anticommutator(build_delta(sc1, None, Which.MINUS1), build_delta(sc2, None, Which.MINUS1))
    tensor_ok = not tensor
    op_ok = anti.is_zero()
    rep = Report("compatibility", info={
        "dim": sc1.dim,
        "algebras": [sc1.name, sc2.name],
        "jacobi_valid": [validate(sc1).ok, validate(sc2).ok],
        "compatible": tensor_ok,
        "anticommutator_zero": op_ok,
        "agree": tensor_ok == op_ok,
    })
    witness = None
    if tensor:
        k, v = min(tensor.items())
        witness = {"indices": [i + 1 for i in k], "value": str(v)}
    rep.add(CheckResult("tensor_condition", PASS if tensor_ok else FAIL, witness))
    rep.add(check("operator_anticommutator", anti))
    rep.add(CheckResult("verdicts_agree", PASS if tensor_ok == op_ok else FAIL))
    return rep


def find_incompatible_perturbation(sc: StructureConstants, step: int = 1) -> StructureConstants:
    """First single-entry antisymmetric perturbation of ``sc`` that breaks compatibility with ``sc``."""
    n = sc.dim
    for a in range(n):
        for b in range(a + 1, n):
            for g in range(n):
                cand = sc.with_entry((a, b, g), sc[a, b, g] + step)
                if compatibility_tensor(sc, cand):
                    return cand
    raise ValueError("no single-entry perturbation breaks compatibility")


def find_incompatible_partner(sc: StructureConstants) -> StructureConstants:
    """First single-entry Lie algebra ``[e_a, e_b] = e_g`` that is incompatible with ``sc``.

    Unlike :func:`find_incompatible_perturbation` the partner satisfies Jacobi.
    """
    n = sc.dim
    for a in range(n):
        for b in range(a + 1, n):
            for g in range(n):
                cand = StructureConstants.from_half(n, {(a, b, g): 1}, f"e{a + 1}e{b + 1}->e{g + 1}")
                if validate(cand).ok and compatibility_tensor(sc, cand):
                    return cand
    raise ValueError("every single-entry Lie algebra is compatible with the input")
