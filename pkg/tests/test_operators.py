import math
import random
from fractions import Fraction

import pytest

from oddpoisson.liealg import catalog, is_antisymmetric, killing, validate
from oddpoisson.operators import (
    GrassmannOperator as Op,
    OperatorError,
    action_matrix,
    apply,
    commutator,
    compose,
    extensionally_equal,
    graded_bracket,
    ratio,
)
from oddpoisson.parsing import parse_expression as P
from oddpoisson.scalars import SQRT2, SQRT6, Scalar
from oddpoisson.superalgebra import (
    Aux,
    Which,
    build_auxiliary,
    build_brst,
    build_delta,
    build_deltas,
    build_generators,
)
from oddpoisson.superpoly import MIXED, Family, SuperPolynomial, Theta, VariableId, left_deriv_odd, theta_basis, theta_monomial


def naive_apply(op, poly):
    """Oracle: for each term apply the derivatives right to left, then multiply by the T prefix."""
    out = SuperPolynomial.zero()
    for (t, d), c in op.items():
        cur = poly
        for j in reversed([j for j in range(op.dim) if d >> j & 1]):
            cur = left_deriv_odd(cur, VariableId(Family.THETA_BIG, j + 1))
        out = out + (theta_monomial(t) * cur).scale(c)
    return out


def random_operator(rng, n, terms=4):
    out = Op.zero(n)
    for _ in range(terms):
        t = rng.sample(range(n), rng.randint(0, min(3, n)))
        d = rng.sample(range(n), rng.randint(0, min(3, n)))
        c = Scalar(Fraction(rng.randint(-6, 6), rng.randint(1, 5)), rng.choice([0, 0, 1]))
        out = out + Op.from_factors(n, c, t, d)
    return out


def T(n, i):
    return Op.theta(n, i - 1)


def d(n, i):
    return Op.deriv(n, i - 1)


class TestExamples:
    def test_canonical_anticommutation(self):
        assert compose(d(3, 1), T(3, 1)) == Op.identity(3) - compose(T(3, 1), d(3, 1))
        assert str(compose(d(3, 1), T(3, 1))) == "1 - T1*dT1"
        assert compose(d(3, 1), T(3, 2)) == -compose(T(3, 2), d(3, 1))
        assert graded_bracket(d(3, 1), T(3, 1)) == Op.identity(3)

    def test_dilatation_commutator(self, algebras):
        D = build_auxiliary(algebras["so3"], None, Aux.D)
        assert graded_bracket(D, T(3, 1)) == T(3, 1)
        assert apply(D, P("T1*T2")) == P("2*T1*T2")

    def test_delta_actions(self, algebras):
        so3 = algebras["so3"]
        assert apply(build_delta(so3, None, Which.MINUS3), P("T1")).is_zero()
        assert apply(build_delta(so3, None, Which.MINUS1), P("T1*T2")) == Theta(3).scale(-SQRT2)

    def test_minus1_hand_expansion(self, algebras):
        # (1/r2) T_g eps_abg d_a d_b (T1T2) with d1 d2 (T1T2) = -1 and d2 d1 (T1T2) = +1
        n = 3
        t12 = P("T1*T2")
        d12 = naive_apply(compose(d(n, 1), d(n, 2)), t12)
        d21 = naive_apply(compose(d(n, 2), d(n, 1)), t12)
        assert (d12, d21) == (P("-1"), P("1"))
        expected = (Theta(3) * (d12 - d21)).scale(SQRT2 / 2)
        assert apply(build_delta(algebras["so3"], None, Which.MINUS1), t12) == expected

    def test_plus3_so3(self, algebras):
        op = build_delta(algebras["so3"], None, Which.PLUS3)
        assert op == Op.multiplication(3, P("T1*T2*T3")).scale(SQRT6 / 4)
        assert op.derivative_order() == 0

    def test_zero_algebra(self):
        z = catalog("zero(3)")
        for w in (Which.MINUS1, Which.MINUS3):
            assert build_delta(z, None, w).is_zero()
        assert all(s.is_zero() for s in build_generators(z))

    def test_heisenberg(self):
        h = catalog("heisenberg")
        assert not build_delta(h, None, Which.MINUS1).is_zero()
        assert build_delta(h, None, Which.MINUS1).derivative_order() == 2
        with pytest.raises(Exception) as info:
            build_delta(h, None, Which.PLUS1)
        assert "inverse" in str(info.value).lower() or "degenerate" in str(info.value).lower()

    def test_so3_generators(self, algebras):
        s = build_generators(algebras["so3"])
        assert s[0] == compose(T(3, 3), d(3, 2)) - compose(T(3, 2), d(3, 3))
        assert commutator(s[0], s[1]) == s[2]
        assert extensionally_equal(commutator(s[0], s[1]), s[2])


class TestEngine:
    def test_apply_matches_naive_oracle(self):
        rng = random.Random(1)
        for _ in range(50):
            op = random_operator(rng, 4)
            for m in theta_basis(4):
                assert apply(op, m) == naive_apply(op, m)

    @pytest.mark.parametrize("name", ["so3", "sl2", "sl3", "so5"])
    def test_extensional_compose(self, name, algebras):
        n = algebras[name].dim
        rng = random.Random(name)
        masks = range(1 << n)
        for _ in range(100):
            a, b = random_operator(rng, n), random_operator(rng, n)
            ab = compose(a, b)
            for m in masks:
                mono = theta_monomial(m)
                assert apply(ab, mono) == apply(a, apply(b, mono))

    def test_normal_form_from_action(self):
        rng = random.Random(2)
        for _ in range(50):
            op = random_operator(rng, 4, terms=6)
            assert Op.from_action(4, op.apply) == op

    @pytest.mark.parametrize("name", ["so3", "sl2", "sl3"])
    def test_built_operators_have_unique_normal_form(self, name, algebras):
        sc = algebras[name]
        km = killing(sc)
        ops = list(build_deltas(sc, km).values()) + build_generators(sc)
        ops += [build_auxiliary(sc, km, a) for a in Aux]
        for op in ops:
            assert Op.from_action(sc.dim, op.apply) == op

    def test_dimension_mismatch(self):
        with pytest.raises(OperatorError):
            compose(Op.identity(2), Op.identity(3))
        with pytest.raises(OperatorError):
            Op(2, {(0b100, 0): 1})

    def test_mixed_parity_rejected(self):
        mixed = Op.identity(2) + T(2, 1)
        assert mixed.parity() == MIXED
        with pytest.raises(OperatorError):
            graded_bracket(mixed, T(2, 2))

    def test_ratio(self):
        a = T(3, 1)
        assert ratio(a.scale(SQRT2), a) == SQRT2
        assert ratio(a + T(3, 2), a) is None
        with pytest.raises(OperatorError):
            ratio(a, Op.zero(3))


class TestStructure:
    @pytest.mark.parametrize("name", ["so3", "sl2", "sl3", "so5"])
    def test_parity_bookkeeping(self, name, algebras):
        sc = algebras[name]
        km = killing(sc)
        assert all(op.parity() == 1 for op in build_deltas(sc, km).values())
        for a in (Aux.D, Aux.K, Aux.Z, Aux.N_CONST):
            assert build_auxiliary(sc, km, a).parity() == 0
        assert all(s.parity() == 0 for s in build_generators(sc))

    @pytest.mark.parametrize("n", [3, 8])
    def test_dilatation_spectrum(self, n):
        D = build_auxiliary(catalog(f"zero({n})"), None, Aux.D)
        counts = {}
        for m in range(1 << n):
            mono = theta_monomial(m)
            image = apply(D, mono)
            k = next((k for k in range(n + 1) if image == mono.scale(k)), None)
            assert k is not None
            counts[k] = counts.get(k, 0) + 1
        assert counts == {k: math.comb(n, k) for k in range(n + 1)}

    def test_dilatation_literal_metric(self, algebras):
        # T^a d/dT^a with T^a = g^{ab} T_b and d/dT^a = g_ac d/dT_c, contracted without simplification
        for name in ("so3", "sl2"):
            sc = algebras[name]
            km = killing(sc)
            n = sc.dim
            lit = Op.zero(n)
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        coeff = km.g_inv[a][b] * km.g[a][c]
                        if coeff:
                            lit = lit + Op.from_factors(n, coeff, [b], [c])
            assert lit == build_auxiliary(sc, km, Aux.D)

    def test_non_jacobi_control(self):
        # so3 with [e1, e2] gaining an e1 component: antisymmetric, Jacobi broken
        bad = catalog("so3").with_entry((0, 1, 0), 1)
        assert is_antisymmetric(bad) and not validate(bad).ok
        m1 = build_delta(bad, None, Which.MINUS1)
        assert compose(m1, m1) == Op.from_factors(3, 2, [1], [0, 1, 2])

    def test_cubic_nilpotency_without_jacobi(self):
        # any totally antisymmetric lowered tensor gives nilpotent cubic operators
        rng = random.Random(4)
        n = 5
        for _ in range(5):
            op_up = Op.zero(n)
            op_down = Op.zero(n)
            for _ in range(4):
                idx = rng.sample(range(n), 3)
                c = rng.randint(-3, 3)
                op_up = op_up + Op.from_factors(n, c, idx, [])
                op_down = op_down + Op.from_factors(n, c, [], idx)
            assert compose(op_up, op_up).is_zero()
            assert compose(op_down, op_down).is_zero()

    @pytest.mark.parametrize("name", ["so3", "sl2"])
    def test_brst_without_generators(self, name, algebras):
        sc = algebras[name]
        q = build_brst(sc, None, [Op.zero(sc.dim)] * sc.dim)
        assert q == build_delta(sc, None, Which.PLUS1).scale(-SQRT2 / 2)

    def test_brst_length_mismatch(self, algebras):
        with pytest.raises(OperatorError):
            build_brst(algebras["so3"], None, [Op.zero(3)])

    def test_auxiliary_needs_metric(self):
        with pytest.raises(Exception):
            build_auxiliary(catalog("zero(3)"), None, Aux.Z)
        assert build_auxiliary(catalog("zero(3)"), None, Aux.N_CONST) == Op.identity(3, 3)

    def test_json(self):
        op = T(2, 1) - compose(T(2, 2), d(2, 1)).scale(SQRT2)
        assert op.to_json() == [
            {"theta": [1], "deriv": [], "coeff": "1"},
            {"theta": [2], "deriv": [1], "coeff": "-r2"},
        ]
        assert len(action_matrix(op)) == 4
