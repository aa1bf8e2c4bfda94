import itertools
import json
from fractions import Fraction

import pytest

from oddpoisson import chevalley
from oddpoisson.liealg import (
    MAX_LISTED,
    DegenerateMetricError,
    StructureConstants,
    StructureConstantsError,
    UnknownAlgebraError,
    catalog,
    catalog_names,
    check_total_antisymmetry,
    dimension_invariant,
    killing,
    load_algebra,
    validate,
)
from oddpoisson.scalars import ONE, ZERO, Scalar


def dense(sc):
    n = sc.dim
    return [[[sc[a, b, c] for c in range(n)] for b in range(n)] for a in range(n)]


def killing_oracle(sc):
    """g_ab = sum over (g, l) of c_ag^l c_bl^g, by brute force over dense arrays."""
    c, n = dense(sc), sc.dim
    return [[sum((c[a][g][l] * c[b][l][g] for g in range(n) for l in range(n)), ZERO) for b in range(n)] for a in range(n)]


def dim_invariant_oracle(sc):
    """-c^{abc} c_{abc}, raising every index of the lowered tensor with the inverse metric."""
    km = killing(sc)
    n, gi, g, c = sc.dim, km.g_inv, killing_oracle(sc), dense(sc)
    low = {(a, b, e): sum((c[a][b][d] * g[d][e] for d in range(n)), ZERO) for a, b, e in itertools.product(range(n), repeat=3)}
    total = ZERO
    for a, b, e in itertools.product(range(n), repeat=3):
        if not low[a, b, e]:
            continue
        up = ZERO
        for x, y, z in itertools.product(range(n), repeat=3):
            if gi[a][x] and gi[b][y] and gi[e][z]:
                up = up + gi[a][x] * gi[b][y] * gi[e][z] * low[x, y, z]
        total = total + up * low[a, b, e]
    return -total


def eps(a, b, c):
    return Scalar((a - b) * (b - c) * (c - a) // 2)


class TestValidate:
    def test_so3_is_epsilon(self):
        so3 = catalog("so3")
        for a, b, c in itertools.product(range(3), repeat=3):
            assert so3[a, b, c] == eps(a, b, c)
        assert validate(so3).ok

    def test_sl2_exhaustive_jacobi(self):
        sl2 = catalog("sl2")
        c = dense(sl2)
        for a, b, g, d in itertools.product(range(3), repeat=4):
            r = sum(
                (c[a][l][d] * c[b][g][l] + c[b][l][d] * c[g][a][l] + c[g][l][d] * c[a][b][l] for l in range(3)),
                ZERO,
            )
            assert not r
        assert validate(sl2).ok
        # (e, f, h): [h, e] = 2e, [h, f] = -2f, [e, f] = h
        assert sl2[2, 0, 0] == Scalar(2) and sl2[2, 1, 1] == Scalar(-2) and sl2[0, 1, 2] == ONE

    def test_antisymmetry_counterexample(self):
        sc = StructureConstants(3, {(0, 1, 2): 1, (1, 0, 2): 1})
        rep = validate(sc)
        assert not rep.ok
        anti = [v for v in rep.violations if v.kind == "antisymmetry"]
        assert [v.indices for v in anti] == [(1, 2, 3)]

    def test_violation_cap(self):
        table = {(a, b, c): 1 for a, b, c in itertools.product(range(6), repeat=3) if a != b}
        rep = validate(StructureConstants(6, table))
        assert rep.total > MAX_LISTED
        assert len(rep.violations) == MAX_LISTED
        assert rep.to_json()["total_violations"] == rep.total

    @pytest.mark.parametrize("name", ["so3", "sl2", "sl3", "so5", "heisenberg", "e2", "zero(4)"])
    def test_catalog_valid(self, name):
        assert validate(catalog(name)).ok


class TestKilling:
    @pytest.mark.parametrize("name", ["so3", "sl2", "sl3", "so5", "heisenberg", "e2"])
    def test_against_oracle(self, name):
        sc = catalog(name)
        km = killing(sc)
        g = killing_oracle(sc)
        n = sc.dim
        assert [list(r) for r in km.g] == g
        assert all(g[a][b] == g[b][a] for a in range(n) for b in range(n))
        if km.g_inv is not None:
            for a, c in itertools.product(range(n), repeat=2):
                s = sum((km.g_inv[a][b] * g[b][c] for b in range(n)), ZERO)
                assert s == (ONE if a == c else ZERO)
        assert check_total_antisymmetry(km).ok
        for a, b, c in itertools.product(range(n), repeat=3):
            v = km.c_low.get((a, b, c), ZERO)
            for p in itertools.permutations((a, b, c)):
                sign = 1 if p in ((a, b, c), (b, c, a), (c, a, b)) else -1
                if len({a, b, c}) == 3:
                    assert km.c_low.get(p, ZERO) == v * sign

    def test_so3_values(self):
        km = killing(catalog("so3"))
        half = Scalar(Fraction(-1, 2))
        for a, b in itertools.product(range(3), repeat=2):
            assert km.g[a][b] == (Scalar(-2) if a == b else ZERO)
            assert km.g_inv[a][b] == (half if a == b else ZERO)
        for a, b, c in itertools.product(range(3), repeat=3):
            assert km.c_low.get((a, b, c), ZERO) == eps(a, b, c) * -2

    def test_sl2_values(self):
        g = killing(catalog("sl2")).g
        expected = [[0, 4, 0], [4, 0, 0], [0, 0, 8]]
        assert [[x for x in row] for row in g] == [[Scalar(x) for x in row] for row in expected]

    def test_heisenberg_degenerate(self):
        km = killing(catalog("heisenberg"))
        assert km.degenerate and km.g_inv is None and km.rank == 0
        assert all(not x for row in km.g for x in row)
        assert not km.c_low
        with pytest.raises(DegenerateMetricError):
            km.require_inverse()

    def test_ranks(self):
        ranks = {n: killing(catalog(n)).rank for n in ("so3", "sl2", "sl3", "so5", "heisenberg", "e2")}
        assert ranks == {"so3": 3, "sl2": 3, "sl3": 8, "so5": 10, "heisenberg": 0, "e2": 1}

    @pytest.mark.parametrize("name, n", [("so3", 3), ("sl2", 3), ("sl3", 8), ("so5", 10)])
    def test_dimension_invariant(self, name, n):
        km = killing(catalog(name))
        assert dimension_invariant(km) == Scalar(n)

    @pytest.mark.parametrize("name", ["so3", "sl2", "sl3"])
    def test_dimension_invariant_oracle(self, name):
        sc = catalog(name)
        assert dim_invariant_oracle(sc) == dimension_invariant(killing(sc))

    def test_dimension_invariant_needs_inverse(self):
        with pytest.raises(DegenerateMetricError):
            dimension_invariant(killing(catalog("e2")))


class TestCatalog:
    def test_zero(self):
        z = catalog("zero(4)")
        assert z.dim == 4 and z.is_zero()

    def test_unknown(self):
        with pytest.raises(UnknownAlgebraError):
            catalog("g2")
        with pytest.raises(UnknownAlgebraError):
            catalog("zero(0)")
        assert "zero(N)" in catalog_names()

    def test_chevalley_constants_are_integers(self):
        for name in ("sl3", "so5"):
            for _, v in catalog(name).items():
                assert v.is_rational() and v.coords[0].denominator == 1

    def test_shipped_files_match_generator(self):
        built = chevalley.build_all()
        for name, sc in built.items():
            assert catalog(name) == sc
            text = (chevalley.Path(chevalley.__file__).parent / "data" / f"{name}.json").read_text()
            assert text == chevalley.dumps_table(sc)

    def test_sl3_from_matrices(self):
        sc = chevalley.from_matrices(chevalley.sl3_basis(), "sl3")
        assert sc.dim == 8 and validate(sc).ok


class TestJson:
    def test_half_and_full_agree(self):
        for name in ("so3", "sl3", "e2"):
            sc = catalog(name)
            half = StructureConstants.from_json(sc.to_json(half=True))
            full = StructureConstants.from_json(json.loads(json.dumps(sc.to_json(half=False))))
            assert half == full == sc

    def test_full_table_inconsistency_is_reported(self):
        data = {"dim": 2, "scalar": "q23", "half": False, "entries": [
            {"a": 1, "b": 2, "c": 1, "value": "1"}, {"a": 2, "b": 1, "c": 1, "value": "1"}]}
        assert not validate(StructureConstants.from_json(data)).ok

    @pytest.mark.parametrize("data", [
        {"dim": 2, "scalar": "f64", "entries": []},
        {"dim": 2, "entries": [{"a": 1, "b": 3, "c": 1, "value": "1"}]},
        {"dim": 2, "entries": [{"a": 1, "b": 2, "c": 1, "value": "x"}]},
        {"dim": 2, "entries": [{"a": 1, "b": 2, "c": 1, "value": "1"}, {"a": 1, "b": 2, "c": 1, "value": "2"}]},
        {"dim": 2, "half": True, "entries": [{"a": 2, "b": 1, "c": 1, "value": "1"}]},
        {"entries": []},
    ])
    def test_rejects_malformed(self, data):
        with pytest.raises(StructureConstantsError):
            StructureConstants.from_json(data)

    def test_load_from_path(self, tmp_path):
        path = tmp_path / "mine.json"
        path.write_text(json.dumps(catalog("sl2").to_json(half=True)))
        sc = load_algebra(str(path))
        assert sc == catalog("sl2") and sc.name == "mine"
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        with pytest.raises(StructureConstantsError):
            load_algebra(str(bad))

    def test_hash_is_stable_and_sensitive(self):
        a, b = catalog("so3"), catalog("so3")
        assert a.definition_hash() == b.definition_hash()
        assert a.definition_hash() != a.scaled(2).definition_hash()
