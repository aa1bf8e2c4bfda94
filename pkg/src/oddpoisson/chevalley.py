"""Generate the catalog structure-constant tables.

The rank-2 algebras are built from matrix realizations of their root vectors
and coroots (Chevalley bases), so every constant comes out an integer:

* sl3 on 3x3 matrices: ``e_i = E_{i,i+1}``, ``e_3 = E_13``, ``f = e^T``,
  ``h_1 = E11 - E22``, ``h_2 = E22 - E33``.
* so5 through the isomorphism so(5) = sp(4) (type B2 = C2), realized by
  4x4 matrices preserving the symplectic form ``[[0, I], [-I, 0]]``.

Run as ``python -m oddpoisson.chevalley <outdir>`` to rewrite the JSON files.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

from .linalg import solve
from .liealg import StructureConstants

Matrix = list[list[Fraction]]


def _unit(n: int, *entries: tuple[int, int, int]) -> Matrix:
    m = [[Fraction(0)] * n for _ in range(n)]
    for i, j, v in entries:
        m[i - 1][j - 1] += v
    return m


def _commutator(x: Matrix, y: Matrix) -> Matrix:
    n = len(x)
    xy = [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    yx = [[sum(y[i][k] * x[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return [[xy[i][j] - yx[i][j] for j in range(n)] for i in range(n)]


def _flat(m: Matrix) -> list[Fraction]:
    return [v for row in m for v in row]


def from_matrices(basis: list[Matrix], name: str) -> StructureConstants:
    """Structure constants of the span of ``basis`` under the matrix commutator."""
    cols = [_flat(b) for b in basis]
    table = {}
    for a, x in enumerate(basis):
        for b, y in enumerate(basis):
            if a == b:
                continue
            coeffs = solve(cols, _flat(_commutator(x, y)), Fraction(0))
            for c, v in enumerate(coeffs):
                if v:
                    if v.denominator != 1:
                        raise ValueError(f"{name}: non-integer constant {v}")
                    table[a, b, c] = int(v)
    return StructureConstants(len(basis), table, name)


def sl3_basis() -> list[Matrix]:
    e = lambda i, j: _unit(3, (i, j, 1))
    return [
        e(1, 2), e(2, 3), e(1, 3),
        e(2, 1), e(3, 2), e(3, 1),
        _unit(3, (1, 1, 1), (2, 2, -1)),
        _unit(3, (2, 2, 1), (3, 3, -1)),
    ]


def sp4_basis() -> list[Matrix]:
    # roots: e1-e2 (short), 2e2 (long), e1+e2 (short), 2e1 (long)
    u = lambda *ents: _unit(4, *ents)
    return [
        u((1, 2, 1), (4, 3, -1)),   # e_{e1-e2}
        u((2, 4, 1)),               # e_{2e2}
        u((1, 4, 1), (2, 3, 1)),    # e_{e1+e2}
        u((1, 3, 1)),               # e_{2e1}
        u((2, 1, 1), (3, 4, -1)),   # f_{e1-e2}
        u((4, 2, 1)),               # f_{2e2}
        u((4, 1, 1), (3, 2, 1)),    # f_{e1+e2}
        u((3, 1, 1)),               # f_{2e1}
        u((1, 1, 1), (2, 2, -1), (3, 3, -1), (4, 4, 1)),  # coroot of e1-e2
        u((2, 2, 1), (4, 4, -1)),   # coroot of 2e2
    ]


def so3() -> StructureConstants:
    # c_{ab}^c = epsilon_{abc}
    return StructureConstants.from_half(3, {(0, 1, 2): 1, (1, 2, 0): 1, (0, 2, 1): -1}, "so3")


def sl2() -> StructureConstants:
    # basis (e, f, h): [e,f] = h, [h,e] = 2e, [h,f] = -2f
    return StructureConstants.from_half(3, {(0, 1, 2): 1, (0, 2, 0): -2, (1, 2, 1): 2}, "sl2")


def heisenberg() -> StructureConstants:
    return StructureConstants.from_half(3, {(0, 1, 2): 1}, "heisenberg")


def e2() -> StructureConstants:
    # basis (J, P1, P2): [J,P1] = P2, [J,P2] = -P1
    return StructureConstants.from_half(3, {(0, 1, 2): 1, (0, 2, 1): -1}, "e2")


def build_all() -> dict[str, StructureConstants]:
    return {
        "so3": so3(),
        "sl2": sl2(),
        "sl3": from_matrices(sl3_basis(), "sl3"),
        "so5": from_matrices(sp4_basis(), "so5"),
        "heisenberg": heisenberg(),
        "e2": e2(),
    }


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0] if argv else Path(__file__).parent / "data")
    out.mkdir(parents=True, exist_ok=True)
    for name, sc in build_all().items():
        (out / f"{name}.json").write_text(dumps_table(sc))
    return 0


def dumps_table(sc: StructureConstants) -> str:
    """Half-table JSON with one entry per line, as shipped in the catalog."""
    data = sc.to_json(half=True)
    entries = ",\n".join("    " + json.dumps(e) for e in data["entries"])
    return (
        f'{{\n  "dim": {data["dim"]},\n  "scalar": "q23",\n  "half": true,\n'
        f'  "entries": [\n{entries}\n  ]\n}}\n'
    )


if __name__ == "__main__":
    sys.exit(main())
