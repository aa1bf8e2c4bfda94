"""Structure constants, their validation, and the Cartan-Killing metric.

Algebra indices are 0-based in the Python API (``alpha in range(dim)``) and
1-based in JSON files and printed output.  ``sc[a, b, c]`` is the constant
multiplying ``e_c`` in ``[e_a, e_b]``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .linalg import rank_and_inverse
from .scalars import ONE, ZERO, Scalar, ScalarLike, format_scalar, parse_scalar

MAX_LISTED = 100


class StructureConstantsError(ValueError):
    pass


class UnknownAlgebraError(KeyError):
    pass


class DegenerateMetricError(ValueError):
    """Raised when an operation needs the inverse Killing metric but it does not exist."""


class StructureConstants:
    """Sparse table ``(a, b, c) -> Scalar`` for an algebra of dimension ``dim``."""

    __slots__ = ("dim", "_table", "_rows", "name")

    def __init__(self, dim: int, table: Mapping[tuple[int, int, int], ScalarLike], name: str = ""):
        if dim < 1:
            raise StructureConstantsError(f"dimension must be positive, got {dim}")
        clean = {}
        for key, v in table.items():
            if len(key) != 3 or not all(0 <= i < dim for i in key):
                raise StructureConstantsError(f"index {tuple(i + 1 for i in key)} outside 1..{dim}")
            v = Scalar.coerce(v)
            if v:
                clean[tuple(key)] = v
        self.dim = dim
        self.name = name
        self._table = clean
        rows: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (a, b, c), v in clean.items():
            rows.setdefault((a, b), {})[c] = v
        self._rows = rows

    @classmethod
    def from_half(cls, dim: int, upper: Mapping[tuple[int, int, int], ScalarLike], name: str = ""):
        """Build from entries with ``a < b`` only; the ``a > b`` half follows by antisymmetry."""
        full = {}
        for (a, b, c), v in upper.items():
            if a >= b:
                raise StructureConstantsError(
                    f"half table entries need a < b, got ({a + 1},{b + 1},{c + 1})"
                )
            v = Scalar.coerce(v)
            full[a, b, c] = v
            full[b, a, c] = -v
        return cls(dim, full, name)

    def __getitem__(self, key: tuple[int, int, int]) -> Scalar:
        return self._table.get(key, ZERO)

    def items(self):
        return self._table.items()

    def row(self, a: int, b: int) -> dict[int, Scalar]:
        """``[e_a, e_b]`` as a sparse map ``c -> coefficient``."""
        return self._rows.get((a, b), {})

    def is_zero(self) -> bool:
        return not self._table

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return self.dim == other.dim and self._table == other._table

    def __hash__(self):
        return hash((self.dim, frozenset(self._table.items())))

    def __repr__(self) -> str:
        label = self.name or "anonymous"
        return f"StructureConstants({label}, dim={self.dim}, nonzero={len(self._table)})"

    def with_entry(self, key: tuple[int, int, int], value: ScalarLike, antisymmetric: bool = True):
        """Copy with one entry replaced (and its mirror ``(b, a, c)`` when ``antisymmetric``)."""
        table = dict(self._table)
        value = Scalar.coerce(value)
        table[key] = value
        if antisymmetric:
            a, b, c = key
            table[b, a, c] = -value
        return StructureConstants(self.dim, table, self.name + "'")

    def scaled(self, k: ScalarLike) -> StructureConstants:
        k = Scalar.coerce(k)
        return StructureConstants(self.dim, {key: v * k for key, v in self._table.items()}, self.name)

    def to_json(self, half: bool = False) -> dict:
        entries = []
        for (a, b, c), v in sorted(self._table.items()):
            if half and a >= b:
                continue
            entries.append({"a": a + 1, "b": b + 1, "c": c + 1, "value": format_scalar(v)})
        return {"dim": self.dim, "scalar": "q23", "entries": entries, "half": half}

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> StructureConstants:
        try:
            dim = int(data["dim"])
            half = bool(data.get("half", False))
            scalar = data.get("scalar", "q23")
            raw = data["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureConstantsError(f"malformed structure-constant JSON: {exc}") from exc
        if scalar != "q23":
            raise StructureConstantsError(f"unsupported scalar field {scalar!r}; expected 'q23'")
        table: dict[tuple[int, int, int], Scalar] = {}
        for e in raw:
            try:
                key = (int(e["a"]) - 1, int(e["b"]) - 1, int(e["c"]) - 1)
                value = parse_scalar(str(e["value"]))
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise StructureConstantsError(f"malformed entry {e!r}: {exc}") from exc
            if not all(0 <= i < dim for i in key):
                raise StructureConstantsError(f"entry {e!r} has an index outside 1..{dim}")
            if key in table:
                raise StructureConstantsError(f"duplicate entry for {tuple(i + 1 for i in key)}")
            table[key] = value
        if half:
            return cls.from_half(dim, table, name)
        return cls(dim, table, name)

    def definition_hash(self) -> str:
        blob = json.dumps(self.to_json(half=False), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class Violation:
    kind: str
    indices: tuple[int, ...]  # 1-based
    residual: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "residual": self.residual}


@dataclass
class ValidationReport:
    name: str
    violations: list[Violation] = field(default_factory=list)
    total: int = 0

    @property
    def ok(self) -> bool:
        return self.total == 0

    def add(self, kind: str, indices: Iterable[int], residual) -> None:
        self.total += 1
        if len(self.violations) < MAX_LISTED:
            self.violations.append(Violation(kind, tuple(i + 1 for i in indices), str(residual)))

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "status": "pass" if self.ok else "fail",
            "total_violations": self.total,
            "violations": [v.to_json() for v in self.violations],
        }


def jacobi_residual(sc: StructureConstants, a: int, b: int, c: int) -> dict[int, Scalar]:
    """Sparse ``d -> c_{a l}^d c_{b c}^l + c_{b l}^d c_{c a}^l + c_{c l}^d c_{a b}^l``."""
    out: dict[int, Scalar] = {}
    for x, (p, q) in ((a, (b, c)), (b, (c, a)), (c, (a, b))):
        for lam, k in sc.row(p, q).items():
            for d, v in sc.row(x, lam).items():
                out[d] = out.get(d, ZERO) + k * v
    return {d: v for d, v in out.items() if v}


def validate(sc: StructureConstants) -> ValidationReport:
    """Check antisymmetry in the lower pair and the Jacobi identity on every index tuple."""
    report = ValidationReport("structure_constants")
    n = sc.dim
    for a, b, c in itertools.product(range(n), repeat=3):
        if a <= b:
            r = sc[a, b, c] + sc[b, a, c]
            if r:
                report.add("antisymmetry", (a, b, c), r)
    for a, b, c in itertools.product(range(n), repeat=3):
        for d, r in sorted(jacobi_residual(sc, a, b, c).items()):
            report.add("jacobi", (a, b, c, d), r)
    return report


def is_antisymmetric(sc: StructureConstants) -> bool:
    return all(sc[b, a, c] == -v for (a, b, c), v in sc.items())


@dataclass(frozen=True)
class KillingMetric:
    """Killing metric ``g``, its inverse (None when degenerate) and ``c_{abc} = c_{ab}^d g_{dc}``."""

    g: tuple[tuple[Scalar, ...], ...]
    g_inv: tuple[tuple[Scalar, ...], ...] | None
    c_low: dict[tuple[int, int, int], Scalar]
    rank: int

    @property
    def dim(self) -> int:
        return len(self.g)

    @property
    def degenerate(self) -> bool:
        return self.g_inv is None

    def require_inverse(self, what: str = "this operation") -> tuple[tuple[Scalar, ...], ...]:
        if self.g_inv is None:
            raise DegenerateMetricError(
                f"{what} needs the inverse Killing metric, but the metric is degenerate (rank {self.rank} < {self.dim})"
            )
        return self.g_inv

    def to_json(self) -> dict:
        mat = lambda m: [[format_scalar(x) for x in row] for row in m]
        return {
            "g": mat(self.g),
            "g_inv": None if self.g_inv is None else mat(self.g_inv),
            "rank": self.rank,
            "c_low": [
                {"a": a + 1, "b": b + 1, "c": c + 1, "value": format_scalar(v)}
                for (a, b, c), v in sorted(self.c_low.items())
            ],
        }


def killing(sc: StructureConstants) -> KillingMetric:
    n = sc.dim
    g = [[ZERO] * n for _ in range(n)]
    # g_ab = sum_{c,l} c_{ac}^l c_{bl}^c
    for a in range(n):
        for b in range(a, n):
            s = ZERO
            for c in range(n):
                for lam, v in sc.row(a, c).items():
                    w = sc[b, lam, c]
                    if w:
                        s = s + v * w
            g[a][b] = g[b][a] = s
    rank, inv = rank_and_inverse(g, ONE, ZERO)
    c_low: dict[tuple[int, int, int], Scalar] = {}
    for (a, b, d), v in sc.items():
        for c in range(n):
            if g[d][c]:
                c_low[a, b, c] = c_low.get((a, b, c), ZERO) + v * g[d][c]
    c_low = {k: v for k, v in c_low.items() if v}
    return KillingMetric(
        tuple(tuple(r) for r in g),
        None if inv is None else tuple(tuple(r) for r in inv),
        c_low,
        rank,
    )


def check_total_antisymmetry(km: KillingMetric) -> ValidationReport:
    """``c_{abc} = -c_{acb}``; together with lower-pair antisymmetry this is total antisymmetry."""
    report = ValidationReport("total_antisymmetry")
    n = km.dim
    for a, b, c in itertools.product(range(n), repeat=3):
        if b <= c:
            r = km.c_low.get((a, b, c), ZERO) + km.c_low.get((a, c, b), ZERO)
            if r:
                report.add("c_abc + c_acb", (a, b, c), r)
    return report


def raised_structure(km: KillingMetric) -> dict[tuple[int, int, int], Scalar]:
    """``c^{abc}`` with all three indices raised by the inverse metric."""
    ginv = km.require_inverse("raising indices")
    n = km.dim
    out: dict[tuple[int, int, int], Scalar] = {}
    for (x, y, z), v in km.c_low.items():
        for a in range(n):
            ga = ginv[a][x]
            if not ga:
                continue
            for b in range(n):
                gb = ginv[b][y]
                if not gb:
                    continue
                gab = v * ga * gb
                for c in range(n):
                    gc = ginv[c][z]
                    if gc:
                        out[a, b, c] = out.get((a, b, c), ZERO) + gab * gc
    return {k: v for k, v in out.items() if v}


def dimension_invariant(km: KillingMetric, sc: StructureConstants | None = None) -> Scalar:
    """``-c^{abc} c_{abc}``; equals the dimension for a semi-simple algebra."""
    up = raised_structure(km)
    s = ZERO
    for key, v in up.items():
        w = km.c_low.get(key)
        if w:
            s = s + v * w
    return -s


# ---------------------------------------------------------------- catalog

CATALOG_FILES = ("so3", "sl2", "sl3", "so5", "heisenberg", "e2")
_ZERO_RE = re.compile(r"zero\((\d+)\)")


def catalog_names() -> list[str]:
    return list(CATALOG_FILES) + ["zero(N)"]


def catalog(name: str) -> StructureConstants:
    m = _ZERO_RE.fullmatch(name.strip())
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownAlgebraError(f"zero(N) needs N >= 1, got {name!r}")
        return StructureConstants(n, {}, name=f"zero({n})")
    if name not in CATALOG_FILES:
        raise UnknownAlgebraError(
            f"unknown algebra {name!r}; known: {', '.join(catalog_names())}"
        )
    text = resources.files("oddpoisson.data").joinpath(f"{name}.json").read_text()
    return StructureConstants.from_json(json.loads(text), name=name)


def load_algebra(source: str) -> StructureConstants:
    """Catalog name or path to a JSON file in the structure-constant schema."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise StructureConstantsError(f"cannot read {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise StructureConstantsError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
        return StructureConstants.from_json(data, name=path.stem)
    return catalog(source)


SEMISIMPLE = ("so3", "sl2", "sl3", "so5")
DEGENERATE = ("heisenberg", "e2")
