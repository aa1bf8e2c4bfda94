"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails
(the JSON witness goes to stdout), 2 for input or parse errors (stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .brackets import BracketError, BracketKind, bracket, bracket_report
from .linalg import solve
from .liealg import (
    DegenerateMetricError,
    StructureConstants,
    StructureConstantsError,
    UnknownAlgebraError,
    check_total_antisymmetry,
    dimension_invariant,
    killing,
    load_algebra,
    validate,
)
from .operators import GrassmannOperator, OperatorError, graded_bracket
from .parsing import ExpressionError, parse_expression
from .reports import FAIL, PASS, CheckResult, Report, check
from .scalars import ONE, ZERO, format_scalar
from .superalgebra import (
    LAMBDAS,
    Aux,
    NotDegenerateError,
    build_auxiliary,
    build_deltas,
    build_generators,
    check_brst,
    check_casimir_invariance,
    check_lie_relations,
    verify_compatibility,
    verify_degenerate,
    verify_superalgebra,
)

COMMANDS = ("validate", "killing", "bracket-axioms", "superalgebra", "degenerate", "compat", "eval", "report")
EVEN_DEGREE_WARNING = 8


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    algebra: str | None = None
    algebra2: str | None = None
    samples: int = 200
    seed: int = 0
    output_format: str = "json"
    bracket: str | None = None
    expressions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.samples < 1:
            raise InputError("--samples must be >= 1")


def _envelope(cfg: RunConfig, sc: StructureConstants | None, body: dict) -> dict:
    out = {"tool": "oddpoisson", "version": __version__, "command": cfg.command}
    if sc is not None:
        out["algebra"] = {"name": sc.name, "dim": sc.dim, "sha256": sc.definition_hash()}
    if cfg.command in ("bracket-axioms", "report"):
        out["seed"] = cfg.seed
        out["samples"] = cfg.samples
    out.update(body)
    return out


def _load(source: str | None, flag: str = "--algebra") -> StructureConstants:
    if not source:
        raise InputError(f"{flag} is required for this command")
    try:
        return load_algebra(source)
    except (StructureConstantsError, UnknownAlgebraError) as exc:
        raise InputError(str(exc.args[0] if isinstance(exc, KeyError) else exc)) from exc


def killing_report(sc: StructureConstants) -> Report:
    km = killing(sc)
    n = sc.dim
    rep = Report("killing", info={"metric": km.to_json(), "degenerate": km.degenerate})
    asym = [(a, b) for a in range(n) for b in range(n) if km.g[a][b] != km.g[b][a]]
    rep.add(CheckResult("symmetric", FAIL if asym else PASS, asym or None))
    if not km.degenerate:
        bad = []
        for a in range(n):
            for c in range(n):
                s = ZERO
                for b in range(n):
                    s = s + km.g_inv[a][b] * km.g[b][c]
                if s != (ONE if a == c else ZERO):
                    bad.append([a + 1, c + 1, str(s)])
        rep.add(CheckResult("inverse", FAIL if bad else PASS, bad or None))
        inv = dimension_invariant(km)
        rep.info["dimension_invariant"] = format_scalar(inv)
        rep.add(check("dimension_invariant_equals_dim", inv - n))
    anti = check_total_antisymmetry(km)
    rep.add(CheckResult("total_antisymmetry", PASS if anti.ok else FAIL, None if anti.ok else anti.to_json()))
    return rep


# ---------------------------------------------------------------- commutation table


def _named_operators(sc: StructureConstants):
    km = killing(sc)
    deltas = build_deltas(sc, km)
    named = {f"Δ{w.value:+d}": deltas[w] for w in LAMBDAS}
    named["D"] = build_auxiliary(sc, km, Aux.D)
    named["Z"] = build_auxiliary(sc, km, Aux.Z)
    gens = build_generators(sc)
    return named, gens


def identify(op: GrassmannOperator, basis: dict[str, GrassmannOperator]) -> str:
    """Write ``op`` as a combination of the named operators (and the identity), if possible."""
    if not op:
        return "0"
    names = ["1"] + list(basis)
    ops = [GrassmannOperator.identity(op.dim)] + list(basis.values())
    keys = sorted(set().union(op.terms, *(o.terms for o in ops)))
    cols = [[o.terms.get(k, ZERO) for k in keys] for o in ops]
    nonzero: list[int] = []
    for i, c in enumerate(cols):
        try:
            solve([cols[j] for j in nonzero] + [c], [ZERO] * len(keys), ZERO)
        except ValueError:
            continue
        nonzero.append(i)
    try:
        coeffs = solve([cols[i] for i in nonzero], [op.terms.get(k, ZERO) for k in keys], ZERO)
    except ValueError:
        return "other"
    parts = []
    for i, c in zip(nonzero, coeffs):
        if not c:
            continue
        name = names[i]
        if c == ONE:
            parts.append(name if name != "1" else "1")
        elif c == -ONE:
            parts.append(f"-{name}" if name != "1" else "-1")
        else:
            text = format_scalar(c)
            text = f"({text})" if c.n_components() > 1 else text
            parts.append(text if name == "1" else f"{text} {name}")
    return " + ".join(parts).replace("+ -", "- ")


def commutation_table(sc: StructureConstants) -> tuple[list[str], list[list[str]]]:
    named, gens = _named_operators(sc)
    labels = list(named) + ["S_α"]
    rows = []
    lie = check_lie_relations(sc, gens).ok
    for r in labels:
        row = []
        for c in labels:
            if r == "S_α" and c == "S_α":
                row.append("c_αβ^γ S_γ" if lie else "other")
            elif "S_α" in (r, c):
                other = named[c if r == "S_α" else r]
                row.append("0" if all(not graded_bracket(s, other) for s in gens) else "nonzero")
            else:
                row.append(identify(graded_bracket(named[r], named[c]), named))
        rows.append(row)
    return labels, rows


def _markdown_table(labels: list[str], rows: list[list[str]]) -> str:
    head = "| [row, col} | " + " | ".join(labels) + " |"
    sep = "|" + "---|" * (len(labels) + 1)
    body = ["| " + r + " | " + " | ".join(cells) + " |" for r, cells in zip(labels, rows)]
    return "\n".join([head, sep] + body)


def _markdown(payload: dict) -> str:
    lines = [f"# oddpoisson {payload['command']}", ""]
    if "algebra" in payload:
        a = payload["algebra"]
        lines.append(f"- algebra: `{a['name']}` (dim {a['dim']}, sha256 `{a['sha256'][:16]}`)")
    lines.append(f"- tool version: {payload['version']}")
    if "seed" in payload:
        lines.append(f"- seed: {payload['seed']}, samples: {payload['samples']}")
    lines.append(f"- status: **{payload.get('status', PASS)}**")
    lines.append("")
    for section in payload.get("reports", []):
        lines.append(f"## {section['title']} ({section['status']})")
        lines.append("")
        lines.append("| check | status | witness |")
        lines.append("|---|---|---|")
        for c in section["checks"]:
            w = "" if c["witness"] is None else json.dumps(c["witness"], ensure_ascii=False)
            lines.append(f"| {c['name']} | {c['status']} | {w.replace('|', '/')} |")
        lines.append("")
    if "table" in payload:
        lines.append("## Graded commutation table")
        lines.append("")
        lines.append(_markdown_table(payload["table"]["labels"], payload["table"]["rows"]))
        lines.append("")
    if "result" in payload:
        lines.append(f"`{payload['result']}`")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------- dispatch


def _reports_payload(reports: list[Report]) -> dict:
    return {
        "status": PASS if all(r.ok for r in reports) else FAIL,
        "reports": [r.to_json() for r in reports],
    }


def execute(cfg: RunConfig) -> tuple[int, dict]:
    """Run one command; returns ``(exit_code, payload)``.  Raises InputError for exit code 2."""
    cmd = cfg.command
    if cmd == "eval":
        return _eval(cfg)
    sc = _load(cfg.algebra)
    try:
        if cmd == "validate":
            vr = validate(sc)
            rep = Report("validate", [CheckResult("structure_constants", PASS if vr.ok else FAIL, None if vr.ok else vr.to_json())])
            reports = [rep]
        elif cmd == "killing":
            reports = [killing_report(sc)]
        elif cmd == "bracket-axioms":
            _require_valid(sc)
            reports = [bracket_report(sc, cfg.samples, cfg.seed)]
        elif cmd == "superalgebra":
            _require_valid(sc)
            reports = [verify_superalgebra(sc)]
        elif cmd == "degenerate":
            _require_valid(sc)
            reports = [verify_degenerate(sc)]
        elif cmd == "compat":
            sc2 = _load(cfg.algebra2, "--algebra2")
            reports = [verify_compatibility(sc, sc2)]
            payload = _envelope(cfg, sc, _reports_payload(reports))
            payload["algebra2"] = {"name": sc2.name, "dim": sc2.dim, "sha256": sc2.definition_hash()}
            return (0 if payload["status"] == PASS else 1), payload
        else:
            reports = _full_report(sc, cfg)
    except (DegenerateMetricError, NotDegenerateError, StructureConstantsError, OperatorError) as exc:
        raise InputError(str(exc)) from exc
    payload = _envelope(cfg, sc, _reports_payload(reports))
    if cmd == "report" and not killing(sc).degenerate:
        labels, rows = commutation_table(sc)
        payload["table"] = {"labels": labels, "rows": rows}
    return (0 if payload["status"] == PASS else 1), payload


def _require_valid(sc: StructureConstants) -> None:
    vr = validate(sc)
    if not vr.ok:
        first = vr.violations[0]
        raise InputError(
            f"{sc.name}: structure constants are invalid ({vr.total} violations, first: "
            f"{first.kind} at {first.indices} residual {first.residual}); run 'validate' for details"
        )


def _full_report(sc: StructureConstants, cfg: RunConfig) -> list[Report]:
    vr = validate(sc)
    reports = [Report("validate", [CheckResult("structure_constants", PASS if vr.ok else FAIL, None if vr.ok else vr.to_json())])]
    if not vr.ok:
        return reports
    reports.append(killing_report(sc))
    reports.append(bracket_report(sc, cfg.samples, cfg.seed))
    km = killing(sc)
    if km.degenerate:
        reports.append(verify_degenerate(sc))
    else:
        reports.append(verify_superalgebra(sc, km))
        extra = Report("generators")
        extra.add(check_lie_relations(sc))
        extra.add(check_casimir_invariance(sc, km))
        extra.add(check_brst(sc, km))
        reports.append(extra)
    return reports


def _eval(cfg: RunConfig) -> tuple[int, dict]:
    sc = _load(cfg.algebra) if cfg.algebra else None
    dim = sc.dim if sc is not None else None
    if not cfg.expressions:
        raise InputError("eval needs at least one expression")
    try:
        polys = [parse_expression(e, dim) for e in cfg.expressions]
    except ExpressionError as exc:
        raise InputError(str(exc)) from exc
    for e, p in zip(cfg.expressions, polys):
        deg = max((m.even_degree for m, _ in p.items()), default=0)
        if deg > EVEN_DEGREE_WARNING:
            print(f"warning: {e!r} has even degree {deg} > {EVEN_DEGREE_WARNING}", file=sys.stderr)
    body: dict = {"inputs": [str(p) for p in polys]}
    if cfg.bracket:
        if len(polys) != 2:
            raise InputError("a bracket needs exactly two expressions")
        try:
            kind = BracketKind.parse(cfg.bracket, sc)
            result = bracket(kind, polys[0], polys[1])
        except BracketError as exc:
            raise InputError(str(exc)) from exc
        body["bracket"] = kind.tag.value
    else:
        if len(polys) != 1:
            raise InputError("without --bracket, eval takes exactly one expression")
        result = polys[0]
    body["result"] = str(result)
    body["status"] = PASS
    return 0, _envelope(cfg, sc, body)


def render(payload: dict, fmt: str) -> str:
    if fmt == "markdown":
        return _markdown(payload)
    return json.dumps(payload, indent=2, ensure_ascii=False)


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        code, payload = execute(cfg)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return 2
    print(render(payload, cfg.output_format), file=out)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oddpoisson",
        description="Exact checks for the linear odd Poisson bracket and its Delta-operator superalgebra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("expressions", nargs="*", help="expressions for 'eval'")
    parser.add_argument("--algebra", help="catalog name (so3, sl2, sl3, so5, heisenberg, e2, zero(N)) or JSON path")
    parser.add_argument("--algebra2", help="second algebra for 'compat'")
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", dest="output_format", choices=("json", "markdown"), default="json")
    parser.add_argument("--bracket", help="bracket for 'eval': linear-odd, linear-even, canonical-odd, canonical-even")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            algebra=args.algebra,
            algebra2=args.algebra2,
            samples=args.samples,
            seed=args.seed,
            output_format=args.output_format,
            bracket=args.bracket,
            expressions=tuple(args.expressions),
        )
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
