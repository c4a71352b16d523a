"""Command-line front end.

Exit codes: 0 success, 2 mathematical refusal, 3 input error, 4 budget exceeded.
Algebra arguments are JSON files or ``catalog:<name>``.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .algebra import AlgebraError, GradedAlgebra, verify_associative, verify_grading
from .cochar import MultiplicityError, cocharacter
from .exact import Matrix
from .haction import NotGeneralizedAction, OperatorSpan, verify_generalized_action
from .pi import (PLAIN, BudgetExceeded, PolynomialSyntaxError, codim_equality_check, codimension,
                 is_identity, parse_polynomial)
from .pseudo import CertificateError, NotPseudoAutomorphism, case_table, certify, certify_action
from .structure import StructureError, structure_report

EXIT_OK, EXIT_REFUSED, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4


class InputError(Exception):
    pass


class Refusal(Exception):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_algebra(ref: str) -> GradedAlgebra:
    if ref.startswith("catalog:"):
        try:
            return catalog.get(ref.split(":", 1)[1]).algebra
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from exc
    try:
        return GradedAlgebra.from_json(_read_json(ref))
    except AlgebraError as exc:
        raise InputError(f"{ref}: {exc}") from exc


def load_matrix(ref: str, n: int) -> Matrix:
    data = _read_json(ref)
    rows = data.get("matrix") if isinstance(data, dict) else data
    try:
        m = Matrix.from_json(rows)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{ref}: malformed matrix ({exc})") from exc
    if m.rows != n or m.cols != n:
        raise InputError(f"{ref}: matrix is {m.rows}x{m.cols}, algebra has dimension {n}")
    return m


def load_action(ref: str, A: GradedAlgebra) -> tuple[dict, list]:
    """Generators and relations from an action file or ``catalog:<entry>:<action>``."""
    if ref.startswith("catalog:"):
        parts = ref.split(":")
        if len(parts) != 3:
            raise InputError("catalog actions are referenced as catalog:<entry>:<action>")
        try:
            spec = catalog.get(parts[1]).actions[parts[2]]
        except KeyError as exc:
            raise InputError(f"unknown catalog action {ref}") from exc
        return dict(spec.generators), [list(w) for w in spec.relations]
    data = _read_json(ref)
    try:
        if "generators" in data:
            gens = {g["name"]: Matrix.from_json(g["matrix"]) for g in data["generators"]}
            rels = [list(w) for w in data.get("relations", [])]
        else:
            gens = {op["name"]: Matrix.from_json(op["matrix"]) for op in data["operators"]}
            rels = []
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{ref}: malformed action file ({exc})") from exc
    for name, m in gens.items():
        if m.rows != A.dim or m.cols != A.dim:
            raise InputError(f"{ref}: operator {name!r} is {m.rows}x{m.cols}, algebra has dimension {A.dim}")
    return gens, rels


def load_span(ref: str | None, A: GradedAlgebra) -> OperatorSpan | None:
    if ref is None:
        return None
    gens, _ = load_action(ref, A)
    try:
        return OperatorSpan.build(list(gens.items()))
    except AlgebraError as exc:
        raise InputError(str(exc)) from exc


def parse_degrees(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"degree assignment {item!r} is not of the form name=label")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_cell(x)}" for k, x in v.items()) + "}"
    if v is None:
        return "-"
    return str(v)


def render_table(obj: dict) -> str:
    lines = []
    scalars = [(k, v) for k, v in obj.items() if not (isinstance(v, list) and v and isinstance(v[0], dict))]
    tables = [(k, v) for k, v in obj.items() if isinstance(v, list) and v and isinstance(v[0], dict)]
    if scalars:
        width = max(len(str(k)) for k, _ in scalars)
        for k, v in scalars:
            lines.append(f"{str(k).ljust(width)}  {_cell(v)}")
    for k, rows in tables:
        lines.append("")
        lines.append(f"{k}:")
        cols = list(dict.fromkeys(c for r in rows for c in r))
        cells = [[_cell(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in cells:
            lines.append("  " + "  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
    else:
        out.write(render_table(report) + "\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> dict:
    A = load_algebra(args.algebra)
    gr = verify_grading(A)
    report = {"algebra": A.name, "dim": A.dim, "grading": gr.to_json()}
    ok = gr.valid
    if A.claims_associative:
        chk = verify_associative(A)
        report["associative"] = chk.ok
        if not chk:
            report["associativity_witness"] = [A.basis[i] for i in chk.witness]
            ok = False
    if not ok:
        raise Refusal("structural violation", report)
    return report


def cmd_pseudo(args) -> dict:
    A = load_algebra(args.algebra)
    phi = load_matrix(args.map, A.dim)
    try:
        cert = certify(A, phi)
    except NotPseudoAutomorphism as exc:
        rep = {"certified": False, "reason": str(exc)}
        if exc.pair is not None:
            rep["pair"] = list(exc.pair)
        raise Refusal(str(exc), rep) from exc
    out = {"certified": True}
    out.update(cert.to_json())
    return out


def cmd_classify(args) -> dict:
    A = load_algebra(args.algebra)
    return {"algebra": A.name, "pairs": [c.to_json() for c in case_table(A).values()]}


def cmd_action(args) -> dict:
    A = load_algebra(args.algebra)
    gens, rels = load_action(args.action, A)
    try:
        act = certify_action(A, gens, rels)
    except NotPseudoAutomorphism as exc:
        raise Refusal(str(exc), {"certified": False, "reason": str(exc)}) from exc
    report = {"certified": True, "relations_checked": len(rels)}
    report["generators"] = [{"name": name, "pairs": c.to_json()["pairs"]} for name, c in act.generators.items()]
    if args.generalized:
        try:
            w = verify_generalized_action(A, OperatorSpan.build(list(gens.items())))
            report["generalized_action"] = True
            report["witness"] = w.to_json()
        except NotGeneralizedAction as exc:
            report["generalized_action"] = False
            report["failing_operator"] = exc.operator
    return report


def cmd_structure(args) -> dict:
    A = load_algebra(args.algebra)
    action = None
    if args.action:
        gens, rels = load_action(args.action, A)
        try:
            action = certify_action(A, gens, rels)
        except NotPseudoAutomorphism as exc:
            raise Refusal(str(exc), {"reason": str(exc)}) from exc
    try:
        rep = structure_report(A, action, seed=args.seed)
    except StructureError as exc:
        raise Refusal(str(exc), {"reason": str(exc)}) from exc
    out = rep.to_json()
    out["radical_basis_names"] = [_vector_name(A, v) for v in rep.radical.basis]
    return out


def _vector_name(A: GradedAlgebra, v) -> str:
    terms = []
    for k, x in enumerate(v):
        if x:
            terms.append(A.basis[k] if x == 1 else f"{x}*{A.basis[k]}")
    return " + ".join(terms) or "0"


def _codim_kwargs(args) -> dict:
    return {"associative": args.assoc, "budget": args.budget, "threads": args.threads}


def cmd_codim(args) -> dict:
    A = load_algebra(args.algebra)
    H = load_span(args.action, A)
    res = codimension(A, H, args.n, graded=args.mode == "graded", **_codim_kwargs(args))
    return res.to_json()


def cmd_cochar(args) -> dict:
    A = load_algebra(args.algebra)
    H = load_span(args.action, A)
    return cocharacter(A, H, args.n, graded=args.mode == "graded", **_codim_kwargs(args)).to_json()


def cmd_equality(args) -> dict:
    A = load_algebra(args.algebra)
    H = load_span(args.action, A)
    rep = codim_equality_check(A, H, args.n, **_codim_kwargs(args))
    out = rep.to_json()
    if not rep.equal:
        raise Refusal("codimensions differ", out)
    return out


def cmd_identity(args) -> dict:
    A = load_algebra(args.algebra)
    H = load_span(args.action, A)
    op_names = H.names if H is not None else ("id",)
    unit = H.names[H.unit_index] if H is not None and H.unit_index is not None else None
    degrees = parse_degrees(args.degrees)
    default = PLAIN if args.mode == "plain" else (A.supp[0] if len(A.supp) == 1 else None)
    try:
        f = parse_polynomial(args.polynomial, degrees, op_names, associative=args.assoc,
                             default_degree=default, unit=unit)
    except PolynomialSyntaxError as exc:
        raise InputError(str(exc)) from exc
    if any(d is None for m in f.terms for d in m.degrees):
        raise InputError("graded mode needs a degree for every variable (use --degrees x=0,y=1)")
    if args.mode == "plain":
        f.terms = {m.__class__(m.sigma, (PLAIN,) * m.n, m.decorations, m.shape): c for m, c in f.terms.items()}
    res = is_identity(A, H, f)
    return {"algebra": A.name, "polynomial": args.polynomial, "variables": list(f.variables), **res.to_json()}


def cmd_catalog(args) -> dict:
    if args.catalog_cmd == "list":
        rows = []
        for name in catalog.names():
            e = catalog.get(name)
            rows.append({"name": name, "dim": e.algebra.dim, "labels": len(e.algebra.supp),
                         "actions": ",".join(e.actions) or "-", "families": ",".join(e.families) or "-",
                         "description": e.description})
        return {"entries": rows}
    try:
        e = catalog.get(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    if args.action:
        if args.action not in e.actions:
            raise InputError(f"{args.name} has no action {args.action!r}")
        spec = e.actions[args.action]
        return {
            "generators": [{"name": k, "matrix": m.to_json()} for k, m in spec.generators.items()],
            "relations": [list(w) for w in spec.relations],
        }
    return e.algebra.to_json()


COMMANDS = {
    "verify": cmd_verify,
    "pseudo": cmd_pseudo,
    "classify": cmd_classify,
    "action": cmd_action,
    "structure": cmd_structure,
    "codim": cmd_codim,
    "cochar": cmd_cochar,
    "equality": cmd_equality,
    "identity": cmd_identity,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--n", type=int, default=3)
    common.add_argument("--mode", choices=("graded", "plain"), default="graded")
    common.add_argument("--assoc", dest="assoc", action="store_true", default=True)
    common.add_argument("--nonassoc", dest="assoc", action="store_false")
    common.add_argument("--budget", type=int, default=5_000_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="gradalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, *positional, action=False):
        sp = sub.add_parser(name, help=help_, parents=[common])
        for pos in positional:
            sp.add_argument(pos)
        if action:
            sp.add_argument("--action", help="action/operator file or catalog:<entry>:<action>")
        return sp

    add("verify", "check grading and associativity", "algebra")
    add("pseudo", "certify a graded pseudoautomorphism", "algebra", "map")
    add("classify", "case of every pair of labels", "algebra")
    sp = add("action", "certify a group action given by generators", "algebra", "action")
    sp.add_argument("--generalized", action="store_true", help="also solve for a generalized action witness")
    add("structure", "radical and invariant Wedderburn decomposition", "algebra", action=True)
    add("codim", "codimension c_n", "algebra", action=True)
    add("cochar", "cocharacter multiplicities", "algebra", action=True)
    add("equality", "graded codimension against the tensor construction", "algebra", action=True)
    sp = add("identity", "test a multilinear polynomial identity", "algebra", "polynomial", action=True)
    sp.add_argument("--degrees", help="variable degrees, e.g. x=0,y=1")
    cat = sub.add_parser("catalog", help="built-in algebras", parents=[common])
    csub = cat.add_subparsers(dest="catalog_cmd", required=True)
    csub.add_parser("list", parents=[common])
    ex = csub.add_parser("export", parents=[common])
    ex.add_argument("name")
    ex.add_argument("--action", help="export this action instead of the algebra")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    fmt = args.format
    if args.command == "catalog" and args.catalog_cmd == "export":
        fmt = "json"
    try:
        if args.n < 1 or args.budget < 1 or args.threads < 1:
            raise InputError("--n, --budget and --threads must be positive")
        report = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Refusal as exc:
        emit(exc.report or {"refused": str(exc)}, fmt)
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc} (estimate {exc.estimate} entries)", file=sys.stderr)
        return EXIT_BUDGET
    except (CertificateError, MultiplicityError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 1
    except AlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(report, fmt)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
