"""Command-line interface.

Each subcommand reads one cover document (``--input FILE``) or every
``*.json`` file of a directory in filename order (``--dir DIR``), and prints
either a short table or, with ``--json``, a report document.

Exit codes: 0 success, 1 input or validation error, 2 a failed internal
check (decomposition certificate, product check or oracle mismatch).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, TextIO

import jsonschema

from . import __version__
from .cover import BranchData, chevalley_weil_dims, genus, validate
from .errors import InvalidBranchData, InvariantViolation, OverrideBelowCertifiedLower, TorsionDetected
from .group import FiniteAbelianGroup, all_characters, make_group
from .homology import homology_of, isotypic_dimension, isotypic_primes
from .prym import (
    fixed_sublattice,
    prym_lattice,
    rank_bound,
    verify_decomposition,
    verify_product,
)
from .schema import COVER_SCHEMA, REPORT_SCHEMA_ID

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class DocumentError(ValueError):
    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def parse_cover_document(doc: Any) -> BranchData:
    """Turn a decoded cover document into :class:`BranchData`.

    Raises :class:`DocumentError` carrying a JSON pointer to the bad field.
    """
    validator = jsonschema.Draft202012Validator(COVER_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise DocumentError(_pointer(e.absolute_path), e.message)
    factors = doc["group"]["invariant_factors"]
    canonical = make_group(factors).invariant_factors
    if tuple(factors) != canonical:
        raise DocumentError(
            "/group/invariant_factors",
            f"{factors} is not in invariant-factor form; use {list(canonical)}",
        )
    G = FiniteAbelianGroup(canonical)
    elems = []
    for i, bp in enumerate(doc["branch_points"]):
        coords = bp["monodromy"]
        if len(coords) != G.ngens:
            raise DocumentError(
                f"/branch_points/{i}/monodromy",
                f"expected {G.ngens} coordinates for {G}, got {len(coords)}",
            )
        elems.append(G.element(coords))
    return BranchData(G, tuple(elems), doc.get("label"))


def _character_row(chi, d, d_conj, iso) -> dict:
    return {
        "exponents": list(chi.exponents),
        "d": d,
        "d_conjugate": d_conj,
        "isotypic_dimension": iso,
        "consistent": iso == d + d_conj,
    }


# each handler returns (result payload, table lines, exit code)
Handler = Callable[[BranchData, argparse.Namespace], tuple[dict, list[str], int]]


def _cmd_validate(b, args):
    return {"valid": True}, ["valid"], EXIT_OK


def _cmd_genus(b, args):
    g = genus(b)
    L = homology_of(b)
    ok = L.rank == 2 * g
    result = {
        "genus": g,
        "degree": b.group.order,
        "ramification_indices": list(b.ramification_indices()),
        "h1_rank": L.rank,
        "consistent": ok,
    }
    return result, [f"genus {g} (H1 rank {L.rank})"], EXIT_OK if ok else EXIT_INTERNAL


def _cmd_eigenspaces(b, args):
    table = chevalley_weil_dims(b)
    L = homology_of(b)
    rows = []
    lines = ["character        d   d(conj)  isotypic"]
    ok = True
    for chi, d in table.items():
        d_conj = table[chi.conjugate()]
        iso = isotypic_dimension(L, chi)
        if chi.is_trivial():
            row = _character_row(chi, 0, 0, iso)
            row["consistent"] = iso == 0
        else:
            row = _character_row(chi, d, d_conj, iso)
        ok &= row["consistent"]
        rows.append(row)
        lines.append(f"{str(chi):<16} {d:>2}   {d_conj:>7}  {iso:>8}")
    g = genus(b)
    ok &= table.total == g
    lines.append(f"total {table.total} = genus {g}")
    result = {
        "characters": rows,
        "total": table.total,
        "genus": g,
        "primes": isotypic_primes(b.group.exponent, L.rank),
        "consistent": ok,
    }
    return result, lines, EXIT_OK if ok else EXIT_INTERNAL


def _cmd_homology(b, args):
    L = homology_of(b)
    result = {
        "rank": L.rank,
        "genus": genus(b),
        "generators": [list(g.coords) for g in b.group.generators()],
        "action": [A.tolist() for A in L.action],
    }
    return result, [f"H1 rank {L.rank}"], EXIT_OK


def _cmd_prym(b, args):
    L = homology_of(b)
    P = prym_lattice(L)
    F = fixed_sublattice(L)
    result = {
        "ambient_rank": L.rank,
        "fixed_rank": F.rank,
        "prym_rank": P.rank,
        "dimension": P.dimension,
        "basis": [list(v) for v in P.sublattice.vectors],
    }
    return result, [f"Prym rank {P.rank}, dimension {P.dimension}"], EXIT_OK


def _cmd_verify(b, args):
    report = verify_decomposition(homology_of(b))
    status = "pass" if report.passed else "FAIL"
    lines = [
        f"fixed rank {report.fixed_rank}, Prym rank {report.prym_rank}, ambient {report.ambient_rank}",
        f"saturated norm image = fixed: {report.image_saturation_equals_fixed}",
        f"intersection rank {report.intersection_rank}, torsion exponent {report.torsion_exponent}"
        f" (|G| = {report.group_order})",
        f"decomposition {status}",
    ]
    return report.to_dict(), lines, EXIT_OK if report.passed else EXIT_INTERNAL


def _cmd_product(b, args):
    L = homology_of(b)
    report = verify_product(L, args.n)
    g = genus(b)
    ok = report.passed and report.prym_rank == args.n * 2 * g
    result = report.to_dict()
    result["genus"] = g
    result["passed"] = ok
    lines = [
        f"Prym rank of {args.n}-fold product {report.prym_rank} = {args.n} x {report.factor_prym_rank}",
        f"block-sum equality: {report.basis_equal}",
        f"product {'pass' if ok else 'FAIL'}",
    ]
    return result, lines, EXIT_OK if ok else EXIT_INTERNAL


def _cmd_rank_bound(b, args):
    report = rank_bound(b, args.n, args.end_rank)
    lines = [
        f"genus {report.genus}, Prym of {report.n_copies}-fold product has rank {report.prym_product_rank}",
        f"End rank: certified >= {report.end_rank_lower}, commutant {report.end_rank_upper},"
        f" used {report.end_rank_used}",
        f"bound ≥ {report.bound}",
    ]
    return report.to_dict(), lines, EXIT_OK


COMMANDS: dict[str, Handler] = {
    "validate": _cmd_validate,
    "genus": _cmd_genus,
    "eigenspaces": _cmd_eigenspaces,
    "homology": _cmd_homology,
    "prym": _cmd_prym,
    "verify": _cmd_verify,
    "product": _cmd_product,
    "rank-bound": _cmd_rank_bound,
}


def _process(path: Path, args) -> tuple[dict, list[str], int]:
    options = {}
    if args.command in ("product", "rank-bound"):
        options["n"] = args.n
    if args.command == "rank-bound":
        options["end_rank"] = args.end_rank
    report = {
        "schema": REPORT_SCHEMA_ID,
        "command": args.command,
        "input": {"source": path.name, "document": None, "options": options},
        "status": "ok",
        "violations": [],
        "result": None,
        "error": None,
    }

    def fail(status, message, code):
        report["status"] = status
        report["error"] = message
        return report, [f"error: {message}"], code

    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        return fail("error", f"cannot read {path.name}: {exc}", EXIT_INPUT)
    report["input"]["document"] = doc if isinstance(doc, dict) else None
    try:
        b = parse_cover_document(doc)
    except DocumentError as exc:
        return fail("error", str(exc), EXIT_INPUT)

    violations = validate(b)
    if violations:
        report["status"] = "invalid"
        report["violations"] = [v.to_dict() for v in violations]
        return report, [f"violation {v}" for v in violations], EXIT_INPUT

    try:
        result, lines, code = COMMANDS[args.command](b, args)
    except OverrideBelowCertifiedLower as exc:
        return fail("error", str(exc), EXIT_INPUT)
    except InvalidBranchData as exc:
        return fail("invalid", str(exc), EXIT_INPUT)
    except (InvariantViolation, TorsionDetected) as exc:
        return fail("failed", str(exc), EXIT_INTERNAL)
    report["result"] = result
    if code == EXIT_INTERNAL:
        report["status"] = "failed"
    return report, lines, code


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", type=Path, help="cover document (JSON)")
    src.add_argument("--dir", type=Path, help="process every *.json file, in filename order")
    common.add_argument("--json", action="store_true", help="emit report documents")
    common.add_argument("--quiet", action="store_true", help="no output, exit code only")

    parser = argparse.ArgumentParser(
        prog="prymlattice",
        description="Prym lattices and rank bounds for abelian covers of P^1",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check branch data",
        "genus": "Riemann-Hurwitz genus, cross-checked against H1",
        "eigenspaces": "character eigenspace dimensions of the differentials",
        "homology": "H1 rank and action matrices",
        "prym": "Prym lattice rank and dimension",
        "verify": "fixed/Prym decomposition certificate",
        "product": "Prym lattice of the n-fold diagonal self-product",
        "rank-bound": "Mordell-Weil rank lower bound for the twisted Jacobian",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name in ("product", "rank-bound"):
            p.add_argument("--n", type=int, required=True, help="number of copies (>= 1)")
        if name == "rank-bound":
            p.add_argument("--end-rank", type=int, default=None, help="known rank of End(Jac C)")
    return parser


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "n", 1) < 1:
        print(f"error: --n must be >= 1, got {args.n}", file=stderr)
        return EXIT_INPUT

    if args.dir is not None:
        if not args.dir.is_dir():
            print(f"error: {args.dir} is not a directory", file=stderr)
            return EXIT_INPUT
        paths = sorted(args.dir.glob("*.json"), key=lambda p: p.name)
    else:
        paths = [args.input]

    reports = []
    code = EXIT_OK
    for path in paths:
        report, lines, rc = _process(path, args)
        code = max(code, rc)
        reports.append(report)
        if not args.quiet and not args.json:
            if args.dir is not None:
                print(f"[{path.name}]", file=stdout)
            out = stderr if rc == EXIT_INPUT and report["status"] == "error" else stdout
            for line in lines:
                print(line, file=out)

    if args.json and not args.quiet:
        stdout.write(dumps(reports if args.dir is not None else reports[0]))
    return code


def main() -> None:
    sys.exit(run())
