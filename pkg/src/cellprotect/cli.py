"""Command-line front end.

Every command reads JSON files and writes JSON (or CSV for ``bench``) to
standard output.  Exit codes: 0 success or protected, 1 not protected,
2 infeasible, 3 input error.  Errors are reported as JSON on standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import npc, oracle
from .detection import invariant_cells, protection_test, test_total_protection
from .graph import connected_components, dump_graph, strongly_connected_components, suppressed_graph, total_graph
from .suppress import EXACT, MODES, PAPER, InfeasibleError, optimal_protection_set, plan_graph
from .table import CellRef, Table, TableError, cell_to_json, parse_table, validate

OK, NOT_PROTECTED, INFEASIBLE, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _report_error("usage", message)
        sys.exit(INPUT_ERROR)


def _report_error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}, sort_keys=True), file=sys.stderr)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _load_table(path: str, strict: bool = True) -> Table:
    return parse_table(_read_json(path), strict=strict)


def parse_cells(spec: str, t: Table) -> list[CellRef]:
    """``all``, a comma list of ``row:col`` labels, or a JSON file listing
    ``{"row": .., "col": ..}`` objects or ``"row:col"`` strings."""
    if spec == "all":
        return list(t.suppressed_cells)
    if os.path.isfile(spec):
        doc = _read_json(spec)
        if not isinstance(doc, list):
            raise InputError(f"{spec}: expected a JSON list of cells")
        items = [f"{x['row']}:{x['col']}" if isinstance(x, dict) else str(x) for x in doc]
    else:
        items = [x.strip() for x in spec.split(",") if x.strip()]
    out = []
    for item in items:
        row, sep, col = item.partition(":")
        if not sep:
            raise InputError(f"cell {item!r} is not of the form row:col")
        out.append(t.resolve(row, col))
    return out


def _labels(g, groups) -> list[list[str]]:
    return [[g.vertex_label(v) for v in grp] for grp in groups]


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    report = validate(_load_table(args.table, strict=False))
    return report.to_dict(), OK if report.ok else INPUT_ERROR


def cmd_analyze(args) -> tuple[dict, int]:
    t = _load_table(args.table)
    g = suppressed_graph(t)
    out = {
        "edges": dump_graph(g).splitlines(),
        "components": _labels(g, connected_components(g).groups),
        "sccs": _labels(g, strongly_connected_components(g).groups),
        "invariant_cells": [cell_to_json(t, c) for c in sorted(invariant_cells(t))],
    }
    return out, OK


def cmd_test_protection(args) -> tuple[dict, int]:
    t = _load_table(args.table)
    report = test_total_protection(t, parse_cells(args.cells, t))
    return report.to_dict(suppressed_graph(t)), OK if report.protected else NOT_PROTECTED


def cmd_protect(args) -> tuple[dict, int]:
    t = _load_table(args.table)
    q = parse_cells(args.cells, t)
    if total_graph(t).is_undirected:
        try:
            plan = optimal_protection_set(t, q, args.mode)
        except InfeasibleError as exc:
            return {"mode": args.mode, "infeasible": True, "message": str(exc)}, INFEASIBLE
        return plan.to_dict(t), OK
    if args.mode == PAPER:
        raise InputError("paper mode needs an undirected total graph; use --mode exact")
    plan = npc.exact_min_suppression_mixed(t, q, args.budget)
    if plan is None:
        return {"mode": EXACT, "infeasible": True, "message": "no plan within the budget"}, INFEASIBLE
    return plan.to_dict(t), OK


def cmd_reduce_hitting_set(args) -> tuple[dict, int]:
    try:
        hs = npc.HittingSetInstance.from_dict(_read_json(args.instance))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed hitting-set document: {exc}") from exc
    inst = npc.reduce_hitting_set(hs)
    if not args.solve:
        return inst.to_dict(), OK
    hit = npc.solve_hitting_set(hs)
    p = npc.search_graph_instance(inst)
    out = {
        "instance": inst.to_dict(),
        "hitting_set": None if hit is None else sorted(hit),
        "edges": None if p is None else [f"{inst.a_labels[i]} {inst.b_labels[j]}" for i, j in p],
    }
    return out, OK if p is not None else INFEASIBLE


def cmd_oracle(args) -> tuple[dict, int]:
    t = _load_table(args.table)
    q = parse_cells(args.cells, t)
    plan = oracle.brute_force_min_protection(t, q, limit=args.limit)
    if plan is None:
        return {"mode": "oracle", "infeasible": True}, INFEASIBLE
    return plan.to_dict(t), OK


def bench_one(n: int, seed: int) -> tuple[int, int, int, float]:
    """Protection test plus paper-mode planning on a random sparse instance
    with every second suppressed edge protected."""
    g = oracle.generate_sparse_graph(n, 2 * n, seed)
    q = range(0, len(g.edges), 2)
    start = time.perf_counter()
    protection_test(g, q)
    plan_graph(g, q, PAPER, verify=False)
    return n, len(g.edges), n, (time.perf_counter() - start) * 1000


def cmd_bench(args) -> tuple[str, int]:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"--sizes must be a comma list of integers: {exc}") from exc
    if not sizes or min(sizes) < 2:
        raise InputError("--sizes needs integers of at least 2")
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(bench_one, sizes, [args.seed] * len(sizes)))
    else:
        rows = [bench_one(n, args.seed) for n in sizes]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["size", "m", "n", "milliseconds"])
    for size, m, n, ms in rows:
        w.writerow([size, m, n, f"{ms:.1f}"])
    return buf.getvalue(), OK


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cellprotect", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write the result here instead of standard output")
    common.add_argument("--quiet", action="store_true", help="suppress the result; only the exit code counts")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="check a table document")
    p.add_argument("table")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("analyze", parents=[common], help="components, SCCs and invariant cells")
    p.add_argument("table")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("test-protection", parents=[common], help="decide total protection of some cells")
    p.add_argument("table")
    p.add_argument("--cells", default="all")
    p.set_defaults(run=cmd_test_protection)

    p = sub.add_parser("protect", parents=[common], help="fewest extra cells to suppress")
    p.add_argument("table")
    p.add_argument("--cells", default="all")
    p.add_argument("--mode", choices=MODES, default=EXACT)
    p.add_argument("--budget", type=int, default=None, help="size limit for directed total graphs")
    p.set_defaults(run=cmd_protect)

    p = sub.add_parser("reduce-hitting-set", parents=[common], help="hitting set to graph instance")
    p.add_argument("instance")
    p.add_argument("--solve", action="store_true", help="also solve both sides exhaustively")
    p.set_defaults(run=cmd_reduce_hitting_set)

    p = sub.add_parser("oracle", parents=[common], help="brute-force minimum protection")
    p.add_argument("table")
    p.add_argument("--cells", default="all")
    p.add_argument("--limit", type=int, default=20, help="largest number of published cells to enumerate")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("bench", parents=[common], help="timing on random sparse instances (CSV)")
    p.add_argument("--sizes", default="10000,20000,40000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(run=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result, code = args.run(args)
    except (InputError, TableError, oracle.OracleLimitError, ValueError) as exc:
        _report_error(type(exc).__name__, str(exc))
        return INPUT_ERROR
    text = result if isinstance(result, str) else json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif not args.quiet:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
