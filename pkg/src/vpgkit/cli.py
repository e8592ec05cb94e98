"""Command-line interface: ``vpgkit <command> [options]``.

Data goes to ``--output`` (or standard output); diagnostics go to standard error.
Exit status: 0 success, 1 validation failure, 2 budget exhausted, 3 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from pathlib import Path
from typing import Sequence

from .decomposition import cut_values_mim, cut_values_mm, decompose
from .errors import BudgetExceeded, FormatError, PreconditionError, UnknownVertexError
from .graph import export_edge_list, intersection_graph
from .lab import (
    gen_b0cpg_subcubic,
    gen_random_vpg,
    gen_split_graph_rep,
    normalize_b0cpg,
    random_split_graph,
    reduce_full,
    split_reports_csv,
)
from .model import Constraints, GridRep, grid_edge_load, parse_representation, serialize_representation, validate
from .ptas import parse_epsilon, run_baker_ds, run_baker_is
from .solvers import DEFAULT_CLASS_BUDGET, Kind, brute_force, solve, verify_solution

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_MALFORMED = 0, 1, 2, 3

FAMILIES = ("random-vpg", "b0cpg", "split")


def _read(args: argparse.Namespace) -> GridRep:
    text = Path(args.input).read_text() if args.input else sys.stdin.read()
    return parse_representation(text)


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _constraints(args: argparse.Namespace) -> Constraints:
    return Constraints(args.max_bends, args.max_load, args.max_horizontal)


def _check(r: GridRep, args: argparse.Namespace) -> bool:
    report = validate(r, _constraints(args))
    for line in report.lines():
        _err(line)
    return report.ok


def cmd_validate(args: argparse.Namespace) -> int:
    r = _read(args)
    ok = _check(r, args)
    load = grid_edge_load(r).max_load
    _emit(args, f"{'valid' if ok else 'invalid'} paths={len(r)} columns={r.column_count if r.paths else 0} "
                f"max_bends={max((p.bends for p in r.paths), default=0)} max_load={load} "
                f"max_horizontal={r.max_horizontal}\n")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_graph(args: argparse.Namespace) -> int:
    g = intersection_graph(_read(args))
    _emit(args, export_edge_list(g))
    return EXIT_OK


def cmd_width(args: argparse.Namespace) -> int:
    r = _read(args)
    g = intersection_graph(r)
    bd = decompose(r)
    mm = cut_values_mm(g, bd)
    mim = cut_values_mim(g, bd, edge_budget=None)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_a", "node_b", "side_size", "mm", "mim"])
    for a, b in zip(mm, mim):
        w.writerow([a.edge[0], a.edge[1], a.side_size, a.value, b.value])
    _emit(args, buf.getvalue())
    t = max(1, grid_edge_load(r).max_load)
    cols = r.column_count if r.paths else 0
    _err(f"mm_width={max((c.value for c in mm), default=0)} mim_width={max((c.value for c in mim), default=0)} "
         f"bound={3 * t * (cols + 1)} (t={t}, columns={cols})")
    return EXIT_OK


def _kind(args: argparse.Namespace) -> Kind:
    return Kind(args.problem.upper())


def cmd_solve(args: argparse.Namespace) -> int:
    r = _read(args)
    g = intersection_graph(r)
    kind = _kind(args)
    if args.oracle:
        sol = brute_force(g, kind)
    else:
        sol = solve(g, decompose(r), kind, args.budget_classes)
    if not verify_solution(g, sol):
        raise AssertionError("solver returned an infeasible set")
    _emit(args, sol.to_text())
    return EXIT_OK


def _ptas(args: argparse.Namespace, kind: Kind) -> int:
    r = _read(args)
    if not _check(r, args):
        return EXIT_INVALID
    eps = parse_epsilon(args.epsilon)
    fn = run_baker_is if kind is Kind.IS else run_baker_ds
    run = fn(r, eps, args.max_horizontal, args.budget_classes, args.jobs)
    g = intersection_graph(r)
    if not verify_solution(g, run.solution):
        raise AssertionError("scheme returned an infeasible set")
    _emit(args, run.solution.to_text())
    diag = run.diagnostics_csv()
    if args.diagnostics:
        Path(args.diagnostics).write_text(diag)
    else:
        sys.stderr.write(diag)
    _err(f"max_width={run.max_width} width_budget={run.width_budget}")
    return EXIT_OK


def cmd_ptas_is(args: argparse.Namespace) -> int:
    return _ptas(args, Kind.IS)


def cmd_ptas_ds(args: argparse.Namespace) -> int:
    return _ptas(args, Kind.DS)


def cmd_reduce(args: argparse.Namespace) -> int:
    r = _read(args)
    kind = Kind.IS if args.is_ else Kind.DS
    norm = normalize_b0cpg(r, 5 if kind is Kind.IS else 4)
    out, total, reports = reduce_full(norm, kind)
    _emit(args, serialize_representation(out))
    side = split_reports_csv(reports)
    if args.report:
        Path(args.report).write_text(side)
    else:
        sys.stderr.write(side)
    _err(f"splits={len(reports)} total_offset={total} paths={len(out)}")
    return EXIT_OK


def _generate(family: str, n: int, seed: int, args: argparse.Namespace) -> GridRep:
    if family == "random-vpg":
        return gen_random_vpg(n, args.max_bends if args.max_bends is not None else 2,
                              args.max_horizontal if args.max_horizontal is not None else 3,
                              args.max_load if args.max_load is not None else 2,
                              args.columns, seed, rows=args.rows)
    if family == "b0cpg":
        return gen_b0cpg_subcubic(n, seed)
    cs, ins, edges = random_split_graph(n, seed)
    return gen_split_graph_rep(cs, ins, edges)


def cmd_generate(args: argparse.Namespace) -> int:
    _emit(args, serialize_representation(_generate(args.family, args.n, args.seed, args)))
    return EXIT_OK


def bench_rows(family: str, sizes: Sequence[int], seed: int, args: argparse.Namespace,
               timed: bool = True) -> list[list[object]]:
    """One row per (size, problem): n, columns, mm width of the caterpillar, value and seconds."""
    rows = []
    for n in sizes:
        r = _generate(family, n, seed, args)
        g = intersection_graph(r)
        bd = decompose(r)
        width = max((c.value for c in cut_values_mm(g, bd)), default=0)
        for kind in (Kind.IS, Kind.DS):
            t0 = time.perf_counter()
            sol = solve(g, bd, kind, args.budget_classes)
            dt = time.perf_counter() - t0
            rows.append([n, r.column_count, width, kind.value, sol.value, f"{dt:.4f}" if timed else ""])
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "columns", "mm_width", "problem", "value", "seconds"])
    w.writerows(bench_rows(args.family, sizes, args.seed, args))
    _emit(args, buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="representation document (default: standard input)")
    common.add_argument("--output", help="output file (default: standard output)")
    common.add_argument("--epsilon", default="1/2", help="accuracy as a rational, e.g. 1/3")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-bends", type=int)
    common.add_argument("--max-load", type=int)
    common.add_argument("--max-horizontal", type=int)
    common.add_argument("--budget-classes", type=int, default=DEFAULT_CLASS_BUDGET)
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="vpgkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check a document against constraints")
    sub.add_parser("graph", parents=[common], help="export the intersection graph as an edge list")
    sub.add_parser("width", parents=[common], help="per-cut mm/mim values of the caterpillar")
    s = sub.add_parser("solve", parents=[common], help="exact Independent Set / Dominating Set")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="decomposition dynamic program (default)")
    mode.add_argument("--oracle", action="store_true", help="brute-force search")
    s.add_argument("--problem", choices=("is", "ds"), default="is")
    for name in ("ptas-is", "ptas-ds"):
        q = sub.add_parser(name, parents=[common], help="shifting approximation scheme")
        q.add_argument("--diagnostics", help="write per-shift CSV here instead of standard error")
    red = sub.add_parser("reduce", parents=[common], help="normalize a B0-CPG document and split every 2+-vertex")
    flav = red.add_mutually_exclusive_group(required=True)
    flav.add_argument("--is", dest="is_", action="store_true")
    flav.add_argument("--ds", dest="ds", action="store_true")
    red.add_argument("--report", help="sidecar CSV of split reports (default: standard error)")
    gen = sub.add_parser("generate", parents=[common], help="emit a generated instance")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--n", type=int, default=20)
    gen.add_argument("--columns", type=int, default=10)
    gen.add_argument("--rows", type=int)
    b = sub.add_parser("bench", parents=[common], help="scaling sweep as CSV")
    b.add_argument("--family", choices=FAMILIES, default="random-vpg")
    b.add_argument("--sizes", default="25,50,100,200")
    b.add_argument("--columns", type=int, default=10)
    b.add_argument("--rows", type=int)
    return p


COMMANDS = {
    "validate": cmd_validate, "graph": cmd_graph, "width": cmd_width, "solve": cmd_solve,
    "ptas-is": cmd_ptas_is, "ptas-ds": cmd_ptas_ds, "reduce": cmd_reduce,
    "generate": cmd_generate, "bench": cmd_bench,
}


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (FormatError, UnknownVertexError, OSError) as exc:
        _err(f"error: {exc}")
        return EXIT_MALFORMED
    except BudgetExceeded as exc:
        _err(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (PreconditionError, ValueError) as exc:
        _err(f"invalid: {exc}")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
