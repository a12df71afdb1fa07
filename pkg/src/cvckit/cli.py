"""Command-line frontend: solve, reduce, verify, gen, bench.

Exit codes on every path: 0 success/yes, 1 no or verification failure,
2 parse/config/structural error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from .core import (
    CapacitatedGraph,
    CapExceededError,
    GraphFormatError,
    StructuralError,
    format_instance,
    format_orientation,
    parse_instance,
    parse_orientation,
    verify_orientation,
)
from .cutwidth import (
    LinearArrangement,
    cutwidth_of,
    find_arrangement,
    format_arrangement,
    parse_arrangement,
    solve_cutdp,
    solve_cutdp_detailed,
)
from .detecting import build_family, format_family, is_detecting, parse_family
from .fes import feedback_edge_set, solve_fes
from .generators import gnp, layered_with_ctw, sparse_with_fes
from .oracle import (
    format_choice_groups,
    parse_choice_groups,
    solve_canonical,
    solve_exact,
    solve_pruned,
)
from .reductions.cliquewidth import format_expression, parse_expression, verify_cw_expression
from .reductions.mcc import format_witness, parse_mcc, parse_witness, reduce_mcc_td, verify_td_witness
from .reductions.sat import group_formula, parse_dimacs, reduce_sat_cw, reduce_sat_natural
from .reductions.smc import parse_smc, reduce_smc
from .vertex_integrity import parse_modulator, solve_vi, solve_vi_opt

AUTO_FES_CAP = 22
AUTO_CUTDP_CAP = 20
AUTO_ORACLE_CAP = 20


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _emit_json(path: str | None, payload: dict) -> None:
    if path:
        _write(path, json.dumps(payload, sort_keys=True) + "\n")


def _load_arrangement(g: CapacitatedGraph, args) -> LinearArrangement:
    if args.arrangement:
        return parse_arrangement(_read(args.arrangement))
    mode = args.find_arrangement or "heuristic"
    return find_arrangement(g, mode)


def _solve(args) -> int:
    g = parse_instance(_read(args.input))
    k = args.k if args.k is not None else g.budget
    algo = args.algo

    if algo == "auto":
        if len(feedback_edge_set(g)) <= AUTO_FES_CAP:
            algo = "fes"
        else:
            arr = find_arrangement(g, "heuristic")
            if cutwidth_of(g, arr) <= AUTO_CUTDP_CAP:
                algo = "cutdp"
                if not args.arrangement and not args.find_arrangement:
                    args.find_arrangement = "heuristic"
            elif g.n <= AUTO_ORACLE_CAP:
                algo = "oracle"
            else:
                print("error: instance exceeds every automatic solver cap", file=sys.stderr)
                return 2

    decision = None
    minsize = None
    cert = None
    if algo == "oracle":
        minsize, cert = solve_exact(g)
    elif algo == "fes":
        minsize, cert = solve_fes(g)
    elif algo == "cutdp":
        arr = _load_arrangement(g, args)
        minsize, cert = solve_cutdp(g, arr)
    elif algo == "vi":
        modulator = parse_modulator(_read(args.modulator)) if args.modulator else None
        if k is None:
            minsize, cert = solve_vi_opt(g, modulator=modulator)
        else:
            decision, cert = solve_vi(g, k, modulator=modulator)
    elif algo == "pruned":
        if k is None:
            print("error: --algo pruned needs --k", file=sys.stderr)
            return 2
        decision, cert = solve_pruned(g, k)
    elif algo == "canonical":
        if k is None or not args.meta:
            print("error: --algo canonical needs --k and --meta", file=sys.stderr)
            return 2
        meta = parse_choice_groups(_read(args.meta))
        decision, cert = solve_canonical(g, meta, k)
    else:
        print(f"error: unknown algorithm '{algo}'", file=sys.stderr)
        return 2

    if decision is None and k is not None:
        decision = minsize is not None and minsize <= k

    if args.cert_out and cert is not None:
        _write(args.cert_out, format_orientation(cert))

    payload = {"command": "solve", "algo": algo, "input": args.input, "k": k}
    if k is not None:
        answer = "yes" if decision else "no"
        print(f"FEASIBLE {answer}")
        payload["feasible"] = answer
        _emit_json(args.json, payload)
        return 0 if decision else 1
    if minsize == math.inf:
        print("INFEASIBLE")
        payload["minsize"] = None
        _emit_json(args.json, payload)
        return 1
    print(f"MINSIZE {minsize}")
    payload["minsize"] = minsize
    _emit_json(args.json, payload)
    return 0


def _reduce(args) -> int:
    prefix = args.output
    payload = {"command": "reduce", "type": args.type, "input": args.input}
    if args.type == "smc":
        red = reduce_smc(parse_smc(_read(args.input)))
        _write(prefix + ".cvc", format_instance(red.graph))
        _write(prefix + ".meta", format_choice_groups(red.meta))
        print(f"REDUCED smc vertices={red.graph.n} edges={len(red.graph.edges)} k={red.budget}")
        payload.update(k=red.budget, vertices=red.graph.n)
    elif args.type == "sat-natural":
        psi = parse_dimacs(_read(args.input))
        grouping = group_formula(psi, args.grouping)
        families = [
            build_family(len(cg), 4, args.family_mode) for cg in grouping.clause_groups
        ]
        red = reduce_sat_natural(psi, grouping, families)
        _write(prefix + ".cvc", format_instance(red.graph))
        _write(prefix + ".meta", format_choice_groups(red.meta))
        for i, fam in enumerate(red.families, start=1):
            _write(f"{prefix}.fam{i}", format_family(fam))
        print(
            f"REDUCED sat-natural vertices={red.graph.n} edges={len(red.graph.edges)} "
            f"k={red.budget} variable-groups={len(grouping.variable_groups)} "
            f"clause-groups={len(grouping.clause_groups)}"
        )
        payload.update(k=red.budget, vertices=red.graph.n)
    elif args.type == "sat-cw":
        red = reduce_sat_cw(parse_dimacs(_read(args.input)))
        _write(prefix + ".cvc", format_instance(red.graph))
        _write(prefix + ".meta", format_choice_groups(red.meta))
        _write(prefix + ".cwx", format_expression(red.expression))
        print(f"REDUCED sat-cw vertices={red.graph.n} edges={len(red.graph.edges)} k={red.budget}")
        payload.update(k=red.budget, vertices=red.graph.n)
    elif args.type == "mcc-td":
        red = reduce_mcc_td(parse_mcc(_read(args.input)))
        _write(prefix + ".cvc", format_instance(red.graph))
        _write(prefix + ".meta", format_choice_groups(red.meta))
        _write(prefix + ".tdw", format_witness(red.witness))
        print(
            f"REDUCED mcc-td vertices={red.graph.n} edges={len(red.graph.edges)} "
            f"k={red.budget} choice-groups={len(red.choice_groups)} "
            f"edge-groups={len(red.edge_groups)}"
        )
        payload.update(
            k=red.budget, vertices=red.graph.n, choice_groups=len(red.choice_groups)
        )
    else:
        print(f"error: unknown reduction '{args.type}'", file=sys.stderr)
        return 2
    _emit_json(args.json, payload)
    return 0


def _verify(args) -> int:
    if args.type == "orientation":
        g = parse_instance(_read(args.input))
        orientation = parse_orientation(_read(args.cert), g)
        report = verify_orientation(g, orientation)
        if not report.feasible:
            print(f"INVALID violations={len(report.violations)}")
            return 1
        if args.k is not None and report.size > args.k:
            print(f"INVALID size={report.size} exceeds k={args.k}")
            return 1
        print(f"VALID size={report.size}")
        return 0
    if args.type == "arrangement":
        g = parse_instance(_read(args.input))
        arr = parse_arrangement(_read(args.arrangement))
        if len(arr) != g.n:
            raise StructuralError("arrangement size does not match the instance")
        width = cutwidth_of(g, arr)
        print(f"CUTWIDTH {width}")
        if args.max_ctw is not None and width > args.max_ctw:
            return 1
        return 0
    if args.type == "expression":
        g = parse_instance(_read(args.input))
        expr = parse_expression(_read(args.expr))
        if verify_cw_expression(expr, g):
            print("VALID expression")
            return 0
        print("INVALID expression")
        return 1
    if args.type == "witness":
        g = parse_instance(_read(args.input))
        witness = parse_witness(_read(args.witness))
        valid, depth = verify_td_witness(g, witness)
        if valid:
            print(f"VALID depth={depth}")
            return 0
        print("INVALID witness")
        return 1
    if args.type == "family":
        family = parse_family(_read(args.family))
        if is_detecting(args.universe, family, args.d):
            print("VALID family")
            return 0
        print("INVALID family")
        return 1
    print(f"error: unknown verification '{args.type}'", file=sys.stderr)
    return 2


def _gen(args) -> int:
    try:
        if args.model == "gnp":
            g = gnp(args.n, args.p, args.seed)
        elif args.model == "sparse":
            g = sparse_with_fes(args.n, args.fes, args.seed)
        elif args.model == "layered":
            g = layered_with_ctw(args.n, args.ctw, args.seed, extra=args.extra)
        else:
            print(f"error: unknown model '{args.model}'", file=sys.stderr)
            return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write(args.output, format_instance(g))
    if args.arrangement_out:
        _write(args.arrangement_out, format_arrangement(LinearArrangement(tuple(range(1, g.n + 1)))))
    print(f"GENERATED {args.model} n={g.n} m={len(g.edges)} seed={args.seed}")
    return 0


def _bench(args) -> int:
    rows = []
    violated = False
    print("n m ctw max_table work fitted_c seconds")
    for ctw in range(args.ctw_min, args.ctw_max + 1):
        n = args.n if args.n else max(2 * ctw, 8)
        g = layered_with_ctw(n, ctw, args.seed, extra=args.extra)
        arr = LinearArrangement(tuple(range(1, g.n + 1)))
        start = time.perf_counter()
        minsize, _, layers = solve_cutdp_detailed(g, arr)
        elapsed = time.perf_counter() - start
        max_table = max(layer.table_size for layer in layers)
        total_work = sum(layer.work for layer in layers[1:])
        fitted = 0.0
        for i in range(1, g.n + 1):
            bound = (2 ** len(layers[i - 1].edges) + 2 ** len(layers[i].edges)) * g.n**2
            ratio = layers[i].work / bound
            fitted = max(fitted, ratio)
            if layers[i].work > 2 * bound:
                violated = True
        rows.append(
            {
                "n": g.n,
                "m": len(g.edges),
                "ctw": ctw,
                "max_table": max_table,
                "work": total_work,
                "fitted_c": round(fitted, 6),
                "seconds": round(elapsed, 4),
                "minsize": None if minsize == math.inf else minsize,
                "layer_tables": [layer.table_size for layer in layers],
            }
        )
        print(
            f"{g.n} {len(g.edges)} {ctw} {max_table} {total_work} "
            f"{fitted:.6f} {elapsed:.4f}"
        )
    _emit_json(args.json, {"command": "bench", "rows": rows})
    if violated:
        print("WORK BOUND VIOLATED")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvckit",
        description="Exact solvers, reductions, and verifiers for capacitated "
        "vertex cover in its edge-orientation form.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance")
    p_solve.add_argument("--input", required=True)
    p_solve.add_argument("--k", type=int, default=None)
    p_solve.add_argument(
        "--algo",
        default="auto",
        choices=["auto", "oracle", "pruned", "canonical", "cutdp", "vi", "fes"],
    )
    p_solve.add_argument("--arrangement")
    p_solve.add_argument("--find-arrangement", choices=["exact", "heuristic"])
    p_solve.add_argument("--modulator")
    p_solve.add_argument("--meta")
    p_solve.add_argument("--cert-out")
    p_solve.add_argument("--json")
    p_solve.set_defaults(func=_solve)

    p_reduce = sub.add_parser("reduce", help="run a hardness construction")
    p_reduce.add_argument("--type", required=True, choices=["smc", "sat-natural", "sat-cw", "mcc-td"])
    p_reduce.add_argument("--input", required=True)
    p_reduce.add_argument("--output", required=True, help="output path prefix")
    p_reduce.add_argument("--grouping", default="greedy", choices=["trivial", "greedy"])
    p_reduce.add_argument("--family-mode", default="greedy", choices=["singleton", "greedy"])
    p_reduce.add_argument("--json")
    p_reduce.set_defaults(func=_reduce)

    p_verify = sub.add_parser("verify", help="check a certificate or side artifact")
    p_verify.add_argument(
        "--type",
        required=True,
        choices=["orientation", "arrangement", "expression", "witness", "family"],
    )
    p_verify.add_argument("--input")
    p_verify.add_argument("--cert")
    p_verify.add_argument("--arrangement")
    p_verify.add_argument("--expr")
    p_verify.add_argument("--witness")
    p_verify.add_argument("--family")
    p_verify.add_argument("--k", type=int, default=None)
    p_verify.add_argument("--max-ctw", type=int, default=None)
    p_verify.add_argument("--universe", type=int, default=0)
    p_verify.add_argument("--d", type=int, default=4)
    p_verify.set_defaults(func=_verify)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--model", required=True, choices=["gnp", "sparse", "layered"])
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--p", type=float, default=0.5)
    p_gen.add_argument("--fes", type=int, default=0)
    p_gen.add_argument("--ctw", type=int, default=1)
    p_gen.add_argument("--extra", type=int, default=0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--output", required=True)
    p_gen.add_argument("--arrangement-out")
    p_gen.set_defaults(func=_gen)

    p_bench = sub.add_parser("bench", help="layer-table benchmark for the cut DP")
    p_bench.add_argument("--ctw-min", type=int, required=True)
    p_bench.add_argument("--ctw-max", type=int, required=True)
    p_bench.add_argument("--n", type=int, default=None)
    p_bench.add_argument("--extra", type=int, default=6)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--json")
    p_bench.set_defaults(func=_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, StructuralError, CapExceededError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
