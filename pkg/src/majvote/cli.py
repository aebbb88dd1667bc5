"""Command-line front end.  Each subcommand parses files, calls the library, prints."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .dynamics import BudgetExceeded, run, step
from .graph import (
    GENERATORS,
    GraphError,
    format_opinions,
    generate,
    is_connected,
    read_graph,
    read_opinions,
    write_graph,
)
from .potential import (
    MODES,
    arrow_consistent_assignments,
    arrow_consistent_assignments_product,
    bad_arrows,
    bounds_report,
    read_arrows,
    _resolve,
)
from .reduction import (
    CnfError,
    assignment_to_opinions,
    build_reduction,
    read_cnf,
    sample_unsat_ceiling,
    verify_satisfiable_direction,
)
from .search import DEFAULT_NODE_LIMIT, DEFAULT_SEED, exact_worst_case, sampled_worst_case
from .symmetry import asymmetric_graph, families

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _input_path(path: str, what: str) -> str:
    if path != "-" and not os.path.isfile(path):
        raise UsageError(f"{what} file not found: {path}")
    return path


def _load_graph(args):
    return read_graph(_input_path(args.graph, "graph")).graph


def _load_opinions(path: str, n: int):
    f = read_opinions(_input_path(path, "opinion"))
    if f.shape[0] != n:
        raise GraphError(f"opinion file has {f.shape[0]} entries, graph has {n} nodes")
    return f


def _write_out(path: str, data) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _kv(rows) -> str:
    rows = list(rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------


def cmd_sim(args) -> int:
    g = _load_graph(args)
    f0 = _load_opinions(args.opinions, g.n)
    traj = run(g, f0, max_rounds=args.max_rounds, trace=bool(args.trace))
    if args.trace:
        _write_out(args.trace, traj.to_json() + "\n")
    a, b = (format_opinions(x) for x in traj.period_pair)
    doc = {
        "n": g.n,
        "voting_time": traj.voting_time,
        "converged": traj.converged,
        "budget": traj.budget,
        "period_pair": [a, b],
    }
    shown = traj.voting_time if traj.converged else f"none (budget {traj.budget} exhausted)"
    text = _kv([("voting_time", shown), ("f_T", a), ("f_T+1", b)])
    if not args.trace or args.trace != "-":
        _emit(args, doc, text)
    if not traj.converged:
        print(f"error: no 2-periodic state within {traj.budget} rounds", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _fmt_rational(value: str, ceiling: int) -> str:
    return value if "/" not in value else f"{value} (ceil {ceiling})"


def cmd_bounds(args) -> int:
    g = _load_graph(args)
    f0 = _load_opinions(args.opinions, g.n) if args.opinions else None
    rep = bounds_report(g, f0)
    rows = [
        ("nodes", g.n),
        ("edges", rep["edges"]),
        ("v_odd", rep["v_odd"]),
        ("v_even", rep["v_even"]),
        ("bound_2E", rep["bound_2E"]),
        ("bound_E", rep["bound_E"]),
        ("bound_halfE", _fmt_rational(rep["bound_halfE"], rep["bound_halfE_ceil"])),
        ("bound_asym", _fmt_rational(rep["bound_asym"], rep["bound_asym_ceil"])),
    ]
    if f0 is not None:
        rows += [
            ("voting_time", rep["voting_time"]),
            ("phi0_G", rep["phi0_G"]),
            ("phi0_Gstar", rep["phi0_Gstar"]),
            ("bound_badarrows", rep["bound_badarrows"]),
        ]
    _emit(args, dict(rep, nodes=g.n), _kv(rows))
    return EXIT_OK


def _class_rows(part):
    return [
        {"id": i, "size": c.size, "kind": c.kind, "degree": c.degree, "members": list(c.members)}
        for i, c in enumerate(part.classes)
    ]


def _class_table(rows, members: bool) -> str:
    head = "id size kind degree" + (" members" if members else "")
    lines = [head]
    for r in rows:
        line = f"{r['id']} {r['size']} {r['kind']} {r['degree']}"
        if members:
            line += " " + ",".join(map(str, r["members"]))
        lines.append(line)
    return "\n".join(lines) + "\n"


def cmd_families(args) -> int:
    g = _load_graph(args)
    rows = _class_rows(families(g))
    _emit(args, {"classes": rows}, _class_table(rows, members=True))
    return EXIT_OK


def cmd_gdelta(args) -> int:
    g = _load_graph(args)
    red = asymmetric_graph(g)
    rows = _class_rows(red.partition)
    sidecar = {"kept_nodes": list(red.kept_nodes), "class_of": list(red.class_of), "stats": red.stats}
    if args.out_map:
        _write_out(args.out_map, json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    if args.out_graph:
        _write_out(args.out_graph, write_graph(red.g_delta))
    if args.out_graph != "-":
        text = _class_table(rows, members=False) + _kv(
            ("delta_" + k, v) for k, v in red.stats.items()
        )
        _emit(args, {"classes": rows, **sidecar}, text)
    return EXIT_OK


def _parse_assignment(bits: str, n: int):
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise CnfError(f"--assignment must be {n} characters of 0/1, got {bits!r}")
    return tuple(c == "1" for c in bits)


def cmd_reduce(args) -> int:
    phi = read_cnf(_input_path(args.cnf, "CNF"))
    layout = build_reduction(phi)
    if args.out_graph:
        _write_out(args.out_graph, write_graph(layout.graph))
    if args.out_roles:
        _write_out(args.out_roles, layout.roles_json() + "\n")
    quiet = args.out_graph == "-" or args.out_roles == "-"
    doc = {
        "nodes": layout.graph.n,
        "edges": layout.graph.edge_count,
        "ell": layout.ell,
        "h": layout.h,
        "num_vars": phi.num_vars,
        "num_clauses": phi.num_clauses,
    }
    lines = [" ".join(f"{k}={v}" for k, v in doc.items())]
    if args.assignment is not None:
        a = _parse_assignment(args.assignment, phi.num_vars)
        bits = format_opinions(assignment_to_opinions(layout, a))
        if args.out_opinions:
            _write_out(args.out_opinions, bits + "\n")
        doc["opinions"] = bits
        if args.verify:
            rep = verify_satisfiable_direction(phi, a, layout)
            doc["verify"] = {"voting_time": rep.voting_time, "expected": rep.expected, "ok": rep.ok,
                             "layers": rep.layer_times}
            lines.append(rep.summary())
    elif args.verify:
        raise UsageError("--verify needs --assignment")
    if args.sample:
        rep = sample_unsat_ceiling(phi, args.sample, args.seed)
        doc["sample"] = {
            "samples": rep.samples,
            "max_voting_time": rep.max_voting_time,
            "threshold": rep.threshold,
            "hits": rep.hits,
            "satisfiable": rep.satisfiable,
        }
        lines.append(
            f"samples={rep.samples} max_voting_time={rep.max_voting_time} "
            f"threshold={rep.threshold} hits={rep.hits} satisfiable={str(rep.satisfiable).lower()}"
        )
    if not quiet:
        _emit(args, doc, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_worstcase(args) -> int:
    g = _load_graph(args)
    start = time.perf_counter()
    if args.exact:
        res = exact_worst_case(g, node_limit=args.node_limit, workers=args.workers)
    else:
        res = sampled_worst_case(g, args.samples, seed=args.seed, climb_steps=args.climb)
    elapsed = time.perf_counter() - start
    doc = {
        "max_voting_time": res.max_voting_time,
        "witness": format_opinions(res.witness),
        "explored": res.explored,
        "mode": res.mode,
    }
    _emit(args, doc, _kv(doc.items()))
    # wall time is not reproducible, so it stays off stdout
    print(f"wall_time {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        try:
            return float(tok)
        except ValueError:
            raise UsageError(f"generator parameter {tok!r} is not a number") from None


def cmd_gen(args) -> int:
    bundle = generate(args.kind, *(_number(p) for p in args.params), seed=args.seed)
    _write_out(args.out, write_graph(bundle.graph))
    return EXIT_OK


def cmd_arrows(args) -> int:
    g = _load_graph(args)
    f0 = _load_opinions(args.opinions, g.n)
    h = _resolve(g, args.mode)
    arrows = bad_arrows(h, f0, step(h, f0))
    doc = {"mode": args.mode, "count": arrows.count, "arrows": [list(a) for a in arrows.sorted()]}
    _emit(args, doc, arrows.to_text())
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    g = _load_graph(args)
    beta = read_arrows(_input_path(args.arrows, "arrow"))
    if is_connected(g):
        found = arrow_consistent_assignments(g, beta, args.mode)
    elif args.product:
        found = arrow_consistent_assignments_product(g, beta, args.mode)
    else:
        raise GraphError("graph is disconnected; pass --product to combine per-component results")
    bits = [format_opinions(f) for f in found]
    _emit(args, {"mode": args.mode, "count": len(bits), "assignments": bits},
          "".join(b + "\n" for b in bits))
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="majvote", description="Binary majority dynamics toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, graph=True):
        sp = sub.add_parser(name, help=help_)
        if graph:
            sp.add_argument("graph", nargs="?", default="-", help="edge-list file, '-' for stdin")
        sp.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
        sp.set_defaults(func=fn)
        return sp

    sp = add("sim", cmd_sim, "simulate from an initial assignment")
    sp.add_argument("--opinions", required=True)
    sp.add_argument("--trace", metavar="PATH", help="write the JSON trace ('-' for stdout)")
    sp.add_argument("--max-rounds", type=int, default=None)

    sp = add("bounds", cmd_bounds, "closed-form voting-time bounds")
    sp.add_argument("--opinions", default=None)

    add("families", cmd_families, "twin families")

    sp = add("gdelta", cmd_gdelta, "asymmetric graph G^Δ")
    sp.add_argument("--out-graph", metavar="PATH")
    sp.add_argument("--out-map", metavar="PATH", help="JSON sidecar with kept_nodes")

    sp = add("reduce", cmd_reduce, "3-CNF gadget graph", graph=False)
    sp.add_argument("--cnf", required=True)
    sp.add_argument("--out-graph", metavar="PATH")
    sp.add_argument("--out-roles", metavar="PATH")
    sp.add_argument("--out-opinions", metavar="PATH")
    sp.add_argument("--assignment", metavar="BITS", help="truth values, e.g. 101")
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--sample", type=int, default=0, metavar="N")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = add("worstcase", cmd_worstcase, "worst-case voting time")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--samples", type=int, metavar="N")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--climb", type=int, default=0, metavar="STEPS")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)

    sp = add("gen", cmd_gen, "generate a graph", graph=False)
    sp.add_argument("kind", choices=sorted(GENERATORS))
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--out", default="-")

    for name, fn, help_ in (
        ("arrows", cmd_arrows, "bad arrows of an assignment"),
        ("reconstruct", cmd_reconstruct, "assignments consistent with an arrow set"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--mode", choices=MODES, default="gstar")
        if name == "arrows":
            sp.add_argument("--opinions", required=True)
        else:
            sp.add_argument("--arrows", required=True)
            sp.add_argument("--product", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"majvote {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, CnfError, BudgetExceeded) as exc:
        print(f"majvote {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
