"""Command-line front end: generation, LP/IP solving, rounding,
decomposition, bound curves, and gap reports with JSON/CSV outputs.

Exit codes: 0 success, 2 validation error, 3 scale cap exceeded,
4 infeasible.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import decomposition as dec
from .cutlp import (CutConstraint, LpInfeasibleError, check_feasible, solve_lp,
                    verify_vertex)
from .exact import DEFAULT_IP_EDGE_CAP, ScaleCapError, gap, solve_ip
from .gadget import gadget_tight_family, pcst_gadget_instance
from .graph import GraphError
from .instance import (FracSolution, InstanceError, make_base, read_frac_solution,
                       read_instance, write_frac_solution, write_instance,
                       write_instance_json)
from .layered import build_layered, canonical_point, layered_instance
from .rational import format_rational, parse_rational, rational_json
from .rounding import (best_threshold_round, gw_steiner_forest, mu_bound,
                       threshold_round, two_value_round)
from .simplex import LpInfeasible


def _edge_cap(args):
    cap = getattr(args, "edge_cap", None)
    if cap is not None:
        return cap
    return int(os.environ.get("PCSF_EDGE_CAP", DEFAULT_IP_EDGE_CAP))


def _emit(doc):
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _solution_doc(sol):
    doc = {
        "forest": sorted(sol.forest),
        "disconnected": sorted(sol.disconnected),
        "cost": rational_json(sol.cost),
        "penalty": rational_json(sol.penalty),
    }
    doc["objective"] = rational_json(sol.objective) if sol.objective is not None else None
    return doc


# --- gen ----------------------------------------------------------------

def _cmd_gen(args):
    if args.what == "layered":
        base = make_base(args.base, path=args.base_file)
        lc = build_layered(base, args.m, args.k)
        inst = layered_instance(lc, scheme=args.scheme)
        _write_inst(inst, args.output, args.json)
        if args.point:
            mode = args.point_mode
            write_frac_solution(canonical_point(lc, mode), args.point)
        _emit({"nodes": lc.graph.num_nodes, "edges": lc.graph.num_edges,
               "pairs": inst.num_pairs, "n": lc.n, "l": lc.l, "m": lc.m, "k": lc.k})
    elif args.what == "gadget":
        inst, point = pcst_gadget_instance(args.k)
        _write_inst(inst, args.output, args.json)
        if args.point:
            write_frac_solution(point, args.point)
        _emit({"nodes": inst.graph.num_nodes, "edges": inst.graph.num_edges,
               "pairs": inst.num_pairs, "k": args.k})
    else:  # base
        base = make_base(args.base, path=args.base_file)
        from .instance import PcsfInstance
        inst = PcsfInstance(base, {e: Fraction(1) for e in range(base.num_edges)}, [], {})
        _write_inst(inst, args.output, args.json)
        _emit({"nodes": base.num_nodes, "edges": base.num_edges,
               "degree": base.degree(0)})
    return 0


def _write_inst(inst, path, as_json):
    if path is None:
        return
    if as_json:
        write_instance_json(inst, path)
    else:
        write_instance(inst, path)


# --- lp -----------------------------------------------------------------

def read_family(path, inst):
    """Constraint family file: `cut <pair> <node> ...`, `nonneg_x <edge>`,
    `nonneg_z <pair>` lines; nodes given by name."""
    name_to_id = {n: i for i, n in enumerate(inst.node_names)}
    family = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "cut" and len(parts) >= 3:
                side = frozenset(name_to_id[tok] for tok in parts[2:])
                family.append(CutConstraint(pair=int(parts[1]), side=side))
            elif parts[0] == "nonneg_x" and len(parts) == 2:
                family.append(CutConstraint(pair=None, side=None, kind="nonneg_x",
                                            edge=int(parts[1])))
            elif parts[0] == "nonneg_z" and len(parts) == 2:
                family.append(CutConstraint(pair=int(parts[1]), side=None, kind="nonneg_z"))
            else:
                raise InstanceError(f"{path}:{lineno}: malformed line: {line!r}")
    return family


def _cmd_lp(args):
    if args.what == "solve":
        inst = read_instance(args.instance)
        res = solve_lp(inst, mode=args.mode)
        if args.output:
            write_frac_solution(res.solution, args.output)
        _emit({"value": rational_json(res.value), "iterations": res.iterations,
               "active_cuts": len(res.active_cuts)})
        return 0
    if args.what == "check":
        inst = read_instance(args.instance)
        point = read_frac_solution(args.point)
        violated = check_feasible(inst, point, mode=args.mode)
        doc = {"feasible": violated is None}
        if violated is not None:
            doc["violated"] = {"kind": violated.kind, "pair": violated.pair,
                               "side": sorted(violated.side) if violated.side else None,
                               "edge": violated.edge}
        _emit(doc)
        return 0
    # verify-vertex
    if args.gadget_k is not None:
        inst, point = pcst_gadget_instance(args.gadget_k)
        family = gadget_tight_family(inst, args.gadget_k)
    else:
        inst = read_instance(args.instance)
        point = read_frac_solution(args.point)
        family = read_family(args.family, inst)
    report = verify_vertex(inst, point, family)
    max_coord = max(list(point.x.values()) + list(point.z.values()))
    _emit({"feasible": report.is_feasible, "all_tight": report.all_tight,
           "unique": report.unique, "rank": report.rank,
           "dimension": report.dimension,
           "max_coord": rational_json(max_coord),
           "failures": len(report.failures)})
    return 0


# --- ip -----------------------------------------------------------------

def _cmd_ip(args):
    inst = read_instance(args.instance)
    sol = solve_ip(inst, edge_cap=_edge_cap(args))
    _emit(_solution_doc(sol))
    return 0


# --- round --------------------------------------------------------------

def _cmd_round(args):
    inst = read_instance(args.instance)
    point = read_frac_solution(args.point)
    base_value = inst.objective(point.x, point.z)
    if args.method == "threshold":
        theta = parse_rational(args.theta)
        sol = threshold_round(inst, point, theta)
        factor = max(Fraction(2) / (1 - theta), Fraction(1) / theta)
        extra = {"theta": rational_json(theta)}
    elif args.method == "best":
        sol, theta = best_threshold_round(inst, point)
        factor = max(Fraction(2) / (1 - theta), Fraction(1) / theta)
        extra = {"theta": rational_json(theta)}
    else:  # two-value
        p = parse_rational(args.p)
        sol = two_value_round(inst, point, p)
        gamma = sorted({v for v in point.z.values() if v != 0})[0]
        factor = max((2 - 2 * p * gamma) / (1 - gamma), p / gamma)
        extra = {"p": rational_json(p), "gamma": rational_json(gamma)}
    doc = _solution_doc(sol)
    doc.update(extra)
    doc["ratio_bound"] = rational_json(factor)
    doc["point_value"] = rational_json(base_value)
    if base_value > 0:
        doc["observed_ratio"] = rational_json(sol.objective / base_value)
    _emit(doc)
    return 0


# --- decompose ----------------------------------------------------------

def _layered_from_args(args):
    base = make_base(args.base, path=getattr(args, "base_file", None))
    return build_layered(base, args.m, args.k)


def _cmd_decompose(args):
    if args.what in ("min-alpha", "min-beta"):
        inst = read_instance(args.instance)
        point = read_frac_solution(args.point)
        fn = dec.min_alpha if args.what == "min-alpha" else dec.min_beta
        value, dist, witness = fn(inst, point, method=args.method,
                                  edge_cap=_edge_cap(args))
        if args.output:
            dec.write_distribution(dist, args.output)
        witness_written = False
        if args.witness:
            mode = "gap" if args.what == "min-alpha" else "lmp"
            winst = dec.witness_costs_from_dual(witness, mode=mode,
                                                beta=value if mode == "lmp" else None)
            write_instance(winst, args.witness)
            witness_written = True
        key = "alpha_star" if args.what == "min-alpha" else "beta_star"
        _emit({key: rational_json(value), "support": len(dist.entries),
               "witness_written": witness_written})
        return 0
    if args.what == "explicit":
        lc = _layered_from_args(args)
        dist = dec.explicit_gap_distribution(lc, parse_rational(args.alpha))
        if args.output:
            dec.write_distribution(dist, args.output)
        _emit({"support": len(dist.entries), "alpha": rational_json(parse_rational(args.alpha))})
        return 0
    if args.what == "verify":
        lc = _layered_from_args(args)
        dist = dec.read_distribution(args.dist)
        from .layered import GapParams
        params = GapParams(alpha=parse_rational(args.alpha) if args.alpha else None,
                           beta=parse_rational(args.beta) if args.beta else None)
        report = dec.verify_distribution(lc, dist, params, args.mode)
        _emit(report.to_json())
        return 0 if report.passes else 4
    # trace
    lc = _layered_from_args(args)
    dist = dec.read_distribution(args.dist)
    steps = dec.chain_trace(lc, dist, parse_rational(args.alpha))
    _emit({"steps": [{"node": s["node"], "prob": rational_json(s["prob"]),
                      "bound": rational_json(s["bound"]), "ok": s["ok"]}
                     for s in steps],
           "all_ok": all(s["ok"] for s in steps)})
    return 0


# --- bounds -------------------------------------------------------------

def _parse_range(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def export_plot_data(rows, path):
    """CSV with columns (n, k, l, bound, alpha_star, beta_star, ratio)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "k", "l", "bound", "alpha_star", "beta_star", "ratio"])
        for row in rows:
            writer.writerow([row.get("n", ""), row.get("k", ""), row.get("l", ""),
                             row.get("bound", ""), row.get("alpha_star", ""),
                             row.get("beta_star", ""), row.get("ratio", "")])


def _cmd_bounds(args):
    rows = []
    if args.what == "alpha":
        for n in _parse_range(args.n):
            for k in _parse_range(args.k):
                value = dec.bound_alpha(n, k)
                rows.append({"n": n, "k": k, "l": 3,
                             "bound": format_rational(value)})
    else:
        for n in _parse_range(args.n) if args.n else [None]:
            for k in _parse_range(args.k) if args.k else [None]:
                value = dec.bound_beta(args.l, n, k)
                rows.append({"n": "" if n is None else n,
                             "k": "" if k is None else k, "l": args.l,
                             "bound": format_rational(value)})
    if args.csv:
        export_plot_data(rows, args.csv)
    last = parse_rational(rows[-1]["bound"])
    _emit({"rows": len(rows), "bound": rational_json(last)})
    return 0


# --- report -------------------------------------------------------------

def _cmd_report(args):
    inst = read_instance(args.instance)
    lp, ip, ratio = gap(inst)
    doc = {"lp": rational_json(lp), "ip": rational_json(ip),
           "ratio": rational_json(ratio)}
    if args.csv:
        export_plot_data([{"ratio": format_rational(ratio)}], args.csv)
    _emit(doc)
    return 0


# --- argument parsing ---------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(prog="pcsf",
                                  description="Prize-collecting Steiner forest LP toolkit")
    top.add_argument("--seed", type=int, default=0, help="recorded for reproducibility")
    top.add_argument("--threads", type=int, default=1, help="accepted; results never depend on it")
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen").add_subparsers(dest="what", required=True)
    g = gen.add_parser("layered")
    g.add_argument("--base", default="k4")
    g.add_argument("--base-file")
    g.add_argument("--m", type=int, default=4)
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--scheme", default="unit")
    g.add_argument("--point", help="write the canonical point here")
    g.add_argument("--point-mode", default="gap", choices=["gap", "lmp"])
    g.add_argument("-o", "--output")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=_cmd_gen)
    g = gen.add_parser("gadget")
    g.add_argument("--k", type=int, default=6)
    g.add_argument("--point")
    g.add_argument("-o", "--output")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=_cmd_gen)
    g = gen.add_parser("base")
    g.add_argument("--base", default="k4")
    g.add_argument("--base-file")
    g.add_argument("-o", "--output")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=_cmd_gen)

    lp = sub.add_parser("lp").add_subparsers(dest="what", required=True)
    p = lp.add_parser("solve")
    p.add_argument("instance")
    p.add_argument("--mode", default="exact", choices=["exact", "tol"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_lp)
    p = lp.add_parser("check")
    p.add_argument("instance")
    p.add_argument("--point", required=True)
    p.add_argument("--mode", default="exact", choices=["exact", "tol"])
    p.set_defaults(func=_cmd_lp)
    p = lp.add_parser("verify-vertex")
    p.add_argument("instance", nargs="?")
    p.add_argument("--point")
    p.add_argument("--family")
    p.add_argument("--gadget-k", type=int, help="generate the gadget instance, point, and family")
    p.set_defaults(func=_cmd_lp)

    p = sub.add_parser("ip")
    ipsub = p.add_subparsers(dest="what", required=True)
    p = ipsub.add_parser("solve")
    p.add_argument("instance")
    p.add_argument("--edge-cap", type=int)
    p.set_defaults(func=_cmd_ip)

    p = sub.add_parser("round")
    p.add_argument("instance")
    p.add_argument("--point", required=True)
    p.add_argument("--method", default="threshold",
                   choices=["threshold", "best", "two-value"])
    p.add_argument("--theta", default="1/3")
    p.add_argument("--p", default="3/4")
    p.set_defaults(func=_cmd_round)

    d = sub.add_parser("decompose").add_subparsers(dest="what", required=True)
    for name in ("min-alpha", "min-beta"):
        p = d.add_parser(name)
        p.add_argument("instance")
        p.add_argument("--point", required=True)
        p.add_argument("--method", default="cg", choices=["cg", "enumerate"])
        p.add_argument("--edge-cap", type=int)
        p.add_argument("-o", "--output")
        p.add_argument("--witness", help="write the dual witness instance here")
        p.set_defaults(func=_cmd_decompose)
    p = d.add_parser("explicit")
    p.add_argument("--base", default="k4")
    p.add_argument("--base-file")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--alpha", default="9/4")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_decompose)
    p = d.add_parser("verify")
    p.add_argument("--base", default="k4")
    p.add_argument("--base-file")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--mode", default="gap", choices=["gap", "lmp"])
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--dist", required=True)
    p.set_defaults(func=_cmd_decompose)
    p = d.add_parser("trace")
    p.add_argument("--base", default="k4")
    p.add_argument("--base-file")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--alpha", default="9/4")
    p.add_argument("--dist", required=True)
    p.set_defaults(func=_cmd_decompose)

    b = sub.add_parser("bounds").add_subparsers(dest="what", required=True)
    p = b.add_parser("alpha")
    p.add_argument("--n", required=True, help="value or lo:hi range")
    p.add_argument("--k", required=True, help="value or lo:hi range")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_bounds)
    p = b.add_parser("beta")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--n")
    p.add_argument("--k")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_bounds)

    r = sub.add_parser("report").add_subparsers(dest="what", required=True)
    p = r.add_parser("gap")
    p.add_argument("instance")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_report)

    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScaleCapError, ResourceWarning) as exc:
        json.dump({"error": str(exc), "type": "scale_cap"}, sys.stderr)
        sys.stderr.write("\n")
        return 3
    except (LpInfeasibleError, LpInfeasible, dec.DecompositionError) as exc:
        json.dump({"error": str(exc), "type": "infeasible"}, sys.stderr)
        sys.stderr.write("\n")
        return 4
    except (InstanceError, GraphError, ValueError, OSError) as exc:
        json.dump({"error": str(exc), "type": "validation"}, sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
