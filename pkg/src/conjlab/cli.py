"""Command-line surface: one binary, subcommand per operation.

Exit codes: 0 success, 1 check failed, 2 input error, 3 budget exceeded.
Every artifact embeds the config that produced it; identical configs give
byte-identical bytes (no timestamps, sorted keys, trial-ordered rows).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .budget import resolve_budget
from .cayley import shortest_conjugator_bruteforce
from .conjugacy import (
    CSV_HEADER,
    clf_experiment,
    find_conjugator,
    shorten_conjugator,
)
from .domains import Domain, big, gate, relevant_domains
from .errors import (
    BudgetExceededError,
    ConjlabError,
    IncompleteUniverseError,
    InputError,
)
from .freegroup import fmul, parse_free_word
from .projection import ProjectionComplex
from .raag import DefiningGraph, normal_form

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _load_graph(args) -> DefiningGraph:
    if not getattr(args, "graph", None):
        raise InputError("--graph FILE is required for this command")
    return DefiningGraph.from_file(args.graph)


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_doc(config: dict, result) -> str:
    return json.dumps({"config": config, "result": result}, sort_keys=True, indent=2) + "\n"


def _config_of(args, keys):
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _csv_doc(config: dict, header, rows) -> str:
    buf = io.StringIO()
    buf.write("# config: %s\n" % json.dumps(config, sort_keys=True))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# --- word arithmetic -------------------------------------------------------

def cmd_nf(args):
    graph = _load_graph(args)
    _emit(args, str(normal_form(args.word, graph)) + "\n")
    return EXIT_OK


def cmd_mul(args):
    graph = _load_graph(args)
    u = normal_form(args.left, graph)
    v = normal_form(args.right, graph)
    _emit(args, str(u * v) + "\n")
    return EXIT_OK


def cmd_inv(args):
    graph = _load_graph(args)
    _emit(args, str(~normal_form(args.word, graph)) + "\n")
    return EXIT_OK


# --- conjugacy -------------------------------------------------------------

def cmd_conj(args):
    graph = _load_graph(args)
    a = normal_form(args.a, graph)
    b = normal_form(args.b, graph)
    cert = find_conjugator(a, b, K=args.K, C=args.C, budget=args.budget_elems)
    config = _config_of(args, ["graph", "K", "C"])
    config.update({"a": args.a, "b": args.b})
    _emit(args, _json_doc(config, cert.to_json()))
    return EXIT_OK


def cmd_min_conj(args):
    graph = _load_graph(args)
    a = normal_form(args.a, graph)
    b = normal_form(args.b, graph)
    g = shortest_conjugator_bruteforce(a, b, args.radius, budget=args.budget_elems)
    result = {
        "found": g is not None,
        "conjugator": None if g is None else str(g),
        "length": None if g is None else len(g),
        "radius": args.radius,
    }
    config = _config_of(args, ["graph", "radius"])
    config.update({"a": args.a, "b": args.b})
    _emit(args, _json_doc(config, result))
    return EXIT_OK


def cmd_shorten(args):
    graph = _load_graph(args)
    a = normal_form(args.a, graph)
    b = normal_form(args.b, graph)
    g = normal_form(args.g, graph)
    _emit(args, str(shorten_conjugator(a, b, g)) + "\n")
    return EXIT_OK


# --- domains -----------------------------------------------------------------

def cmd_big(args):
    graph = _load_graph(args)
    g = normal_form(args.word, graph)
    bs = big(g)
    result = {
        "domains": [d.to_json() for d in bs.domains],
        "factors": [str(f) for f in bs.factors],
        "maximal": bs.maximal,
    }
    config = _config_of(args, ["graph"])
    config["word"] = args.word
    _emit(args, _json_doc(config, result))
    return EXIT_OK


def cmd_gate(args):
    graph = _load_graph(args)
    x = normal_form(args.word, graph)
    rep = normal_form(args.rep, graph)
    delta = [v.strip() for v in args.delta.split(",") if v.strip()]
    res = gate(x, rep, delta)
    result = {
        "gate": str(res.point),
        "distance": res.distance,
        "prefix": str(res.prefix),
    }
    config = _config_of(args, ["graph", "delta", "rep"])
    config["word"] = args.word
    _emit(args, _json_doc(config, result))
    return EXIT_OK


def cmd_domains(args):
    graph = _load_graph(args)
    x = normal_form(args.x, graph)
    y = normal_form(args.y, graph)
    doms = relevant_domains(x, y, args.K, search_radius=args.radius, budget=args.budget_elems)
    listed = sorted(doms, key=Domain.sort_key)
    config = _config_of(args, ["graph", "K", "radius"])
    config.update({"x": args.x, "y": args.y})
    _emit(args, _json_doc(config, [d.to_json() for d in listed]))
    return EXIT_OK


# --- experiments ----------------------------------------------------------------

def cmd_clf_scan(args):
    graph = _load_graph(args)
    table = clf_experiment(
        graph,
        n_samples=args.samples,
        max_core_len=args.max_core_len,
        max_twist_len=args.max_twist_len,
        seed=args.seed,
        budget=args.budget_elems,
    )
    config = _config_of(
        args, ["graph", "samples", "max_core_len", "max_twist_len", "seed"]
    )
    if args.format == "json":
        rows = [dict(zip(CSV_HEADER, row)) for row in table.rows()]
        result = {
            "rows": rows,
            "fitted_C0": table.fitted_additive_constant(),
            "skipped": sum(1 for t in table.trials if t.skipped),
        }
        _emit(args, _json_doc(config, result))
    else:
        _emit(args, _csv_doc(config, CSV_HEADER, table.rows()))
    return EXIT_OK


def _complex_for(args) -> ProjectionComplex:
    return ProjectionComplex(args.h, rank=args.rank)


def cmd_pc_build(args):
    cx = _complex_for(args)
    universe = cx.universe_by_bound(args.universe_bound, budget=args.budget_elems)
    K = args.K
    scan_report = None
    if K is None:
        K, scan_report = cx.scan_K(universe, range(1, args.K_max + 1), seed=args.seed)
        if K is None:
            raise InputError("no K in 1..%d passes the scan" % args.K_max)
    graph = cx.build_graph(universe, K)
    result = {
        "universe_size": len(universe),
        "K": K,
        "K_scanned": scan_report is not None,
        "edges": graph.edge_count(),
        "connected": graph.connected(),
        "components": graph.component_count(),
    }
    config = _config_of(args, ["h", "rank", "universe_bound", "K", "seed"])
    _emit(args, _json_doc(config, result))
    return EXIT_OK


def cmd_pc_check(args):
    import random

    cx = _complex_for(args)
    universe = cx.universe_by_bound(args.universe_bound, budget=args.budget_elems)
    K = args.K
    if K is None:
        K, _ = cx.scan_K(universe, range(1, args.K_max + 1), seed=args.seed)
        if K is None:
            raise InputError("no K in 1..%d passes the scan" % args.K_max)
    graph = cx.build_graph(universe, K)
    rng = random.Random(args.seed)
    reports = []
    ok = True
    for _ in range(args.samples):
        X, Y, Z = (rng.choice(universe) for _ in range(3))
        rep = cx.thin_triangle_check(X, Y, Z, K, universe)
        reports.append(rep.to_json())
        ok = ok and rep.passed
    for _ in range(args.samples):
        X, Z = rng.choice(universe), rng.choice(universe)
        if X == Z:
            continue
        rep = cx.bottleneck_check(X, Z, None, K, universe, graph=graph)
        reports.append(rep.to_json())
        ok = ok and rep.passed
    qg = cx.qgeos_constants(
        universe,
        K,
        graph=graph,
        pairs=[
            (rng.choice(universe), rng.choice(universe))
            for _ in range(args.samples)
        ],
    )
    ok = ok and qg["non_path_pairs"] == 0
    result = {
        "K": K,
        "universe_size": len(universe),
        "checks": reports,
        "qgeos": qg,
        "pass": ok,
    }
    config = _config_of(args, ["h", "rank", "universe_bound", "K", "samples", "seed"])
    _emit(args, _json_doc(config, result))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_pc_f(args):
    import random

    cx = _complex_for(args)
    K = args.K if args.K is not None else 2
    rng = random.Random(args.seed)
    run = parse_free_word("a", args.rank)
    run = fmul(run, run)
    samples = []
    sample_words = []
    for i in range(args.samples):
        word = ()
        for _ in range(2 + rng.randrange(2)):
            word = fmul(word, fmul((1,) * (K + 1), (2,)))
        sample_words.append(word)
    base_words = [(), parse_free_word("a", args.rank)]
    for word in sample_words:
        base_words.append(word)
        base_words.append(fmul(word, (1,)))
    universe = cx.hull_universe(base_words)
    graph = cx.build_graph(universe, K)
    samples = [cx.coset(word) for word in sample_words]
    M_values = list(range(args.M_min, args.M_max + 1, args.M_step))
    rows = cx.f_measure(
        M_values, args.eps, samples, graph,
        power_cap=args.power_cap, ball_radius=args.ball_radius,
    )
    config = _config_of(
        args,
        ["h", "rank", "K", "eps", "samples", "seed", "M_min", "M_max", "M_step",
         "power_cap", "ball_radius"],
    )
    _emit(
        args,
        _csv_doc(
            config,
            ["M", "max_diam", "samples", "eps"],
            [[r["M"], r["max_diam"], r["samples"], r["eps"]] for r in rows],
        ),
    )
    return EXIT_OK


def cmd_thmc(args):
    cx = _complex_for(args)
    K = args.K if args.K is not None else 2
    a = parse_free_word(args.a, args.rank)
    b = parse_free_word(args.b, args.rank)
    g = parse_free_word(args.g, args.rank)
    f_slope = args.f_slope
    report = cx.theoremC_pipeline(a, b, g, m=args.m, K=K, f=lambda M: f_slope * M)
    config = _config_of(args, ["h", "rank", "K", "m", "f_slope"])
    config.update({"a": args.a, "b": args.b, "g": args.g})
    _emit(args, _json_doc(config, report.to_json()))
    if report.final_bound_holds is False or report.lemma_bound_holds is False:
        return EXIT_CHECK_FAILED
    return EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conjlab",
        description="Conjugator-length computations in RAAGs and free-group "
        "projection complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True, out=True):
        if graph:
            p.add_argument("--graph", help="defining graph JSON file")
        if out:
            p.add_argument("--out", help="write output to this file")
        p.add_argument(
            "--budget-elems", type=int, default=None, dest="budget_elems",
            help="resource cap (default %d, env CONJLAB_BUDGET)" % resolve_budget(),
        )

    p = sub.add_parser("nf", help="normal form of a word")
    p.add_argument("word")
    common(p)
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("mul", help="product of two words")
    p.add_argument("left")
    p.add_argument("right")
    common(p)
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("inv", help="inverse of a word")
    p.add_argument("word")
    common(p)
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("conj", help="conjugacy decision with certificate")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--K", type=int, default=2)
    p.add_argument("--C", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_conj)

    p = sub.add_parser("min-conj", help="brute-force shortest conjugator")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--radius", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_min_conj)

    p = sub.add_parser("shorten", help="centralizer descent on a conjugator")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("g")
    common(p)
    p.set_defaults(func=cmd_shorten)

    p = sub.add_parser("big", help="Big set of an element")
    p.add_argument("word")
    common(p)
    p.set_defaults(func=cmd_big)

    p = sub.add_parser("gate", help="gate of a point into a standard coset")
    p.add_argument("word")
    p.add_argument("--delta", required=True, help="comma-separated vertices")
    p.add_argument("--rep", default="", help="coset representative word")
    common(p)
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("domains", help="relevant domains between two points")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--radius", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_domains)

    p = sub.add_parser("clf-scan", help="conjugator-length experiment")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-core-len", type=int, default=6, dest="max_core_len")
    p.add_argument("--max-twist-len", type=int, default=6, dest="max_twist_len")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_clf_scan)

    def pc_common(p):
        p.add_argument("--h", default="a", help="base element of the complex")
        p.add_argument("--rank", type=int, default=2)
        p.add_argument("--K", type=int, default=None)
        p.add_argument("--K-max", type=int, default=8, dest="K_max")
        p.add_argument("--seed", type=int, default=0)
        common(p, graph=False)

    p = sub.add_parser("pc-build", help="build the projection graph")
    p.add_argument("--universe-bound", type=int, required=True, dest="universe_bound")
    pc_common(p)
    p.set_defaults(func=cmd_pc_build)

    p = sub.add_parser("pc-check", help="thin-triangle / bottleneck / quasi-geodesic checks")
    p.add_argument("--universe-bound", type=int, required=True, dest="universe_bound")
    p.add_argument("--samples", type=int, default=25)
    pc_common(p)
    p.set_defaults(func=cmd_pc_check)

    p = sub.add_parser("pc-f", help="measure the empirical f(M) table")
    p.add_argument("--eps", type=int, default=1)
    p.add_argument("--samples", type=int, default=4)
    p.add_argument("--M-min", type=int, default=2, dest="M_min")
    p.add_argument("--M-max", type=int, default=12, dest="M_max")
    p.add_argument("--M-step", type=int, default=2, dest="M_step")
    p.add_argument("--power-cap", type=int, default=4, dest="power_cap")
    p.add_argument("--ball-radius", type=int, default=10, dest="ball_radius")
    pc_common(p)
    p.set_defaults(func=cmd_pc_f)

    p = sub.add_parser("thmc", help="quasi-tree conjugator-bound pipeline")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--f-slope", type=int, default=2, dest="f_slope",
                   help="use f(M) = slope*M instead of a measured table")
    pc_common(p)
    p.set_defaults(func=cmd_thmc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, IncompleteUniverseError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except ConjlabError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
