"""Command-line front end.

Exit codes: 0 verified (or, for ``special``, certificates enumerated), 1
counterexample found, 2 usage or input error, 3 inconclusive (vertex budget
exhausted).
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
import time
from pathlib import Path

from . import oracle
from .detect import ForbiddenCycleSpec, has_forbidden_cycle, has_induced_path
from .explorer import Outcome, SearchConfig, SearchOutcome, run_verification, special_search
from .graph import Graph
from .graph_io import GraphParseError, cubic24_fixture, emit_edge_list, emit_graph6, parse_edge_list, parse_graph6

log = logging.getLogger("egverify")

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
ORACLE_LIMIT = 30
TRACE = 5
logging.addLevelName(TRACE, "TRACE")


def k_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\.\.|-)\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected K or A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 3 or hi < lo:
        raise argparse.ArgumentTypeError(f"k range must satisfy 3 <= A <= B, got {text!r}")
    return list(range(lo, hi + 1))


def forbid_spec(text: str) -> ForbiddenCycleSpec:
    try:
        return ForbiddenCycleSpec.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _fmt_time(seconds: float) -> str:
    if seconds < 60:
        return f"{seconds:.3f}s"
    m, s = divmod(int(round(seconds)), 60)
    h, m = divmod(m, 60)
    return f"{h}h{m:02d}m{s:02d}s" if h else f"{m}m{s:02d}s"


def _row(k: int, spec: ForbiddenCycleSpec, out: SearchOutcome, with_stats: bool) -> str:
    verdict = "INCONCLUSIVE" if out.kind is Outcome.BUDGET_EXHAUSTED else out.kind.value
    row = f"k={k:<3d} forbid={spec} verdict={verdict:<14s} time={_fmt_time(out.stats.wall_time)}"
    if with_stats:
        s = out.stats
        row += (
            f" nodes={s.nodes} safe_sets={s.safe_sets} max_depth={s.max_depth}"
            f" max_n={s.max_n} budget_hits={s.budget_hits}"
        )
    return row


def _sink(level: int):
    if level > logging.DEBUG:
        return None

    def sink(event: dict) -> None:
        kind = event["event"]
        if kind == "branch":
            log.log(TRACE, "depth=%d n=%d S=%s -> %s%s", event["depth"], event["n"], list(event["S"]),
                    event["result"], f" anchor={event['anchor']}" if "anchor" in event else "")
        elif kind == "enter":
            log.debug("enter depth=%d n=%d anchor=%d", event["depth"], event["n"], event["anchor"])
        else:
            log.debug("%s", " ".join(f"{k}={v}" for k, v in event.items()))

    return sink


def _write_certificates(out_dir: Path, stem: str, outcome: SearchOutcome, note: str) -> list[str]:
    paths = []
    for i, cert in enumerate(outcome.certificates):
        g = cert.graph()
        base = out_dir / f"{stem}_{i:04d}"
        base.with_suffix(".txt").write_text(emit_edge_list(g, [note, f"graph6 {emit_graph6(g)}"]))
        base.with_suffix(".g6").write_text(emit_graph6(g) + "\n")
        paths.append(str(base.with_suffix(".txt")))
    return paths


def _config_echo(args: argparse.Namespace) -> dict:
    return {k: (str(v) if isinstance(v, (ForbiddenCycleSpec, Path)) else v)
            for k, v in vars(args).items() if k not in ("func", "in_file")}


def cmd_verify(args: argparse.Namespace) -> int:
    spec = args.forbid
    out_dir = args.out
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    sink = _sink(args.log_level)
    engine = args.engine
    if engine == "auto" and args.log_level <= logging.DEBUG:
        engine = "python"
    report = {"command": "verify", "config": _config_echo(args), "verdicts": []}
    final = Outcome.VERIFIED
    for k in args.k:
        config = SearchConfig(
            k=k,
            cycle_spec=spec,
            max_vertices=args.max_vertices,
            threads=args.threads,
            spawn_depth=args.spawn_depth,
            engine=engine,
        )
        out = run_verification(k, config, sink)
        print(_row(k, spec, out, args.stats), flush=True)
        entry = {"k": k, "outcome": out.kind.value, "wall_time": out.stats.wall_time,
                 "nodes": out.stats.nodes, "safe_sets": out.stats.safe_sets,
                 "max_depth": out.stats.max_depth, "max_n": out.stats.max_n,
                 "budget_hits": out.stats.budget_hits, "certificates": []}
        if out.certificates:
            for cert in out.certificates:
                print(f"  certificate n={cert.n} graph6={emit_graph6(cert.graph())}")
            if out_dir:
                entry["certificates"] = _write_certificates(out_dir, f"cert_k{k}", out, f"k={k} forbid={spec}")
        report["verdicts"].append(entry)
        if out.kind is not Outcome.VERIFIED:
            final = out.kind
            break
    report["outcome"] = final.value
    ks = [v["k"] for v in report["verdicts"]]
    if final is Outcome.VERIFIED:
        if ks[0] == 3:
            lengths = "a power of 2" if spec.mode == "pow2" else "in {" + str(spec) + "}"
            print(f"VERIFIED k=3..{ks[-1]}: every P_{ks[-1]}-free graph with minimum degree >= 3 "
                  f"has a cycle whose length is {lengths}")
        else:
            print(f"VERIFIED k={ks[0]}..{ks[-1]} (start at k=3 for a P_k-freeness claim)")
        code = EXIT_OK
    elif final is Outcome.COUNTEREXAMPLE:
        print(f"COUNTEREXAMPLE found at k={ks[-1]}")
        code = EXIT_COUNTEREXAMPLE
    else:
        print(f"INCONCLUSIVE at k={ks[-1]}: vertex budget {args.max_vertices} exhausted, nothing is claimed")
        code = EXIT_INCONCLUSIVE
    if out_dir:
        (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return code


def _load_graph(args: argparse.Namespace) -> Graph:
    if args.fixture:
        return cubic24_fixture()
    text = Path(args.in_file).read_text() if args.in_file != "-" else sys.stdin.read()
    stripped = "\n".join(line for line in text.splitlines() if line.strip() and not line.startswith("#"))
    fmt = args.format
    if fmt == "auto":
        fmt = "edges" if re.match(r"\s*n\s*=", stripped) else "graph6"
    if fmt == "graph6":
        return parse_graph6(stripped.splitlines()[0] if stripped else "")
    return parse_edge_list(text)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        g = _load_graph(args)
    except (GraphParseError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if g.n > ORACLE_LIMIT:
        print(f"error: refusing to run exhaustive oracles on {g.n} vertices (limit {ORACLE_LIMIT})", file=sys.stderr)
        return EXIT_USAGE
    spec = args.forbid
    spectrum = oracle.all_cycle_lengths(g)
    present = sorted(x for x in spectrum if spec.is_forbidden(x))
    lip = oracle.longest_induced_path(g)
    verdict = oracle.is_counterexample(g, args.k, spec)
    print(f"n={g.n} edges={g.edge_count} min_degree={g.min_degree()} max_degree={g.max_degree()}")
    print(f"graph6={emit_graph6(g)}")
    print(f"cycle_spectrum={','.join(map(str, sorted(spectrum))) or '-'}")
    print(f"forbid={spec} forbidden_present={','.join(map(str, present)) or 'none'}")
    print(f"longest_induced_path={lip} P_{args.k}-free={'yes' if lip < args.k else 'no'}")
    if verdict:
        print(f"verdict=COUNTEREXAMPLE-SHAPED (min degree >= 3, P_{args.k}-free, no forbidden cycle)")
        return EXIT_COUNTEREXAMPLE
    reasons = []
    if g.min_degree() < 3:
        reasons.append(f"min degree {g.min_degree()}")
    if lip >= args.k:
        reasons.append(f"induced P_{args.k}")
    if present:
        reasons.append("forbidden cycle " + ",".join(f"C_{x}" for x in present))
    print(f"verdict=NOT-A-COUNTEREXAMPLE ({'; '.join(reasons)})")
    return EXIT_OK


def cmd_special(args: argparse.Namespace) -> int:
    spec = args.forbid
    out_dir = args.out
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    sink = _sink(args.log_level)
    started = time.perf_counter()
    found: list[tuple[int, Graph]] = []
    report = {"command": "special", "config": _config_echo(args), "runs": []}
    for k in args.k:
        if sink:
            sink({"event": "start", "k": k, "forbid": str(spec)})
        out = special_search(k, max_vertices=args.max_vertices, cycle_spec=spec,
                             degree_cap=args.max_degree, threads=args.threads, engine=args.engine)
        print(_row(k, spec, out, True) + f" certificates={len(out.certificates)}", flush=True)
        for cert in out.certificates:
            g = cert.graph()
            # cheap per-certificate validation; class representatives get the oracle below
            if set(g.deg) != {args.max_degree} or has_forbidden_cycle(g, spec) or has_induced_path(g, k):
                print(f"error: invalid certificate at k={k}: {emit_graph6(g)}", file=sys.stderr)
                return EXIT_USAGE
            found.append((k, g))
        report["runs"].append({"k": k, "outcome": out.kind.value, "certificates": len(out.certificates),
                               "nodes": out.stats.nodes, "wall_time": out.stats.wall_time})

    graphs = [g for _, g in found]
    classes = oracle.isomorphism_classes(graphs)
    fixture = cubic24_fixture()
    rows = []
    for idx in classes:
        rep = graphs[idx[0]]
        spectrum = oracle.all_cycle_lengths(rep)
        rows.append({
            "order": rep.n,
            "labeled_copies": len(idx),
            "found_at_k": sorted({found[i][0] for i in idx}),
            "longest_induced_path": oracle.longest_induced_path(rep),
            "has_16_cycle": 16 in spectrum,
            "forbidden_present": sorted(x for x in spectrum if spec.is_forbidden(x)),
            "fixture": rep.n == fixture.n and oracle.are_isomorphic(rep, fixture),
            "graph6": emit_graph6(rep),
        })
    rows.sort(key=lambda r: (r["order"], r["graph6"]))
    report["classes"] = rows
    print(f"isomorphism classes: {len(rows)} (from {len(graphs)} labeled certificates)")
    if rows:
        minimum = rows[0]["order"]
        print(f"minimum order: {minimum} with {sum(r['order'] == minimum for r in rows)} classes")
        for r in rows:
            print(f"  order={r['order']} copies={r['labeled_copies']} k={','.join(map(str, r['found_at_k']))}"
                  f" longest_induced_path={r['longest_induced_path']} 16-cycle={'yes' if r['has_16_cycle'] else 'no'}"
                  f" fixture={'yes' if r['fixture'] else 'no'} graph6={r['graph6']}")
    print(f"total time={_fmt_time(time.perf_counter() - started)}")
    if out_dir:
        for i, r in enumerate(rows):
            g = parse_graph6(r["graph6"])
            (out_dir / f"class_{i:02d}_n{r['order']}.txt").write_text(
                emit_edge_list(g, [f"order {r['order']}, found at k={r['found_at_k']}", f"graph6 {r['graph6']}"]))
        (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    if not rows:
        print(f"INCONCLUSIVE: no certificates within {args.max_vertices} vertices")
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="egverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--threads", type=positive, default=1, help="worker processes")
        p.add_argument("--spawn-depth", type=positive, default=2,
                       help="levels searched by the coordinator before handing subtrees to workers")
        p.add_argument("--out", type=Path, help="directory for certificates and report.json")
        p.add_argument("--log", dest="log_level", default="info",
                       choices=["warning", "info", "debug", "trace"], help="trace logs every branch")
        p.add_argument("--engine", default="auto", choices=["auto", "python", "native"])

    v = sub.add_parser("verify", help="run the search from P_k for each k")
    v.add_argument("--k", type=k_range, required=True, help="K or A..B")
    v.add_argument("--forbid", type=forbid_spec, default=ForbiddenCycleSpec.powers_of_two(),
                   help="'pow2' (default) or a list such as 4,8")
    v.add_argument("--max-vertices", type=positive, help="vertex budget (default: capacity 64)")
    v.add_argument("--stats", action="store_true", help="add search statistics to each row")
    common(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("check", help="oracle report on one graph")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="in_file", help="edge-list or graph6 file ('-' for stdin)")
    src.add_argument("--fixture", choices=["cubic24"], help="use a bundled graph")
    c.add_argument("--format", default="auto", choices=["auto", "edges", "graph6"])
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--forbid", type=forbid_spec, default=ForbiddenCycleSpec.powers_of_two())
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("special", help="enumerate degree-capped certificates and group them by isomorphism")
    s.add_argument("--k", type=k_range, default=[18], help="K or A..B (default 18)")
    s.add_argument("--forbid", type=forbid_spec, default=ForbiddenCycleSpec.explicit([4, 8]))
    s.add_argument("--max-degree", type=int, default=3)
    s.add_argument("--max-vertices", type=positive, default=24)
    common(s)
    s.set_defaults(func=cmd_special)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.log_level = {"warning": logging.WARNING, "info": logging.INFO,
                      "debug": logging.DEBUG, "trace": TRACE}[getattr(args, "log_level", "info")]
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(message)s", stream=sys.stderr)
    if getattr(args, "max_vertices", None) and args.max_vertices > 64:
        parser.error("--max-vertices must be at most 64")
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
