"""Command line front end: winner computation, instance generation, benchmarks.

``beatpath winners`` parses an input file, runs the requested rule, and
prints a JSON report to stdout (or ``--output``).  Reported wall time covers
the algorithm only, never parsing.  ``beatpath generate`` writes synthetic
instance files plus a JSON metadata sidecar.  ``beatpath bench`` sweeps a
(size, density, threads) grid and writes one CSV row per run plus a
median-of-repeats summary row per cell.

The default thread count comes from ``--threads``, else the
``BEATPATH_THREADS`` environment variable, else the machine's core count.
Exit codes: 0 success, 2 bad usage or unparseable input.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import statistics
import sys
import time
from pathlib import Path
from typing import Sequence

from . import generators, ingest, oracles
from .core import (
    WeightedTournament,
    build_tournament,
    majority_margins,
    margins_from_tournament,
)
from .oracles import TieBreakOrder
from .pregel import resolve_threads
from .schulze import schulze_run, top_k

RULES = ("schulze", "schulze-seq", "ranked-pairs", "schwartz")
MODELS = (
    "mcgarvey",
    "uniform-profile",
    "random-tournament",
    "reach-reduction",
    "emas-reduction",
)


def _load_input(args: argparse.Namespace) -> tuple[WeightedTournament, tuple[str, ...]]:
    text = Path(args.input).read_text(encoding="utf-8")
    if args.format == "profile":
        profile, labels = ingest.parse_profile(text)
        return build_tournament(majority_margins(profile)), labels
    if args.format == "tournament":
        t = ingest.parse_tournament(text)
        return t, ingest.default_labels(t.m)
    records = ingest.read_chart_csv(
        text,
        group_cols=[c.strip() for c in args.group_cols.split(",")],
        rank_col=args.rank_col,
        item_col=args.item_col,
    )
    profile, labels = ingest.profile_from_charts(records)
    return build_tournament(majority_margins(profile)), labels


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_winners(args: argparse.Namespace) -> int:
    t, labels = _load_input(args)
    threads = resolve_threads(args.threads)
    report: dict = {
        "rule": args.rule,
        "candidates": t.m,
        "edges": t.edge_count,
        "threads": threads,
        "undecided_after_preprocessing": None,
        "iterations": None,
        "supersteps": None,
    }
    if args.top_k is not None and args.rule != "schulze":
        print("error: --top-k requires --rule schulze", file=sys.stderr)
        return 2

    start = time.perf_counter()
    if args.rule == "schulze":
        if args.top_k is not None:
            tiers = top_k(t, args.top_k, threads)
            report["tiers"] = [sorted(labels[c] for c in tier) for tier in tiers]
            report["winners"] = report["tiers"][0] if tiers else []
        else:
            res = schulze_run(t, threads)
            report["winners"] = sorted(labels[c] for c in res.winners)
            report["undecided_after_preprocessing"] = res.undecided_after_preprocessing
            report["iterations"] = res.iterations
            report["supersteps"] = res.supersteps
    elif args.rule == "schulze-seq":
        report["winners"] = sorted(labels[c] for c in oracles.schulze_winners_seq(t))
    elif args.rule == "ranked-pairs":
        result = oracles.ranked_pairs(
            margins_from_tournament(t), TieBreakOrder.identity(t.m)
        )
        report["winners"] = [labels[result.winner]]
        report["ranking"] = [labels[c] for c in result.ranking]
    else:
        report["winners"] = sorted(labels[c] for c in oracles.schwartz_set(t))
    report["wall_time_s"] = time.perf_counter() - start

    _emit(report, args.output)
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    out = Path(args.output)
    meta: dict = {"model": args.model, "seed": args.seed}
    if args.model == "mcgarvey":
        t = generators.random_tournament(args.m, args.density, args.max_even_weight, args.seed)
        profile = generators.mcgarvey_profile(t)
        out.write_text(ingest.write_profile(profile), encoding="utf-8")
        meta.update(m=args.m, density=args.density, max_even_weight=args.max_even_weight,
                    ballots=len(profile), edges=t.edge_count)
    elif args.model == "uniform-profile":
        profile = generators.random_profile(args.m, args.voters, args.seed)
        out.write_text(ingest.write_profile(profile), encoding="utf-8")
        meta.update(m=args.m, voters=args.voters)
    elif args.model == "random-tournament":
        t = generators.random_tournament(args.m, args.density, args.max_even_weight, args.seed)
        out.write_text(ingest.write_tournament(t), encoding="utf-8")
        meta.update(m=args.m, density=args.density, max_even_weight=args.max_even_weight,
                    edges=t.edge_count)
    elif args.model == "reach-reduction":
        n, edges = generators.random_digraph(args.m, args.density, args.seed)
        a, b = 0, n - 1
        t = generators.reduce_reachability(n, edges, a, b)
        out.write_text(ingest.write_tournament(t), encoding="utf-8")
        meta.update(n=n, density=args.density, a=a, b=b,
                    candidates=t.m, edges=t.edge_count)
    else:
        inst = generators.random_emas_instance(args.m, args.edges, args.seed)
        margins, _ = generators.reduce_emas(inst)
        t = build_tournament(margins)
        out.write_text(ingest.write_tournament(t), encoding="utf-8")
        meta.update(n=inst.n, instance_edges=list(map(list, inst.edges)),
                    f_index=inst.f_index, candidates=t.m, edges=t.edge_count)
    sidecar = out.with_name(out.name + ".meta.json")
    sidecar.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out} and {sidecar}")
    return 0


def _winners_digest(winners: frozenset[int]) -> str:
    payload = ",".join(str(c) for c in sorted(winners))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    densities = [float(d) for d in args.densities.split(",")]
    thread_grid = [int(x) for x in args.threads.split(",")]
    if not sizes or not densities or not thread_grid or args.repeats < 1:
        print("error: empty benchmark grid", file=sys.stderr)
        return 2
    fields = [
        "m", "density", "threads", "repeat", "seed", "wall_time_s",
        "supersteps", "iterations", "undecided_after_preprocessing",
        "winners_count", "winners_digest",
    ]
    rows: list[dict] = []
    for m in sizes:
        for density in densities:
            t = generators.random_tournament(m, density, args.max_even_weight, args.seed)
            for threads in thread_grid:
                times: list[float] = []
                last: dict = {}
                for repeat in range(args.repeats):
                    start = time.perf_counter()
                    res = schulze_run(t, threads)
                    elapsed = time.perf_counter() - start
                    times.append(elapsed)
                    last = {
                        "supersteps": res.supersteps,
                        "iterations": res.iterations,
                        "undecided_after_preprocessing": res.undecided_after_preprocessing,
                        "winners_count": len(res.winners),
                        "winners_digest": _winners_digest(res.winners),
                    }
                    rows.append({
                        "m": m, "density": density, "threads": threads,
                        "repeat": repeat, "seed": args.seed,
                        "wall_time_s": f"{elapsed:.6f}", **last,
                    })
                rows.append({
                    "m": m, "density": density, "threads": threads,
                    "repeat": "median", "seed": args.seed,
                    "wall_time_s": f"{statistics.median(times):.6f}", **last,
                })
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beatpath", description="Widest-path preference aggregation toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_win = sub.add_parser("winners", help="compute winners of an instance file")
    p_win.add_argument("--input", required=True)
    p_win.add_argument("--format", choices=("profile", "tournament", "charts"),
                       default="tournament")
    p_win.add_argument("--rule", choices=RULES, default="schulze")
    p_win.add_argument("--threads", type=int, default=None)
    p_win.add_argument("--top-k", dest="top_k", type=int, default=None)
    p_win.add_argument("--output", default=None, help="write JSON here instead of stdout")
    p_win.add_argument("--group-cols", default="group", help="chart CSV group columns")
    p_win.add_argument("--rank-col", default="rank")
    p_win.add_argument("--item-col", default="item")
    p_win.set_defaults(func=cmd_winners)

    p_gen = sub.add_parser("generate", help="write a synthetic instance file")
    p_gen.add_argument("--model", choices=MODELS, required=True)
    p_gen.add_argument("--output", required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--m", type=int, default=20,
                       help="candidate count (digraph size for reductions)")
    p_gen.add_argument("--density", type=float, default=0.5)
    p_gen.add_argument("--voters", type=int, default=50)
    p_gen.add_argument("--edges", type=int, default=30, help="edge count (emas-reduction)")
    p_gen.add_argument("--max-even-weight", type=int, default=100)
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("bench", help="time the engine over a parameter grid")
    p_bench.add_argument("--sizes", default="1000", help="comma-separated candidate counts")
    p_bench.add_argument("--densities", default="0.94")
    p_bench.add_argument("--threads", default="1", help="comma-separated thread counts")
    p_bench.add_argument("--repeats", type=int, default=3)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--max-even-weight", type=int, default=100)
    p_bench.add_argument("--output", required=True, help="CSV destination")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ingest.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
