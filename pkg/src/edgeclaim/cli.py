"""Command-line interface.

Subcommands: graph, simulate, communities, cluster, sweep, eval, gen, karate.
Results go to --out (or stdout) as JSON unless noted; diagnostics go to
stderr.  Exit codes: 0 success, 1 usage or parameter error, 2 data error,
3 numerical or degenerate-state error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .community import assign_communities, unfold, write_partition_csv, write_unfoldings
from .data import SHAPES, generate, karate_club, load_csv, save_points_csv
from .dynamics import CompetitionConfig, run, state_to_json
from .errors import DataError, ParameterError, SimulationError
from .evaluate import (
    REAL_DATASETS,
    ARTIFICIAL_DATASETS,
    REFERENCE_ARI_ARTIFICIAL,
    REFERENCE_ARI_REAL,
    REFERENCE_CRITICAL_DIFFERENCE,
    TECHNIQUES,
    adjusted_rand_index,
    build_report,
)
from .graph import WEIGHTINGS, WeightedGraph, build_knn_graph
from .modularity import modularity
from .pipeline import (
    PipelineConfig,
    SweepGrid,
    best_result,
    cluster,
    sweep,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


def _competition_args(p: _Parser, classes_default: int | None = None) -> None:
    p.add_argument("--classes", type=int, default=classes_default, required=classes_default is None,
                   help="number of particle classes K")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5,
                   help="competition strength in [0, 1] (default 0.5)")
    p.add_argument("--steps", type=int, default=500, help="maximum steps T (default 500)")
    p.add_argument("--tol", type=float, default=1e-8,
                   help="convergence tolerance on the L1 change of nu (default 1e-8)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")


def _competition_cfg(args, class_count=None) -> CompetitionConfig:
    return CompetitionConfig(
        class_count=class_count if class_count is not None else args.classes,
        lam=args.lam,
        max_steps=args.steps,
        tol=args.tol,
        seed=args.seed,
    )


def _load_graph_arg(path: str) -> WeightedGraph:
    return WeightedGraph.from_edge_list(path)


def _cmd_graph(args) -> int:
    data = load_csv(args.points)
    g = build_knn_graph(data.payload, args.knn, args.weighting)
    if args.format == "csv":
        lines = [
            f"{u} {v} {w!r}"
            for u, v, w in zip(g.edges_u.tolist(), g.edges_v.tolist(), g.weights.tolist())
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json(
            {
                "vertices": g.vertex_count,
                "edge_count": g.edge_count,
                "edges": [
                    [int(u), int(v), float(w)]
                    for u, v, w in zip(g.edges_u, g.edges_v, g.weights)
                ],
            },
            args.out,
        )
    return 0


def _cmd_simulate(args) -> int:
    g = _load_graph_arg(args.graph)
    state = run(g, _competition_cfg(args))
    _emit_json(state_to_json(g, state), args.out)
    return 0


def _cmd_communities(args) -> int:
    g = _load_graph_arg(args.graph)
    state = run(g, _competition_cfg(args))
    unfoldings = unfold(g, state)
    partition = assign_communities(unfoldings, args.order)
    q = modularity(g, partition, weighted=not args.unweighted_q)
    if args.unfoldings_out:
        write_unfoldings(unfoldings, args.unfoldings_out)
    if args.plot:
        from .plot import graph_svg

        winner = np.empty(g.edge_count, dtype=np.int64)
        for u in unfoldings:
            winner[u.edge_ids] = u.class_id
        graph_svg(g, args.plot, vertex_labels=partition.labels, edge_classes=winner)
    if args.format == "csv":
        lines = ["vertex,label"] + [
            f"{v},{int(lab)}" for v, lab in enumerate(partition.labels.tolist())
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json(
            {
                "labels": partition.labels.tolist(),
                "community_count": partition.community_count,
                "modularity": q,
                "steps": state.step,
            },
            args.out,
        )
    return 0


def _cmd_cluster(args) -> int:
    if args.graph:
        g = _load_graph_arg(args.input)
        truth = None
        points = None
    else:
        data = load_csv(args.input)
        if args.knn is None:
            raise ParameterError("--knn is required for point input")
        g = build_knn_graph(data.payload, args.knn, args.weighting)
        truth = data.ground_truth
        points = data.payload.points
    cfg = PipelineConfig(
        competition=_competition_cfg(args),
        order=args.order,
        target_clusters=args.target,
        weighting=args.weighting,
        unweighted_q=args.unweighted_q,
    )
    result = cluster(g, cfg)
    ari = (
        adjusted_rand_index(truth, result.partition.labels)
        if truth is not None
        else None
    )
    if args.plot:
        if points is not None:
            from .plot import scatter_svg

            scatter_svg(points, result.partition.labels, args.plot)
        else:
            from .plot import graph_svg

            graph_svg(g, args.plot, vertex_labels=result.partition.labels)
    _emit_json(
        {
            "labels": result.partition.labels.tolist(),
            "clusters": result.partition.community_count,
            "modularity": result.trace.final_modularity,
            "initial_communities": result.trace.merge_count
            + result.partition.community_count,
            "ari": ari,
            "steps": result.state.step,
            "merge_trace": result.trace.to_json_steps(),
        },
        args.out,
    )
    return 0


def _cmd_sweep(args) -> int:
    grid_kwargs = dict(
        class_count_values=args.classes_values,
        order_values=args.order_values,
        seeds=args.seeds,
    )
    if args.graph:
        payload = _load_graph_arg(args.input)
        truth = None
        grid = SweepGrid(**grid_kwargs)
    else:
        data = load_csv(args.input)
        if args.knn_values is None:
            raise ParameterError("--knn-values is required for point input")
        payload = data.payload
        truth = data.ground_truth
        grid = SweepGrid(knn_values=args.knn_values, **grid_kwargs)
    base = PipelineConfig(
        competition=CompetitionConfig(
            class_count=max(args.target, 2), lam=args.lam,
            max_steps=args.steps, tol=args.tol, seed=0,
        ),
        target_clusters=args.target,
        weighting=args.weighting,
        unweighted_q=args.unweighted_q,
    )
    results = sweep(
        payload,
        grid,
        args.target,
        base_cfg=base,
        truth=truth,
        compute_ari=truth is not None,
        jobs=args.jobs,
    )
    labels_dir = Path(args.labels_dir) if args.labels_dir else None
    if labels_dir:
        labels_dir.mkdir(parents=True, exist_ok=True)
    lines = []
    for r in results:
        labels_file = None
        if labels_dir:
            labels_file = str(
                labels_dir / f"knn{r.knn}_K{r.class_count}_o{r.order}_s{r.seed}.csv"
            )
            write_partition_csv(r.partition, labels_file)
        lines.append(
            json.dumps(
                {
                    "knn": r.knn,
                    "K": r.class_count,
                    "o": r.order,
                    "seed": r.seed,
                    "ari": r.ari,
                    "q": r.modularity,
                    "labels_file": labels_file,
                }
            )
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_eval(args) -> int:
    if args.csv:
        import csv as csv_mod

        with open(args.csv, newline="") as fh:
            rows = list(csv_mod.reader(fh))
        techniques = tuple(rows[0][1:])
        datasets = tuple(row[0] for row in rows[1:])
        table = np.array([[float(c) for c in row[1:]] for row in rows[1:]])
        reference_cd = None
    elif args.table == "artificial":
        table = REFERENCE_ARI_ARTIFICIAL
        techniques = TECHNIQUES
        datasets = ARTIFICIAL_DATASETS
        reference_cd = REFERENCE_CRITICAL_DIFFERENCE
    else:
        table = REFERENCE_ARI_REAL
        techniques = TECHNIQUES
        datasets = REAL_DATASETS
        reference_cd = REFERENCE_CRITICAL_DIFFERENCE
    report = build_report(table, techniques, datasets, alpha=args.alpha)
    payload = report.to_dict()
    if reference_cd is not None:
        payload["reference_cd"] = reference_cd
    if args.plot:
        from .plot import rank_line_svg

        rank_line_svg(
            report.avg_ranks, report.techniques, report.critical_difference, args.plot
        )
    _emit_json(payload, args.out)
    return 0


def _cmd_gen(args) -> int:
    dataset = generate(args.shape, args.n, args.seed)
    if args.out:
        save_points_csv(dataset, args.out)
    else:
        pts = dataset.payload.points
        header = ",".join([f"x{i}" for i in range(pts.shape[1])] + ["label"])
        lines = [header] + [
            ",".join([repr(float(v)) for v in pts[i]] + [str(int(dataset.ground_truth[i]))])
            for i in range(pts.shape[0])
        ]
        sys.stdout.write("\n".join(lines) + "\n")
    if args.plot:
        from .plot import scatter_svg

        scatter_svg(dataset.payload.points, dataset.ground_truth, args.plot)
    return 0


def _cmd_karate(args) -> int:
    dataset = karate_club()
    g = dataset.payload
    grid = SweepGrid(
        class_count_values=(args.classes,),
        order_values=args.orders,
        seeds=tuple(range(args.seeds)),
    )
    base = PipelineConfig(
        competition=CompetitionConfig(
            class_count=args.classes, lam=args.lam,
            max_steps=args.steps, tol=args.tol,
        ),
        target_clusters=args.target,
    )
    results = sweep(g, grid, args.target, base_cfg=base, truth=dataset.ground_truth)
    best = best_result(results)
    if args.plot:
        from .plot import graph_svg

        comp = CompetitionConfig(
            class_count=best.class_count, lam=args.lam, max_steps=args.steps,
            tol=args.tol, seed=cell_seed_for(best),
        )
        state = run(g, comp)
        unfoldings = unfold(g, state)
        winner = np.empty(g.edge_count, dtype=np.int64)
        for u in unfoldings:
            winner[u.edge_ids] = u.class_id
        graph_svg(
            g, args.plot, vertex_labels=best.partition.labels, edge_classes=winner,
        )
    _emit_json(
        {
            "best": {
                "seed": best.seed,
                "order": best.order,
                "ari": best.ari,
                "q": best.modularity,
                "labels": best.partition.labels.tolist(),
            },
            "cells": [
                {"seed": r.seed, "order": r.order, "ari": r.ari, "q": r.modularity}
                for r in results
            ],
        },
        args.out,
    )
    return 0


def cell_seed_for(result) -> int:
    from .pipeline import cell_seed

    return cell_seed(result.seed, result.knn, result.class_count, result.order)


def build_parser() -> _Parser:
    parser = _Parser(prog="edgeclaim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"edgeclaim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", parents=[], help="build a k-NN graph from CSV points")
    p.add_argument("points", help="CSV file of points")
    p.add_argument("--knn", type=int, required=True, help="neighbors per point")
    p.add_argument("--weighting", choices=WEIGHTINGS, default="gaussian")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="csv emits `i j w` edge lines")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("simulate", help="run the dynamics on an edge-list graph")
    p.add_argument("graph", help="edge-list file (`i j w` lines)")
    _competition_args(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("communities", help="dynamics + unfolding + density assignment")
    p.add_argument("graph", help="edge-list file")
    _competition_args(p)
    p.add_argument("--order", type=int, default=1, help="neighborhood order o (default 1)")
    p.add_argument("--unweighted-q", action="store_true", help="report unweighted modularity")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="csv emits vertex,label rows")
    p.add_argument("--unfoldings-out", help="write per-class edge lists here")
    p.add_argument("--plot", help="write a graph drawing SVG here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_communities)

    p = sub.add_parser("cluster", help="full pipeline down to --target clusters")
    p.add_argument("input", help="CSV points (default) or edge-list file with --graph")
    p.add_argument("--graph", action="store_true", help="treat input as an edge list")
    p.add_argument("--knn", type=int, help="neighbors per point (points input)")
    p.add_argument("--weighting", choices=WEIGHTINGS, default="gaussian")
    _competition_args(p)
    p.add_argument("--target", type=int, required=True, help="final cluster count C")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--unweighted-q", action="store_true",
                   help="use unweighted modularity in the merge phase")
    p.add_argument("--plot", help="write a scatter/graph SVG here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("sweep", help="grid sweep; JSON-lines output sorted by ARI")
    p.add_argument("input", help="CSV points (default) or edge-list file with --graph")
    p.add_argument("--graph", action="store_true")
    p.add_argument("--knn-values", type=_int_list, help="comma-separated k values")
    p.add_argument("--classes-values", type=_int_list, required=True)
    p.add_argument("--order-values", type=_int_list, default=(1,))
    p.add_argument("--seeds", type=_int_list, default=(0,))
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--weighting", choices=WEIGHTINGS, default="gaussian")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--unweighted-q", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--labels-dir", help="write per-cell label CSVs here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("eval", help="ranking + Friedman + critical difference")
    p.add_argument("--table", choices=("real", "artificial"), default="real",
                   help="embedded reference ARI table to evaluate")
    p.add_argument("--csv", help="custom table: first column dataset, header row technique names")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--plot", help="write a rank-line SVG here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("gen", help="generate a benchmark shape as CSV")
    p.add_argument("--shape", choices=SHAPES, required=True)
    p.add_argument("--n", type=int, required=True, help="total points (even)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plot", help="write a scatter SVG here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("karate", help="embedded karate-club benchmark")
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--target", type=int, default=2)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seeds", type=int, default=20, help="number of seeds to sweep")
    p.add_argument("--orders", type=_int_list, default=(1, 2))
    p.add_argument("--plot", help="write a graph drawing SVG here")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_karate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
